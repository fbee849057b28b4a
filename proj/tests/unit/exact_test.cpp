#include <vector>

#include "doctest.h"
#include "ptsrc/errors.hpp"
#include "ptsrc/exact.hpp"

using namespace ptsrc::exact;

TEST_CASE("rationals are canonical") {
  const auto q = make_rational(6, -8);
  CHECK(q.get_num() == -3);
  CHECK(q.get_den() == 4);
  CHECK_THROWS_AS(make_rational(1, 0), std::invalid_argument);
  CHECK(parse_rational("3/4") == make_rational(3, 4));
  CHECK(parse_rational("6/8") == make_rational(3, 4));
  CHECK(parse_rational("0.25") == make_rational(1, 4));
  CHECK(parse_rational(".5") == make_rational(1, 2));
  CHECK(parse_rational("-0.125") == make_rational(-1, 8));
  CHECK(parse_rational("7") == ExactRational(7));
  CHECK(parse_rational("0.99") == make_rational(99, 100));
  for (const char* bad : {"", "abc", "1/0", "1.2.3", "0.x", "1e-3", "."}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_rational(bad), std::invalid_argument);
  }
  CHECK(pow(make_rational(2, 3), 3) == make_rational(8, 27));
  CHECK(pow(make_rational(2, 3), 0) == 1);
}

TEST_CASE("binom_exact examples") {
  CHECK(binom_exact(4, 2) == 6);
  CHECK(binom_exact(3, 5) == 0);
  CHECK(binom_exact(3, -1) == 0);
  CHECK(binom_exact(0, 0) == 1);
  CHECK(binom_exact(100, 50) == BigInt("100891344545564193334812497256"));
}

TEST_CASE("multiplicative binomials equal an additive Pascal triangle") {
  std::vector<BigInt> row{1};
  for (std::uint64_t a = 0; a <= 100; ++a) {
    for (std::uint64_t b = 0; b <= a; ++b) {
      CAPTURE(a);
      CAPTURE(b);
      REQUIRE(binom_exact(a, static_cast<std::int64_t>(b)) == row[b]);
    }
    std::vector<BigInt> next(a + 2);
    next[0] = 1;
    next[a + 1] = 1;
    for (std::uint64_t b = 1; b <= a; ++b) next[b] = row[b - 1] + row[b];
    row = std::move(next);
  }
}

TEST_CASE("binomial table cells equal binom_exact") {
  const BinomialTable table(120);
  CHECK(table.max_row() == 120);
  for (std::uint64_t a = 0; a <= 120; ++a) {
    for (std::int64_t b = -2; b <= static_cast<std::int64_t>(a) + 2; ++b) {
      CAPTURE(a);
      CAPTURE(b);
      REQUIRE(table(a, b) == binom_exact(a, b));
    }
  }
}

TEST_CASE("lemma 1 examples") {
  CHECK(lemma1_holds(5, 2));
  CHECK(lemma1_holds(5, -1));
  CHECK(lemma1_holds(0, 0));
  CHECK(lemma1_holds(0, -2));
}

TEST_CASE("lemma 2 examples") {
  const auto geo = lemma2_partial_check(0, make_rational(1, 2), 20);
  CHECK(geo.left == 2);
  CHECK(geo.partial == 2 - pow(make_rational(1, 2), 20));
  CHECK(geo.holds);
  CHECK(lemma2_partial_check(2, make_rational(1, 3), 40).holds);
  CHECK_THROWS_AS(lemma2_partial_check(5, make_rational(9, 10), 5), ptsrc::RatioNotContracting);
  CHECK_THROWS_AS(lemma2_partial_check(5, make_rational(1, 2), 4), std::invalid_argument);
  // The bracket is genuine: the remainder bound is positive and the left
  // side is strictly inside.
  const auto b = lemma2_partial_check(3, make_rational(4, 5), 60);
  CHECK(b.holds);
  CHECK(b.remainder_bound > 0);
  CHECK(b.left > b.partial);
}

TEST_CASE("lemma 3 examples") {
  for (std::uint64_t n_src = 0; n_src < 6; ++n_src) {
    for (std::uint64_t n_bak = 0; n_bak < 6; ++n_bak) CHECK(lemma3_holds(n_src, n_bak, 0));
  }
  for (std::uint64_t n = 0; n < 20; ++n) CHECK(lemma3_holds(0, 0, n));
  CHECK(lemma3_holds(7, 4, 9));
  const BinomialTable table(180);
  CHECK(lemma3_holds(60, 60, 60, table));
}

TEST_CASE("p_lampton_exact examples") {
  CHECK(p_lampton_exact(0, 9, make_rational(1, 3)) == 1);
  CHECK(p_lampton_exact(1, 1, make_rational(1, 2)) == make_rational(3, 4));
  CHECK(p_lampton_exact(5, 10, make_rational(1, 4)) == ExactRational(336633157, 1073741824));
  CHECK(p_lampton_exact(3, 0, make_rational(1, 2)) == make_rational(1, 8));
  CHECK(p_lampton_exact(2, 5, ExactRational(0)) == 0);
}

TEST_CASE("p_lampton_exact lies in [0, 1]") {
  for (const auto& f : {make_rational(1, 10), make_rational(1, 4), make_rational(1, 2), make_rational(3, 4)}) {
    for (std::uint64_t n = 0; n <= 25; ++n) {
      for (std::uint64_t b = 0; b <= 25; ++b) {
        const auto p = p_lampton_exact(n, b, f);
        CHECK(p >= 0);
        CHECK(p <= 1);
      }
    }
  }
}

TEST_CASE("exact series bracket") {
  const auto br = bayes_series_exact(5, 10, make_rational(1, 4), make_rational(1, 1'000'000'000'000));
  const auto p = p_lampton_exact(5, 10, make_rational(1, 4));
  CHECK(br.partial <= p);
  CHECK(p <= br.partial + br.bound);
  CHECK(br.bound < make_rational(1, 1'000'000'000'000) * br.partial);
  CHECK(br.terms > 0);
  CHECK(bayes_series_exact(0, 4, make_rational(1, 2), make_rational(1, 1000)).partial <= 1);
}

TEST_CASE("equivalence_check examples") {
  CHECK(equivalence_check(1, 1, make_rational(1, 2), make_rational(1, 1'000'000'000)));
  CHECK(equivalence_check(5, 10, make_rational(1, 4), make_rational(1, 1'000'000'000'000)));
  CHECK(equivalence_check(0, 0, make_rational(3, 4), make_rational(1, 1'000'000'000'000)));
  CHECK(equivalence_check(1, 200, make_rational(99, 100), make_rational(1, 1'000'000)));
}

TEST_CASE("equivalence_check rejects a wrong tail") {
  // Comparing the series at B against the binomial tail at B+1 must fail.
  const auto f = make_rational(1, 4);
  const auto br = bayes_series_exact(5, 10, f, make_rational(1, 1'000'000'000'000));
  const auto wrong = p_lampton_exact(5, 11, f);
  CHECK_FALSE((br.partial <= wrong && wrong <= br.partial + br.bound));
}

TEST_CASE("factorization_check examples") {
  CHECK(factorization_check(0, 0, make_rational(1, 3), make_rational(1, 4)));
  CHECK(factorization_check(3, 7, ExactRational(2), make_rational(1, 2)));
  CHECK(factorization_check(30, 30, ExactRational(5), ExactRational(3)));
}

TEST_CASE("lemma sweeps pass") {
  const auto l1 = sweep_lemma1(60, -2, 62, 2);
  CHECK(l1.all_passed);
  CHECK(l1.cases_checked == 61 * 65);
  CHECK_FALSE(l1.first_failure.has_value());
  CHECK(sweep_lemma2().all_passed);
  CHECK(sweep_lemma3(15, 3).all_passed);
  CHECK(sweep_theorem(6).all_passed);
  CHECK(sweep_factorization(8).all_passed);
}

TEST_CASE("a failing sweep names its first failure") {
  // f = 1 makes the series diverge: the sweep must report, not throw.
  const auto r = sweep_theorem(2, {make_rational(1, 2), ExactRational(1)});
  CHECK_FALSE(r.all_passed);
  REQUIRE(r.first_failure.has_value());
  CHECK(r.first_failure->find("f=1") != std::string::npos);
}

TEST_CASE("sweep results do not depend on the thread count") {
  const auto one = sweep_lemma3(12, 1);
  const auto four = sweep_lemma3(12, 4);
  CHECK(render_csv(one) == render_csv(four));
  CHECK(render_text(one) == render_text(four));
}

TEST_CASE("report rendering") {
  LemmaReport r;
  r.lemma_id = LemmaId::Theorem;
  r.parameter_grid = "N,B in [0,2]";
  r.cases_checked = 9;
  r.all_passed = false;
  r.first_failure = "N=1, B=2";
  const auto csv = render_csv(r);
  CHECK(lemma_report_csv_header().find("lemma_id") == 0);
  CHECK(csv.find("Theorem") == 0);
  CHECK(csv.find("\"N,B in [0,2]\"") != std::string::npos);
  CHECK(render_text(r).find("FAIL") != std::string::npos);
  r.all_passed = true;
  r.first_failure.reset();
  CHECK(render_text(r).find("PASS") != std::string::npos);
}
