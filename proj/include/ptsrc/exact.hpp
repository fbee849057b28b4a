#pragma once

// Exact integer/rational ground truth for the binomial-tail and
// Bayesian-series p-values and the identities that connect them.
//
// Everything here is computed in arbitrary precision (GMP) and compared
// with ==, never with a tolerance. Infinite series are handled by exact
// bracketing: a partial sum plus a proven geometric remainder bound.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ptsrc::exact {

using BigInt = mpz_class;
using ExactRational = mpq_class;  // canonical: lowest terms, positive denominator

/// num/den in lowest terms. Throws std::invalid_argument when den == 0.
ExactRational make_rational(std::int64_t num, std::int64_t den);

/// Parses "p/q", an integer, or a finite decimal such as "0.25".
ExactRational parse_rational(const std::string& text);

/// q^e for a non-negative integer exponent.
ExactRational pow(const ExactRational& q, std::uint64_t e);

/// C(a, b) by the multiplicative formula; 0 when b < 0 or b > a.
BigInt binom_exact(std::uint64_t a, std::int64_t b);

/// Rows 0..max_row of Pascal's triangle, each row generated left to right
/// by C(a, b+1) = C(a, b) (a-b)/(b+1). Rows are built independently of one
/// another so Pascal-identity sweeps over the table are not circular.
class BinomialTable {
 public:
  explicit BinomialTable(std::uint64_t max_row);

  std::uint64_t max_row() const noexcept { return rows_.size() - 1; }

  /// 0 outside the triangle. Throws std::out_of_range when a > max_row().
  const BigInt& operator()(std::uint64_t a, std::int64_t b) const;

 private:
  std::vector<std::vector<BigInt>> rows_;
  BigInt zero_;
};

// ---- identities ----------------------------------------------------------

/// C(a,b) + C(a,b+1) == C(a+1,b+1).
bool lemma1_holds(std::uint64_t a, std::int64_t b);

struct Lemma2Bracket {
  ExactRational left;             // f^n / (1-f)^(n+1)
  ExactRational partial;          // sum_{k=0}^{k_max} C(k,n) f^k
  ExactRational remainder_bound;  // t_{k_max+1} / (1 - r)
  bool holds = false;             // left in [partial, partial + remainder_bound]
};

/// Brackets the negative-binomial series f^n/(1-f)^(n+1) = sum_k C(k,n) f^k.
/// Requires 0 <= f < 1 and k_max >= n (std::invalid_argument otherwise).
/// Throws RatioNotContracting when r = f (k_max+2)/(k_max+2-n) >= 1.
Lemma2Bracket lemma2_partial_check(std::uint64_t n, const ExactRational& f, std::uint64_t k_max);

/// C(n+N+B, n+N) == sum_{k=0}^{B} C(N+B, N+k) C(n, k).
bool lemma3_holds(std::uint64_t n_src, std::uint64_t n_bak, std::uint64_t n);
bool lemma3_holds(std::uint64_t n_src, std::uint64_t n_bak, std::uint64_t n,
                  const BinomialTable& table);

/// sum_{n=N}^{N+B} C(N+B, n) f^n (1-f)^(N+B-n). Requires 0 <= f < 1.
ExactRational p_lampton_exact(std::uint64_t n_src, std::uint64_t n_bak, const ExactRational& f);

struct SeriesBracket {
  ExactRational partial;  // (1-f)^(B+1) sum_{n=N}^{N+terms-1} C(n+B, n) f^n
  ExactRational bound;    // proven bound on the omitted tail
  std::uint64_t terms = 0;
};

inline constexpr std::uint64_t kMaxSeriesTerms = std::uint64_t{1} << 20;

/// Exact partial sum of the Bayesian tail series, with the number of terms
/// doubled until bound < rel_tol * partial. Requires 0 < f < 1 and
/// rel_tol > 0. Throws RatioNotContracting beyond kMaxSeriesTerms.
SeriesBracket bayes_series_exact(std::uint64_t n_src, std::uint64_t n_bak, const ExactRational& f,
                                 const ExactRational& rel_tol);

/// True iff p_lampton_exact lies inside the exact bracket of the series.
bool equivalence_check(std::uint64_t n_src, std::uint64_t n_bak, const ExactRational& f,
                       const ExactRational& rel_tol);

/// Poisson(N; mu) Poisson(B; mu/alpha) == Poisson(N+B; mu + mu/alpha)
/// Binomial(N; N+B, alpha/(1+alpha)), with e^{-mu-mu/alpha} cancelled from
/// both sides so the comparison is exact. Requires mu > 0, alpha > 0.
bool factorization_check(std::uint64_t n_src, std::uint64_t n_bak, const ExactRational& mu,
                         const ExactRational& alpha);

// ---- sweeps and reports --------------------------------------------------

enum class LemmaId { Lemma1, Lemma2, Lemma3, Theorem, Factorization };

std::string to_string(LemmaId id);

struct LemmaReport {
  LemmaId lemma_id = LemmaId::Lemma1;
  std::string parameter_grid;
  std::uint64_t cases_checked = 0;
  bool all_passed = true;
  std::optional<std::string> first_failure;  // present iff !all_passed
};

/// Human-readable multi-line block.
std::string render_text(const LemmaReport& report);

/// One CSV record (no trailing newline) under lemma_report_csv_header().
std::string render_csv(const LemmaReport& report);
std::string lemma_report_csv_header();

// Sweeps enumerate their grid in a fixed order; first_failure is the first
// failing tuple in that order regardless of the thread count.
LemmaReport sweep_lemma1(std::uint64_t a_max = 300, std::int64_t b_min = -2,
                         std::int64_t b_max = 302, unsigned threads = 1);
LemmaReport sweep_lemma2(std::uint64_t n_max = 10,
                         const std::vector<ExactRational>& fs = {make_rational(1, 10),
                                                                 make_rational(1, 3),
                                                                 make_rational(1, 2),
                                                                 make_rational(4, 5)});
LemmaReport sweep_lemma3(std::uint64_t max = 60, unsigned threads = 1);
LemmaReport sweep_theorem(std::uint64_t max = 25,
                          const std::vector<ExactRational>& fs = {make_rational(1, 10),
                                                                  make_rational(1, 4),
                                                                  make_rational(1, 2),
                                                                  make_rational(3, 4)},
                          const ExactRational& rel_tol = make_rational(1, 1'000'000'000'000),
                          unsigned threads = 1);
LemmaReport sweep_factorization(std::uint64_t max = 30,
                                const std::vector<ExactRational>& mus = {make_rational(1, 3),
                                                                         ExactRational(1),
                                                                         ExactRational(5)},
                                const std::vector<ExactRational>& alphas = {
                                    make_rational(1, 4), ExactRational(1), ExactRational(3)},
                                unsigned threads = 1);

/// All five sweeps at their default grids.
std::vector<LemmaReport> run_all_sweeps(unsigned threads = 1);

}  // namespace ptsrc::exact
