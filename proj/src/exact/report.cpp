#include <algorithm>
#include <functional>
#include <limits>
#include <sstream>
#include <thread>

#include "ptsrc/errors.hpp"
#include "ptsrc/exact.hpp"

namespace ptsrc::exact {

namespace {

constexpr std::uint64_t kNoFailure = std::numeric_limits<std::uint64_t>::max();

// Smallest case index in [0, count) for which `passes` is false. Each worker
// scans one contiguous block, so the answer does not depend on `threads`.
std::uint64_t first_failing_case(std::uint64_t count, unsigned threads,
                                 const std::function<bool(std::uint64_t)>& passes) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::uint64_t>(count, 1))));
  std::vector<std::uint64_t> found(threads, kNoFailure);
  auto work = [&](unsigned t) {
    const std::uint64_t begin = count * t / threads;
    const std::uint64_t end = count * (t + 1) / threads;
    for (std::uint64_t i = begin; i < end; ++i) {
      // A case that throws (bad parameters, runaway series) counts as failed.
      bool ok = false;
      try {
        ok = passes(i);
      } catch (const std::exception&) {
      }
      if (!ok) {
        found[t] = i;
        return;
      }
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  return *std::min_element(found.begin(), found.end());
}

LemmaReport make_report(LemmaId id, std::string grid, std::uint64_t count, std::uint64_t failure,
                        const std::function<std::string(std::uint64_t)>& describe) {
  LemmaReport r;
  r.lemma_id = id;
  r.parameter_grid = std::move(grid);
  r.all_passed = failure == kNoFailure;
  r.cases_checked = r.all_passed ? count : failure + 1;
  if (!r.all_passed) r.first_failure = describe(failure);
  return r;
}

std::string join(const std::vector<ExactRational>& qs) {
  std::string out = "{";
  for (std::size_t i = 0; i < qs.size(); ++i) {
    if (i) out += ", ";
    out += qs[i].get_str();
  }
  return out + "}";
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string to_string(LemmaId id) {
  switch (id) {
    case LemmaId::Lemma1:
      return "Lemma1";
    case LemmaId::Lemma2:
      return "Lemma2";
    case LemmaId::Lemma3:
      return "Lemma3";
    case LemmaId::Theorem:
      return "Theorem";
    case LemmaId::Factorization:
      return "Factorization";
  }
  return "?";
}

std::string render_text(const LemmaReport& report) {
  std::ostringstream os;
  os << to_string(report.lemma_id) << '\n'
     << "  grid:          " << report.parameter_grid << '\n'
     << "  cases checked: " << report.cases_checked << '\n'
     << "  result:        " << (report.all_passed ? "PASS" : "FAIL") << '\n';
  if (report.first_failure) os << "  first failure: " << *report.first_failure << '\n';
  return os.str();
}

std::string lemma_report_csv_header() {
  return "lemma_id,parameter_grid,cases_checked,all_passed,first_failure";
}

std::string render_csv(const LemmaReport& report) {
  std::ostringstream os;
  os << to_string(report.lemma_id) << ',' << csv_quote(report.parameter_grid) << ','
     << report.cases_checked << ',' << (report.all_passed ? "true" : "false") << ','
     << (report.first_failure ? csv_quote(*report.first_failure) : std::string());
  return os.str();
}

LemmaReport sweep_lemma1(std::uint64_t a_max, std::int64_t b_min, std::int64_t b_max,
                         unsigned threads) {
  const BinomialTable table(a_max + 1);
  const std::uint64_t width = static_cast<std::uint64_t>(b_max - b_min + 1);
  const std::uint64_t count = (a_max + 1) * width;
  auto unpack = [=](std::uint64_t i) {
    return std::pair{i / width, b_min + static_cast<std::int64_t>(i % width)};
  };
  const auto failure = first_failing_case(count, threads, [&](std::uint64_t i) {
    const auto [a, b] = unpack(i);
    return table(a, b) + table(a, b + 1) == table(a + 1, b + 1);
  });
  std::ostringstream grid;
  grid << "a in [0, " << a_max << "], b in [" << b_min << ", " << b_max << "]";
  return make_report(LemmaId::Lemma1, grid.str(), count, failure, [&](std::uint64_t i) {
    const auto [a, b] = unpack(i);
    return "(a=" + std::to_string(a) + ", b=" + std::to_string(b) + ")";
  });
}

LemmaReport sweep_lemma2(std::uint64_t n_max, const std::vector<ExactRational>& fs) {
  const std::uint64_t count = (n_max + 1) * fs.size();
  const auto failure = first_failing_case(count, 1, [&](std::uint64_t i) {
    const std::uint64_t n = i / fs.size();
    const ExactRational& f = fs[i % fs.size()];
    for (std::uint64_t k_max = n + 16;; k_max *= 2) {
      try {
        return lemma2_partial_check(n, f, k_max).holds;
      } catch (const RatioNotContracting&) {
        if (k_max > kMaxSeriesTerms) return false;
      }
    }
  });
  return make_report(LemmaId::Lemma2,
                     "n in [0, " + std::to_string(n_max) + "], f in " + join(fs), count, failure,
                     [&](std::uint64_t i) {
                       return "(n=" + std::to_string(i / fs.size()) +
                              ", f=" + fs[i % fs.size()].get_str() + ")";
                     });
}

LemmaReport sweep_lemma3(std::uint64_t max, unsigned threads) {
  const BinomialTable table(3 * max);
  const std::uint64_t side = max + 1;
  const std::uint64_t count = side * side * side;
  const auto failure = first_failing_case(count, threads, [&](std::uint64_t i) {
    return lemma3_holds(i / (side * side), (i / side) % side, i % side, table);
  });
  return make_report(LemmaId::Lemma3, "N, B, n in [0, " + std::to_string(max) + "]", count,
                     failure, [&](std::uint64_t i) {
                       return "(N=" + std::to_string(i / (side * side)) +
                              ", B=" + std::to_string((i / side) % side) +
                              ", n=" + std::to_string(i % side) + ")";
                     });
}

LemmaReport sweep_theorem(std::uint64_t max, const std::vector<ExactRational>& fs,
                          const ExactRational& rel_tol, unsigned threads) {
  const std::uint64_t side = max + 1;
  const std::uint64_t count = fs.size() * side * side;
  auto describe = [&](std::uint64_t i) {
    return "(f=" + fs[i / (side * side)].get_str() + ", N=" + std::to_string((i / side) % side) +
           ", B=" + std::to_string(i % side) + ")";
  };
  const auto failure = first_failing_case(count, threads, [&](std::uint64_t i) {
    try {
      return equivalence_check((i / side) % side, i % side, fs[i / (side * side)], rel_tol);
    } catch (const RatioNotContracting&) {
      return false;
    }
  });
  return make_report(LemmaId::Theorem,
                     "N, B in [0, " + std::to_string(max) + "], f in " + join(fs) +
                         ", rel_tol " + rel_tol.get_str(),
                     count, failure, describe);
}

LemmaReport sweep_factorization(std::uint64_t max, const std::vector<ExactRational>& mus,
                                const std::vector<ExactRational>& alphas, unsigned threads) {
  const std::uint64_t side = max + 1;
  const std::uint64_t pairs = mus.size() * alphas.size();
  const std::uint64_t count = pairs * side * side;
  auto params = [&](std::uint64_t i) {
    const std::uint64_t p = i / (side * side);
    return std::tuple{(i / side) % side, i % side, p / alphas.size(), p % alphas.size()};
  };
  const auto failure = first_failing_case(count, threads, [&](std::uint64_t i) {
    const auto [n, b, mi, ai] = params(i);
    return factorization_check(n, b, mus[mi], alphas[ai]);
  });
  return make_report(LemmaId::Factorization,
                     "N, B in [0, " + std::to_string(max) + "], mu in " + join(mus) +
                         ", alpha in " + join(alphas),
                     count, failure, [&](std::uint64_t i) {
                       const auto [n, b, mi, ai] = params(i);
                       return "(N=" + std::to_string(n) + ", B=" + std::to_string(b) +
                              ", mu=" + mus[mi].get_str() + ", alpha=" + alphas[ai].get_str() +
                              ")";
                     });
}

std::vector<LemmaReport> run_all_sweeps(unsigned threads) {
  return {sweep_lemma1(300, -2, 302, threads), sweep_lemma2(), sweep_lemma3(60, threads),
          sweep_theorem(25, {make_rational(1, 10), make_rational(1, 4), make_rational(1, 2),
                             make_rational(3, 4)},
                        make_rational(1, 1'000'000'000'000), threads),
          sweep_factorization(30, {make_rational(1, 3), ExactRational(1), ExactRational(5)},
                              {make_rational(1, 4), ExactRational(1), ExactRational(3)}, threads)};
}

}  // namespace ptsrc::exact
