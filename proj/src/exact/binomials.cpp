#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "ptsrc/exact.hpp"

namespace ptsrc::exact {

ExactRational make_rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  ExactRational q{BigInt(static_cast<long>(num)), BigInt(static_cast<long>(den))};
  q.canonicalize();
  return q;
}

ExactRational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational");
  const auto dot = text.find('.');
  if (dot == std::string::npos) {
    ExactRational q;
    if (q.set_str(text, 10) != 0) throw std::invalid_argument("not a rational: " + text);
    if (q.get_den() == 0) throw std::invalid_argument("rational with zero denominator");
    q.canonicalize();
    return q;
  }
  // Finite decimal: digits before and after the point, optional sign.
  const std::string whole = text.substr(0, dot);
  const std::string frac = text.substr(dot + 1);
  const bool digits_ok =
      std::all_of(frac.begin(), frac.end(), [](unsigned char c) { return std::isdigit(c); }) &&
      std::all_of(whole.begin(), whole.end(),
                  [](unsigned char c) { return std::isdigit(c) || c == '-' || c == '+'; });
  if (!digits_ok || (whole.empty() && frac.empty())) {
    throw std::invalid_argument("not a decimal: " + text);
  }
  BigInt num;
  const std::string joined = (whole == "-" || whole == "+" || whole.empty() ? whole + "0" : whole) + frac;
  if (num.set_str(joined[0] == '+' ? joined.substr(1) : joined, 10) != 0) {
    throw std::invalid_argument("not a decimal: " + text);
  }
  BigInt den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
  ExactRational q{num, den};
  q.canonicalize();
  return q;
}

ExactRational pow(const ExactRational& q, std::uint64_t e) {
  ExactRational r;
  mpz_pow_ui(r.get_num_mpz_t(), q.get_num_mpz_t(), e);
  mpz_pow_ui(r.get_den_mpz_t(), q.get_den_mpz_t(), e);
  return r;  // powers of coprime integers stay coprime
}

BigInt binom_exact(std::uint64_t a, std::int64_t b) {
  if (b < 0 || static_cast<std::uint64_t>(b) > a) return 0;
  const std::uint64_t k = std::min<std::uint64_t>(b, a - b);
  BigInt r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r *= static_cast<unsigned long>(a - k + i);
    mpz_divexact_ui(r.get_mpz_t(), r.get_mpz_t(), i);
  }
  return r;
}

BinomialTable::BinomialTable(std::uint64_t max_row) : rows_(max_row + 1), zero_(0) {
  for (std::uint64_t a = 0; a <= max_row; ++a) {
    auto& row = rows_[a];
    row.resize(a + 1);
    row[0] = 1;
    for (std::uint64_t b = 0; b < a; ++b) {
      row[b + 1] = row[b] * static_cast<unsigned long>(a - b);
      mpz_divexact_ui(row[b + 1].get_mpz_t(), row[b + 1].get_mpz_t(), b + 1);
    }
  }
}

const BigInt& BinomialTable::operator()(std::uint64_t a, std::int64_t b) const {
  if (a >= rows_.size()) throw std::out_of_range("binomial table row out of range");
  if (b < 0 || static_cast<std::uint64_t>(b) > a) return zero_;
  return rows_[a][static_cast<std::size_t>(b)];
}

}  // namespace ptsrc::exact
