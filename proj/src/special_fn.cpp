#include "sqjcm/special_fn.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "sqjcm/errors.hpp"

namespace sqjcm {
namespace {

// Rescaling keeps the recurrence pair inside [2^-kRescaleBits, 2^kRescaleBits].
// Scaling by powers of two is exact, so parity H_n(-x) = (-1)^n H_n(x) holds bit for bit.
constexpr int kRescaleBits = 400;

struct ScaledPair {
  std::complex<double> prev;
  std::complex<double> cur;
  long exponent = 0;  // true values are (prev, cur) * 2^exponent

  void rescale() {
    const double m = std::max(std::abs(cur), std::abs(prev));
    if (m == 0.0 || !std::isfinite(m)) return;
    int e = 0;
    std::frexp(m, &e);
    if (e > kRescaleBits || e < -kRescaleBits) {
      cur = {std::ldexp(cur.real(), -e), std::ldexp(cur.imag(), -e)};
      prev = {std::ldexp(prev.real(), -e), std::ldexp(prev.imag(), -e)};
      exponent += e;
    }
  }
};

ScaledHermite make_scaled(int n, std::complex<double> h, long exponent) {
  ScaledHermite out;
  out.degree = n;
  const double mag = std::abs(h);
  if (mag == 0.0) {
    out.log_magnitude = -std::numeric_limits<double>::infinity();
    out.phase = {1.0, 0.0};
    return out;
  }
  out.log_magnitude = std::log(mag) + static_cast<double>(exponent) * std::numbers::ln2;
  out.phase = h / mag;
  return out;
}

void check_argument(int n, std::complex<double> x) {
  if (n < 0) throw DomainError("hermite: negative degree " + std::to_string(n));
  if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
    throw DomainError("hermite: non-finite argument");
}

// Walks the recurrence H_{k+1} = 2x H_k - 2k H_{k-1}, calling visit(k, H_k, exponent) for k = 0..n_max.
template <typename Visit>
void run_recurrence(int n_max, std::complex<double> x, Visit&& visit) {
  ScaledPair p{{0.0, 0.0}, {1.0, 0.0}, 0};
  visit(0, p.cur, p.exponent);
  for (int k = 0; k < n_max; ++k) {
    const std::complex<double> next = 2.0 * x * p.cur - (2.0 * k) * p.prev;
    p.prev = p.cur;
    p.cur = next;
    p.rescale();
    visit(k + 1, p.cur, p.exponent);
  }
}

}  // namespace

bool ScaledHermite::is_zero() const noexcept {
  return std::isinf(log_magnitude) && log_magnitude < 0;
}

std::complex<double> ScaledHermite::value() const {
  if (is_zero()) return {0.0, 0.0};
  return phase * std::exp(log_magnitude);
}

ScaledHermite hermite(int n, std::complex<double> x) {
  check_argument(n, x);
  ScaledHermite out;
  run_recurrence(n, x, [&](int k, std::complex<double> h, long e) {
    if (k == n) out = make_scaled(k, h, e);
  });
  return out;
}

std::vector<ScaledHermite> hermite_sequence(int n_max, std::complex<double> x) {
  check_argument(n_max, x);
  std::vector<ScaledHermite> out;
  out.reserve(static_cast<std::size_t>(n_max) + 1);
  run_recurrence(n_max, x, [&](int k, std::complex<double> h, long e) {
    out.push_back(make_scaled(k, h, e));
  });
  return out;
}

namespace {

constexpr int kTableSize = 256;

// Cumulative sums in extended precision; beyond the table the Stirling series
// is accurate to machine precision.
const std::array<double, kTableSize>& log_factorial_table() {
  static const std::array<double, kTableSize> table = [] {
    std::array<double, kTableSize> t{};
    long double acc = 0.0L;
    t[0] = 0.0;
    for (int k = 1; k < kTableSize; ++k) {
      acc += std::log(static_cast<long double>(k));
      t[k] = static_cast<double>(acc);
    }
    return t;
  }();
  return table;
}

}  // namespace

double log_factorial(int n) {
  if (n < 0) throw DomainError("log_factorial: negative argument");
  if (n < kTableSize) return log_factorial_table()[static_cast<std::size_t>(n)];
  // ln n! = ln Gamma(n + 1), Stirling with three correction terms.
  const long double x = static_cast<long double>(n) + 1.0L;
  const long double inv = 1.0L / x;
  const long double inv2 = inv * inv;
  const long double series =
      inv * (1.0L / 12.0L - inv2 * (1.0L / 360.0L - inv2 * (1.0L / 1260.0L - inv2 / 1680.0L)));
  const long double half_log_2pi = 0.918938533204672741780329736406L;
  return static_cast<double>((x - 0.5L) * std::log(x) - x + half_log_2pi + series);
}

}  // namespace sqjcm
