#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "sqjcm/errors.hpp"
#include "sqjcm/special_fn.hpp"

using namespace sqjcm;
using cd = std::complex<double>;

namespace {

// Plain double recurrence, no rescaling.
double naive_hermite(int n, double x) {
  double prev = 0.0, cur = 1.0;
  for (int k = 0; k < n; ++k) {
    const double next = 2.0 * x * cur - 2.0 * k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double real_value(const ScaledHermite& h) { return h.value().real(); }

}  // namespace

TEST_CASE("hermite closed forms") {
  CHECK(real_value(hermite(0, 3.7)) == 1.0);
  CHECK(real_value(hermite(0, cd{-2.0, 5.0})) == 1.0);
  CHECK(real_value(hermite(2, 1.5)) == doctest::Approx(7.0).epsilon(1e-14));
  CHECK(real_value(hermite(4, 0.0)) == doctest::Approx(12.0).epsilon(1e-14));
  for (int n : {1, 3, 5, 11, 101}) {
    const auto h = hermite(n, 0.0);
    CHECK(h.is_zero());
    CHECK(h.phase == cd{1.0, 0.0});
    CHECK(h.value() == cd{0.0, 0.0});
  }
  // H_3(z) = 8 z^3 - 12 z for complex z.
  const cd z{0.7, -1.3};
  const cd expect = 8.0 * z * z * z - 12.0 * z;
  CHECK(std::abs(hermite(3, z).value() - expect) <= 1e-13 * std::abs(expect));
  CHECK(std::abs(std::abs(hermite(3, z).phase) - 1.0) < 1e-15);
}

TEST_CASE("scaled evaluation matches naive recurrence for small degree") {
  double worst = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double x = -5.0 + 0.05 * i;
    for (int n = 0; n <= 20; ++n) {
      const double ref = naive_hermite(n, x);
      const double got = real_value(hermite(n, x));
      if (ref == 0.0) {
        CHECK(got == 0.0);
        continue;
      }
      worst = std::max(worst, std::abs(got - ref) / std::abs(ref));
    }
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("parity is exact in phase") {
  for (int i = 0; i <= 40; ++i) {
    const double x = -5.0 + 0.25 * i;
    for (int n = 0; n <= 20; ++n) {
      const auto a = hermite(n, x);
      const auto b = hermite(n, -x);
      if (a.is_zero()) {
        CHECK(b.is_zero());
        continue;
      }
      CHECK(b.phase == (n % 2 ? -a.phase : a.phase));
      CHECK(std::abs(b.log_magnitude - a.log_magnitude) <= 1e-12 * std::max(1.0, std::abs(a.log_magnitude)));
      CHECK((a.phase == cd{1.0, 0.0} || a.phase == cd{-1.0, 0.0}));
    }
  }
}

TEST_CASE("sequence agrees with single evaluations") {
  const cd x{0.4, 0.9};
  const auto seq = hermite_sequence(60, x);
  REQUIRE(seq.size() == 61);
  for (int n : {0, 1, 7, 33, 60}) {
    const auto h = hermite(n, x);
    CHECK(seq[n].degree == n);
    CHECK(seq[n].log_magnitude == h.log_magnitude);
    CHECK(seq[n].phase == h.phase);
  }
}

TEST_CASE("large degrees stay finite") {
  const auto h = hermite(2000, 3.0);
  CHECK(std::isfinite(h.log_magnitude));
  // |H_n(x)| grows like sqrt(2^n n!) for n >> x^2; compare against that scale.
  const double scale = 0.5 * (2000 * std::log(2.0) + std::lgamma(2001.0));
  CHECK(std::abs(h.log_magnitude - scale) < 0.05 * scale);
  CHECK(std::isfinite(hermite(5000, cd{40.0, -3.0}).log_magnitude));
}

TEST_CASE("hermite rejects bad input") {
  CHECK_THROWS_AS(hermite(-1, 0.5), DomainError);
  CHECK_THROWS_AS(hermite(3, std::nan("")), DomainError);
  CHECK_THROWS_AS(hermite(3, cd{0.0, INFINITY}), DomainError);
}

TEST_CASE("log_factorial") {
  CHECK(log_factorial(0) == 0.0);
  CHECK(log_factorial(1) == 0.0);
  CHECK(log_factorial(5) == doctest::Approx(4.787491743).epsilon(1e-9));
  CHECK(std::abs(log_factorial(5) - std::log(120.0)) <= 1e-15 * std::log(120.0));
  // Oracle: direct summation of ln k in extended precision, across the table boundary.
  long double acc = 0.0L;
  double worst = 0.0;
  for (int n = 1; n <= 3000; ++n) {
    acc += std::log(static_cast<long double>(n));
    if (n >= 2) worst = std::max(worst, std::abs(log_factorial(n) - static_cast<double>(acc)) / static_cast<double>(acc));
  }
  CHECK(worst <= 1e-12);
  CHECK_THROWS_AS(log_factorial(-2), DomainError);
}
