#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sqjcm/dynamics.hpp"
#include "sqjcm/errors.hpp"

using namespace sqjcm;

namespace {
const double kSqrt5 = std::sqrt(5.0);
const PhotonDistribution& coherent5() {
  static const auto d = photon_distribution({kSqrt5, 0.0, 0.0});
  return d;
}
}  // namespace

TEST_CASE("rabi frequency") {
  CHECK(rabi_frequency({1.0, 1.0}, 0) == 1.0);
  CHECK(rabi_frequency({1.0, 1.0}, 3) == 2.0);
  CHECK(rabi_frequency({2.0, 1.0}, 8) == 6.0);
  CHECK_THROWS_AS(rabi_frequency({1.0, 1.0}, -1), DomainError);
  CHECK_THROWS_AS(ModelParams({0.0, 1.0}).validate(), DomainError);
}

TEST_CASE("transition probabilities") {
  const auto& d = coherent5();
  const ModelParams p;
  CHECK(transition_c(d, p, 0.0) == doctest::Approx(1.0 - d.tail_mass).epsilon(1e-15));
  CHECK(transition_s(d, p, 0.0) == 0.0);
  for (double t : {0.3, 1.0, 7.5, 14.05, 23.0})
    CHECK(std::abs(transition_c(d, p, t) + transition_s(d, p, t) - (1.0 - d.tail_mass)) <= 1e-14);

  // Regression fixture: direct summation of the Poisson series (40-digit reference).
  const double t = std::numbers::pi / (2.0 * std::sqrt(6.0));
  CHECK(std::abs(transition_s(d, p, t) - 0.91762841997677377) <= 1e-12);
  CHECK(std::abs(transition_c(d, p, t) - 0.08237158002322623) <= 1e-12);

  // Collapse plateau.
  double acc = 0.0;
  const int n = 600;
  for (int k = 0; k <= n; ++k) acc += transition_c(d, p, 4.0 + 6.0 * k / n);
  CHECK(std::abs(acc / (n + 1) - 0.5) <= 0.05);

  CHECK_THROWS_AS(transition_c(d, p, -1.0), DomainError);
}

TEST_CASE("lifted coefficients at t = 0") {
  const auto& d = coherent5();
  const auto c = lifted_coefficients(d, AtomMixture::from_excited_weight(1.0), {}, 0.0);
  CHECK(c.e1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.e2 == std::complex<double>(0.0, 0.0));
  CHECK(c.e3 == std::complex<double>(0.0, 0.0));
  // The published e4 gives 1 - P(0) here, not the ground population 0.
  CHECK(std::abs(c.e4 - (1.0 - std::exp(-5.0))) <= 1e-12);
  CHECK(std::abs(c.e4 - 0.993262053) < 1e-9);
}

TEST_CASE("lifted coefficients reduce to c(t) for an excited atom") {
  const auto& d = coherent5();
  const ModelParams p;
  const auto atom = AtomMixture::from_excited_weight(1.0);
  for (int k = 0; k <= 50; ++k) {
    const double t = 0.5 * k;
    CHECK(std::abs(lifted_coefficients(d, atom, p, t).e1 - transition_c(d, p, t)) <= 1e-12);
  }
}

TEST_CASE("balanced mixture coherence") {
  const auto& d = coherent5();
  const ModelParams p;
  const double t = 3.3;
  const auto c = lifted_coefficients(d, AtomMixture::from_excited_weight(0.5), p, t);
  double ref = 0.0;
  for (int n = 0; n <= d.cutoff; ++n) ref += std::sin(2.0 * rabi_frequency(p, n) * t) * (d.at(n) - d.at(n + 1));
  CHECK(c.e2.real() == 0.0);
  CHECK(std::abs(c.e2.imag() - 0.25 * ref) <= 1e-14);
}

TEST_CASE("coefficient invariants over a parameter grid") {
  const ModelParams p{1.0, 1.0};
  for (double r : {0.0, 0.5, 2.0}) {
    const auto d = photon_distribution({kSqrt5, r, 0.0});
    for (double l1 : {0.0, 0.3, 0.5, 1.0})
      for (int k = 0; k < 25; ++k) {
        const auto c = lifted_coefficients(d, AtomMixture::from_excited_weight(l1), p, 1.7 * k);
        CHECK(c.e3 == -c.e2);
        CHECK(c.e2.real() == 0.0);
        CHECK((c.e2 * c.e3).real() >= 0.0);
        CHECK(std::abs((c.e2 * c.e3).real() - std::norm(c.e2)) <= 1e-15);
        for (double v : {c.e1, c.e4, c.e2.imag()}) CHECK(std::abs(v) <= 1.0 + 1e-12);
        CHECK(c.e1 >= 0.0);
        CHECK(c.e4 >= 0.0);
      }
  }
}

TEST_CASE("summation is deterministic and the compensated flag agrees") {
  const auto d = photon_distribution({kSqrt5, 3.0, 0.0});
  const auto atom = AtomMixture::from_excited_weight(0.35);
  const auto a = lifted_coefficients(d, atom, {}, 14.0);
  const auto b = lifted_coefficients(d, atom, {}, 14.0);
  CHECK(a.e1 == b.e1);
  CHECK(a.e2 == b.e2);
  CHECK(a.e4 == b.e4);
  const auto k = lifted_coefficients(d, atom, {}, 14.0, Summation::compensated);
  CHECK(std::abs(k.e1 - a.e1) < 1e-13);
  CHECK(std::abs(k.e4 - a.e4) < 1e-13);
  CHECK(std::abs(transition_c(d, {}, 9.0, Summation::compensated) - transition_c(d, {}, 9.0)) < 1e-13);
}

TEST_CASE("omega0 does not enter the transition sums") {
  const auto& d = coherent5();
  for (double w : {0.0, 1.0, 17.5}) {
    const auto c = lifted_coefficients(d, AtomMixture::from_excited_weight(0.2), {1.0, w}, 5.0);
    const auto ref = lifted_coefficients(d, AtomMixture::from_excited_weight(0.2), {1.0, 1.0}, 5.0);
    CHECK(c.e1 == ref.e1);
    CHECK(c.e4 == ref.e4);
  }
}

TEST_CASE("atom mixture validation") {
  CHECK_THROWS_AS(AtomMixture::from_excited_weight(1.2), DomainError);
  CHECK_THROWS_AS(AtomMixture::from_excited_weight(-0.1), DomainError);
  CHECK_THROWS_AS(AtomMixture({0.4, 0.4}).validate(), DomainError);
  CHECK_NOTHROW(AtomMixture({0.25, 0.75}).validate());
}
