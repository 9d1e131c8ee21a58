#include "sqjcm/dynamics.hpp"

#include <cmath>
#include <string>

#include "sqjcm/errors.hpp"

namespace sqjcm {
namespace {

constexpr double kWeightTolerance = 1e-12;

// Plain ascending accumulation, or Neumaier-compensated when requested.
class Accumulator {
 public:
  explicit Accumulator(Summation mode) : compensated_(mode == Summation::compensated) {}

  void add(double v) {
    if (!compensated_) {
      sum_ += v;
      return;
    }
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      carry_ += (sum_ - t) + v;
    else
      carry_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  bool compensated_;
  double sum_ = 0.0;
  double carry_ = 0.0;
};

void check_time(double t) {
  if (!std::isfinite(t) || t < 0.0) throw DomainError("time must be finite and >= 0");
}

template <typename Weight>
double weighted_sum(const PhotonDistribution& dist, const ModelParams& params, double t, Summation mode,
                    Weight&& weight) {
  params.validate();
  check_time(t);
  Accumulator acc(mode);
  for (int n = 0; n <= dist.cutoff; ++n) acc.add(dist.at(n) * weight(rabi_frequency(params, n) * t));
  return acc.value();
}

}  // namespace

void ModelParams::validate() const {
  if (!std::isfinite(g) || g <= 0.0) throw DomainError("model: coupling g must be > 0");
  if (!std::isfinite(omega0)) throw DomainError("model: omega0 must be finite");
}

AtomMixture AtomMixture::from_excited_weight(double lambda1) {
  AtomMixture a{1.0 - lambda1, lambda1};
  a.validate();
  return a;
}

void AtomMixture::validate() const {
  const bool in_range = lambda0 >= 0.0 && lambda0 <= 1.0 && lambda1 >= 0.0 && lambda1 <= 1.0;
  if (!in_range || std::abs(lambda0 + lambda1 - 1.0) > kWeightTolerance)
    throw DomainError("atom: weights must lie in [0, 1] and sum to 1, got (" + std::to_string(lambda0) + ", " +
                      std::to_string(lambda1) + ")");
}

double rabi_frequency(const ModelParams& params, int n) {
  if (n < 0) throw DomainError("rabi_frequency: negative photon number");
  return params.g * std::sqrt(static_cast<double>(n) + 1.0);
}

double transition_c(const PhotonDistribution& dist, const ModelParams& params, double t, Summation mode) {
  return weighted_sum(dist, params, t, mode, [](double phase) {
    const double c = std::cos(phase);
    return c * c;
  });
}

double transition_s(const PhotonDistribution& dist, const ModelParams& params, double t, Summation mode) {
  return weighted_sum(dist, params, t, mode, [](double phase) {
    const double s = std::sin(phase);
    return s * s;
  });
}

LiftedCoefficients lifted_coefficients(const PhotonDistribution& dist, const AtomMixture& atom,
                                       const ModelParams& params, double t, Summation mode) {
  params.validate();
  atom.validate();
  check_time(t);
  const double l0 = atom.lambda0;
  const double l1 = atom.lambda1;

  Accumulator e1(mode), coherence(mode), e4(mode);
  for (int n = 0; n <= dist.cutoff; ++n) {
    const double phase = rabi_frequency(params, n) * t;
    const double s = std::sin(phase);
    const double c = std::cos(phase);
    const double s2 = s * s;
    const double c2 = c * c;
    const double p = dist.at(n);
    const double p_next = dist.at(n + 1);
    e1.add(l0 * p_next * s2 + l1 * p * c2);
    coherence.add(std::sin(2.0 * phase) * (l1 * p - l0 * p_next));
    e4.add(l0 * p * s2 + l1 * p_next * c2);
  }

  LiftedCoefficients out;
  out.t = t;
  out.e1 = e1.value();
  out.e2 = {0.0, 0.5 * coherence.value()};
  out.e3 = -out.e2;
  out.e4 = e4.value();
  return out;
}

}  // namespace sqjcm
