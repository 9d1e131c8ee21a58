#pragma once

#include <cmath>
#include <complex>
#include <vector>

namespace sqjcm {

/// Below this squeeze magnitude the field is treated as exactly coherent.
/// The squeezed formula divides by sqrt(2 mu nu) with nu -> 0.
inline constexpr double kCoherentCrossover = 1e-8;
inline constexpr int kMinCutoff = 16;

/// Initial field: squeezed coherent state with coherent amplitude theta and
/// squeeze parameter r * exp(i squeeze_phase).
struct SqueezedField {
  std::complex<double> theta{std::sqrt(5.0), 0.0};
  double r = 0.0;
  double squeeze_phase = 0.0;

  double mu() const;
  std::complex<double> nu() const;
  std::complex<double> beta() const;
  void validate() const;
};

struct TruncationPolicy {
  double tail_eps = 1e-12;
  int max_cutoff = 8192;

  void validate() const;
};

/// Photon-number probabilities P(0..cutoff). Not renormalized: the weight
/// beyond the cutoff is carried in tail_mass.
struct PhotonDistribution {
  std::vector<double> probs;
  int cutoff = 0;
  double tail_mass = 0.0;

  // P(n), zero past the cutoff.
  double at(int n) const noexcept {
    return (n >= 0 && n <= cutoff) ? probs[static_cast<std::size_t>(n)] : 0.0;
  }
  double total() const noexcept;
};

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Squeezed-state photon statistics evaluated term by term in log domain,
/// with the cutoff grown by doubling until tail_mass < tail_eps.
/// Throws TruncationError if max_cutoff is reached first.
PhotonDistribution photon_distribution(const SqueezedField& field, const TruncationPolicy& policy = {});

/// Poisson statistics with mean |theta|^2, same truncation contract.
PhotonDistribution coherent_distribution(std::complex<double> theta, const TruncationPolicy& policy = {});

Moments distribution_moments(const PhotonDistribution& dist);

/// Raw squeezed-state probabilities for n = 0..n_max with no coherent-limit routing.
/// Requires r > 0.
std::vector<double> squeezed_probabilities(const SqueezedField& field, int n_max);

/// Fock amplitudes <n|theta; xi> for n = 0..n_max from the two-term amplitude
/// recurrence (independent of the Hermite evaluation; valid at r = 0 too).
std::vector<std::complex<double>> fock_amplitudes(const SqueezedField& field, int n_max);

/// Analytic mean and variance of the photon number, used to seed the cutoff.
/// The variance is an upper estimate over the squeeze orientation.
Moments estimated_moments(const SqueezedField& field);

}  // namespace sqjcm
