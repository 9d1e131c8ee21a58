#pragma once

#include <complex>

#include "sqjcm/photon_stats.hpp"

namespace sqjcm {

/// Resonant JCM parameters, hbar = 1.
struct ModelParams {
  double g = 1.0;       // atom-field coupling
  double omega0 = 1.0;  // shared atom/field frequency; drops out of every reported quantity

  void validate() const;
};

/// Diagonal initial atom state lambda0 |1><1| + lambda1 |2><2|, |1> ground and |2> excited.
struct AtomMixture {
  double lambda0 = 0.5;
  double lambda1 = 0.5;

  static AtomMixture from_excited_weight(double lambda1);
  void validate() const;
};

/// The four time-dependent sums that parametrize the lifted atom-field state.
/// e2 and e3 are purely imaginary with e3 = -e2.
struct LiftedCoefficients {
  double t = 0.0;
  double e1 = 0.0;
  std::complex<double> e2;
  std::complex<double> e3;
  double e4 = 0.0;
};

enum class Summation { plain, compensated };

double rabi_frequency(const ModelParams& params, int n);

/// Probability that an initially excited atom is still excited at t.
double transition_c(const PhotonDistribution& dist, const ModelParams& params, double t,
                    Summation mode = Summation::plain);

/// Probability that an initially excited atom is in the ground state at t.
double transition_s(const PhotonDistribution& dist, const ModelParams& params, double t,
                    Summation mode = Summation::plain);

/// e1..e4 summed over n = 0..cutoff in ascending order, with P(cutoff + 1) = 0.
/// The sums are taken exactly as in the published lifting expression; in
/// particular e4 is not forced to satisfy e1 + e4 = 1.
LiftedCoefficients lifted_coefficients(const PhotonDistribution& dist, const AtomMixture& atom,
                                       const ModelParams& params, double t,
                                       Summation mode = Summation::plain);

}  // namespace sqjcm
