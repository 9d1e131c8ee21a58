#pragma once

#include <complex>
#include <vector>

namespace sqjcm {

/// Physicists' Hermite polynomial H_n(x) held as phase * exp(log_magnitude).
///
/// Exact zeros carry log_magnitude = -inf and phase 1. For real arguments the
/// phase is exactly +1 or -1.
struct ScaledHermite {
  int degree = 0;
  double log_magnitude = 0.0;
  std::complex<double> phase{1.0, 0.0};

  bool is_zero() const noexcept;
  // Overflows to +-inf for large degrees; use log_magnitude there.
  std::complex<double> value() const;
};

ScaledHermite hermite(int n, std::complex<double> x);

/// H_0(x) .. H_{n_max}(x) from a single pass of the three-term recurrence.
std::vector<ScaledHermite> hermite_sequence(int n_max, std::complex<double> x);

/// ln(n!).
double log_factorial(int n);

}  // namespace sqjcm
