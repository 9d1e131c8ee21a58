#include "sqjcm/photon_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "sqjcm/errors.hpp"
#include "sqjcm/special_fn.hpp"

namespace sqjcm {
namespace {

// 1 - sum(P) may dip below zero by accumulated rounding; anything further is a bug.
constexpr double kNegativeTailSlack = 1e-10;

bool finite(std::complex<double> z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

double exp_or_zero(double log_value) {
  return std::isinf(log_value) && log_value < 0 ? 0.0 : std::exp(log_value);
}

std::vector<double> coherent_probabilities(std::complex<double> theta, int n_max) {
  std::vector<double> p(static_cast<std::size_t>(n_max) + 1, 0.0);
  const double mean = std::norm(theta);
  if (mean == 0.0) {
    p[0] = 1.0;
    return p;
  }
  const double log_mean = std::log(mean);
  for (int n = 0; n <= n_max; ++n) p[n] = std::exp(-mean + n * log_mean - log_factorial(n));
  return p;
}

double norm_complement(const std::vector<double>& probs) {
  double sum = 0.0;
  for (double v : probs) sum += v;
  const double tail = 1.0 - sum;
  if (tail < -kNegativeTailSlack) {
    std::ostringstream msg;
    msg << "photon distribution sums to " << sum << " > 1";
    throw ConsistencyError(msg.str());
  }
  return std::max(tail, 0.0);
}

template <typename Generate>
PhotonDistribution truncate_by_doubling(Generate&& generate, Moments guess, const TruncationPolicy& policy) {
  policy.validate();
  const double seed = guess.mean + 10.0 * std::sqrt(std::max(guess.variance, 0.0));
  int cutoff = kMinCutoff;
  if (seed > kMinCutoff) cutoff = static_cast<int>(std::min<double>(std::ceil(seed), policy.max_cutoff));
  cutoff = std::min(cutoff, policy.max_cutoff);
  for (;;) {
    PhotonDistribution dist;
    dist.probs = generate(cutoff);
    dist.cutoff = cutoff;
    dist.tail_mass = norm_complement(dist.probs);
    if (dist.tail_mass < policy.tail_eps) return dist;
    if (cutoff >= policy.max_cutoff) {
      std::ostringstream msg;
      msg << "photon distribution truncated at n=" << cutoff << " with tail mass " << dist.tail_mass
          << " >= tail_eps " << policy.tail_eps;
      throw TruncationError(msg.str(), dist.tail_mass, cutoff);
    }
    cutoff = std::min(2 * cutoff, policy.max_cutoff);
  }
}

}  // namespace

double SqueezedField::mu() const { return std::cosh(r); }

std::complex<double> SqueezedField::nu() const { return std::polar(std::sinh(r), squeeze_phase); }

std::complex<double> SqueezedField::beta() const { return mu() * theta + nu() * std::conj(theta); }

void SqueezedField::validate() const {
  if (!finite(theta)) throw DomainError("field: theta must be finite");
  if (!std::isfinite(r) || r < 0.0) throw DomainError("field: squeeze magnitude r must be finite and >= 0");
  if (!std::isfinite(squeeze_phase) || squeeze_phase < 0.0 || squeeze_phase >= 2.0 * std::numbers::pi)
    throw DomainError("field: squeeze phase must lie in [0, 2pi)");
}

void TruncationPolicy::validate() const {
  if (!(tail_eps > 0.0 && tail_eps < 1.0)) throw DomainError("truncation: tail_eps must lie in (0, 1)");
  if (max_cutoff < kMinCutoff) throw DomainError("truncation: max_cutoff must be >= 16");
}

double PhotonDistribution::total() const noexcept {
  double sum = 0.0;
  for (double v : probs) sum += v;
  return sum;
}

std::vector<double> squeezed_probabilities(const SqueezedField& field, int n_max) {
  field.validate();
  if (field.r <= 0.0) throw DomainError("squeezed_probabilities: requires r > 0");
  if (n_max < 0) throw DomainError("squeezed_probabilities: negative n_max");

  const double mu = field.mu();
  const std::complex<double> nu = field.nu();
  const std::complex<double> beta = field.beta();
  const std::complex<double> x = beta / std::sqrt(2.0 * mu * nu);

  // Exponent of the squeezed-coherent overlap, (nu*/2mu) beta^2 + (nu/2mu) beta*^2 - |beta|^2.
  // The placement of the conjugate matters only for a complex nu.
  const double gaussian = -std::norm(beta) + (std::conj(nu) * beta * beta).real() / mu;
  const double log_ratio = std::log(std::abs(nu) / (2.0 * mu));
  const double log_mu = std::log(mu);

  const auto hermites = hermite_sequence(n_max, x);
  std::vector<double> p(static_cast<std::size_t>(n_max) + 1, 0.0);
  for (int n = 0; n <= n_max; ++n) {
    const auto& h = hermites[static_cast<std::size_t>(n)];
    if (h.is_zero()) continue;
    const double log_p = -log_mu - log_factorial(n) + n * log_ratio + 2.0 * h.log_magnitude + gaussian;
    p[n] = exp_or_zero(log_p);
  }
  return p;
}

std::vector<std::complex<double>> fock_amplitudes(const SqueezedField& field, int n_max) {
  field.validate();
  if (n_max < 0) throw DomainError("fock_amplitudes: negative n_max");

  const double mu = field.mu();
  const std::complex<double> nu = field.nu();
  const std::complex<double> beta = field.beta();
  const std::complex<double> a = beta / mu;
  const std::complex<double> b = nu / mu;

  // c_0 = mu^{-1/2} exp(-|beta|^2/2 + nu* beta^2 / (2 mu)); real part of the
  // exponent is carried separately so large amplitudes cannot underflow c_0.
  const std::complex<double> expo = -0.5 * std::norm(beta) + std::conj(nu) * beta * beta / (2.0 * mu);
  double log_scale = expo.real();
  std::complex<double> prev{0.0, 0.0};
  std::complex<double> cur = std::polar(1.0 / std::sqrt(mu), expo.imag());

  std::vector<std::complex<double>> out(static_cast<std::size_t>(n_max) + 1);
  auto emit = [&](int n) {
    const double m = std::abs(cur);
    out[static_cast<std::size_t>(n)] =
        m == 0.0 ? std::complex<double>{} : (cur / m) * std::exp(std::log(m) + log_scale);
  };
  emit(0);
  // c_{n+1} = (a c_n - b sqrt(n) c_{n-1}) / sqrt(n+1)
  for (int n = 0; n < n_max; ++n) {
    const std::complex<double> next = (a * cur - b * std::sqrt(static_cast<double>(n)) * prev) /
                                      std::sqrt(static_cast<double>(n + 1));
    prev = cur;
    cur = next;
    const double m = std::max(std::abs(cur), std::abs(prev));
    if (m > 0.0 && (m > 1e100 || m < 1e-100)) {
      prev /= m;
      cur /= m;
      log_scale += std::log(m);
    }
    emit(n + 1);
  }
  return out;
}

Moments estimated_moments(const SqueezedField& field) {
  const double s = std::sinh(field.r);
  const double c = std::cosh(field.r);
  const double amp2 = std::norm(field.theta);
  return {amp2 + s * s, amp2 * std::exp(2.0 * field.r) + 2.0 * s * s * c * c};
}

PhotonDistribution photon_distribution(const SqueezedField& field, const TruncationPolicy& policy) {
  field.validate();
  if (field.r < kCoherentCrossover) return coherent_distribution(field.theta, policy);
  return truncate_by_doubling([&](int n_max) { return squeezed_probabilities(field, n_max); },
                              estimated_moments(field), policy);
}

PhotonDistribution coherent_distribution(std::complex<double> theta, const TruncationPolicy& policy) {
  if (!finite(theta)) throw DomainError("coherent_distribution: theta must be finite");
  const double mean = std::norm(theta);
  return truncate_by_doubling([&](int n_max) { return coherent_probabilities(theta, n_max); },
                              Moments{mean, mean}, policy);
}

Moments distribution_moments(const PhotonDistribution& dist) {
  Moments m;
  for (int n = 0; n <= dist.cutoff; ++n) m.mean += n * dist.probs[static_cast<std::size_t>(n)];
  for (int n = 0; n <= dist.cutoff; ++n) {
    const double d = n - m.mean;
    m.variance += d * d * dist.probs[static_cast<std::size_t>(n)];
  }
  return m;
}

}  // namespace sqjcm
