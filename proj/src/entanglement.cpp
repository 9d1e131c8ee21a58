#include "sqjcm/entanglement.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "sqjcm/errors.hpp"

namespace sqjcm {
namespace {

constexpr double kNegativeEntryTolerance = 1e-12;
constexpr double kEntropySumTolerance = 1e-9;
constexpr double kHermitianTolerance = 1e-10;
constexpr double kJacobiOffTolerance = 1e-13;
constexpr int kJacobiMaxSweeps = 64;
constexpr double kKappaUpperSlack = 1e-9;
// Gram spectra may carry rounding-level negative eigenvalues.
constexpr double kGramNegativeTolerance = 1e-10;
constexpr double kJointSpectrumTolerance = 1e-8;

double log_in(double x, LogBase base) { return base == LogBase::e ? std::log(x) : std::log2(x); }

// x log x with 0 log 0 = 0.
double xlogx(double x, LogBase base) { return x <= 0.0 ? 0.0 : x * log_in(x, base); }

double off_diagonal_norm(const SmallMatrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

std::complex<double> inner(std::span<const std::complex<double>> a, std::span<const std::complex<double>> b) {
  std::complex<double> s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

std::vector<double> clamp_spectrum(std::vector<double> values, const char* what) {
  for (double& v : values) {
    if (v < -kGramNegativeTolerance) {
      std::ostringstream msg;
      msg << what << ": eigenvalue " << v << " is not positive within " << kGramNegativeTolerance;
      throw ConsistencyError(msg.str());
    }
    v = std::max(v, 0.0);
  }
  return values;
}

std::vector<double> gram_spectrum(std::span<const std::vector<std::complex<double>>> vectors, const char* what) {
  const int k = static_cast<int>(vectors.size());
  SmallMatrix gram(k);
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) {
      gram(i, j) = inner(vectors[i], vectors[j]);
      gram(j, i) = std::conj(gram(i, j));
    }
  return clamp_spectrum(hermitian_spectrum_small(gram), what);
}

}  // namespace

std::string_view to_string(LogBase base) { return base == LogBase::e ? "e" : "2"; }

std::string_view to_string(DemMode mode) { return mode == DemMode::paper ? "paper" : "exact"; }

LogBase parse_log_base(std::string_view text) {
  if (text == "e") return LogBase::e;
  if (text == "2") return LogBase::two;
  throw DomainError("log base must be 'e' or '2', got '" + std::string(text) + "'");
}

DemMode parse_dem_mode(std::string_view text) {
  if (text == "paper") return DemMode::paper;
  if (text == "exact") return DemMode::exact;
  throw DomainError("DEM mode must be 'paper' or 'exact', got '" + std::string(text) + "'");
}

SmallMatrix::SmallMatrix(int dim, std::initializer_list<std::complex<double>> row_major) : SmallMatrix(dim) {
  if (row_major.size() != data_.size()) throw DomainError("SmallMatrix: wrong number of entries");
  std::copy(row_major.begin(), row_major.end(), data_.begin());
}

std::vector<double> hermitian_spectrum_small(const SmallMatrix& m) {
  const int n = m.dim();
  if (n < 1 || n > kSmallSpectrumMaxDim) throw DomainError("hermitian_spectrum_small: dimension must be 1..8");
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      if (std::abs(m(i, j) - std::conj(m(j, i))) > kHermitianTolerance)
        throw DomainError("hermitian_spectrum_small: matrix is not Hermitian");

  SmallMatrix a(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));

  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) scale += std::norm(a(i, j));
  const double tol = kJacobiOffTolerance * std::max(1.0, std::sqrt(scale));

  int sweep = 0;
  while (off_diagonal_norm(a) > tol) {
    if (++sweep > kJacobiMaxSweeps) throw ConsistencyError("hermitian_spectrum_small: Jacobi did not converge");
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double r = std::abs(a(p, q));
        if (r == 0.0) continue;
        // Unitary phase on index q makes a(p, q) real and positive.
        const std::complex<double> phase = a(p, q) / r;
        for (int k = 0; k < n; ++k) {
          a(k, q) *= std::conj(phase);
          a(q, k) *= phase;
        }
        a(p, q) = r;
        a(q, p) = r;

        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * r);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const auto kp = a(k, p);
          const auto kq = a(k, q);
          a(k, p) = c * kp - s * kq;
          a(k, q) = s * kp + c * kq;
        }
        for (int k = 0; k < n; ++k) {
          const auto pk = a(p, k);
          const auto qk = a(q, k);
          a(p, k) = c * pk - s * qk;
          a(q, k) = s * pk + c * qk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = app - t * r;
        a(q, q) = aqq + t * r;
      }
    }
  }

  std::vector<double> eig(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) eig[static_cast<std::size_t>(i)] = a(i, i).real();
  std::sort(eig.begin(), eig.end(), std::greater<>());
  return eig;
}

double shannon_entropy(std::span<const double> p, LogBase base) {
  double sum = 0.0;
  double h = 0.0;
  for (double v : p) {
    if (!std::isfinite(v) || v < -kNegativeEntryTolerance)
      throw DomainError("shannon_entropy: entry " + std::to_string(v) + " is negative");
    sum += std::max(v, 0.0);
    h -= xlogx(v, base);
  }
  if (sum > 1.0 + kEntropySumTolerance) throw DomainError("shannon_entropy: entries sum above 1");
  return h;
}

DemResult dem_paper(const LiftedCoefficients& coeffs, LogBase base) {
  const double e1 = coeffs.e1;
  const double e4 = coeffs.e4;
  const double trace = e1 + e4;
  const double det = e1 * e4 - (coeffs.e2 * coeffs.e3).real();
  double disc = trace * trace - 4.0 * det;

  auto fail = [&](const std::string& why) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "dem_paper: " << why << " at t=" << coeffs.t << " (e1=" << e1 << ", e2=" << coeffs.e2
        << ", e3=" << coeffs.e3 << ", e4=" << e4 << ")";
    throw DomainError(msg.str());
  };
  if (disc < -kNegativeEntryTolerance) fail("negative discriminant " + std::to_string(disc));
  disc = std::max(disc, 0.0);

  const double root = std::sqrt(disc);
  const double kp = 0.5 * (trace + root);
  const double km = 0.5 * (trace - root);
  for (double k : {kp, km})
    if (!(k >= -kNegativeEntryTolerance && k <= 1.0 + kKappaUpperSlack)) fail("kappa out of [0, 1]");

  DemResult out;
  out.mode = DemMode::paper;
  out.t = coeffs.t;
  out.s_atom = -(xlogx(e1, base) + xlogx(e4, base));
  out.dem = -2.0 * (xlogx(e1, base) + xlogx(e4, base)) + xlogx(kp, base) + xlogx(km, base);
  out.kappa_plus = kp;
  out.kappa_minus = km;
  return out;
}

DemResult dem_paper(const PhotonDistribution& dist, const AtomMixture& atom, const ModelParams& params, double t,
                    LogBase base) {
  return dem_paper(lifted_coefficients(dist, atom, params, t), base);
}

double BranchState::norm_squared() const {
  double s = 0.0;
  for (const auto& v : ground_amplitudes) s += std::norm(v);
  for (const auto& v : excited_amplitudes) s += std::norm(v);
  return s;
}

PreparedField prepare_field(const SqueezedField& field, const TruncationPolicy& policy) {
  PreparedField out;
  out.field = field;
  out.distribution = photon_distribution(field, policy);
  out.amplitudes = fock_amplitudes(field, out.distribution.cutoff);
  return out;
}

BranchState evolve_branch(std::span<const std::complex<double>> initial, const ModelParams& params,
                          BranchStart start, double t) {
  params.validate();
  if (!std::isfinite(t) || t < 0.0) throw DomainError("evolve_branch: time must be finite and >= 0");
  if (initial.empty()) throw DomainError("evolve_branch: empty field amplitudes");
  const int cutoff = static_cast<int>(initial.size()) - 1;
  if (std::abs(initial.back()) > kBoundaryAmplitudeLimit) {
    std::ostringstream msg;
    msg << "evolve_branch: amplitude " << std::abs(initial.back()) << " at cutoff n=" << cutoff
        << " exceeds " << kBoundaryAmplitudeLimit;
    throw TruncationError(msg.str(), std::norm(initial.back()), cutoff);
  }

  const std::size_t len = static_cast<std::size_t>(cutoff) + 2;
  BranchState out;
  out.start = start;
  out.ground_amplitudes.assign(len, {});
  out.excited_amplitudes.assign(len, {});
  const std::complex<double> minus_i{0.0, -1.0};

  // Sector n couples |2,n> and |1,n+1> with common energy omega0 (n + 1/2).
  auto sector_phase = [&](int n) { return std::polar(1.0, -params.omega0 * (n + 0.5) * t); };

  if (start == BranchStart::excited) {
    for (int n = 0; n <= cutoff; ++n) {
      const double angle = rabi_frequency(params, n) * t;
      const auto c = initial[static_cast<std::size_t>(n)] * sector_phase(n);
      out.excited_amplitudes[static_cast<std::size_t>(n)] = c * std::cos(angle);
      out.ground_amplitudes[static_cast<std::size_t>(n) + 1] = minus_i * c * std::sin(angle);
    }
  } else {
    // |1,0> has energy -omega0/2 and no partner.
    out.ground_amplitudes[0] = initial[0] * std::polar(1.0, 0.5 * params.omega0 * t);
    for (int n = 0; n < cutoff; ++n) {
      const double angle = rabi_frequency(params, n) * t;
      const auto c = initial[static_cast<std::size_t>(n) + 1] * sector_phase(n);
      out.ground_amplitudes[static_cast<std::size_t>(n) + 1] = c * std::cos(angle);
      out.excited_amplitudes[static_cast<std::size_t>(n)] = minus_i * c * std::sin(angle);
    }
  }
  return out;
}

BranchState evolve_branch(const SqueezedField& field, const ModelParams& params, BranchStart start, int cutoff,
                          double t) {
  const auto amps = fock_amplitudes(field, cutoff);
  return evolve_branch(amps, params, start, t);
}

DemResult dem_exact(const PreparedField& prepared, const AtomMixture& atom, const ModelParams& params, double t,
                    LogBase base) {
  atom.validate();
  const BranchState excited = evolve_branch(prepared.amplitudes, params, BranchStart::excited, t);
  const BranchState ground = evolve_branch(prepared.amplitudes, params, BranchStart::ground, t);

  auto weighted = [](const std::vector<std::complex<double>>& v, double w) {
    std::vector<std::complex<double>> out(v.size());
    const double s = std::sqrt(w);
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = s * v[i];
    return out;
  };

  // Atom reduced state, basis (|2>, |1>).
  double pop_excited = 0.0;
  double pop_ground = 0.0;
  std::complex<double> coherence{};
  for (const auto& [branch, w] : {std::pair{&excited, atom.lambda1}, std::pair{&ground, atom.lambda0}}) {
    for (const auto& v : branch->excited_amplitudes) pop_excited += w * std::norm(v);
    for (const auto& v : branch->ground_amplitudes) pop_ground += w * std::norm(v);
    coherence += w * inner(branch->ground_amplitudes, branch->excited_amplitudes);
  }
  const SmallMatrix rho_atom(2, {pop_excited, coherence, std::conj(coherence), pop_ground});
  const auto atom_spectrum = clamp_spectrum(hermitian_spectrum_small(rho_atom), "atom reduced state");

  // Field reduced state: nonzero spectrum of sum_i |u_i><u_i| equals the Gram spectrum.
  const std::array<std::vector<std::complex<double>>, 4> field_vectors{
      weighted(excited.excited_amplitudes, atom.lambda1), weighted(excited.ground_amplitudes, atom.lambda1),
      weighted(ground.excited_amplitudes, atom.lambda0), weighted(ground.ground_amplitudes, atom.lambda0)};
  const auto field_spectrum = gram_spectrum(field_vectors, "field Gram matrix");

  // Joint state is rank <= 2; its spectrum must reproduce the initial weights.
  auto stacked = [&](const BranchState& b, double w) {
    auto v = weighted(b.excited_amplitudes, w);
    const auto g = weighted(b.ground_amplitudes, w);
    v.insert(v.end(), g.begin(), g.end());
    return v;
  };
  const std::array<std::vector<std::complex<double>>, 2> branch_vectors{stacked(excited, atom.lambda1),
                                                                         stacked(ground, atom.lambda0)};
  const auto joint_spectrum = gram_spectrum(branch_vectors, "joint Gram matrix");
  const double weights[] = {std::max(atom.lambda0, atom.lambda1), std::min(atom.lambda0, atom.lambda1)};
  const double tolerance = kJointSpectrumTolerance + prepared.distribution.tail_mass;
  for (int i = 0; i < 2; ++i) {
    if (std::abs(joint_spectrum[static_cast<std::size_t>(i)] - weights[i]) > tolerance) {
      std::ostringstream msg;
      msg << "dem_exact: joint spectrum " << joint_spectrum[0] << ", " << joint_spectrum[1]
          << " does not match atom weights";
      throw ConsistencyError(msg.str());
    }
  }

  DemResult out;
  out.mode = DemMode::exact;
  out.t = t;
  out.s_atom = shannon_entropy(atom_spectrum, base);
  out.s_field = shannon_entropy(field_spectrum, base);
  const double joint[] = {atom.lambda0, atom.lambda1};
  out.s_joint = shannon_entropy(joint, base);
  out.dem = out.s_atom + *out.s_field - *out.s_joint;
  return out;
}

DemResult dem_exact(const SqueezedField& field, const AtomMixture& atom, const ModelParams& params, double t,
                    LogBase base, const TruncationPolicy& policy) {
  return dem_exact(prepare_field(field, policy), atom, params, t, base);
}

}  // namespace sqjcm
