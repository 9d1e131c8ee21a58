#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sqjcm/dynamics.hpp"
#include "sqjcm/photon_stats.hpp"

namespace sqjcm {

enum class LogBase { e, two };
enum class DemMode { paper, exact };

std::string_view to_string(LogBase base);
std::string_view to_string(DemMode mode);
LogBase parse_log_base(std::string_view text);
DemMode parse_dem_mode(std::string_view text);

/// Degree of entanglement due to mutual entropy at one time point.
///
/// s_field and s_joint are only produced by the exact evaluation, kappa_plus
/// and kappa_minus only by the closed-form (paper) evaluation.
struct DemResult {
  DemMode mode = DemMode::paper;
  double t = 0.0;
  double dem = 0.0;
  double s_atom = 0.0;
  std::optional<double> s_field;
  std::optional<double> s_joint;
  std::optional<double> kappa_plus;
  std::optional<double> kappa_minus;
};

/// Dense complex matrix, row-major, used for the small Hermitian eigenproblems.
class SmallMatrix {
 public:
  explicit SmallMatrix(int dim) : dim_(dim), data_(static_cast<std::size_t>(dim) * dim) {}
  SmallMatrix(int dim, std::initializer_list<std::complex<double>> row_major);

  int dim() const noexcept { return dim_; }
  std::complex<double>& operator()(int i, int j) { return data_[static_cast<std::size_t>(i * dim_ + j)]; }
  const std::complex<double>& operator()(int i, int j) const {
    return data_[static_cast<std::size_t>(i * dim_ + j)];
  }

 private:
  int dim_;
  std::vector<std::complex<double>> data_;
};

inline constexpr int kSmallSpectrumMaxDim = 8;

/// Eigenvalues of a Hermitian matrix (dim <= 8) by cyclic complex Jacobi
/// rotations, sorted descending.
std::vector<double> hermitian_spectrum_small(const SmallMatrix& m);

/// -sum p log p with 0 log 0 = 0. Entries in [-1e-12, 0) count as zero.
double shannon_entropy(std::span<const double> p, LogBase base = LogBase::e);

/// Closed-form DEM from e1..e4:
///   -2 (e1 log e1 + e4 log e4) + k+ log k+ + k- log k-,
///   k+- = ((e1 + e4) +- sqrt((e1 + e4)^2 - 4 (e1 e4 - e2 e3))) / 2.
DemResult dem_paper(const LiftedCoefficients& coeffs, LogBase base = LogBase::e);

DemResult dem_paper(const PhotonDistribution& dist, const AtomMixture& atom, const ModelParams& params, double t,
                    LogBase base = LogBase::e);

enum class BranchStart { ground, excited };

/// Atom-field state evolved from |start> (x) |field>, split by atom level.
/// Both vectors are indexed by photon number 0..cutoff+1.
struct BranchState {
  BranchStart start = BranchStart::excited;
  std::vector<std::complex<double>> ground_amplitudes;
  std::vector<std::complex<double>> excited_amplitudes;

  double norm_squared() const;
};

/// Field amplitudes above this magnitude at the cutoff mean the Fock basis is too small.
inline constexpr double kBoundaryAmplitudeLimit = 1e-6;

/// Squeezed field together with its truncated statistics and Fock amplitudes,
/// sized once and shared between time points.
struct PreparedField {
  SqueezedField field;
  PhotonDistribution distribution;
  std::vector<std::complex<double>> amplitudes;

  int cutoff() const noexcept { return distribution.cutoff; }
};

PreparedField prepare_field(const SqueezedField& field, const TruncationPolicy& policy = {});

/// Exact resonant evolution of one branch: each sector span{|2,n>, |1,n+1>}
/// rotates at the Rabi frequency, |1,0> only picks up a phase.
BranchState evolve_branch(std::span<const std::complex<double>> initial_amplitudes, const ModelParams& params,
                          BranchStart start, double t);

BranchState evolve_branch(const SqueezedField& field, const ModelParams& params, BranchStart start, int cutoff,
                          double t);

/// Mutual entropy S(atom) + S(field) - S(joint) of the exactly evolved state.
/// Uses the rank structure (joint rank <= 2, field rank <= 4) through Gram matrices.
DemResult dem_exact(const PreparedField& prepared, const AtomMixture& atom, const ModelParams& params, double t,
                    LogBase base = LogBase::e);

DemResult dem_exact(const SqueezedField& field, const AtomMixture& atom, const ModelParams& params, double t,
                    LogBase base = LogBase::e, const TruncationPolicy& policy = {});

inline constexpr int kDenseCheckMaxCutoff = 64;

/// Verification path: builds the full joint density matrix, takes partial
/// traces and diagonalizes densely. Only for cutoff <= 64.
DemResult dem_exact_dense(const PreparedField& prepared, const AtomMixture& atom, const ModelParams& params,
                          double t, LogBase base = LogBase::e);

}  // namespace sqjcm
