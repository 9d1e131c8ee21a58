#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sqjcm/dynamics.hpp"
#include "sqjcm/entanglement.hpp"
#include "sqjcm/photon_stats.hpp"

namespace sqjcm {

inline constexpr const char* kVersion = "0.3.0";

/// Revival time 2 pi theta / g.
double revival_time(double theta, double g);

/// lo, lo + step, ..., hi with the endpoint hit exactly; values are lo + (hi - lo) k / count.
std::vector<double> uniform_grid(double lo, double hi, double step);

/// steps + 1 points 0, t_max / steps, ..., t_max.
std::vector<double> uniform_times(double t_max, int steps);

struct FixedTime {
  double t = 0.0;
};
struct RevivalTime {};
struct UniformTimeGrid {
  double t_max = 25.0;
  int steps = 500;
};
using TimeSpec = std::variant<FixedTime, RevivalTime, UniformTimeGrid>;

enum class ModeSelection { paper, exact, both };

ModeSelection parse_mode_selection(std::string_view text);
std::string_view to_string(ModeSelection mode);

struct SweepSpec {
  std::vector<double> lambda1_grid;
  std::vector<double> r_grid;
  TimeSpec time = RevivalTime{};
  std::complex<double> theta{std::sqrt(5.0), 0.0};
  double squeeze_phase = 0.0;
  ModelParams params;
  ModeSelection mode = ModeSelection::paper;
  TruncationPolicy truncation;
  LogBase base = LogBase::e;
  int workers = 1;  // <= 0 means one per hardware thread
  // Compute each r's distribution once and share it across (lambda1, t) points.
  bool share_distributions = true;

  void validate() const;
  std::vector<double> time_points() const;
  std::vector<DemMode> modes() const;
};

/// One evaluated (lambda1, r, t, mode) point. A failed point keeps its
/// coordinates, leaves the numeric results empty and records the error text.
struct SweepRow {
  double lambda1 = 0.0;
  double r = 0.0;
  double t = 0.0;
  DemMode mode = DemMode::paper;
  std::optional<double> dem;
  std::optional<double> s_atom;
  std::optional<double> s_field;
  std::optional<double> s_joint;
  std::optional<double> kappa_plus;
  std::optional<double> kappa_minus;
  std::optional<double> tail_mass;
  std::optional<int> cutoff;
  std::string error;

  bool ok() const noexcept { return error.empty(); }
  bool operator==(const SweepRow&) const = default;
};

using Provenance = std::vector<std::pair<std::string, std::string>>;

struct SweepResult {
  std::vector<SweepRow> rows;
  Provenance provenance;
};

/// Evaluates every grid point. Rows come out lambda1-major, then r, then t,
/// then mode (paper before exact), independent of the worker count.
/// Throws the first point's error only if every point failed.
SweepResult run_sweep(const SweepSpec& spec);

Provenance describe(const SweepSpec& spec);

struct TransitionPoint {
  double t = 0.0;
  double c = 0.0;
  double s = 0.0;
};

std::vector<TransitionPoint> transition_series(const PhotonDistribution& dist, const ModelParams& params,
                                               std::span<const double> times);

struct ComparePoint {
  double t = 0.0;
  double dem_paper = 0.0;
  double dem_exact = 0.0;
  double gap = 0.0;  // dem_paper - dem_exact
};

std::vector<ComparePoint> compare_series(const SqueezedField& field, const AtomMixture& atom,
                                         const ModelParams& params, std::span<const double> times,
                                         LogBase base = LogBase::e, const TruncationPolicy& policy = {});

}  // namespace sqjcm
