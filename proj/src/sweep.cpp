#include "sqjcm/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>
#include <type_traits>

#include "sqjcm/errors.hpp"
#include "sqjcm/io.hpp"

namespace sqjcm {
namespace {

struct SharedField {
  std::optional<PreparedField> prepared;
  std::exception_ptr failure;
};

SharedField prepare_shared(const SweepSpec& spec, double r, bool need_amplitudes) {
  SharedField out;
  try {
    const SqueezedField field{spec.theta, r, spec.squeeze_phase};
    if (need_amplitudes) {
      out.prepared = prepare_field(field, spec.truncation);
    } else {
      PreparedField p;
      p.field = field;
      p.distribution = photon_distribution(field, spec.truncation);
      out.prepared = std::move(p);
    }
  } catch (...) {
    out.failure = std::current_exception();
  }
  return out;
}

std::string describe_exception(const std::exception_ptr& e) {
  try {
    std::rethrow_exception(e);
  } catch (const std::exception& ex) {
    return ex.what();
  } catch (...) {
    return "unknown error";
  }
}

// Runs task(i) for i in [0, count) on `workers` threads; each index is claimed once.
template <typename Task>
void parallel_for(std::size_t count, int workers, Task&& task) {
  unsigned n = workers > 0 ? static_cast<unsigned>(workers) : std::max(1u, std::thread::hardware_concurrency());
  n = static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(count, 1)));
  if (n <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (unsigned w = 0; w < n; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) task(i);
    });
  for (auto& th : pool) th.join();
}

void fill_from(SweepRow& row, const DemResult& res) {
  row.dem = res.dem;
  row.s_atom = res.s_atom;
  row.s_field = res.s_field;
  row.s_joint = res.s_joint;
  row.kappa_plus = res.kappa_plus;
  row.kappa_minus = res.kappa_minus;
}

void require_sorted_grid(const std::vector<double>& grid, const char* name, double lo, double hi) {
  if (grid.empty()) throw DomainError(std::string("sweep: ") + name + " grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || grid[i] < lo || grid[i] > hi)
      throw DomainError(std::string("sweep: ") + name + " grid value out of range");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw DomainError(std::string("sweep: ") + name + " grid must be strictly ascending");
  }
}

}  // namespace

double revival_time(double theta, double g) {
  if (!(theta > 0.0) || !(g > 0.0) || !std::isfinite(theta) || !std::isfinite(g))
    throw DomainError("revival_time: theta and g must be positive");
  return 2.0 * std::numbers::pi * theta / g;
}

std::vector<double> uniform_grid(double lo, double hi, double step) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(step > 0.0) || hi < lo)
    throw DomainError("uniform_grid: need finite lo <= hi and step > 0");
  const long count = std::lround((hi - lo) / step);
  if (count > 1000000) throw DomainError("uniform_grid: too many points");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count) + 1);
  for (long k = 0; k <= count; ++k)
    out.push_back(count == 0 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(count));
  return out;
}

std::vector<double> uniform_times(double t_max, int steps) {
  if (!std::isfinite(t_max) || t_max < 0.0 || steps < 1)
    throw DomainError("uniform_times: need t_max >= 0 and steps >= 1");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  for (int k = 0; k <= steps; ++k) out.push_back(t_max * k / steps);
  return out;
}

ModeSelection parse_mode_selection(std::string_view text) {
  if (text == "paper") return ModeSelection::paper;
  if (text == "exact") return ModeSelection::exact;
  if (text == "both") return ModeSelection::both;
  throw DomainError("mode must be paper, exact or both, got '" + std::string(text) + "'");
}

std::string_view to_string(ModeSelection mode) {
  switch (mode) {
    case ModeSelection::paper: return "paper";
    case ModeSelection::exact: return "exact";
    case ModeSelection::both: return "both";
  }
  return "?";
}

void SweepSpec::validate() const {
  require_sorted_grid(lambda1_grid, "lambda1", 0.0, 1.0);
  require_sorted_grid(r_grid, "r", 0.0, std::numeric_limits<double>::max());
  SqueezedField{theta, 0.0, squeeze_phase}.validate();
  params.validate();
  truncation.validate();
  std::visit(
      [this](const auto& ts) {
        using T = std::decay_t<decltype(ts)>;
        if constexpr (std::is_same_v<T, FixedTime>) {
          if (!std::isfinite(ts.t) || ts.t < 0.0) throw DomainError("sweep: fixed time must be >= 0");
        } else if constexpr (std::is_same_v<T, RevivalTime>) {
          revival_time(std::abs(theta), params.g);
        } else {
          if (!std::isfinite(ts.t_max) || ts.t_max < 0.0 || ts.steps < 1)
            throw DomainError("sweep: time grid needs t_max >= 0 and steps >= 1");
        }
      },
      time);
}

std::vector<double> SweepSpec::time_points() const {
  return std::visit(
      [this](const auto& ts) -> std::vector<double> {
        using T = std::decay_t<decltype(ts)>;
        if constexpr (std::is_same_v<T, FixedTime>)
          return {ts.t};
        else if constexpr (std::is_same_v<T, RevivalTime>)
          return {revival_time(std::abs(theta), params.g)};
        else
          return uniform_times(ts.t_max, ts.steps);
      },
      time);
}

std::vector<DemMode> SweepSpec::modes() const {
  switch (mode) {
    case ModeSelection::paper: return {DemMode::paper};
    case ModeSelection::exact: return {DemMode::exact};
    case ModeSelection::both: return {DemMode::paper, DemMode::exact};
  }
  return {};
}

Provenance describe(const SweepSpec& spec) {
  auto list = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + format_double(v[i]);
    return s;
  };
  std::string time;
  std::visit(
      [&](const auto& ts) {
        using T = std::decay_t<decltype(ts)>;
        if constexpr (std::is_same_v<T, FixedTime>)
          time = "fixed " + format_double(ts.t);
        else if constexpr (std::is_same_v<T, RevivalTime>)
          time = "revival";
        else
          time = "grid " + format_double(ts.t_max) + " " + std::to_string(ts.steps);
      },
      spec.time);
  return {{"version", kVersion},
          {"theta_re", format_double(spec.theta.real())},
          {"theta_im", format_double(spec.theta.imag())},
          {"squeeze_phase", format_double(spec.squeeze_phase)},
          {"g", format_double(spec.params.g)},
          {"omega0", format_double(spec.params.omega0)},
          {"mode", std::string(to_string(spec.mode))},
          {"base", std::string(to_string(spec.base))},
          {"tail_eps", format_double(spec.truncation.tail_eps)},
          {"max_cutoff", std::to_string(spec.truncation.max_cutoff)},
          {"time", time},
          {"lambda1_grid", list(spec.lambda1_grid)},
          {"r_grid", list(spec.r_grid)}};
}

SweepResult run_sweep(const SweepSpec& spec) {
  spec.validate();
  const auto times = spec.time_points();
  const auto modes = spec.modes();
  const bool need_amplitudes = spec.mode != ModeSelection::paper;

  const std::size_t n_lambda = spec.lambda1_grid.size();
  const std::size_t n_r = spec.r_grid.size();
  const std::size_t n_t = times.size();
  const std::size_t n_points = n_lambda * n_r * n_t;

  std::vector<SharedField> shared(spec.share_distributions ? n_r : 0);
  if (spec.share_distributions)
    parallel_for(n_r, spec.workers,
                 [&](std::size_t j) { shared[j] = prepare_shared(spec, spec.r_grid[j], need_amplitudes); });

  SweepResult result;
  result.provenance = describe(spec);
  result.rows.resize(n_points * modes.size());
  std::vector<std::exception_ptr> failures(result.rows.size());

  parallel_for(n_points, spec.workers, [&](std::size_t point) {
    const std::size_t i = point / (n_r * n_t);
    const std::size_t j = (point / n_t) % n_r;
    const std::size_t k = point % n_t;
    const double lambda1 = spec.lambda1_grid[i];
    const double r = spec.r_grid[j];
    const double t = times[k];

    SharedField local;
    const SharedField* field = nullptr;
    if (spec.share_distributions) {
      field = &shared[j];
    } else {
      local = prepare_shared(spec, r, need_amplitudes);
      field = &local;
    }

    for (std::size_t m = 0; m < modes.size(); ++m) {
      const std::size_t idx = point * modes.size() + m;
      SweepRow& row = result.rows[idx];
      row.lambda1 = lambda1;
      row.r = r;
      row.t = t;
      row.mode = modes[m];
      if (field->failure) {
        failures[idx] = field->failure;
        row.error = describe_exception(field->failure);
        continue;
      }
      const PreparedField& prepared = *field->prepared;
      row.tail_mass = prepared.distribution.tail_mass;
      row.cutoff = prepared.distribution.cutoff;
      try {
        const auto atom = AtomMixture::from_excited_weight(lambda1);
        const DemResult res = modes[m] == DemMode::paper
                                  ? dem_paper(prepared.distribution, atom, spec.params, t, spec.base)
                                  : dem_exact(prepared, atom, spec.params, t, spec.base);
        fill_from(row, res);
      } catch (...) {
        failures[idx] = std::current_exception();
        row.error = describe_exception(failures[idx]);
      }
    }
  });

  const bool all_failed = std::all_of(failures.begin(), failures.end(), [](const auto& e) { return bool(e); });
  if (all_failed && !failures.empty()) std::rethrow_exception(failures.front());
  return result;
}

std::vector<TransitionPoint> transition_series(const PhotonDistribution& dist, const ModelParams& params,
                                               std::span<const double> times) {
  std::vector<TransitionPoint> out;
  out.reserve(times.size());
  for (double t : times) out.push_back({t, transition_c(dist, params, t), transition_s(dist, params, t)});
  return out;
}

std::vector<ComparePoint> compare_series(const SqueezedField& field, const AtomMixture& atom,
                                         const ModelParams& params, std::span<const double> times, LogBase base,
                                         const TruncationPolicy& policy) {
  const PreparedField prepared = prepare_field(field, policy);
  std::vector<ComparePoint> out;
  out.reserve(times.size());
  for (double t : times) {
    ComparePoint p;
    p.t = t;
    p.dem_paper = dem_paper(prepared.distribution, atom, params, t, base).dem;
    p.dem_exact = dem_exact(prepared, atom, params, t, base).dem;
    p.gap = p.dem_paper - p.dem_exact;
    out.push_back(p);
  }
  return out;
}

}  // namespace sqjcm
