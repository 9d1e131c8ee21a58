#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sqjcm/entanglement.hpp"
#include "sqjcm/photon_stats.hpp"
#include "sqjcm/sweep.hpp"

namespace sqjcm {

/// Locale-independent rendering with 17 significant digits.
std::string format_double(double v);
double parse_double(std::string_view text);

/// Plain comma-separated table. Lines starting with '#' are comments.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const;
};

CsvTable parse_csv(std::string_view text);

/// Header `n,p`, one row per photon number 0..cutoff.
std::string distribution_csv(const PhotonDistribution& dist);
std::vector<double> parse_distribution_csv(std::string_view text);

/// Header `t,c,s`.
std::string transition_csv(std::span<const TransitionPoint> points);
std::vector<TransitionPoint> parse_transition_csv(std::string_view text);

/// Header `t,dem_paper,dem_exact,gap`.
std::string compare_csv(std::span<const ComparePoint> points);
std::vector<ComparePoint> parse_compare_csv(std::string_view text);

/// Named columns of equal length; the first column is written as an integer
/// when integral_first is set.
std::string columns_csv(std::span<const std::string> header, std::span<const std::vector<double>> columns,
                        bool integral_first = false);

/// Sweep rows with `# key=value` provenance lines before the header.
std::string sweep_csv(const SweepResult& result);
SweepResult parse_sweep_csv(std::string_view text);

/// {"provenance": {...}, "rows": [...]}.
std::string sweep_json(const SweepResult& result);
SweepResult parse_sweep_json(std::string_view text);

/// {"inputs": {...}, "results": [DemResult...]}.
std::string dem_json(std::span<const DemResult> results, const Provenance& inputs);
std::vector<DemResult> parse_dem_json(std::string_view text);

/// Gnuplot `splot` data: "lambda1 r dem" lines, a blank line after each lambda1
/// block. Only the first time point of the requested mode is written; failed
/// rows are skipped.
std::string gnuplot_matrix(const SweepResult& result, DemMode mode);

/// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace sqjcm
