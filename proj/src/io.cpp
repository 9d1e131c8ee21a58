#include "sqjcm/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <sstream>
#include <system_error>

#include "sqjcm/errors.hpp"

namespace sqjcm {
namespace {

using nlohmann::json;

std::string format_optional(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::optional<double> parse_optional(std::string_view cell) {
  if (cell.empty()) return std::nullopt;
  return parse_double(cell);
}

int parse_int(std::string_view text) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw DomainError("cannot parse integer '" + std::string(text) + "'");
  return v;
}

// Error strings may contain commas; quote them CSV-style.
std::string quote(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += (c == '\n' ? ' ' : c);
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  cells.push_back(std::move(cur));
  return cells;
}

const std::vector<std::string> kSweepHeader{"lambda1", "r",           "t",           "mode",      "dem",
                                            "s_atom",  "s_field",     "s_joint",     "kappa_plus", "kappa_minus",
                                            "tail_mass", "cutoff",    "error"};

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> optional_from(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

json row_json(const SweepRow& row) {
  return json{{"lambda1", row.lambda1},
              {"r", row.r},
              {"t", row.t},
              {"mode", std::string(to_string(row.mode))},
              {"dem", optional_json(row.dem)},
              {"s_atom", optional_json(row.s_atom)},
              {"s_field", optional_json(row.s_field)},
              {"s_joint", optional_json(row.s_joint)},
              {"kappa_plus", optional_json(row.kappa_plus)},
              {"kappa_minus", optional_json(row.kappa_minus)},
              {"tail_mass", optional_json(row.tail_mass)},
              {"cutoff", row.cutoff ? json(*row.cutoff) : json(nullptr)},
              {"error", row.error}};
}

SweepRow row_from_json(const json& j) {
  SweepRow row;
  row.lambda1 = j.at("lambda1").get<double>();
  row.r = j.at("r").get<double>();
  row.t = j.at("t").get<double>();
  row.mode = parse_dem_mode(j.at("mode").get<std::string>());
  row.dem = optional_from(j, "dem");
  row.s_atom = optional_from(j, "s_atom");
  row.s_field = optional_from(j, "s_field");
  row.s_joint = optional_from(j, "s_joint");
  row.kappa_plus = optional_from(j, "kappa_plus");
  row.kappa_minus = optional_from(j, "kappa_minus");
  row.tail_mass = optional_from(j, "tail_mass");
  if (j.contains("cutoff") && !j.at("cutoff").is_null()) row.cutoff = j.at("cutoff").get<int>();
  row.error = j.value("error", std::string());
  return row;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw DomainError(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw DomainError("cannot parse number '" + std::string(text) + "'");
  return v;
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw DomainError("CSV: missing column '" + std::string(name) + "'");
}

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  std::istringstream in{std::string(text)};
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto cells = split_csv_line(line);
    if (!have_header) {
      table.header = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != table.header.size()) throw DomainError("CSV: ragged row");
    table.rows.push_back(std::move(cells));
  }
  if (!have_header) throw DomainError("CSV: no header row");
  return table;
}

std::string distribution_csv(const PhotonDistribution& dist) {
  std::string out = "n,p\n";
  for (int n = 0; n <= dist.cutoff; ++n) out += std::to_string(n) + "," + format_double(dist.at(n)) + "\n";
  return out;
}

std::vector<double> parse_distribution_csv(std::string_view text) {
  const auto table = parse_csv(text);
  const auto cn = table.column("n");
  const auto cp = table.column("p");
  std::vector<double> probs;
  for (const auto& row : table.rows) {
    if (parse_int(row[cn]) != static_cast<int>(probs.size())) throw DomainError("CSV: photon numbers out of order");
    probs.push_back(parse_double(row[cp]));
  }
  return probs;
}

std::string transition_csv(std::span<const TransitionPoint> points) {
  std::string out = "t,c,s\n";
  for (const auto& p : points) out += format_double(p.t) + "," + format_double(p.c) + "," + format_double(p.s) + "\n";
  return out;
}

std::vector<TransitionPoint> parse_transition_csv(std::string_view text) {
  const auto table = parse_csv(text);
  const auto ct = table.column("t"), cc = table.column("c"), cs = table.column("s");
  std::vector<TransitionPoint> out;
  for (const auto& row : table.rows) out.push_back({parse_double(row[ct]), parse_double(row[cc]), parse_double(row[cs])});
  return out;
}

std::string compare_csv(std::span<const ComparePoint> points) {
  std::string out = "t,dem_paper,dem_exact,gap\n";
  for (const auto& p : points)
    out += format_double(p.t) + "," + format_double(p.dem_paper) + "," + format_double(p.dem_exact) + "," +
           format_double(p.gap) + "\n";
  return out;
}

std::vector<ComparePoint> parse_compare_csv(std::string_view text) {
  const auto table = parse_csv(text);
  const auto ct = table.column("t"), cp = table.column("dem_paper"), ce = table.column("dem_exact"),
             cg = table.column("gap");
  std::vector<ComparePoint> out;
  for (const auto& row : table.rows)
    out.push_back({parse_double(row[ct]), parse_double(row[cp]), parse_double(row[ce]), parse_double(row[cg])});
  return out;
}

std::string columns_csv(std::span<const std::string> header, std::span<const std::vector<double>> columns,
                        bool integral_first) {
  if (header.size() != columns.size() || columns.empty()) throw DomainError("columns_csv: header/column mismatch");
  const std::size_t len = columns.front().size();
  for (const auto& c : columns)
    if (c.size() != len) throw DomainError("columns_csv: columns differ in length");
  std::string out;
  for (std::size_t j = 0; j < header.size(); ++j) out += (j ? "," : "") + header[j];
  out += "\n";
  for (std::size_t i = 0; i < len; ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (j) out += ",";
      out += (j == 0 && integral_first) ? std::to_string(std::llround(columns[j][i])) : format_double(columns[j][i]);
    }
    out += "\n";
  }
  return out;
}

std::string sweep_csv(const SweepResult& result) {
  std::string out;
  for (const auto& [k, v] : result.provenance) out += "# " + k + "=" + v + "\n";
  for (std::size_t j = 0; j < kSweepHeader.size(); ++j) out += (j ? "," : "") + kSweepHeader[j];
  out += "\n";
  for (const auto& row : result.rows) {
    out += format_double(row.lambda1) + "," + format_double(row.r) + "," + format_double(row.t) + "," +
           std::string(to_string(row.mode)) + "," + format_optional(row.dem) + "," + format_optional(row.s_atom) +
           "," + format_optional(row.s_field) + "," + format_optional(row.s_joint) + "," +
           format_optional(row.kappa_plus) + "," + format_optional(row.kappa_minus) + "," +
           format_optional(row.tail_mass) + "," + (row.cutoff ? std::to_string(*row.cutoff) : std::string()) +
           "," + quote(row.error) + "\n";
  }
  return out;
}

SweepResult parse_sweep_csv(std::string_view text) {
  SweepResult result;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line) && line.rfind("# ", 0) == 0) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    result.provenance.emplace_back(line.substr(2, eq - 2), line.substr(eq + 1));
  }
  const auto table = parse_csv(text);
  if (table.header != kSweepHeader) throw DomainError("sweep CSV: unexpected header");
  for (const auto& c : table.rows) {
    SweepRow row;
    row.lambda1 = parse_double(c[0]);
    row.r = parse_double(c[1]);
    row.t = parse_double(c[2]);
    row.mode = parse_dem_mode(c[3]);
    row.dem = parse_optional(c[4]);
    row.s_atom = parse_optional(c[5]);
    row.s_field = parse_optional(c[6]);
    row.s_joint = parse_optional(c[7]);
    row.kappa_plus = parse_optional(c[8]);
    row.kappa_minus = parse_optional(c[9]);
    row.tail_mass = parse_optional(c[10]);
    if (!c[11].empty()) row.cutoff = parse_int(c[11]);
    row.error = c[12];
    result.rows.push_back(std::move(row));
  }
  return result;
}

std::string sweep_json(const SweepResult& result) {
  json prov = json::object();
  for (const auto& [k, v] : result.provenance) prov[k] = v;
  json rows = json::array();
  for (const auto& row : result.rows) rows.push_back(row_json(row));
  // Provenance keys are re-sorted by nlohmann; the CSV keeps insertion order.
  return json{{"provenance", prov}, {"rows", rows}}.dump(2) + "\n";
}

SweepResult parse_sweep_json(std::string_view text) {
  const json j = parse_json(text);
  SweepResult result;
  for (const auto& [k, v] : j.at("provenance").items()) result.provenance.emplace_back(k, v.get<std::string>());
  for (const auto& r : j.at("rows")) result.rows.push_back(row_from_json(r));
  return result;
}

std::string dem_json(std::span<const DemResult> results, const Provenance& inputs) {
  json in = json::object();
  for (const auto& [k, v] : inputs) in[k] = v;
  json arr = json::array();
  for (const auto& r : results)
    arr.push_back(json{{"mode", std::string(to_string(r.mode))},
                       {"t", r.t},
                       {"dem", r.dem},
                       {"s_atom", r.s_atom},
                       {"s_field", optional_json(r.s_field)},
                       {"s_joint", optional_json(r.s_joint)},
                       {"kappa_plus", optional_json(r.kappa_plus)},
                       {"kappa_minus", optional_json(r.kappa_minus)}});
  return json{{"inputs", in}, {"results", arr}}.dump(2) + "\n";
}

std::vector<DemResult> parse_dem_json(std::string_view text) {
  const json j = parse_json(text);
  std::vector<DemResult> out;
  for (const auto& r : j.at("results")) {
    DemResult d;
    d.mode = parse_dem_mode(r.at("mode").get<std::string>());
    d.t = r.at("t").get<double>();
    d.dem = r.at("dem").get<double>();
    d.s_atom = r.at("s_atom").get<double>();
    d.s_field = optional_from(r, "s_field");
    d.s_joint = optional_from(r, "s_joint");
    d.kappa_plus = optional_from(r, "kappa_plus");
    d.kappa_minus = optional_from(r, "kappa_minus");
    out.push_back(d);
  }
  return out;
}

std::string gnuplot_matrix(const SweepResult& result, DemMode mode) {
  std::string out = "# lambda1 r dem\n";
  bool first = true;
  double block = 0.0;
  std::optional<double> time;
  for (const auto& row : result.rows) {
    if (row.mode != mode || !row.dem) continue;
    if (!time) time = row.t;
    if (row.t != *time) continue;
    if (!first && row.lambda1 != block) out += "\n";
    first = false;
    block = row.lambda1;
    out += format_double(row.lambda1) + " " + format_double(row.r) + " " + format_double(*row.dem) + "\n";
  }
  return out;
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  fs::path tmp = path;
  tmp += ".partial";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f) {
      f.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error("failed writing " + tmp.string());
    }
  }
  fs::rename(tmp, path);
}

}  // namespace sqjcm
