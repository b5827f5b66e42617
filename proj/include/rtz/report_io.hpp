#pragma once

// JSON and CSV forms of experiment reports.
//
// The JSON record holds no timestamps and no worker count, so equal configs
// give byte-identical output. Run metadata goes to the manifest instead.

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rtz/errors.hpp"
#include "rtz/montecarlo.hpp"
#include "rtz/random.hpp"
#include "rtz/schemes.hpp"

namespace rtz {

inline constexpr const char* kSampleSchema = "rtz.sample/1";
inline constexpr const char* kReportSchema = "rtz.report/1";
inline constexpr const char* kSweepSchema = "rtz.sweep/1";
inline constexpr const char* kManifestSchema = "rtz.manifest/1";
inline constexpr const char* kCsvHeader = "scheme,n,trials,mean,stderr,kacrice,asymptotic,ratio";

inline nlohmann::ordered_json spec_json(const scheme_spec& s) {
  nlohmann::ordered_json j;
  j["scheme"] = to_string(s.kind);
  if (s.kind == variant::block_paired) j["ell"] = s.ell;
  j["n"] = s.n;
  j["sigma"] = s.sigma;
  j["trig"] = s.full_trig() ? "full" : "cos";
  return j;
}

inline nlohmann::ordered_json config_json(const experiment_config& c) {
  nlohmann::ordered_json j = spec_json(c.spec);
  j["trials"] = c.trials;
  j["base_seed"] = c.base_seed;
  j["points_per_degree"] = c.points_per_degree;
  j["use_factored_counting"] = c.use_factored_counting;
  j["random_stream_version"] = kRandomStreamVersion;
  return j;
}

inline nlohmann::ordered_json sample_json(const scheme_spec& s, std::uint64_t seed, const coefficient_vector& c) {
  nlohmann::ordered_json j;
  j["schema"] = kSampleSchema;
  j["spec"] = spec_json(s);
  j["seed"] = seed;
  j["a"] = c.a;
  if (c.b) j["b"] = *c.b;
  return j;
}

inline nlohmann::ordered_json report_json(const experiment_report& r) {
  nlohmann::ordered_json j;
  j["schema"] = kReportSchema;
  j["config"] = config_json(r.config);
  j["counting_path"] = r.counting_path;
  j["tangential_zeros"] = r.counting_path == "factored" ? "with multiplicity" : "sign changes";
  j["mean"] = r.stats.mean;
  j["stddev"] = r.stats.stddev;
  j["stderr"] = r.stats.std_error;
  j["ci95"] = {r.stats.ci95_lo, r.stats.ci95_hi};
  j["kacrice_value"] = r.kacrice_value;
  j["kacrice_deterministic_added"] = r.kacrice_deterministic_added;
  j["kacrice_structural_added"] = r.kacrice_structural_added;
  j["kacrice_error_estimate"] = r.kacrice_error_estimate;
  j["asymptotic_value"] = r.asymptotic_value;
  j["verdict_kacrice"] = r.verdict_kacrice;
  j["verdict_ratio"] = r.verdict_ratio;
  j["suspicious_cells"] = r.suspicious_cells;
  return j;
}

inline nlohmann::ordered_json sweep_json(const sweep_result& s) {
  nlohmann::ordered_json j;
  j["schema"] = kSweepSchema;
  j["fit"] = {{"slope", s.fit.slope}, {"ratios", s.fit.ratios}};
  j["reports"] = nlohmann::ordered_json::array();
  for (const auto& r : s.reports) j["reports"].push_back(report_json(r));
  return j;
}

// ---------------------------------------------------------------------------
// CSV

struct csv_row {
  std::string scheme;
  int n = 0;
  int trials = 0;
  double mean = 0.0;
  double std_error = 0.0;
  double kacrice = 0.0;
  double asymptotic = 0.0;
  double ratio = 0.0;
};

inline csv_row to_csv_row(const experiment_report& r) {
  return {label(r.config.spec), r.config.spec.n, r.config.trials, r.stats.mean, r.stats.std_error,
          r.kacrice_value,      r.asymptotic_value, r.verdict_ratio};
}

inline std::string format_g12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline void write_csv(std::ostream& os, const std::vector<experiment_report>& reports) {
  os << kCsvHeader << '\n';
  for (const auto& rep : reports) {
    const csv_row r = to_csv_row(rep);
    os << r.scheme << ',' << r.n << ',' << r.trials << ',' << format_g12(r.mean) << ',' << format_g12(r.std_error)
       << ',' << format_g12(r.kacrice) << ',' << format_g12(r.asymptotic) << ',' << format_g12(r.ratio) << '\n';
  }
}

namespace detail {

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

template <class T>
T parse_number(const std::string& s) {
  T v{};
  const auto* end = s.data() + s.size();
  const auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || p != end) throw std::invalid_argument("bad CSV field '" + s + "'");
  return v;
}

}  // namespace detail

inline std::vector<csv_row> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader) throw std::invalid_argument("unexpected CSV header");
  std::vector<csv_row> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = detail::split(line, ',');
    if (f.size() != 8) throw std::invalid_argument("CSV row needs 8 fields: " + line);
    rows.push_back({f[0], detail::parse_number<int>(f[1]), detail::parse_number<int>(f[2]),
                    detail::parse_number<double>(f[3]), detail::parse_number<double>(f[4]),
                    detail::parse_number<double>(f[5]), detail::parse_number<double>(f[6]),
                    detail::parse_number<double>(f[7])});
  }
  return rows;
}

}  // namespace rtz
