#pragma once

// Command-line front end: sample, expect, sweep.
//
// Exit codes: 0 all verdicts hold, 1 a verdict failed, 2 usage error,
// 3 numerical failure.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "rtz/errors.hpp"
#include "rtz/montecarlo.hpp"
#include "rtz/report_io.hpp"
#include "rtz/schemes.hpp"

namespace rtz::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum exit_code : int { ok = 0, verdict_failed = 1, usage = 2, numerical = 3 };

struct usage_error : error {
  using error::error;
};

/// Git blob hash: sha1("blob <size>\0" + content), hex.
inline std::string git_blob_sha1(const std::string& content) {
  const std::string blob = "blob " + std::to_string(content.size()) + '\0' + content;
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(blob.data(), blob.size(), md, &len, EVP_sha1(), nullptr) != 1) throw error("sha1 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

inline std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Comma-separated strictly positive integers; empty items are an error.
inline std::vector<int> parse_degrees(const std::string& text) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = text.find(',', pos);
    const std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    int v = 0;
    const auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc{} || p != item.data() + item.size() || v < 1)
      throw usage_error("malformed degree list '" + text + "'");
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

struct options {
  std::string scheme = "iid";
  std::optional<int> ell;
  std::string n_text;
  double sigma = 1.0;
  std::uint64_t seed = 0;
  std::string trig = "cos";
  int trials = 1000;
  int workers = 1;
  int ppd = kDefaultPointsPerDegree;
  bool direct = false;
  std::string out_path;
  std::string csv_path;
  std::string manifest_path;
};

inline scheme_spec make_spec(const options& o, int n) {
  const trig_kind t = o.trig == "full" ? trig_kind::full_trig : trig_kind::cosine_only;
  if (o.ell && o.scheme != "block") throw usage_error("--ell only applies to --scheme block");
  if (o.scheme == "block" && !o.ell) throw usage_error("--scheme block needs --ell");
  if (o.scheme == "palindromic" && t == trig_kind::full_trig)
    throw usage_error("--scheme palindromic is cosine-only; --trig full is not defined for it");
  scheme_spec s;
  if (o.scheme == "iid") s = scheme_spec::iid(n, o.sigma, t);
  else if (o.scheme == "block") s = scheme_spec::block_paired(*o.ell, n, o.sigma, t);
  else if (o.scheme == "twohalf") s = scheme_spec::two_half_blocks(n, o.sigma, t);
  else s = scheme_spec::palindromic(n, o.sigma);
  try {
    validate(s);
  } catch (const invalid_spec& e) {
    throw usage_error(e.what());
  }
  return s;
}

inline int single_degree(const options& o) {
  const auto ns = parse_degrees(o.n_text);
  if (ns.size() != 1) throw usage_error("--n takes a single degree for this command");
  return ns.front();
}

inline experiment_config make_config(const options& o, const scheme_spec& s) {
  experiment_config c;
  c.spec = s;
  c.trials = o.trials;
  c.base_seed = o.seed;
  c.points_per_degree = o.ppd;
  c.use_factored_counting = !o.direct;
  return c;
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw error("cannot write " + path);
  f << text;
  if (!f) throw error("write failed: " + path);
}

inline void write_manifest(const options& o, const std::string& command, const nlohmann::ordered_json& config,
                           const std::string& started) {
  if (o.manifest_path.empty()) return;
  nlohmann::ordered_json m;
  m["schema"] = kManifestSchema;
  m["tool_version"] = kToolVersion;
  m["command"] = command;
  m["config"] = config;
  m["config_hash"] = git_blob_sha1(config.dump());
  m["started_utc"] = started;
  m["finished_utc"] = utc_now();
  m["workers"] = o.workers;
  nlohmann::ordered_json outputs = nlohmann::ordered_json::array();
  if (!o.out_path.empty()) outputs.push_back(o.out_path);
  if (!o.csv_path.empty()) outputs.push_back(o.csv_path);
  m["outputs"] = outputs;
  write_file(o.manifest_path, m.dump(2) + "\n");
}

inline void print_row(std::ostream& out, const experiment_report& r) {
  out << label(r.config.spec) << " n=" << r.config.spec.n << " trials=" << r.config.trials
      << " mean=" << format_g12(r.stats.mean) << " stderr=" << format_g12(r.stats.std_error)
      << " kacrice=" << format_g12(r.kacrice_value) << " asymptotic=" << format_g12(r.asymptotic_value)
      << " ratio=" << format_g12(r.verdict_ratio) << " verdict=" << (r.verdict_kacrice ? "pass" : "fail") << '\n';
}

inline int cmd_sample(const options& o, std::ostream& out) {
  const scheme_spec s = make_spec(o, single_degree(o));
  const auto j = sample_json(s, o.seed, sample(s, o.seed));
  const std::string text = j.dump() + "\n";
  if (o.out_path.empty()) out << text;
  else write_file(o.out_path, text);
  return ok;
}

inline int cmd_expect(const options& o, std::ostream& out) {
  const std::string started = utc_now();
  const experiment_config cfg = make_config(o, make_spec(o, single_degree(o)));
  run_options ro;
  ro.workers = o.workers;
  const experiment_report rep = run_experiment(cfg, ro);
  const std::string text = report_json(rep).dump(2) + "\n";
  if (o.out_path.empty()) {
    out << text;
  } else {
    write_file(o.out_path, text);
    print_row(out, rep);
  }
  write_manifest(o, "expect", config_json(cfg), started);
  return rep.verdict_kacrice ? ok : verdict_failed;
}

inline int cmd_sweep(const options& o, std::ostream& out) {
  const std::string started = utc_now();
  const auto ns = parse_degrees(o.n_text);
  const experiment_config base = make_config(o, make_spec(o, ns.front()));
  run_options ro;
  ro.workers = o.workers;
  const sweep_result res = sweep(base, ns, ro);

  std::ostringstream csv;
  write_csv(csv, res.reports);
  if (o.csv_path.empty()) {
    out << csv.str();
  } else {
    write_file(o.csv_path, csv.str());
    for (const auto& r : res.reports) print_row(out, r);
    out << "fitted slope " << format_g12(res.fit.slope) << '\n';
  }
  if (!o.out_path.empty()) write_file(o.out_path, sweep_json(res).dump(2) + "\n");

  nlohmann::ordered_json cfg = config_json(base);
  cfg["n"] = ns;
  write_manifest(o, "sweep", cfg, started);
  for (const auto& r : res.reports)
    if (!r.verdict_kacrice) return verdict_failed;
  return ok;
}

inline void add_common(CLI::App* app, options& o, bool experiment) {
  app->add_option("--scheme", o.scheme, "iid, block, twohalf or palindromic")
      ->check(CLI::IsMember({"iid", "block", "twohalf", "palindromic"}));
  app->add_option("--ell", o.ell, "block length (block scheme only)")->check(CLI::PositiveNumber);
  app->add_option("--n", o.n_text, experiment ? "degree, or comma-separated degrees for sweep" : "degree")
      ->required();
  app->add_option("--sigma", o.sigma, "coefficient standard deviation")->check(CLI::NonNegativeNumber);
  app->add_option("--seed", o.seed, "seed (sample) or base seed (experiments)");
  app->add_option("--trig", o.trig, "cos or full")->check(CLI::IsMember({"cos", "full"}));
  app->add_option("--out", o.out_path, "write JSON here instead of stdout");
  if (!experiment) return;
  app->add_option("--trials", o.trials, "Monte Carlo trials")->check(CLI::Range(2, 1 << 30));
  app->add_option("--workers", o.workers, "threads for Monte Carlo trials (default $RTZ_WORKERS or 1)")
      ->check(CLI::PositiveNumber);
  app->add_option("--ppd", o.ppd, "root-count grid points per degree")->check(CLI::PositiveNumber);
  app->add_flag("--direct", o.direct, "count sign changes of V itself even when a deterministic factor exists");
  app->add_option("--csv", o.csv_path, "sweep: write CSV here instead of stdout");
  app->add_option("--manifest", o.manifest_path, "write a run manifest (config hash, timestamps, outputs)");
}

inline int default_workers() {
  const char* env = std::getenv("RTZ_WORKERS");
  if (!env || !*env) return 1;
  int v = 0;
  const std::string s(env);
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || v < 1) throw usage_error("RTZ_WORKERS must be a positive integer");
  return v;
}

/// Runs one command line (args excludes the program name).
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Expected real zeros of random trigonometric polynomials with dependent coefficients", "rtz"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  options o;
  auto* sample_cmd = app.add_subcommand("sample", "print one coefficient draw as JSON");
  auto* expect_cmd = app.add_subcommand("expect", "Monte Carlo, Kac-Rice and leading-order values for one degree");
  auto* sweep_cmd = app.add_subcommand("sweep", "expect over several degrees, CSV output");
  add_common(sample_cmd, o, false);
  add_common(expect_cmd, o, true);
  add_common(sweep_cmd, o, true);

  try {
    o.workers = default_workers();
    std::reverse(args.begin(), args.end());
    app.parse(args);
    if (*sample_cmd) return cmd_sample(o, out);
    if (*expect_cmd) return cmd_expect(o, out);
    return cmd_sweep(o, out);
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << '\n';
    return ok;
  } catch (const CLI::Success&) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return usage;
  } catch (const usage_error& e) {
    err << "usage error: " << e.what() << '\n';
    return usage;
  } catch (const invalid_config& e) {
    err << "invalid config: " << e.what() << '\n';
    return usage;
  } catch (const invalid_spec& e) {
    err << "invalid config: " << e.what() << '\n';
    return usage;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return numerical;
  }
}

}  // namespace rtz::cli
