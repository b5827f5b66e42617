#pragma once

// Reproducible Monte Carlo estimates of E[N_n(0, 2pi)].
//
// Trial i draws sample(spec, trial_seed(base_seed, i)); counts are stored by
// trial index and folded in index order with exact integer sums, so reports
// do not depend on the number of workers.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "rtz/errors.hpp"
#include "rtz/kacrice.hpp"
#include "rtz/kernels.hpp"
#include "rtz/rootcount.hpp"
#include "rtz/schemes.hpp"

namespace rtz {

struct experiment_config {
  scheme_spec spec;
  int trials = 1000;
  std::uint64_t base_seed = 0;
  int points_per_degree = kDefaultPointsPerDegree;
  bool use_factored_counting = true;  // ignored when the scheme has no factor

  void validate() const {
    try {
      rtz::validate(spec);
    } catch (const invalid_spec& e) {
      throw invalid_config(e.what());
    }
    if (trials < 2) throw invalid_config("trials must be >= 2");
    if (points_per_degree < 1) throw invalid_config("points_per_degree must be >= 1");
    if (!(spec.sigma > 0.0)) throw invalid_config("sigma must be > 0: the zero polynomial has no zero count");
  }

  bool factored_path() const { return use_factored_counting && has_factor(spec); }
};

struct run_options {
  int workers = 1;
  bool with_kacrice = true;
  quadrature_config quadrature;
};

struct count_stats {
  double mean = 0.0;
  double stddev = 0.0;
  double std_error = 0.0;
  double ci95_lo = 0.0;
  double ci95_hi = 0.0;
};

struct experiment_report {
  experiment_config config;
  std::string counting_path;  // "factored" or "direct"
  count_stats stats;
  double kacrice_value = 0.0;
  int kacrice_deterministic_added = 0;
  int kacrice_structural_added = 0;
  double kacrice_error_estimate = 0.0;
  double asymptotic_value = 0.0;
  bool verdict_kacrice = false;
  double verdict_ratio = 0.0;  // mean / n
  int suspicious_cells = 0;
};

/// Runs fn(i) for i in [0, count) on `workers` threads.
inline void parallel_for(int count, int workers, const std::function<void(int)>& fn) {
  workers = std::clamp(workers, 1, std::max(1, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  for (auto& t : pool) t.join();
}

inline count_stats summarize(const std::vector<int>& counts) {
  const auto trials = static_cast<std::int64_t>(counts.size());
  std::int64_t sum = 0;
  std::int64_t sum_sq = 0;
  for (int c : counts) {
    sum += c;
    sum_sq += static_cast<std::int64_t>(c) * c;
  }
  count_stats st;
  st.mean = static_cast<double>(sum) / static_cast<double>(trials);
  if (trials > 1) {
    const __int128 num = static_cast<__int128>(trials) * sum_sq - static_cast<__int128>(sum) * sum;
    const double var = static_cast<double>(num) / (static_cast<double>(trials) * static_cast<double>(trials - 1));
    st.stddev = std::sqrt(std::max(var, 0.0));
  }
  st.std_error = st.stddev / std::sqrt(static_cast<double>(trials));
  st.ci95_lo = st.mean - 1.96 * st.std_error;
  st.ci95_hi = st.mean + 1.96 * st.std_error;
  return st;
}

/// Zero count of trial `index`.
inline zero_count_result count_trial(const experiment_config& cfg, int index) {
  const coefficient_vector c = sample(cfg.spec, trial_seed(cfg.base_seed, static_cast<std::uint64_t>(index)));
  if (cfg.factored_path()) return count_zeros_factored(cfg.spec, c, cfg.points_per_degree);
  return count_zeros(c, cfg.points_per_degree);
}

inline std::vector<int> run_trials(const experiment_config& cfg, int workers, int* suspicious = nullptr) {
  std::vector<int> counts(cfg.trials);
  std::vector<int> flagged(cfg.trials);
  parallel_for(cfg.trials, workers, [&](int i) {
    const auto r = count_trial(cfg, i);
    counts[i] = r.count;
    flagged[i] = r.suspicious_cells;
  });
  if (suspicious) {
    *suspicious = 0;
    for (int f : flagged) *suspicious += f;
  }
  return counts;
}

inline experiment_report run_experiment(const experiment_config& cfg, const run_options& opt = {}) {
  cfg.validate();
  experiment_report rep;
  rep.config = cfg;
  rep.counting_path = cfg.factored_path() ? "factored" : "direct";
  const auto counts = run_trials(cfg, opt.workers, &rep.suspicious_cells);
  rep.stats = summarize(counts);
  rep.asymptotic_value = asymptotic_expected_zeros(cfg.spec);
  rep.verdict_ratio = rep.stats.mean / cfg.spec.n;
  if (opt.with_kacrice) {
    const kacrice_result kr = expected_zeros_numeric(cfg.spec, opt.quadrature);
    rep.kacrice_value = kr.expected_zeros;
    rep.kacrice_deterministic_added = kr.deterministic_added;
    rep.kacrice_structural_added = kr.structural_added;
    rep.kacrice_error_estimate = kr.quadrature_error_estimate;
    rep.verdict_kacrice =
        std::abs(rep.stats.mean - rep.kacrice_value) <= 3.0 * rep.stats.std_error + kr.quadrature_error_estimate;
  }
  return rep;
}

struct ratio_fit {
  double slope = 0.0;  // least-squares c in mean ~ c n
  std::vector<double> ratios;
};

struct sweep_result {
  std::vector<experiment_report> reports;
  ratio_fit fit;
};

/// Least squares through the origin.
inline ratio_fit fit_ratio(const std::vector<experiment_report>& reports) {
  ratio_fit fit;
  double num = 0.0;
  double den = 0.0;
  for (const auto& r : reports) {
    const double n = r.config.spec.n;
    num += n * r.stats.mean;
    den += n * n;
    fit.ratios.push_back(r.stats.mean / n);
  }
  fit.slope = den > 0.0 ? num / den : 0.0;
  return fit;
}

/// One experiment per degree; `base` supplies everything except n.
inline sweep_result sweep(const experiment_config& base, const std::vector<int>& n_values, const run_options& opt = {}) {
  if (n_values.empty()) throw invalid_config("sweep needs at least one degree");
  for (std::size_t i = 1; i < n_values.size(); ++i)
    if (n_values[i] <= n_values[i - 1]) throw invalid_config("sweep degrees must be strictly increasing");
  sweep_result out;
  for (int n : n_values) {
    experiment_config cfg = base;
    cfg.spec.n = n;
    out.reports.push_back(run_experiment(cfg, opt));
  }
  out.fit = fit_ratio(out.reports);
  return out;
}

/// Monte Carlo E[N(0, n^-a)] / n^(1-a).
inline double small_interval_check(const scheme_spec& s, double a, int trials, std::uint64_t base_seed,
                                   int points_per_degree = kDefaultPointsPerDegree, int workers = 1) {
  validate(s);
  if (!(a > 0.0 && a < 0.5)) throw invalid_config("small_interval_check: a must lie in (0, 1/2)");
  if (trials < 100) throw invalid_config("small_interval_check: trials must be >= 100");
  if (!(s.sigma > 0.0)) throw invalid_config("small_interval_check: sigma must be > 0");
  const double n = s.n;
  const double hi = std::pow(n, -a);
  std::vector<int> counts(trials);
  parallel_for(trials, workers, [&](int i) {
    const coefficient_vector c = sample(s, trial_seed(base_seed, static_cast<std::uint64_t>(i)));
    counts[i] = count_zeros_on(c, 0.0, hi, cells_for(c, 0.0, hi, points_per_degree)).count;
  });
  return summarize(counts).mean / std::pow(n, 1.0 - a);
}

}  // namespace rtz
