#include "secbeam/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "secbeam/rng.hpp"
#include "secbeam/serialize.hpp"

namespace secbeam {
namespace {

// ---- order-independent aggregation ----------------------------------------

double pairwise_sum(const std::vector<double>& x, std::size_t lo,
                    std::size_t hi) {
  if (hi - lo <= 8) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += x[i];
    return s;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(x, lo, mid) + pairwise_sum(x, mid, hi);
}

double pairwise_sum(const std::vector<double>& x) {
  return x.empty() ? 0.0 : pairwise_sum(x, 0, x.size());
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

// Mean and standard error of the mean, two passes over a fixed trial order so
// the result does not depend on how trials were distributed over workers.
MeanSe mean_se(const std::vector<double>& x) {
  const std::size_t n = x.size();
  MeanSe out;
  if (n == 0) return out;
  out.mean = pairwise_sum(x) / static_cast<double>(n);
  if (n == 1) return out;
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - out.mean;
    sq[i] = d * d;
  }
  out.se = std::sqrt(pairwise_sum(sq) /
                     (static_cast<double>(n) * static_cast<double>(n - 1)));
  return out;
}

// ---- worker pool -----------------------------------------------------------

template <typename Fn>
void parallel_trials(int n_items, int workers, Fn&& fn) {
  if (workers <= 1 || n_items <= 1) {
    for (int i = 0; i < n_items; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::mutex error_lock;
  int error_index = -1;
  std::exception_ptr error;
  auto body = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n_items) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> hold(error_lock);
        if (error_index < 0 || i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  const int width = std::min(workers, n_items);
  pool.reserve(static_cast<std::size_t>(width));
  for (int w = 0; w < width; ++w) pool.emplace_back(body);
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// ---- per-trial observations -------------------------------------------------

struct TrialRow {
  double total_power = 0.0;
  double secret_sum_rate = 0.0;
  double eve_lin = 0.0;
  double eve_db = 0.0;
  bool feasible = false;
};

BeamformingSolution solve_method(const ChannelSet& channels,
                                 const TargetSinrs& targets, Method method,
                                 double an_fraction) {
  switch (method) {
    case Method::kRobust: return solve_robust(channels, targets);
    case Method::kNonRobust: return solve_non_robust(channels, targets);
    case Method::kAnSplit: return solve_an_split(channels, targets, an_fraction);
  }
  throw std::invalid_argument("methods: unknown enumerator");
}

void draw_truths(ChannelSet& set, const ScenarioConfig& config,
                 std::uint64_t trial_seed) {
  Rng rng(trial_seed);
  set.true_channels.resize(set.estimates.rows(), set.estimates.cols());
  for (int u = 0; u < set.n_users(); ++u) {
    set.true_channels.col(u) = sample_true_channel(
        set.estimates.col(u), set.error_radii[u], rng, config.sampler);
  }
  set.eve_true = sample_true_channel(set.eve_estimate, set.eve_error_radius,
                                     rng, config.sampler);
}

MethodAggregate aggregate_column(const ScenarioConfig& config, Method method,
                                 const std::vector<std::vector<TrialRow>>& rows,
                                 std::size_t m) {
  const std::size_t n = rows.size();
  std::vector<double> power(n), rate(n), eve_lin(n), eve_db(n);
  std::size_t feasible = 0;
  bool eve_db_finite = true;
  for (std::size_t t = 0; t < n; ++t) {
    const TrialRow& r = rows[t][m];
    power[t] = r.total_power;
    rate[t] = r.secret_sum_rate;
    eve_lin[t] = r.eve_lin;
    eve_db[t] = r.eve_db;
    if (r.feasible) ++feasible;
    if (!std::isfinite(r.eve_db)) eve_db_finite = false;
  }
  MethodAggregate a;
  a.method = method;
  a.n_trials = static_cast<int>(n);
  a.seed = config.base_seed;
  const MeanSe p = mean_se(power);
  a.mean_total_power = p.mean;
  a.se_total_power = p.se;
  const MeanSe r = mean_se(rate);
  a.mean_secret_sum_rate = r.mean;
  a.se_secret_sum_rate = r.se;
  if (config.eve_sinr_mean_of_db) {
    if (eve_db_finite) {
      const MeanSe e = mean_se(eve_db);
      a.mean_eve_sinr_db = e.mean;
      a.se_eve_sinr_db = e.se;
    } else {
      a.mean_eve_sinr_db = -std::numeric_limits<double>::infinity();
      a.se_eve_sinr_db = 0.0;
    }
  } else {
    const MeanSe e = mean_se(eve_lin);
    if (e.mean > 0.0) {
      a.mean_eve_sinr_db = 10.0 * std::log10(e.mean);
      a.se_eve_sinr_db = (10.0 / std::log(10.0)) * e.se / e.mean;
    } else {
      a.mean_eve_sinr_db = -std::numeric_limits<double>::infinity();
      a.se_eve_sinr_db = 0.0;
    }
  }
  a.frac_worstcase_feasible =
      static_cast<double>(feasible) / static_cast<double>(n);
  return a;
}

}  // namespace

// ---- validation -------------------------------------------------------------

void validate(const ScenarioConfig& c) {
  if (c.n_users < 1)
    throw std::invalid_argument("n_users: must be at least 1");
  if (c.n_antennas < c.n_users + 1)
    throw std::invalid_argument(
        "n_antennas: must be at least n_users + 1 for orthogonal beams");
  if (!(c.g >= 0.0 && c.g < 1.0))
    throw std::invalid_argument("g: must lie in [0, 1)");
  if (!(c.sigma2 > 0.0))
    throw std::invalid_argument("sigma2: must be positive");
  if (!(c.sigma2_e > 0.0))
    throw std::invalid_argument("sigma2_e: must be positive");
  if (c.n_trials < 1)
    throw std::invalid_argument("n_trials: must be at least 1");
  if (c.methods.empty())
    throw std::invalid_argument("methods: need at least one method");
  for (std::size_t i = 0; i < c.methods.size(); ++i)
    for (std::size_t j = i + 1; j < c.methods.size(); ++j)
      if (c.methods[i] == c.methods[j])
        throw std::invalid_argument("methods: duplicate entry '" +
                                    method_name(c.methods[i]) + "'");
  if (!(c.gamma_e_db < c.gamma_db))
    throw std::invalid_argument(
        "gamma_e_db: eavesdropper cap must sit below the user floor");
  if (!(c.an_fraction >= 0.0 && c.an_fraction < 1.0))
    throw std::invalid_argument("an_fraction: must lie in [0, 1)");
  if (c.synthetic_norm2 < 0.0)
    throw std::invalid_argument("synthetic_norm2: must be nonnegative");
  if (c.mode == ChannelMode::kPhysical) {
    if (!(c.spacing_over_lambda > 0.0))
      throw std::invalid_argument("spacing_over_lambda: must be positive");
    if (c.n_quadrature < 1)
      throw std::invalid_argument("n_quadrature: must be at least 1");
    if (!c.user_spreads.empty()) {
      if (static_cast<int>(c.user_spreads.size()) != c.n_users)
        throw std::invalid_argument("user_spreads: need one entry per user");
      if (!c.eve_spread)
        throw std::invalid_argument(
            "eve_spread: required when user spreads are given");
    }
  }
}

ScenarioConfig apply_sweep_value(const ScenarioConfig& base,
                                 SweepParameter parameter, double value) {
  ScenarioConfig c = base;
  switch (parameter) {
    case SweepParameter::kG:
      c.g = value;
      return c;
    case SweepParameter::kN:
      if (value != std::floor(value) || value < 1.0)
        throw std::invalid_argument("values: antenna counts must be integral");
      c.n_antennas = static_cast<int>(value);
      return c;
    case SweepParameter::kK:
      if (value != std::floor(value) || value < 1.0)
        throw std::invalid_argument("values: user counts must be integral");
      c.n_users = static_cast<int>(value);
      return c;
  }
  throw std::invalid_argument("swept_parameter: unknown enumerator");
}

void validate(const SweepSpec& spec) {
  if (spec.values.empty())
    throw std::invalid_argument("values: need at least one sweep value");
  for (std::size_t i = 1; i < spec.values.size(); ++i)
    if (!(spec.values[i] > spec.values[i - 1]))
      throw std::invalid_argument("values: must be strictly increasing");
  for (double v : spec.values)
    validate(apply_sweep_value(spec.fixed, spec.parameter, v));
}

// ---- scenario runner ---------------------------------------------------------

int worker_count() {
  if (const char* env = std::getenv("SECBEAM_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1)
      return static_cast<int>(std::min(v, 1024L));
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

ScenarioResult run_scenario(const ScenarioConfig& config) {
  validate(config);
  const std::size_t n_methods = config.methods.size();
  const std::size_t n_trials = static_cast<std::size_t>(config.n_trials);
  const TargetSinrs targets =
      uniform_targets(config.n_users, config.gamma_db, config.gamma_e_db);

  std::vector<std::vector<TrialRow>> rows(
      n_trials, std::vector<TrialRow>(n_methods));

  if (config.mode == ChannelMode::kSynthetic) {
    // One channel set per scenario; trials only redraw the true channels, so
    // the solutions and their worst-case verdicts are computed once.
    const ChannelSet base_set = make_channel_set(config, config.base_seed);
    std::vector<BeamformingSolution> solutions;
    std::vector<bool> feasible;
    solutions.reserve(n_methods);
    for (Method m : config.methods) {
      solutions.push_back(
          solve_method(base_set, targets, m, config.an_fraction));
      const FeasibilityReport report =
          verify_solution(base_set, solutions.back(), targets);
      feasible.push_back(report.users_ok && report.eves_ok);
    }
    parallel_trials(config.n_trials, worker_count(), [&](int t) {
      ChannelSet trial_set = base_set;
      draw_truths(trial_set, config,
                  mix_seed(config.base_seed, static_cast<std::uint64_t>(t)));
      for (std::size_t m = 0; m < n_methods; ++m) {
        const TrialMetrics tm = evaluate_trial(trial_set, solutions[m]);
        rows[static_cast<std::size_t>(t)][m] = {tm.total_power,
                                                tm.secret_sum_rate,
                                                tm.mean_eve_sinr,
                                                tm.eve_sinr_db_avg,
                                                feasible[m]};
      }
    });
  } else {
    parallel_trials(config.n_trials, worker_count(), [&](int t) {
      const ChannelSet set = make_channel_set(
          config, mix_seed(config.base_seed, static_cast<std::uint64_t>(t)));
      for (std::size_t m = 0; m < n_methods; ++m) {
        const BeamformingSolution sol =
            solve_method(set, targets, config.methods[m], config.an_fraction);
        const FeasibilityReport report = verify_solution(set, sol, targets);
        const TrialMetrics tm = evaluate_trial(set, sol);
        rows[static_cast<std::size_t>(t)][m] = {tm.total_power,
                                                tm.secret_sum_rate,
                                                tm.mean_eve_sinr,
                                                tm.eve_sinr_db_avg,
                                                report.users_ok &&
                                                    report.eves_ok};
      }
    });
  }

  ScenarioResult out;
  out.methods.reserve(n_methods);
  for (std::size_t m = 0; m < n_methods; ++m)
    out.methods.push_back(
        aggregate_column(config, config.methods[m], rows, m));
  return out;
}

SweepResult run_sweep(const SweepSpec& spec) {
  validate(spec);
  SweepResult out;
  out.parameter = spec.parameter;
  out.provenance.config_hash = sweep_hash(spec);
  out.provenance.seed = spec.fixed.base_seed;
  out.provenance.code_version = code_version();
  out.rows.reserve(spec.values.size());
  for (double v : spec.values) {
    const ScenarioConfig cfg = apply_sweep_value(spec.fixed, spec.parameter, v);
    try {
      ScenarioResult res = run_scenario(cfg);
      out.rows.push_back({v, std::move(res.methods)});
    } catch (const std::exception& e) {
      throw std::runtime_error("sweep value " + std::to_string(v) + ": " +
                               e.what());
    }
  }
  return out;
}

// ---- presets ----------------------------------------------------------------

namespace {

ScenarioConfig preset_base(bool full_scale) {
  ScenarioConfig c;
  c.n_antennas = full_scale ? 128 : 64;
  c.n_users = full_scale ? 30 : 8;
  c.gamma_db = 10.0;
  c.gamma_e_db = 0.0;
  c.g = 0.5;
  c.n_trials = full_scale ? 10000 : 2000;
  c.base_seed = 1;
  return c;
}

std::vector<double> g_grid() { return {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7}; }

const MethodAggregate& column(const SweepRow& row, Method m) {
  for (const MethodAggregate& a : row.methods)
    if (a.method == m) return a;
  throw std::runtime_error("preset row is missing method '" + method_name(m) +
                           "'");
}

using Series = std::vector<double>;

Series series(const SweepResult& r, Method m,
              double MethodAggregate::*field) {
  Series out;
  out.reserve(r.rows.size());
  for (const SweepRow& row : r.rows) out.push_back(column(row, m).*field);
  return out;
}

bool strictly_increasing(const Series& s) {
  for (std::size_t i = 1; i < s.size(); ++i)
    if (!(s[i] > s[i - 1])) return false;
  return true;
}

bool strictly_decreasing(const Series& s) {
  for (std::size_t i = 1; i < s.size(); ++i)
    if (!(s[i] < s[i - 1])) return false;
  return true;
}

[[noreturn]] void trend_failure(const std::string& preset,
                                const std::string& what) {
  throw std::runtime_error(preset + ": self-check failed: " + what);
}

}  // namespace

std::vector<std::string> repro_preset_names() {
  return {"fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8"};
}

ReproPreset repro_preset(const std::string& name, bool full_scale) {
  ReproPreset preset;
  preset.name = name;
  preset.spec.fixed = preset_base(full_scale);
  const std::vector<double> n_values =
      full_scale ? std::vector<double>{64, 128, 256}
                 : std::vector<double>{32, 64, 128};
  const std::vector<double> k_values =
      full_scale ? std::vector<double>{10, 20, 30}
                 : std::vector<double>{4, 8, 16};
  if (name == "fig2") {
    preset.description = "mean eavesdropper SINR vs error fraction g";
    preset.spec.parameter = SweepParameter::kG;
    preset.spec.values = g_grid();
  } else if (name == "fig3") {
    preset.description = "secret sum rate vs error fraction g";
    preset.spec.parameter = SweepParameter::kG;
    preset.spec.values = g_grid();
  } else if (name == "fig4") {
    preset.description = "secret sum rate vs antenna count";
    preset.spec.parameter = SweepParameter::kN;
    preset.spec.values = n_values;
  } else if (name == "fig5") {
    preset.description = "secret sum rate vs user count";
    preset.spec.parameter = SweepParameter::kK;
    preset.spec.values = k_values;
  } else if (name == "fig6") {
    preset.description = "total transmit power vs error fraction g";
    preset.spec.parameter = SweepParameter::kG;
    preset.spec.values = g_grid();
    preset.spec.fixed.methods = {Method::kRobust, Method::kNonRobust};
  } else if (name == "fig7") {
    preset.description = "total transmit power vs antenna count";
    preset.spec.parameter = SweepParameter::kN;
    preset.spec.values = n_values;
    preset.spec.fixed.methods = {Method::kRobust, Method::kNonRobust};
  } else if (name == "fig8") {
    preset.description = "total transmit power vs user count";
    preset.spec.parameter = SweepParameter::kK;
    preset.spec.values = k_values;
    preset.spec.fixed.methods = {Method::kRobust, Method::kNonRobust};
  } else {
    throw std::invalid_argument("unknown preset '" + name +
                                "' (expected fig2..fig8)");
  }
  return preset;
}

ReproOutcome run_repro(const std::string& name, bool full_scale,
                       int trials_override) {
  ReproOutcome out;
  out.preset = repro_preset(name, full_scale);
  if (trials_override > 0) out.preset.spec.fixed.n_trials = trials_override;
  SweepSpec& spec = out.preset.spec;

  // Structure gate: the first scenario's closed-form solution must be
  // rank-one along the estimates with first-order residuals at solver
  // precision, or the whole run is rejected.
  {
    const ScenarioConfig first =
        apply_sweep_value(spec.fixed, spec.parameter, spec.values.front());
    validate(first);
    const ChannelSet channels = make_channel_set(first, first.base_seed);
    const TargetSinrs targets =
        uniform_targets(first.n_users, first.gamma_db, first.gamma_e_db);
    const BeamformingSolution sol = solve_robust(channels, targets);
    const RankReport rank = check_rank_structure(channels, sol);
    if (!rank.rank_one || !rank.aligned)
      trend_failure(name, "transmit blocks are not rank-one along estimates");
    const KktReport kkt = kkt_residuals(channels, sol, targets);
    char residual[32];
    std::snprintf(residual, sizeof residual, "%.3g", kkt.max_residual);
    if (!(kkt.max_residual < 1e-9))
      trend_failure(name, std::string("first-order residual ") + residual +
                              " exceeds 1e-9");
    out.checks.push_back(
        std::string("structure gate: rank-one aligned blocks, max residual ") +
        residual);
  }

  out.result = run_sweep(spec);
  const SweepResult& r = out.result;

  if (name == "fig2") {
    for (const SweepRow& row : r.rows)
      for (const MethodAggregate& a : row.methods)
        if (!(a.mean_eve_sinr_db < 0.0))
          trend_failure(name, method_name(a.method) +
                                  " eavesdropper SINR not below 0 dB at g = " +
                                  std::to_string(row.value));
    out.checks.push_back("eavesdropper SINR below 0 dB everywhere");
    if (!strictly_increasing(
            series(r, Method::kRobust, &MethodAggregate::mean_eve_sinr_db)))
      trend_failure(name, "robust eavesdropper SINR not increasing in g");
    if (!strictly_increasing(
            series(r, Method::kNonRobust, &MethodAggregate::mean_eve_sinr_db)))
      trend_failure(name, "non-robust eavesdropper SINR not increasing in g");
    out.checks.push_back("eavesdropper SINR increases with g");
  } else if (name == "fig3") {
    for (const SweepRow& row : r.rows) {
      const MethodAggregate& rob = column(row, Method::kRobust);
      const MethodAggregate& an = column(row, Method::kAnSplit);
      const double margin =
          3.0 * std::hypot(rob.se_secret_sum_rate, an.se_secret_sum_rate);
      if (!(rob.mean_secret_sum_rate > an.mean_secret_sum_rate + margin))
        trend_failure(name, "robust rate does not beat the noise-splitting "
                            "baseline at g = " +
                                std::to_string(row.value));
    }
    out.checks.push_back(
        "robust rate beats the noise-splitting baseline with margin");
    if (!strictly_decreasing(series(r, Method::kNonRobust,
                                    &MethodAggregate::mean_secret_sum_rate)))
      trend_failure(name, "non-robust rate not decreasing in g");
    out.checks.push_back("non-robust rate decreases with g");
  } else if (name == "fig4" || name == "fig5") {
    if (!strictly_increasing(
            series(r, Method::kRobust, &MethodAggregate::mean_secret_sum_rate)))
      trend_failure(name, "robust rate not increasing along the sweep");
    out.checks.push_back("robust rate increases along the sweep");
  } else if (name == "fig6") {
    if (!strictly_increasing(
            series(r, Method::kRobust, &MethodAggregate::mean_total_power)))
      trend_failure(name, "robust power not increasing in g");
    const Series flat =
        series(r, Method::kNonRobust, &MethodAggregate::mean_total_power);
    for (double v : flat)
      if (v != flat.front())
        trend_failure(name, "non-robust power varies with g");
    for (const SweepRow& row : r.rows)
      if (column(row, Method::kNonRobust).se_total_power != 0.0)
        trend_failure(name, "non-robust power has spread across trials");
    out.checks.push_back(
        "robust power increases with g; non-robust power exactly flat");
  } else if (name == "fig7") {
    if (!strictly_decreasing(
            series(r, Method::kRobust, &MethodAggregate::mean_total_power)))
      trend_failure(name, "robust power not decreasing in antenna count");
    if (!strictly_decreasing(
            series(r, Method::kNonRobust, &MethodAggregate::mean_total_power)))
      trend_failure(name, "non-robust power not decreasing in antenna count");
    out.checks.push_back("power decreases as the array grows");
  } else if (name == "fig8") {
    if (!strictly_increasing(
            series(r, Method::kRobust, &MethodAggregate::mean_total_power)))
      trend_failure(name, "robust power not increasing in user count");
    if (!strictly_increasing(
            series(r, Method::kNonRobust, &MethodAggregate::mean_total_power)))
      trend_failure(name, "non-robust power not increasing in user count");
    out.checks.push_back("power grows with the user count");
  }
  return out;
}

}  // namespace secbeam
