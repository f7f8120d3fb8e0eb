#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <string>
#include <thread>

#include "lensbeam/errors.hpp"
#include "lensbeam/random.hpp"
#include "lensbeam/simulation.hpp"

namespace lensbeam::sim {

namespace {

enum class Quantity { aoa, aod, gain };
enum class PathSet { all, one, nlos };

struct ParameterSpec {
  Quantity quantity = Quantity::aoa;
  PathSet paths = PathSet::all;
  int path = 0;
};

ParameterSpec parse_parameter(std::string_view name) {
  ParameterSpec spec;
  const auto sep = name.find('_');
  const std::string_view base = name.substr(0, sep);
  if (base == "aoa") {
    spec.quantity = Quantity::aoa;
  } else if (base == "aod") {
    spec.quantity = Quantity::aod;
  } else if (base == "gain") {
    spec.quantity = Quantity::gain;
  } else {
    throw InvalidParameterError("unknown parameter '" + std::string(name) + "'");
  }
  if (sep == std::string_view::npos) {
    return spec;
  }
  const std::string_view suffix = name.substr(sep + 1);
  if (suffix == "nlos") {
    spec.paths = PathSet::nlos;
  } else if (suffix.size() > 1 && suffix[0] == 'p') {
    spec.paths = PathSet::one;
    spec.path = std::stoi(std::string(suffix.substr(1)));
  } else {
    throw InvalidParameterError("unknown parameter '" + std::string(name) + "'");
  }
  return spec;
}

double pick(const PathErrors& e, Quantity q) {
  switch (q) {
    case Quantity::aoa:
      return e.aoa;
    case Quantity::aod:
      return e.aod;
    case Quantity::gain:
      return e.gain;
  }
  return 0.0;
}

double extract(const std::vector<PathErrors>& errs, const ParameterSpec& spec) {
  const int n = static_cast<int>(errs.size());
  switch (spec.paths) {
    case PathSet::one:
      if (spec.path < 0 || spec.path >= n) {
        throw InvalidParameterError("parameter refers to path " + std::to_string(spec.path) +
                                    " but only " + std::to_string(n) + " are tracked");
      }
      return pick(errs[spec.path], spec.quantity);
    case PathSet::all:
    case PathSet::nlos: {
      const int first = spec.paths == PathSet::nlos ? 1 : 0;
      if (first >= n) {
        throw InvalidParameterError("no NLoS paths tracked");
      }
      double sum = 0.0;
      for (int l = first; l < n; ++l) {
        sum += pick(errs[l], spec.quantity);
      }
      return sum / (n - first);
    }
  }
  return 0.0;
}

}  // namespace

std::vector<std::string> reported_parameters(const ScenarioConfig& cfg) {
  std::vector<std::string> names{"aoa", "aod", "gain"};
  const int n = cfg.tracked_paths();
  if (n > 1) {
    for (int l = 0; l < n; ++l) {
      const std::string suffix = "_p" + std::to_string(l);
      names.push_back("aoa" + suffix);
      names.push_back("aod" + suffix);
      names.push_back("gain" + suffix);
    }
    if (cfg.mode == LinkMode::downlink) {
      names.push_back("aoa_nlos");
      names.push_back("gain_nlos");
    }
  }
  return names;
}

std::vector<ParameterCurve> parameter_curves(std::span<const RunResult> results,
                                             FilterKind kind,
                                             std::span<const std::string> parameters) {
  std::vector<const FilterTrace*> traces;
  int n_slots = 0;
  for (const auto& r : results) {
    if (r.failed()) {
      continue;
    }
    const FilterTrace* t = r.trace(kind);
    if (t == nullptr) {
      throw InvalidParameterError("run has no " + std::string(to_string(kind)) + " trace");
    }
    if (!traces.empty() && r.n_slots != n_slots) {
      throw InvalidParameterError("runs disagree on slot count");
    }
    n_slots = r.n_slots;
    traces.push_back(t);
  }
  if (traces.empty()) {
    throw InvalidParameterError("MSE needs at least one successful run");
  }
  const double n = static_cast<double>(traces.size());
  std::vector<ParameterCurve> curves;
  for (const auto& name : parameters) {
    const ParameterSpec spec = parse_parameter(name);
    ParameterCurve c;
    c.name = name;
    c.n_runs = static_cast<int>(traces.size());
    c.mse.assign(n_slots, 0.0);
    c.std_error.assign(n_slots, 0.0);
    for (int s = 0; s < n_slots; ++s) {
      double sum = 0.0;
      double sum_sq = 0.0;
      for (const FilterTrace* t : traces) {
        const double v = extract(t->sq_errors[s], spec);
        sum += v;
        sum_sq += v * v;
      }
      const double mean = sum / n;
      c.mse[s] = mean;
      if (traces.size() > 1) {
        const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
        c.std_error[s] = std::sqrt(var / n);
      }
    }
    curves.push_back(std::move(c));
  }
  return curves;
}

MseCurves angle_mse(std::span<const RunResult> results, FilterKind kind) {
  const std::vector<std::string> names{"aoa", "aod"};
  auto curves = parameter_curves(results, kind, names);
  return MseCurves{std::move(curves[0]), std::move(curves[1])};
}

const ParameterCurve& FilterCurves::get(std::string_view name) const {
  for (const auto& c : curves) {
    if (c.name == name) {
      return c;
    }
  }
  throw InvalidParameterError("no curve named '" + std::string(name) + "'");
}

const FilterCurves* MonteCarloResult::curves(FilterKind kind) const {
  for (const auto& f : filters) {
    if (f.kind == kind) {
      return &f;
    }
  }
  return nullptr;
}

MonteCarloResult monte_carlo(const ScenarioConfig& cfg, const MonteCarloOptions& options) {
  cfg.validate();
  const int n_runs = cfg.n_runs;
  std::vector<RunResult> runs(n_runs);

  int threads = options.threads > 0 ? options.threads
                                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, n_runs);

  std::atomic<int> next{0};
  std::atomic<int> done{0};
  std::mutex progress_mutex;
  auto worker = [&] {
    for (int i = next++; i < n_runs; i = next++) {
      runs[i] = run_episode(cfg, episode_seed(cfg.seed, static_cast<std::uint64_t>(i)));
      const int finished = ++done;
      if (options.progress) {
        std::lock_guard lock(progress_mutex);
        options.progress(finished, n_runs);
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back(worker);
    }
  }

  MonteCarloResult out;
  out.config = cfg;
  out.n_runs = n_runs;
  out.min_cov_eigenvalue = std::numeric_limits<double>::infinity();
  const std::vector<filter::UtParams> grid = cfg.spread_grid();
  std::vector<int> grid_counts(grid.size(), 0);
  for (const auto& r : runs) {
    if (r.failed()) {
      ++out.failures.episodes;
      for (const auto& t : r.traces) {
        if (t.failed) {
          ++(t.kind == FilterKind::ukf ? out.failures.ukf : out.failures.ekf);
        }
      }
      continue;
    }
    ++out.n_succeeded;
    for (const auto& t : r.traces) {
      if (t.input_hash != r.observation_hash) {
        out.common_random_numbers = false;
      }
      out.min_cov_eigenvalue = std::min(out.min_cov_eigenvalue, t.min_cov_eigenvalue);
    }
    if (r.chosen) {
      const auto it = std::find(grid.begin(), grid.end(), *r.chosen);
      if (it != grid.end()) {
        ++grid_counts[it - grid.begin()];
      }
    }
  }
  if (out.n_succeeded == 0) {
    throw NumericalError("all " + std::to_string(n_runs) + " episodes failed (ukf failures: " +
                         std::to_string(out.failures.ukf) +
                         ", ekf failures: " + std::to_string(out.failures.ekf) + ")");
  }

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid_counts[i] > 0) {
      order.push_back(i);
    }
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return grid_counts[a] > grid_counts[b]; });
  for (std::size_t i : order) {
    out.chosen_spread.push_back(SpreadCount{grid[i], grid_counts[i]});
  }

  const std::vector<std::string> params = reported_parameters(cfg);
  if (cfg.runs_ukf()) {
    out.filters.push_back({FilterKind::ukf, parameter_curves(runs, FilterKind::ukf, params)});
  }
  if (cfg.runs_ekf()) {
    out.filters.push_back({FilterKind::ekf, parameter_curves(runs, FilterKind::ekf, params)});
  }
  if (options.keep_runs) {
    out.runs = std::move(runs);
  }
  return out;
}

double enhancement_percent(double mse_ukf, double mse_ekf) {
  if (mse_ekf == 0.0) {
    return mse_ukf == 0.0 ? 0.0 : -std::numeric_limits<double>::infinity();
  }
  return 100.0 * (mse_ekf - mse_ukf) / mse_ekf;
}

std::vector<Enhancement> enhancement_table(const MonteCarloResult& result) {
  const FilterCurves* ukf = result.curves(FilterKind::ukf);
  const FilterCurves* ekf = result.curves(FilterKind::ekf);
  if (ukf == nullptr || ekf == nullptr) {
    throw ConfigError("enhancement needs both filters");
  }
  std::vector<Enhancement> table;
  for (const auto& c : ukf->curves) {
    const double u = c.final_mse();
    const double e = ekf->get(c.name).final_mse();
    table.push_back(Enhancement{c.name, u, e, enhancement_percent(u, e)});
  }
  return table;
}

const Enhancement& Comparison::get(std::string_view parameter) const {
  for (const auto& e : enhancement) {
    if (e.parameter == parameter) {
      return e;
    }
  }
  throw InvalidParameterError("no enhancement entry for '" + std::string(parameter) + "'");
}

Comparison compare_filters(const ScenarioConfig& cfg, const MonteCarloOptions& options) {
  if (cfg.filter != FilterSelection::both) {
    throw ConfigError("compare_filters: field 'filter' must be 'both'");
  }
  Comparison cmp;
  cmp.result = monte_carlo(cfg, options);
  cmp.enhancement = enhancement_table(cmp.result);
  return cmp;
}

}  // namespace lensbeam::sim
