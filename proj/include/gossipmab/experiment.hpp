#pragma once
// Multi-trial experiments around the engine: config files, synthetic and
// file-based arm means, paired variant runs across trials (optionally on a
// worker pool), CSV outputs, summary statistics, the report recomputation,
// and the m/K/eta sweep.
//
// Output directory layout (one run_experiment call):
//   config.txt   resolved key = value echo of the spec (re-loadable)
//   arms.csv     trial,arm,mean,source_label           (shared by variants)
//   curves.csv   variant,trial,agent,t,regret          (at checkpoints)
//   events.csv   variant,trial,kind,phase,agent,peer,arm,aux
//   trials.csv   variant,trial,final_mean_regret,tau_stab,tau_stab_censored,
//                tau,tau_censored,j_max
//   summary.csv  one row per variant
//
// All floats are written with shortest round-trip formatting, and the report
// path recomputes summary.csv from the data files byte for byte.

#include <atomic>
#include <charconv>
#include <cmath>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "gossipmab/engine.hpp"
#include "gossipmab/theory.hpp"

namespace gossipmab {

// ---------------------------------------------------------------------------
// formatting / parsing primitives

// Shortest decimal string that parses back to exactly the same double.
inline std::string fmt_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s, const std::string& what) {
  double value = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument(what + ": not a number: '" + std::string(s) + "'");
  }
  return value;
}

inline long long parse_int(std::string_view s, const std::string& what) {
  long long value = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument(what + ": not an integer: '" + std::string(s) + "'");
  }
  return value;
}

inline bool parse_bool(std::string_view s, const std::string& what) {
  if (s == "1" || s == "true") return true;
  if (s == "0" || s == "false") return false;
  throw std::invalid_argument(what + ": not a boolean: '" + std::string(s) + "'");
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// arm means

// The synthetic family: best arm 0.95, runner-up 0.85 (gap 0.1), remaining
// K-2 means uniform on [0, 0.85].
inline std::vector<double> generate_synthetic_means(int K, Rng& rng) {
  if (K < 2) throw std::invalid_argument("generate_synthetic_means: need K >= 2");
  std::vector<double> means;
  means.reserve(K);
  means.push_back(0.95);
  means.push_back(0.85);
  for (int k = 2; k < K; ++k) means.push_back(0.85 * rng.uniform01());
  return means;
}

// One probability per line; blank lines ignored; '#' starts a comment line.
// Errors carry the offending line number. A tied pair of top means is
// rejected here so every downstream ArmSet has a unique best arm.
inline std::vector<double> load_means_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open means file: " + path.string());
  std::vector<double> means;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const std::string where = path.string() + ":" + std::to_string(lineno);
    const double mu = parse_double(body, where);
    if (!(mu > 0.0 && mu < 1.0)) {
      throw std::invalid_argument(where + ": mean must lie strictly in (0, 1)");
    }
    means.push_back(mu);
  }
  if (means.size() < 2) {
    throw std::invalid_argument(path.string() + ": need at least two arms");
  }
  std::vector<double> sorted = means;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  if (!(sorted[0] > sorted[1])) {
    throw std::invalid_argument(path.string() +
                                ": the two largest means are tied; the best arm must be unique");
  }
  return means;
}

// ---------------------------------------------------------------------------
// experiment spec and config files

struct ExperimentSpec {
  int n = 25;
  int m = 10;
  int K = 100;
  long long T = 100000;
  double alpha = 4.0;
  double beta = 2.0;
  double eta = 2.0;
  int S = 0;  // 0: auto, ceil(K / n)
  std::vector<Variant> variants = {Variant::kBlocking, Variant::kNoBlocking};
  std::string strategy = "uniform";
  int trials = 50;
  std::uint64_t master_seed = 1;
  std::string arm_source = "synthetic";  // "synthetic" or a means-file path
  std::string out_dir = "out";
  std::string relative_baseline = "no-blocking";  // "" disables the ratio
  bool bound_overlay = true;
  int workers = 0;  // 0: hardware_concurrency
  int checkpoint_count = 200;
  bool write_curves = true;
  bool write_events = true;

  int resolved_S() const { return S > 0 ? S : (K + n - 1) / n; }

  SimConfig sim_config(Variant v) const {
    SimConfig cfg;
    cfg.n = n;
    cfg.m = m;
    cfg.K = K;
    cfg.T = T;
    cfg.alpha = alpha;
    cfg.beta = beta;
    cfg.eta = eta;
    cfg.S = resolved_S();
    cfg.variant = v;
    cfg.strategy = strategy;
    cfg.master_seed = master_seed;
    cfg.log_events = write_events;
    cfg.checkpoints = default_checkpoints(T, checkpoint_count);
    return cfg;
  }

  void validate() const {
    if (trials < 1) throw std::invalid_argument("config: trials must be positive");
    if (variants.empty()) throw std::invalid_argument("config: no variants listed");
    for (std::size_t i = 0; i < variants.size(); ++i) {
      for (std::size_t k = i + 1; k < variants.size(); ++k) {
        if (variants[i] == variants[k]) {
          throw std::invalid_argument("config: duplicate variant listed");
        }
      }
    }
    if (!relative_baseline.empty()) {
      bool found = false;
      for (const Variant v : variants) {
        found = found || relative_baseline == variant_name(v);
      }
      if (!found) {
        throw std::invalid_argument(
            "config: relative_baseline must name a listed variant");
      }
    }
    if (workers < 0) throw std::invalid_argument("config: workers must be >= 0");
    if (checkpoint_count < 1) {
      throw std::invalid_argument("config: checkpoint_count must be positive");
    }
    for (const Variant v : variants) sim_config(v).validate();
  }
};

using KeyValues = std::map<std::string, std::string>;

// key = value lines; '#' starts a comment; later keys override earlier ones.
inline KeyValues parse_config_text(std::istream& in, const std::string& source) {
  KeyValues kv;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument(source + ":" + std::to_string(lineno) +
                                  ": expected key = value");
    }
    const std::string key(trim(body.substr(0, eq)));
    const std::string value(trim(body.substr(eq + 1)));
    if (key.empty()) {
      throw std::invalid_argument(source + ":" + std::to_string(lineno) + ": empty key");
    }
    kv[key] = value;
  }
  return kv;
}

inline KeyValues parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path.string());
  return parse_config_text(in, path.string());
}

// Build a spec from key/value pairs; unknown keys are errors, not typos to
// silently ignore.
inline ExperimentSpec spec_from_key_values(const KeyValues& kv) {
  ExperimentSpec spec;
  for (const auto& [key, value] : kv) {
    if (key == "n") {
      spec.n = static_cast<int>(parse_int(value, key));
    } else if (key == "m") {
      spec.m = static_cast<int>(parse_int(value, key));
    } else if (key == "K") {
      spec.K = static_cast<int>(parse_int(value, key));
    } else if (key == "T") {
      spec.T = parse_int(value, key);
    } else if (key == "alpha") {
      spec.alpha = parse_double(value, key);
    } else if (key == "beta") {
      spec.beta = parse_double(value, key);
    } else if (key == "eta") {
      spec.eta = parse_double(value, key);
    } else if (key == "S") {
      spec.S = static_cast<int>(parse_int(value, key));
    } else if (key == "variants") {
      spec.variants.clear();
      for (const auto& name : split(value, ',')) {
        const auto v = parse_variant(trim(name));
        if (!v) throw std::invalid_argument("variants: unknown variant: " + name);
        spec.variants.push_back(*v);
      }
    } else if (key == "strategy") {
      spec.strategy = value;
    } else if (key == "trials") {
      spec.trials = static_cast<int>(parse_int(value, key));
    } else if (key == "master_seed") {
      spec.master_seed = static_cast<std::uint64_t>(parse_int(value, key));
    } else if (key == "arm_source") {
      spec.arm_source = value;
    } else if (key == "out_dir") {
      spec.out_dir = value;
    } else if (key == "relative_baseline") {
      spec.relative_baseline = value;
    } else if (key == "bound_overlay") {
      spec.bound_overlay = parse_bool(value, key);
    } else if (key == "workers") {
      spec.workers = static_cast<int>(parse_int(value, key));
    } else if (key == "checkpoint_count") {
      spec.checkpoint_count = static_cast<int>(parse_int(value, key));
    } else if (key == "write_curves") {
      spec.write_curves = parse_bool(value, key);
    } else if (key == "write_events") {
      spec.write_events = parse_bool(value, key);
    } else {
      throw std::invalid_argument("unknown config key: " + key);
    }
  }
  return spec;
}

inline std::string render_config(const ExperimentSpec& spec) {
  std::ostringstream os;
  os << "n = " << spec.n << "\n";
  os << "m = " << spec.m << "\n";
  os << "K = " << spec.K << "\n";
  os << "T = " << spec.T << "\n";
  os << "alpha = " << fmt_double(spec.alpha) << "\n";
  os << "beta = " << fmt_double(spec.beta) << "\n";
  os << "eta = " << fmt_double(spec.eta) << "\n";
  os << "S = " << spec.resolved_S() << "\n";
  os << "variants = ";
  for (std::size_t i = 0; i < spec.variants.size(); ++i) {
    os << (i ? "," : "") << variant_name(spec.variants[i]);
  }
  os << "\n";
  os << "strategy = " << spec.strategy << "\n";
  os << "trials = " << spec.trials << "\n";
  os << "master_seed = " << spec.master_seed << "\n";
  os << "arm_source = " << spec.arm_source << "\n";
  os << "out_dir = " << spec.out_dir << "\n";
  os << "relative_baseline = " << spec.relative_baseline << "\n";
  os << "bound_overlay = " << (spec.bound_overlay ? 1 : 0) << "\n";
  os << "workers = " << spec.workers << "\n";
  os << "checkpoint_count = " << spec.checkpoint_count << "\n";
  os << "write_curves = " << (spec.write_curves ? 1 : 0) << "\n";
  os << "write_events = " << (spec.write_events ? 1 : 0) << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// summary statistics

inline double mean_of(const std::vector<double>& xs) {
  double sum = 0.0;
  for (const double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

// Sample standard deviation (n - 1 denominator); 0 for a single observation.
inline double sample_std(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double ss = 0.0;
  for (const double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

inline double median_of(std::vector<double> xs) {
  GOSSIPMAB_CHECK(!xs.empty());
  std::sort(xs.begin(), xs.end());
  const std::size_t h = xs.size() / 2;
  return xs.size() % 2 == 1 ? xs[h] : (xs[h - 1] + xs[h]) / 2.0;
}

struct VariantSummary {
  Variant variant = Variant::kBlocking;
  int trials = 0;
  double mean_final = 0.0;
  double std_final = 0.0;
  double tau_stab_median = 0.0;
  double tau_stab_uncensored_frac = 0.0;
  double tau_median = 0.0;
  double tau_uncensored_frac = 0.0;
  std::optional<double> rel_mean;    // vs the named baseline, per-trial ratios
  std::optional<double> rel_std;
  std::optional<double> bound_mean;  // Theorem-2 value, mean over trial gap sets
};

inline VariantSummary summarize_variant(Variant v,
                                        const std::vector<double>& finals,
                                        const std::vector<TauEstimate>& taus,
                                        const std::vector<double>* baseline_finals,
                                        const std::vector<double>* bounds) {
  VariantSummary s;
  s.variant = v;
  s.trials = static_cast<int>(finals.size());
  s.mean_final = mean_of(finals);
  s.std_final = sample_std(finals, s.mean_final);
  std::vector<double> stab, tau;
  double stab_unc = 0, tau_unc = 0;
  for (const auto& e : taus) {
    stab.push_back(static_cast<double>(e.tau_stab));
    tau.push_back(static_cast<double>(e.tau));
    stab_unc += e.tau_stab_censored ? 0.0 : 1.0;
    tau_unc += e.tau_censored ? 0.0 : 1.0;
  }
  s.tau_stab_median = median_of(stab);
  s.tau_stab_uncensored_frac = stab_unc / static_cast<double>(taus.size());
  s.tau_median = median_of(tau);
  s.tau_uncensored_frac = tau_unc / static_cast<double>(taus.size());
  if (baseline_finals != nullptr) {
    std::vector<double> ratios;
    for (std::size_t t = 0; t < finals.size(); ++t) {
      if ((*baseline_finals)[t] > 0.0) ratios.push_back(finals[t] / (*baseline_finals)[t]);
    }
    if (!ratios.empty()) {
      s.rel_mean = mean_of(ratios);
      s.rel_std = sample_std(ratios, *s.rel_mean);
    }
  }
  if (bounds != nullptr && !bounds->empty()) s.bound_mean = mean_of(*bounds);
  return s;
}

inline std::string render_summary(const std::vector<VariantSummary>& rows) {
  std::ostringstream os;
  os << "variant,trials,mean_final_regret,std_final_regret,tau_stab_median,"
        "tau_stab_uncensored_frac,tau_median,tau_uncensored_frac,"
        "rel_regret_mean,rel_regret_std,thm2_bound_mean\n";
  for (const auto& s : rows) {
    os << variant_name(s.variant) << "," << s.trials << ","
       << fmt_double(s.mean_final) << "," << fmt_double(s.std_final) << ","
       << fmt_double(s.tau_stab_median) << ","
       << fmt_double(s.tau_stab_uncensored_frac) << ","
       << fmt_double(s.tau_median) << "," << fmt_double(s.tau_uncensored_frac)
       << ",";
    if (s.rel_mean) os << fmt_double(*s.rel_mean);
    os << ",";
    if (s.rel_std) os << fmt_double(*s.rel_std);
    os << ",";
    if (s.bound_mean) os << fmt_double(*s.bound_mean);
    os << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// ordered parallel execution
namespace detail {

// Runs make(i) for i in [0, count) on a small pool and hands the results to
// consume(i, result) in index order on the calling thread. A bounded window
// keeps producers from racing arbitrarily far ahead of the consumer, so peak
// memory stays proportional to the worker count.
inline void ordered_parallel_run(
    int count, int workers, const std::function<TrialResult(int)>& make,
    const std::function<void(int, TrialResult&&)>& consume) {
  workers = std::max(1, workers);
  if (workers == 1 || count <= 1) {
    for (int i = 0; i < count; ++i) consume(i, make(i));
    return;
  }
  std::vector<std::optional<TrialResult>> slots(count);
  std::mutex mu;
  std::condition_variable produced, freed;
  std::exception_ptr error;
  std::atomic<int> next{0};
  int consumed = 0;
  const int window = 2 * workers + 2;

  const auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= count) return;
      {
        std::unique_lock lock(mu);
        freed.wait(lock, [&] { return error || i < consumed + window; });
        if (error) return;
      }
      try {
        TrialResult r = make(i);
        std::lock_guard lock(mu);
        slots[i] = std::move(r);
        produced.notify_all();
      } catch (...) {
        std::lock_guard lock(mu);
        if (!error) error = std::current_exception();
        produced.notify_all();
        freed.notify_all();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (int i = 0; i < count; ++i) {
    TrialResult r{};
    {
      std::unique_lock lock(mu);
      produced.wait(lock, [&] { return error || slots[i].has_value(); });
      if (error) break;
      r = std::move(*slots[i]);
      slots[i].reset();
      ++consumed;
      freed.notify_all();
    }
    try {
      consume(i, std::move(r));
    } catch (...) {
      std::lock_guard lock(mu);
      if (!error) error = std::current_exception();
      freed.notify_all();
      break;
    }
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// run_experiment

struct ExperimentResult {
  std::vector<VariantSummary> summaries;
  std::vector<std::vector<double>> finals;      // [variant][trial]
  std::vector<std::vector<TauEstimate>> taus;   // [variant][trial]
  std::filesystem::path out_dir;
  std::string summary_text;
};

inline ExperimentResult run_experiment(ExperimentSpec spec) {
  // Resolve the arm source first: a means file fixes K.
  std::vector<double> file_means;
  if (spec.arm_source != "synthetic") {
    file_means = load_means_file(spec.arm_source);
    spec.K = static_cast<int>(file_means.size());
  }
  spec.validate();

  const std::filesystem::path dir(spec.out_dir);
  std::filesystem::create_directories(dir);
  {
    std::ofstream cfg(dir / "config.txt");
    cfg << render_config(spec);
  }

  // Arm sets are per trial and shared by every variant (paired comparison).
  std::vector<ArmSet> arm_sets;
  arm_sets.reserve(spec.trials);
  for (int t = 0; t < spec.trials; ++t) {
    if (!file_means.empty()) {
      arm_sets.emplace_back(file_means);
    } else {
      Rng arms_rng(derive_seed(
          spec.master_seed, {static_cast<std::uint64_t>(t),
                             static_cast<std::uint64_t>(StreamPurpose::kArms)}));
      arm_sets.emplace_back(generate_synthetic_means(spec.K, arms_rng));
    }
  }
  {
    std::ofstream arms_csv(dir / "arms.csv");
    arms_csv << "trial,arm,mean,source_label\n";
    for (int t = 0; t < spec.trials; ++t) {
      for (int k = 0; k < arm_sets[t].size(); ++k) {
        arms_csv << t << "," << k << "," << fmt_double(arm_sets[t].mean(k)) << ","
                 << arm_sets[t].original_label(k) << "\n";
      }
    }
  }

  std::ofstream curves_csv, events_csv;
  if (spec.write_curves) {
    curves_csv.open(dir / "curves.csv");
    curves_csv << "variant,trial,agent,t,regret\n";
  }
  if (spec.write_events) {
    events_csv.open(dir / "events.csv");
    events_csv << "variant,trial,kind,phase,agent,peer,arm,aux\n";
  }
  std::ofstream trials_csv(dir / "trials.csv");
  trials_csv << "variant,trial,final_mean_regret,tau_stab,tau_stab_censored,"
                "tau,tau_censored,j_max\n";

  const int num_variants = static_cast<int>(spec.variants.size());
  ExperimentResult result;
  result.out_dir = dir;
  result.finals.assign(num_variants, {});
  result.taus.assign(num_variants, {});

  const int count = num_variants * spec.trials;
  const int workers =
      spec.workers > 0 ? spec.workers
                       : std::max(1u, std::thread::hardware_concurrency());
  detail::ordered_parallel_run(
      count, workers,
      [&](int idx) {
        const Variant v = spec.variants[idx / spec.trials];
        const int trial = idx % spec.trials;
        return run_trial(spec.sim_config(v), trial, arm_sets[trial]);
      },
      [&](int idx, TrialResult&& r) {
        const Variant v = spec.variants[idx / spec.trials];
        const int trial = idx % spec.trials;
        const char* vname = variant_name(v);
        if (spec.write_curves) {
          for (int agent = 0; agent < spec.n; ++agent) {
            for (std::size_t c = 0; c < r.checkpoints.size(); ++c) {
              curves_csv << vname << "," << trial << "," << agent << ","
                         << r.checkpoints[c] << "," << fmt_double(r.regret[agent][c])
                         << "\n";
            }
          }
        }
        if (spec.write_events) {
          for (const auto& e : r.log.elections) {
            events_csv << vname << "," << trial << ",election," << e.phase << ","
                       << e.agent << ",-1," << e.most_played << ",-1\n";
          }
          for (const auto& c : r.log.contacts) {
            events_csv << vname << "," << trial << ",contact," << c.phase << ","
                       << c.asker << "," << c.peer << "," << c.rec << ",-1\n";
          }
          for (const auto& b : r.log.blocks) {
            events_csv << vname << "," << trial << ",block," << b.phase << ","
                       << b.blocker << "," << b.blocked << ",-1," << b.until_phase
                       << "\n";
          }
          for (const auto& ch : r.log.active_changes) {
            events_csv << vname << "," << trial << ",active_change," << ch.phase
                       << "," << ch.agent << ",-1," << ch.added << "," << ch.dropped
                       << "\n";
          }
        }
        trials_csv << vname << "," << trial << ","
                   << fmt_double(r.mean_final_regret()) << "," << r.tau.tau_stab
                   << "," << (r.tau.tau_stab_censored ? 1 : 0) << "," << r.tau.tau
                   << "," << (r.tau.tau_censored ? 1 : 0) << "," << r.tau.j_max
                   << "\n";
        result.finals[idx / spec.trials].push_back(r.mean_final_regret());
        result.taus[idx / spec.trials].push_back(r.tau);
      });

  // Theorem-2 bound per trial (the gaps differ across synthetic trials).
  std::vector<double> bounds;
  if (spec.bound_overlay) {
    for (int t = 0; t < spec.trials; ++t) {
      BoundInputs in{spec.T,    spec.n,   spec.m,   spec.K,
                     spec.resolved_S(),   spec.alpha, spec.beta, spec.eta,
                     arm_sets[t].suboptimal_gaps()};
      if (const auto b = theorem2_upper_bound(in)) bounds.push_back(*b);
    }
  }

  const std::vector<double>* baseline = nullptr;
  for (int v = 0; v < num_variants; ++v) {
    if (variant_name(spec.variants[v]) == spec.relative_baseline) {
      baseline = &result.finals[v];
    }
  }
  for (int v = 0; v < num_variants; ++v) {
    const bool is_blocking = spec.variants[v] == Variant::kBlocking;
    result.summaries.push_back(summarize_variant(
        spec.variants[v], result.finals[v], result.taus[v], baseline,
        is_blocking && !bounds.empty() ? &bounds : nullptr));
  }
  result.summary_text = render_summary(result.summaries);
  {
    std::ofstream summary_csv(dir / "summary.csv");
    summary_csv << result.summary_text;
  }
  return result;
}

// ---------------------------------------------------------------------------
// report: recompute summary.csv from the data files

inline std::vector<std::vector<std::string>> read_csv(
    const std::filesystem::path& path, std::size_t columns) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {  // first line is the column header
      header = false;
      continue;
    }
    if (trim(line).empty()) continue;
    auto fields = split(trim(line), ',');
    if (fields.size() != columns) {
      throw std::runtime_error(path.string() + ": expected " +
                               std::to_string(columns) + " columns, got " +
                               std::to_string(fields.size()));
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

// Rebuilds the summary text from config.txt, curves.csv, trials.csv, and
// arms.csv. Mirrors run_experiment's aggregation exactly (same order, same
// arithmetic), so the result is byte-identical to the stored summary.csv.
inline std::string recompute_summary(const std::filesystem::path& dir) {
  const ExperimentSpec spec = spec_from_key_values(parse_config_file(dir / "config.txt"));
  const int num_variants = static_cast<int>(spec.variants.size());
  const auto variant_index = [&](std::string_view name) {
    for (int v = 0; v < num_variants; ++v) {
      if (name == variant_name(spec.variants[v])) return v;
    }
    throw std::runtime_error("summary: unknown variant in data files: " +
                             std::string(name));
  };

  // Final per-agent-average regret per (variant, trial), from the curves'
  // t = T rows, accumulated in file order (= agent order). Streamed: the
  // curves file is by far the largest output.
  std::vector<std::vector<double>> finals(num_variants,
                                          std::vector<double>(spec.trials, 0.0));
  if (spec.write_curves) {
    std::ifstream curves(dir / "curves.csv");
    if (!curves) throw std::runtime_error("cannot open: " + (dir / "curves.csv").string());
    std::string line;
    std::getline(curves, line);  // header
    while (std::getline(curves, line)) {
      if (trim(line).empty()) continue;
      const auto row = split(trim(line), ',');
      if (row.size() != 5) throw std::runtime_error("curves.csv: expected 5 columns");
      if (parse_int(row[3], "curves.t") != spec.T) continue;
      const int v = variant_index(row[0]);
      const int trial = static_cast<int>(parse_int(row[1], "curves.trial"));
      finals[v][trial] += parse_double(row[4], "curves.regret");
    }
    for (auto& per_variant : finals) {
      for (auto& f : per_variant) f /= static_cast<double>(spec.n);
    }
  }

  std::vector<std::vector<TauEstimate>> taus(num_variants);
  for (auto& t : taus) t.resize(spec.trials);
  std::vector<std::vector<double>> trial_finals(num_variants,
                                                std::vector<double>(spec.trials, 0.0));
  for (const auto& row : read_csv(dir / "trials.csv", 8)) {
    const int v = variant_index(row[0]);
    const int trial = static_cast<int>(parse_int(row[1], "trials.trial"));
    trial_finals[v][trial] = parse_double(row[2], "trials.final");
    TauEstimate e;
    e.tau_stab = parse_int(row[3], "trials.tau_stab");
    e.tau_stab_censored = parse_int(row[4], "trials.tau_stab_censored") != 0;
    e.tau = parse_int(row[5], "trials.tau");
    e.tau_censored = parse_int(row[6], "trials.tau_censored") != 0;
    e.j_max = parse_int(row[7], "trials.j_max");
    taus[v][trial] = e;
  }
  // Without curves the per-trial finals from trials.csv carry the values.
  if (!spec.write_curves) finals = trial_finals;

  std::vector<double> bounds;
  if (spec.bound_overlay) {
    std::vector<std::vector<double>> means_by_trial(spec.trials);
    for (const auto& row : read_csv(dir / "arms.csv", 4)) {
      means_by_trial[parse_int(row[0], "arms.trial")].push_back(
          parse_double(row[2], "arms.mean"));
    }
    for (const auto& means : means_by_trial) {
      std::vector<double> gaps;
      for (std::size_t k = 1; k < means.size(); ++k) {
        gaps.push_back(means[0] - means[k]);
      }
      BoundInputs in{spec.T,    spec.n,   spec.m,   spec.K,
                     spec.resolved_S(),   spec.alpha, spec.beta, spec.eta,
                     std::move(gaps)};
      if (const auto b = theorem2_upper_bound(in)) bounds.push_back(*b);
    }
  }

  const std::vector<double>* baseline = nullptr;
  for (int v = 0; v < num_variants; ++v) {
    if (variant_name(spec.variants[v]) == spec.relative_baseline) {
      baseline = &finals[v];
    }
  }
  std::vector<VariantSummary> rows;
  for (int v = 0; v < num_variants; ++v) {
    const bool is_blocking = spec.variants[v] == Variant::kBlocking;
    rows.push_back(summarize_variant(spec.variants[v], finals[v], taus[v], baseline,
                                     is_blocking && !bounds.empty() ? &bounds : nullptr));
  }
  return render_summary(rows);
}

// ---------------------------------------------------------------------------
// sweep: cross-product over m / K / eta

struct SweepCell {
  int m = 0;
  int K = 0;
  double eta = 0.0;
  VariantSummary primary;  // the first listed variant's summary
};

struct SweepResult {
  std::vector<SweepCell> cells;
  std::filesystem::path out_dir;
  std::string table_text;
};

// One run_experiment per (m, K, eta) combination, each in its own
// subdirectory; one row per cell in sweep.csv for the first listed variant.
// Heavy per-step outputs stay off unless full_outputs is set.
inline SweepResult run_sweep(const ExperimentSpec& base, const std::vector<int>& m_list,
                             const std::vector<int>& K_list,
                             const std::vector<double>& eta_list, bool full_outputs) {
  if (m_list.empty() || K_list.empty() || eta_list.empty()) {
    throw std::invalid_argument("sweep: every axis needs at least one value");
  }
  SweepResult out;
  out.out_dir = base.out_dir;
  std::filesystem::create_directories(out.out_dir);
  std::ostringstream table;
  table << "m,K,eta,strategy,trials,variant,mean_final_regret,std_final_regret,"
           "rel_regret_mean,rel_regret_std\n";
  for (const int m : m_list) {
    for (const int K : K_list) {
      for (const double eta : eta_list) {
        ExperimentSpec spec = base;
        spec.m = m;
        spec.K = K;
        spec.eta = eta;
        spec.write_curves = full_outputs;
        spec.write_events = full_outputs;
        std::ostringstream cell;
        cell << "m" << m << "_K" << K << "_eta" << fmt_double(eta);
        spec.out_dir = (std::filesystem::path(base.out_dir) / cell.str()).string();
        const ExperimentResult res = run_experiment(spec);
        const VariantSummary& s = res.summaries.front();
        table << m << "," << K << "," << fmt_double(eta) << "," << spec.strategy
              << "," << s.trials << "," << variant_name(s.variant) << ","
              << fmt_double(s.mean_final) << "," << fmt_double(s.std_final) << ",";
        if (s.rel_mean) table << fmt_double(*s.rel_mean);
        table << ",";
        if (s.rel_std) table << fmt_double(*s.rel_std);
        table << "\n";
        out.cells.push_back(SweepCell{m, K, eta, s});
      }
    }
  }
  out.table_text = table.str();
  std::ofstream sweep_csv(std::filesystem::path(out.out_dir) / "sweep.csv");
  sweep_csv << out.table_text;
  return out;
}

}  // namespace gossipmab
