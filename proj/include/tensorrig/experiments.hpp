#pragma once

// Monte Carlo harness for the random-graph threshold experiments.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "errors.hpp"
#include "hypergraph.hpp"
#include "identifiability.hpp"
#include "parallel.hpp"
#include "rigidity.hpp"

namespace tensorrig {

// ---------------------------------------------------------------------------
// Minimum-degree window

/// (log n + (d-1) log log n + sign * log log log n) / n^(k-1); NaN for n < 3.
inline double degree_threshold(std::uint32_t n, std::size_t k, std::uint32_t d, int sign) {
  if (n < 3) return std::nan("");
  const double ln = std::log(static_cast<double>(n));
  const double lln = std::log(ln);
  const double llln = std::log(lln);
  return (ln + (static_cast<double>(d) - 1) * lln + sign * llln) / std::pow(static_cast<double>(n), k - 1.0);
}
inline double p_plus(std::uint32_t n, std::size_t k, std::uint32_t d) { return degree_threshold(n, k, d, +1); }
inline double p_minus(std::uint32_t n, std::size_t k, std::uint32_t d) { return degree_threshold(n, k, d, -1); }

struct Interval {
  double lo = 0, hi = 0;
};

/// Wilson score interval; z = 1.96 gives 95%.
inline Interval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.959963984540054) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double centre = (phat + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z * std::sqrt(phat * (1 - phat) / n + z2 / (4 * n * n)) / (1 + z2 / n);
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

inline double median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

struct MdSummary {
  std::uint32_t n = 0;
  std::size_t k = 0;
  std::uint32_t d = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> stopping_times;  // M_d per trial
  double p_minus = 0, p_plus = 0;
  /// Edge density M_d / n^k, the quantity comparable with an edge probability.
  double median_density = 0;
  /// M_d / n^(k-1), the normalization quoted alongside the window.
  double median_scaled = 0;
  double mean_scaled = 0;
  std::size_t below = 0, inside = 0, above = 0;  // density vs window
  Interval inside_interval;
  bool median_inside = false;
};

inline MdSummary md_statistics(std::uint32_t n, std::size_t k, std::uint32_t d, unsigned trials,
                               std::uint64_t seed, unsigned width = 1) {
  if (trials < 1) throw std::invalid_argument("md_statistics: trials must be positive");
  MdSummary s{n, k, d, seed};
  s.stopping_times.resize(trials);
  parallel_for(trials, width, [&](std::size_t t) {
    s.stopping_times[t] = md_process(n, k, d, derive_seed(seed, n, t)).m_d(d);
  });
  s.p_minus = p_minus(n, k, d);
  s.p_plus = p_plus(n, k, d);
  const double nk1 = std::pow(static_cast<double>(n), k - 1.0);
  const double nk = nk1 * n;
  // The log log log n term is negative for n < e^e, which swaps the bounds.
  const double lo = std::min(s.p_minus, s.p_plus), hi = std::max(s.p_minus, s.p_plus);
  std::vector<double> density, scaled;
  for (auto m : s.stopping_times) {
    density.push_back(static_cast<double>(m) / nk);
    scaled.push_back(static_cast<double>(m) / nk1);
    const double x = density.back();
    if (x < lo) ++s.below;
    else if (x > hi) ++s.above;
    else ++s.inside;
  }
  s.median_density = median(density);
  s.median_scaled = median(scaled);
  double sum = 0;
  for (double x : scaled) sum += x;
  s.mean_scaled = sum / static_cast<double>(scaled.size());
  s.inside_interval = wilson_interval(s.inside, trials);
  s.median_inside = s.median_density >= lo && s.median_density <= hi;
  return s;
}

inline nlohmann::ordered_json to_json(const MdSummary& s) {
  nlohmann::ordered_json j;
  j["n"] = s.n;
  j["k"] = s.k;
  j["d"] = s.d;
  j["seed"] = s.seed;
  j["trials"] = s.stopping_times.size();
  j["p_minus"] = s.p_minus;
  j["p_plus"] = s.p_plus;
  j["median_density"] = s.median_density;
  j["median_scaled"] = s.median_scaled;
  j["mean_scaled"] = s.mean_scaled;
  j["below"] = s.below;
  j["inside"] = s.inside;
  j["above"] = s.above;
  j["inside_wilson"] = {s.inside_interval.lo, s.inside_interval.hi};
  j["median_inside"] = s.median_inside;
  j["stopping_times"] = s.stopping_times;
  return j;
}

// ---------------------------------------------------------------------------
// Sweeps

enum class SweepMode { gnm, at_threshold };

struct CertificateSet {
  bool local = true;
  bool global_1d = true;  // real (exact) and complex (Smith form)
  bool mm = false;
  bool co = false;
};

struct SweepConfig {
  std::size_t k = 3;
  std::uint32_t d = 1;
  std::vector<std::uint32_t> n_list;
  std::vector<std::uint64_t> m_grid;  // ignored in at-threshold mode
  SweepMode mode = SweepMode::gnm;
  unsigned trials = 1;
  CertificateSet certificates;
  std::uint64_t seed = 0;
  unsigned width = 1;
  unsigned rank_trials = 3;
  /// When false the ms column is written as 0, making output bit-identical.
  bool timing = true;

  /// Throws std::invalid_argument on bad settings and GuardViolation when a
  /// requested certificate exceeds its size limit.
  void validate() const {
    if (k < 2) throw std::invalid_argument("sweep: k must be at least 2");
    if (d < 1) throw std::invalid_argument("sweep: d must be positive");
    if (n_list.empty()) throw std::invalid_argument("sweep: n-list is empty");
    if (trials < 1) throw std::invalid_argument("sweep: trials must be positive");
    if (mode == SweepMode::gnm && m_grid.empty()) throw std::invalid_argument("sweep: m-grid is empty");
    for (auto n : n_list) {
      if (n < 1) throw std::invalid_argument("sweep: n must be positive");
      const auto total = balanced_total(n, k);
      if (mode == SweepMode::gnm)
        for (auto m : m_grid)
          if (m > total) throw std::invalid_argument("sweep: m exceeds n^k");
      if (mode == SweepMode::at_threshold && d + 1 > total / n)
        throw std::invalid_argument("sweep: d+1 exceeds n^(k-1)");
      if (certificates.global_1d && n * k > kSnfVertexLimit)
        throw GuardViolation("sweep: Smith normal form limited to N <= " + std::to_string(kSnfVertexLimit));
    }
  }
};

struct ExperimentRecord {
  std::uint64_t seed = 0;
  std::uint32_t n = 0;
  std::size_t k = 0;
  std::uint32_t d = 0;
  std::string mode;
  std::uint64_t m = 0;
  std::size_t min_degree = 0;
  std::optional<bool> local, global1d_real, global1d_cplx, mm_i, mm_ii, mm_iii, co;
  std::string verdict;  // empty unless the 1-d certificates were evaluated
  double ms = 0;

  auto key() const { return std::tie(n, k, d, mode, m, seed); }
};

inline constexpr const char* kRecordHeader =
    "seed,n,k,d,mode,m,min_degree,local,global1d_real,global1d_cplx,mm_i,mm_ii,mm_iii,co,verdict,ms";

inline std::string csv_flag(const std::optional<bool>& b) { return b ? (*b ? "1" : "0") : ""; }

inline std::string to_csv(const ExperimentRecord& r) {
  std::ostringstream os;
  os << r.seed << ',' << r.n << ',' << r.k << ',' << r.d << ',' << r.mode << ',' << r.m << ',' << r.min_degree
     << ',' << csv_flag(r.local) << ',' << csv_flag(r.global1d_real) << ',' << csv_flag(r.global1d_cplx) << ','
     << csv_flag(r.mm_i) << ',' << csv_flag(r.mm_ii) << ',' << csv_flag(r.mm_iii) << ',' << csv_flag(r.co) << ','
     << r.verdict << ',' << std::fixed << std::setprecision(3) << r.ms;
  return os.str();
}

inline void write_csv(std::ostream& os, std::span<const ExperimentRecord> records) {
  os << kRecordHeader << '\n';
  for (const auto& r : records) os << to_csv(r) << '\n';
}

inline nlohmann::ordered_json to_json(const ExperimentRecord& r) {
  auto flag = [](const std::optional<bool>& b) { return b ? nlohmann::ordered_json(*b) : nlohmann::ordered_json(); };
  nlohmann::ordered_json j;
  j["seed"] = r.seed;
  j["n"] = r.n;
  j["k"] = r.k;
  j["d"] = r.d;
  j["mode"] = r.mode;
  j["m"] = r.m;
  j["min_degree"] = r.min_degree;
  j["local"] = flag(r.local);
  j["global1d_real"] = flag(r.global1d_real);
  j["global1d_cplx"] = flag(r.global1d_cplx);
  j["mm_i"] = flag(r.mm_i);
  j["mm_ii"] = flag(r.mm_ii);
  j["mm_iii"] = flag(r.mm_iii);
  j["co"] = flag(r.co);
  j["verdict"] = r.verdict;
  j["ms"] = r.ms;
  return j;
}

/// Evaluates the requested certificates on one graph in dimension d.
inline ExperimentRecord evaluate_record(const PartiteHypergraph& g, std::uint32_t d, const CertificateSet& certs,
                                        const RandomizedOptions& opts) {
  ExperimentRecord r;
  r.k = g.k();
  r.d = d;
  r.m = g.edge_count();
  r.min_degree = min_degree(g);
  if (certs.local) r.local = d == 1 ? local_rigid_1d_exact(g) : local_rigid(g, d, opts).rigid;
  if (certs.global_1d) {
    const auto one = one_dimensional_report(g, true);
    r.global1d_real = one.global_real;
    r.global1d_cplx = one.global_complex;
    bool mm_ii = false, mm_iii = false, co = false;
    if (certs.mm) {
      r.mm_i = one.global_real;
      r.mm_ii = mm_ii = local_rigid(g, d + 1, opts).rigid;
      r.mm_iii = mm_iii = mm_condition_iii(g);
    }
    if (certs.co) r.co = co = co_condition(g, d, opts).satisfied;
    r.verdict = to_string(
        combine_verdict(d, FieldKind::real, r.min_degree, one.local, one.global_real, mm_ii, mm_iii, co));
  } else {
    if (certs.mm) {
      r.mm_ii = local_rigid(g, d + 1, opts).rigid;
      r.mm_iii = mm_condition_iii(g);
    }
    if (certs.co) r.co = co_condition(g, d, opts).satisfied;
  }
  return r;
}

/// Per-trial seed; independent of d and m so that all grid points of a
/// trial share one edge-insertion order.
inline std::uint64_t trial_seed(std::uint64_t master, std::uint32_t n, unsigned trial) {
  return derive_seed(master, n, trial);
}

inline const char* kModeGnm = "gnm";
inline const char* kModeAtMd = "at_md";
inline const char* kModeAtNext = "at_md_next";

/// One record per (n, m, trial) in gnm mode. In at-threshold mode each trial
/// yields two records from one trace: G(n, M_d) and G(n, M_{d+1}), both
/// evaluated in dimension d. Output is grouped by (n, mode, m), trials in order.
inline std::vector<ExperimentRecord> threshold_sweep(const SweepConfig& cfg) {
  cfg.validate();
  struct Task {
    std::uint32_t n;
    std::optional<std::uint64_t> m;
    unsigned trial;
  };
  std::vector<Task> tasks;
  for (auto n : cfg.n_list)
    for (unsigned t = 0; t < cfg.trials; ++t) {
      if (cfg.mode == SweepMode::gnm)
        for (auto m : cfg.m_grid) tasks.push_back({n, m, t});
      else
        tasks.push_back({n, std::nullopt, t});
    }

  std::vector<std::vector<ExperimentRecord>> slots(tasks.size());
  parallel_for(tasks.size(), cfg.width, [&](std::size_t i) {
    const auto& task = tasks[i];
    const std::uint64_t seed = trial_seed(cfg.seed, task.n, task.trial);
    auto run = [&](const PartiteHypergraph& g, const char* mode) {
      RandomizedOptions opts;
      opts.trials = cfg.rank_trials;
      opts.seed = derive_seed(seed, g.edge_count(), 0xCE);
      const auto start = std::chrono::steady_clock::now();
      ExperimentRecord r = evaluate_record(g, cfg.d, cfg.certificates, opts);
      const auto stop = std::chrono::steady_clock::now();
      r.seed = seed;
      r.n = task.n;
      r.mode = mode;
      r.ms = cfg.timing ? std::chrono::duration<double, std::milli>(stop - start).count() : 0.0;
      slots[i].push_back(std::move(r));
    };
    if (task.m) {
      run(gnm(task.n, cfg.k, *task.m, seed), kModeGnm);
    } else {
      const auto trace = md_process(task.n, cfg.k, cfg.d + 1, seed);
      run(trace.prefix(trace.m_d(cfg.d)), kModeAtMd);
      run(trace.prefix(trace.m_d(cfg.d + 1)), kModeAtNext);
    }
  });

  std::vector<ExperimentRecord> out;
  for (auto& s : slots)
    for (auto& r : s) out.push_back(std::move(r));
  // Tasks were generated trial-major, so a stable sort keeps trial order
  // within each group. At-threshold m varies by trial and is not a key.
  const bool by_m = cfg.mode == SweepMode::gnm;
  std::stable_sort(out.begin(), out.end(), [by_m](const auto& a, const auto& b) {
    const std::uint64_t am = by_m ? a.m : 0, bm = by_m ? b.m : 0;
    return std::tie(a.n, a.mode, am) < std::tie(b.n, b.mode, bm);
  });
  return out;
}

// ---------------------------------------------------------------------------
// Curve summaries

struct CurveRow {
  std::uint32_t n = 0;
  std::size_t k = 0;
  std::uint32_t d = 0;
  std::string mode;
  std::uint64_t m = 0;  // 0 for at-threshold rows (m varies by trial)
  std::string certificate;
  std::size_t successes = 0;
  std::size_t trials = 0;
  double rate = 0;
  Interval wilson;
};

inline constexpr const char* kCurveHeader = "n,k,d,mode,m,certificate,successes,trials,rate,wilson_lo,wilson_hi";

/// Success rate per (n, k, d, mode, m, certificate). At-threshold rows pool
/// over m. Certificates never evaluated produce no row. The output is sorted,
/// so it does not depend on record order.
inline std::vector<CurveRow> curve_summary(std::span<const ExperimentRecord> records) {
  using Key = std::tuple<std::uint32_t, std::size_t, std::uint32_t, std::string, std::uint64_t, std::string>;
  std::map<Key, std::pair<std::size_t, std::size_t>> tally;
  for (const auto& r : records) {
    const std::uint64_t m = r.mode == kModeGnm ? r.m : 0;
    auto add = [&](const char* name, const std::optional<bool>& b) {
      if (!b) return;
      auto& t = tally[Key{r.n, r.k, r.d, r.mode, m, name}];
      t.first += *b ? 1 : 0;
      ++t.second;
    };
    add("local", r.local);
    add("global1d_real", r.global1d_real);
    add("global1d_cplx", r.global1d_cplx);
    add("mm_i", r.mm_i);
    add("mm_ii", r.mm_ii);
    add("mm_iii", r.mm_iii);
    add("co", r.co);
    if (!r.verdict.empty())
      add("globally_rigid", std::optional<bool>(r.verdict == to_string(Verdict::globally_rigid)));
  }
  std::vector<CurveRow> rows;
  for (const auto& [key, t] : tally) {
    CurveRow row;
    std::tie(row.n, row.k, row.d, row.mode, row.m, row.certificate) = key;
    row.successes = t.first;
    row.trials = t.second;
    row.rate = static_cast<double>(t.first) / static_cast<double>(t.second);
    row.wilson = wilson_interval(t.first, t.second);
    rows.push_back(std::move(row));
  }
  return rows;
}

inline void write_curve_csv(std::ostream& os, std::span<const CurveRow> rows) {
  os << kCurveHeader << '\n';
  for (const auto& r : rows)
    os << r.n << ',' << r.k << ',' << r.d << ',' << r.mode << ',' << r.m << ',' << r.certificate << ','
       << r.successes << ',' << r.trials << ',' << std::setprecision(6) << r.rate << ',' << r.wilson.lo << ','
       << r.wilson.hi << '\n';
}

/// Fraction of records at (n, mode) whose selected flag is true.
inline double success_rate(std::span<const ExperimentRecord> records, std::uint32_t n, const std::string& mode,
                           std::optional<bool> ExperimentRecord::*flag) {
  std::size_t hit = 0, total = 0;
  for (const auto& r : records)
    if (r.n == n && r.mode == mode && (r.*flag)) {
      ++total;
      hit += *(r.*flag) ? 1 : 0;
    }
  return total ? static_cast<double>(hit) / static_cast<double>(total) : std::nan("");
}

}  // namespace tensorrig
