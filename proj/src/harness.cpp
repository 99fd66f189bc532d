// SPDX-License-Identifier: Apache-2.0
#include "drmimo/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <thread>
#include <tuple>

#include "drmimo/dimred.hpp"
#include "drmimo/downlink.hpp"
#include "drmimo/fronthaul.hpp"
#include "drmimo/rates.hpp"
#include "drmimo/rng.hpp"

namespace drmimo {

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::kMiVsSnr:
      return "mi-vs-snr";
    case Scenario::kSumRateVsN:
      return "sumrate-vs-n";
    case Scenario::kSumRateVsM:
      return "sumrate-vs-m";
    case Scenario::kUserRateVsN:
      return "userrate-vs-n";
    case Scenario::kOutageVsN:
      return "outage";
    case Scenario::kDensityScaling:
      return "density";
    case Scenario::kCsiSweep:
      return "csi-sweep";
    case Scenario::kDownlinkVsN:
      return "downlink";
    case Scenario::kFronthaulVsT:
      return "fronthaul";
  }
  throw ArgumentError("to_string: unknown scenario");
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

bool is_integer(double v) { return std::isfinite(v) && std::floor(v) == v; }

enum class Method { kFull, kKlt, kCklt, kDcklt, kAntSel, kAntRed, kRandom };

Method parse_method(const std::string& tag) {
  if (tag == "full") return Method::kFull;
  if (tag == "klt") return Method::kKlt;
  if (tag == "cklt") return Method::kCklt;
  if (tag == "dcklt") return Method::kDcklt;
  if (tag == "antsel") return Method::kAntSel;
  if (tag == "antred") return Method::kAntRed;
  if (tag == "random") return Method::kRandom;
  throw ValidationError("unknown method tag: " + tag);
}

FronthaulMethod parse_fronthaul_method(const std::string& tag) {
  if (tag == "standard") return FronthaulMethod::kStandard;
  if (tag == "centralised-dr") return FronthaulMethod::kCentralisedDR;
  if (tag == "decentralised-dr") return FronthaulMethod::kDecentralisedDR;
  throw ValidationError("unknown fronthaul method tag: " + tag);
}

// RNG lane layout per (seed, trial): 0-1 geometry+fading and channels at the
// base configuration, 16(si+1)+{0,1} per-sweep-value draws (density), 1000+si
// random filter banks, 2000+si CSI pilot noise.
struct TrialDraw {
  Geometry geo;
  SlowFading sf;
  ChannelSet ch;
};

TrialDraw draw_trial(const SystemConfig& cfg, std::uint64_t seed, std::uint64_t trial,
                     std::uint64_t lane_base) {
  auto rng_geo = substream_rng(seed, trial, lane_base);
  auto rng_ch = substream_rng(seed, trial, lane_base + 1);
  TrialDraw d;
  d.geo = sample_geometry(cfg, rng_geo);
  d.sf = make_slow_fading(d.geo, cfg, rng_geo);
  d.ch = sample_channels(d.sf, cfg, rng_ch);
  return d;
}

FilterBank design_bank(Method m, const std::vector<ComplexMatrix>& h, const SlowFading& sf,
                       int antennas, double rho, int n, std::uint64_t seed, std::uint64_t trial,
                       std::uint64_t random_lane) {
  const int l_count = static_cast<int>(h.size());
  switch (m) {
    case Method::kFull:
      return antenna_reduction_filters(antennas, antennas, l_count);
    case Method::kKlt: {
      FilterBank fb;
      fb.method_tag = FilterMethod::KLT;
      fb.A.reserve(h.size());
      for (const auto& hl : h) fb.A.push_back(klt_filter(hl, rho, n));
      return fb;
    }
    case Method::kCklt:
      return bca_joint_design(h, rho, n).filters;
    case Method::kDcklt: {
      const PsiSet ps = psi_set(sf, antennas);
      FilterBank fb;
      fb.method_tag = FilterMethod::DCKLT;
      fb.A.reserve(h.size());
      for (int l = 0; l < l_count; ++l) fb.A.push_back(dcklt_filter(h[l], ps, l, rho, n));
      return fb;
    }
    case Method::kAntSel:
      return antenna_selection_filters(h, rho, n);
    case Method::kAntRed:
      return antenna_reduction_filters(antennas, n, l_count);
    case Method::kRandom: {
      auto rng = substream_rng(seed, trial, random_lane);
      return random_filters(antennas, n, l_count, rng);
    }
  }
  throw ArgumentError("design_bank: unknown method");
}

struct CellSpec {
  std::string method;
  double param = 0.0;
  std::string metric;
  bool infeasible = false;  // decided from the configuration, never evaluated
};

struct Grid {
  std::vector<CellSpec> cells;
  // Fills local[i] for cell i; entries left NaN count as failed evaluations.
  std::function<void(int, std::vector<double>&)> trial_fn;
};

std::vector<Method> parse_methods(const std::vector<std::string>& tags) {
  std::vector<Method> out;
  out.reserve(tags.size());
  for (const auto& t : tags) out.push_back(parse_method(t));
  return out;
}

Grid make_sum_rate_vs_n(const ExperimentConfig& cfg) {
  Grid g;
  const auto methods = parse_methods(cfg.methods);
  const auto sweep = cfg.sweep;
  const std::size_t ns = sweep.size();
  for (std::size_t mi = 0; mi < methods.size(); ++mi)
    for (std::size_t si = 0; si < ns; ++si) {
      g.cells.push_back({cfg.methods[mi], sweep[si], "sum_rate"});
      g.cells.push_back({cfg.methods[mi], sweep[si], "delta_bits"});
    }
  const SystemConfig base = cfg.base;
  const std::uint64_t seed = cfg.seed;
  g.trial_fn = [base, seed, methods, sweep, ns](int t, std::vector<double>& out) {
    const TrialDraw d = draw_trial(base, seed, t, 0);
    const FilterBank full_bank = antenna_reduction_filters(base.M, base.M, base.L);
    const double full_mi = joint_mutual_information(reduce(d.ch.H, full_bank), base.rho);
    for (std::size_t mi = 0; mi < methods.size(); ++mi)
      for (std::size_t si = 0; si < ns; ++si) {
        const int n = static_cast<int>(sweep[si]);
        const FilterBank fb =
            design_bank(methods[mi], d.ch.H, d.sf, base.M, base.rho, n, seed, t, 1000 + si);
        const double r = joint_mutual_information(reduce(d.ch.H, fb), base.rho);
        out[(mi * ns + si) * 2] = r;
        out[(mi * ns + si) * 2 + 1] = full_mi - r;
      }
  };
  return g;
}

Grid make_mi_vs_snr(const ExperimentConfig& cfg) {
  Grid g;
  const auto methods = parse_methods(cfg.methods);
  const auto sweep = cfg.sweep;  // SNR in dB
  const std::size_t ns = sweep.size();
  for (std::size_t mi = 0; mi < methods.size(); ++mi)
    for (std::size_t si = 0; si < ns; ++si)
      g.cells.push_back({cfg.methods[mi], sweep[si], "mi_bits"});
  const SystemConfig base = cfg.base;
  const std::uint64_t seed = cfg.seed;
  g.trial_fn = [base, seed, methods, sweep, ns](int t, std::vector<double>& out) {
    const TrialDraw d = draw_trial(base, seed, t, 0);
    for (std::size_t si = 0; si < ns; ++si) {
      const double rho = db_to_linear(sweep[si]);
      for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        const FilterBank fb =
            design_bank(methods[mi], d.ch.H, d.sf, base.M, rho, base.N, seed, t, 1000 + si);
        out[mi * ns + si] = joint_mutual_information(reduce(d.ch.H, fb), rho);
      }
    }
  };
  return g;
}

Grid make_sum_rate_vs_m(const ExperimentConfig& cfg) {
  Grid g;
  const auto methods = parse_methods(cfg.methods);
  const auto sweep = cfg.sweep;  // antennas per RRH
  const std::size_t ns = sweep.size();
  for (std::size_t mi = 0; mi < methods.size(); ++mi)
    for (std::size_t si = 0; si < ns; ++si)
      g.cells.push_back({cfg.methods[mi], sweep[si], "sum_rate"});
  SystemConfig big = cfg.base;
  big.M = static_cast<int>(*std::max_element(sweep.begin(), sweep.end()));
  const std::uint64_t seed = cfg.seed;
  // One channel draw at the largest M; smaller arrays reuse its leading rows
  // so sweep points share the same fading realizations.
  g.trial_fn = [big, seed, methods, sweep, ns, n = cfg.base.N](int t, std::vector<double>& out) {
    const TrialDraw d = draw_trial(big, seed, t, 0);
    for (std::size_t si = 0; si < ns; ++si) {
      const int m = static_cast<int>(sweep[si]);
      std::vector<ComplexMatrix> h;
      h.reserve(d.ch.H.size());
      for (const auto& hl : d.ch.H) h.push_back(hl.topRows(m));
      for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        const FilterBank fb =
            design_bank(methods[mi], h, d.sf, m, big.rho, n, seed, t, 1000 + si);
        out[mi * ns + si] = joint_mutual_information(reduce(h, fb), big.rho);
      }
    }
  };
  return g;
}

Grid make_user_rate_vs_n(const ExperimentConfig& cfg, bool outage) {
  Grid g;
  const auto methods = parse_methods(cfg.methods);
  const auto sweep = cfg.sweep;
  const std::size_t ns = sweep.size();
  for (std::size_t mi = 0; mi < methods.size(); ++mi)
    for (std::size_t si = 0; si < ns; ++si)
      g.cells.push_back({cfg.methods[mi], sweep[si], outage ? "outage" : "user_rate"});
  const SystemConfig base = cfg.base;
  const std::uint64_t seed = cfg.seed;
  const double thr = cfg.outage_threshold_bits;
  g.trial_fn = [base, seed, methods, sweep, ns, outage, thr](int t, std::vector<double>& out) {
    const TrialDraw d = draw_trial(base, seed, t, 0);
    for (std::size_t mi = 0; mi < methods.size(); ++mi)
      for (std::size_t si = 0; si < ns; ++si) {
        const int n = static_cast<int>(sweep[si]);
        const FilterBank fb =
            design_bank(methods[mi], d.ch.H, d.sf, base.M, base.rho, n, seed, t, 1000 + si);
        const auto [sinr, rate] = mmse_user_metrics(reduce(d.ch.H, fb), base.rho);
        out[mi * ns + si] =
            outage ? (rate.array() < thr).count() / static_cast<double>(rate.size())
                   : rate.mean();
      }
  };
  return g;
}

Grid make_density_scaling(const ExperimentConfig& cfg) {
  Grid g;
  const auto methods = parse_methods(cfg.methods);
  const auto sweep = cfg.sweep;  // user counts K, with L = K/2
  const std::size_t ns = sweep.size();
  for (std::size_t mi = 0; mi < methods.size(); ++mi)
    for (std::size_t si = 0; si < ns; ++si)
      g.cells.push_back({cfg.methods[mi], sweep[si], "user_rate"});
  const SystemConfig base = cfg.base;
  const std::uint64_t seed = cfg.seed;
  g.trial_fn = [base, seed, methods, sweep, ns](int t, std::vector<double>& out) {
    for (std::size_t si = 0; si < ns; ++si) {
      SystemConfig cs = base;
      cs.K = static_cast<int>(sweep[si]);
      cs.L = cs.K / 2;
      const TrialDraw d = draw_trial(cs, seed, t, 16 * (si + 1));
      for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        const FilterBank fb =
            design_bank(methods[mi], d.ch.H, d.sf, cs.M, cs.rho, cs.N, seed, t, 1000 + si);
        out[mi * ns + si] =
            joint_mutual_information(reduce(d.ch.H, fb), cs.rho) / cs.K;
      }
    }
  };
  return g;
}

Grid make_csi_sweep(const ExperimentConfig& cfg) {
  Grid g;
  const auto methods = parse_methods(cfg.methods);
  const auto sweep = cfg.sweep;  // pilot SNR in dB
  const std::size_t ns = sweep.size();
  for (std::size_t mi = 0; mi < methods.size(); ++mi)
    for (std::size_t si = 0; si < ns; ++si)
      g.cells.push_back({cfg.methods[mi], sweep[si], "sum_rate"});
  const SystemConfig base = cfg.base;
  const std::uint64_t seed = cfg.seed;
  // Filters are designed on the whitened estimates, the only channel
  // knowledge available, and rates are those of the equivalent whitened
  // system.
  g.trial_fn = [base, seed, methods, sweep, ns](int t, std::vector<double>& out) {
    const TrialDraw d = draw_trial(base, seed, t, 0);
    for (std::size_t si = 0; si < ns; ++si) {
      auto rng_csi = substream_rng(seed, t, 2000 + si);
      const CsiModel csi = estimate_csi(d.ch, d.sf, db_to_linear(sweep[si]), rng_csi);
      const ChannelSet eff = whiten(csi, base.rho);
      for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        const FilterBank fb =
            design_bank(methods[mi], eff.H, d.sf, base.M, base.rho, base.N, seed, t, 1000 + si);
        out[mi * ns + si] = joint_mutual_information(reduce(eff.H, fb), base.rho);
      }
    }
  };
  return g;
}

Grid make_downlink_vs_n(const ExperimentConfig& cfg) {
  Grid g;
  const auto methods = parse_methods(cfg.methods);
  const auto sweep = cfg.sweep;
  const std::size_t ns = sweep.size();
  for (std::size_t mi = 0; mi < methods.size(); ++mi)
    for (std::size_t si = 0; si < ns; ++si) {
      const int n_eff =
          methods[mi] == Method::kFull ? cfg.base.M : static_cast<int>(sweep[si]);
      const bool infeasible = n_eff * cfg.base.L < cfg.base.K;
      g.cells.push_back({cfg.methods[mi], sweep[si], "user_rate", infeasible});
    }
  const SystemConfig base = cfg.base;
  const std::uint64_t seed = cfg.seed;
  g.trial_fn = [base, seed, methods, sweep, ns](int t, std::vector<double>& out) {
    const TrialDraw d = draw_trial(base, seed, t, 0);
    for (std::size_t mi = 0; mi < methods.size(); ++mi)
      for (std::size_t si = 0; si < ns; ++si) {
        const int n = static_cast<int>(sweep[si]);
        const int n_eff = methods[mi] == Method::kFull ? base.M : n;
        if (n_eff * base.L < base.K) continue;
        const FilterBank fb =
            design_bank(methods[mi], d.ch.H, d.sf, base.M, base.rho, n, seed, t, 1000 + si);
        try {
          const DownlinkPrecoders pre = design_downlink(fb, d.ch.H_bar, base.P);
          out[mi * ns + si] = std::log2(1.0 + pre.gamma[0]);
        } catch (const InfeasibleZfError&) {
          // left NaN; surfaces as a partial "infeasible" row
        }
      }
  };
  return g;
}

std::vector<ResultRow> run_fronthaul(const ExperimentConfig& cfg) {
  std::vector<ResultRow> rows;
  for (const double tv : cfg.sweep) {
    const int t_coh = static_cast<int>(tv);
    const double standard_load =
        mean_fronthaul_load(FronthaulMethod::kStandard, cfg.base.K, cfg.base.M, cfg.base.N, t_coh)
            .mean_per_use;
    for (const auto& tag : cfg.methods) {
      const FronthaulLoad load = mean_fronthaul_load(parse_fronthaul_method(tag), cfg.base.K,
                                                     cfg.base.M, cfg.base.N, t_coh);
      ResultRow r;
      r.scenario = to_string(cfg.scenario);
      r.method = tag;
      r.param = tv;
      r.trials = 1;
      r.seed = cfg.seed;
      r.metric = "mean_load";
      r.mean = load.mean_per_use;
      rows.push_back(r);
      r.metric = "load_ratio";
      r.mean = load.mean_per_use / standard_load;
      rows.push_back(r);
    }
  }
  return rows;
}

Grid make_grid(const ExperimentConfig& cfg) {
  switch (cfg.scenario) {
    case Scenario::kMiVsSnr:
      return make_mi_vs_snr(cfg);
    case Scenario::kSumRateVsN:
      return make_sum_rate_vs_n(cfg);
    case Scenario::kSumRateVsM:
      return make_sum_rate_vs_m(cfg);
    case Scenario::kUserRateVsN:
      return make_user_rate_vs_n(cfg, false);
    case Scenario::kOutageVsN:
      return make_user_rate_vs_n(cfg, true);
    case Scenario::kDensityScaling:
      return make_density_scaling(cfg);
    case Scenario::kCsiSweep:
      return make_csi_sweep(cfg);
    case Scenario::kDownlinkVsN:
      return make_downlink_vs_n(cfg);
    case Scenario::kFronthaulVsT:
      break;
  }
  throw ArgumentError("make_grid: scenario has no Monte Carlo grid");
}

int worker_count(int trials) {
  long cap = 0;
  if (const char* env = std::getenv("DIMRED_THREADS"); env && *env)
    cap = std::strtol(env, nullptr, 10);
  const unsigned hw = std::thread::hardware_concurrency();
  const long n = cap > 0 ? cap : (hw ? hw : 1);
  return static_cast<int>(std::clamp<long>(n, 1, trials));
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void sort_rows(std::vector<ResultRow>& rows) {
  std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::tie(a.scenario, a.method, a.param, a.metric) <
           std::tie(b.scenario, b.method, b.param, b.metric);
  });
}

void dump_trials(const ExperimentConfig& cfg, const std::vector<CellSpec>& cells,
                 const std::vector<double>& values) {
  std::ofstream out(cfg.dump_trials_path);
  if (!out) throw IoError("cannot open trial dump file: " + cfg.dump_trials_path);
  out << "scenario,method,param,metric,trial,value\n";
  const std::string sc = to_string(cfg.scenario);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (cells[c].infeasible) continue;
    for (int t = 0; t < cfg.trials; ++t)
      out << sc << ',' << cells[c].method << ',' << fmt_double(cells[c].param) << ','
          << cells[c].metric << ',' << t << ','
          << fmt_double(values[c * cfg.trials + t]) << '\n';
  }
  if (!out.good()) throw IoError("failed writing trial dump: " + cfg.dump_trials_path);
}

}  // namespace

void ExperimentConfig::validate() const {
  if (trials < 1) throw ValidationError("trials must be >= 1");
  if (sweep.empty()) throw ValidationError("sweep must be non-empty");
  if (methods.empty()) throw ValidationError("methods must be non-empty");
  base.validate();
  if (scenario == Scenario::kFronthaulVsT) {
    for (const auto& tag : methods) parse_fronthaul_method(tag);
  } else {
    for (const auto& tag : methods) parse_method(tag);
  }
  for (const double v : sweep) {
    switch (scenario) {
      case Scenario::kSumRateVsN:
      case Scenario::kUserRateVsN:
      case Scenario::kOutageVsN:
      case Scenario::kDownlinkVsN:
        if (!is_integer(v) || v < 1 || v > base.M)
          throw ValidationError("reduced dimension sweep values must be integers in [1, M]");
        break;
      case Scenario::kSumRateVsM:
        if (!is_integer(v) || v < base.N)
          throw ValidationError("antenna sweep values must be integers >= N");
        break;
      case Scenario::kDensityScaling:
        if (!is_integer(v) || v < 2 || static_cast<int>(v) % 2 != 0)
          throw ValidationError("density sweep values are user counts K with L = K/2; "
                                "they must be even integers >= 2");
        break;
      case Scenario::kFronthaulVsT:
        if (!is_integer(v) || v < base.K)
          throw ValidationError("coherence sweep values must be integers >= K");
        break;
      case Scenario::kMiVsSnr:
      case Scenario::kCsiSweep:
        if (!std::isfinite(v)) throw ValidationError("sweep values must be finite");
        break;
    }
  }
  if (scenario == Scenario::kOutageVsN && !(outage_threshold_bits > 0.0))
    throw ValidationError("outage threshold must be positive");
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.scenario == Scenario::kFronthaulVsT) {
    auto rows = run_fronthaul(cfg);
    sort_rows(rows);
    return rows;
  }

  const Grid grid = make_grid(cfg);
  const std::size_t ncells = grid.cells.size();
  std::vector<double> values(ncells * static_cast<std::size_t>(cfg.trials), kNaN);

  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex err_mu;
  const auto work = [&]() {
    std::vector<double> local(ncells);
    for (;;) {
      const int t = next.fetch_add(1);
      if (t >= cfg.trials) break;
      std::fill(local.begin(), local.end(), kNaN);
      try {
        grid.trial_fn(t, local);
      } catch (...) {
        const std::lock_guard<std::mutex> lk(err_mu);
        if (!first_error) first_error = std::current_exception();
        return;
      }
      for (std::size_t c = 0; c < ncells; ++c)
        values[c * static_cast<std::size_t>(cfg.trials) + t] = local[c];
    }
  };
  const int workers = worker_count(cfg.trials);
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  std::vector<ResultRow> rows;
  rows.reserve(ncells + 4);
  const std::string sc = to_string(cfg.scenario);
  for (std::size_t c = 0; c < ncells; ++c) {
    const CellSpec& cell = grid.cells[c];
    ResultRow r;
    r.scenario = sc;
    r.method = cell.method;
    r.param = cell.param;
    r.trials = cfg.trials;
    r.seed = cfg.seed;
    if (cell.infeasible) {
      r.metric = "infeasible";
      r.mean = 1.0;
      rows.push_back(r);
      continue;
    }
    long valid = 0;
    double sum = 0.0;
    for (int t = 0; t < cfg.trials; ++t) {
      const double v = values[c * static_cast<std::size_t>(cfg.trials) + t];
      if (std::isfinite(v)) {
        ++valid;
        sum += v;
      }
    }
    if (valid == 0) {
      r.metric = "infeasible";
      r.mean = 1.0;
      rows.push_back(r);
      continue;
    }
    const double mean = sum / valid;
    double ss = 0.0;
    for (int t = 0; t < cfg.trials; ++t) {
      const double v = values[c * static_cast<std::size_t>(cfg.trials) + t];
      if (std::isfinite(v)) ss += (v - mean) * (v - mean);
    }
    r.metric = cell.metric;
    r.mean = mean;
    r.std_error = valid > 1 ? std::sqrt(ss / (valid - 1)) / std::sqrt(valid) : 0.0;
    r.trials = valid;
    rows.push_back(r);
    if (valid < cfg.trials) {
      ResultRow f = r;
      f.metric = "infeasible";
      f.mean = 1.0 - static_cast<double>(valid) / cfg.trials;
      f.std_error = 0.0;
      f.trials = cfg.trials;
      rows.push_back(f);
    }
  }
  sort_rows(rows);
  if (!cfg.dump_trials_path.empty()) dump_trials(cfg, grid.cells, values);
  return rows;
}

void emit_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  std::vector<ResultRow> sorted = rows;
  sort_rows(sorted);
  std::ofstream out(path);
  if (!out) throw IoError("cannot open output file: " + path);
  out << "scenario,method,param,metric,mean,stderr,trials,seed\n";
  for (const auto& r : sorted)
    out << r.scenario << ',' << r.method << ',' << fmt_double(r.param) << ',' << r.metric << ','
        << fmt_double(r.mean) << ',' << fmt_double(r.std_error) << ',' << r.trials << ','
        << r.seed << '\n';
  out.flush();
  if (!out.good()) throw IoError("failed writing output file: " + path);
}

}  // namespace drmimo
