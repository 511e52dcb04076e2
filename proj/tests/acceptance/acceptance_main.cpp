// Acceptance suite: one PASS/FAIL line per criterion, exit code equals
// the number of failures. Heavy simulations fan out over hardware
// threads; every tolerance is fixed here, not configurable.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <thread>
#include <vector>

#include "gfa/attempt.hpp"
#include "gfa/channel.hpp"
#include "gfa/des.hpp"
#include "gfa/errors.hpp"
#include "gfa/mg1.hpp"
#include "gfa/rng.hpp"
#include "gfa/sizing.hpp"

using namespace gfa;

namespace {

int g_failures = 0;
std::chrono::steady_clock::time_point g_t0;

void start_timer() { g_t0 = std::chrono::steady_clock::now(); }

void report(int criterion, bool pass, const std::string& detail) {
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - g_t0).count();
  std::printf("%s criterion %d: %s  [%.1fs]\n", pass ? "PASS" : "FAIL", criterion,
              detail.c_str(), secs);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

const ChannelParams kSecV = ChannelParams::from_dbm(-112.0, -60.0, 4.0);

uint64_t rep_seed(uint64_t master, int rep) {
  uint64_t s = master;
  for (int i = 0; i <= rep; ++i) splitmix64(s);
  return s;
}

SimStats run_parallel(const SimConfig& base, uint64_t packets_total) {
  const int reps = std::max(2u, std::thread::hardware_concurrency());
  std::vector<SimStats> parts(static_cast<size_t>(reps));
  std::vector<std::thread> threads;
  const uint64_t per_rep = (packets_total + reps - 1) / static_cast<uint64_t>(reps);
  for (int r = 0; r < reps; ++r) {
    threads.emplace_back([&, r]() {
      SimConfig cfg = base;
      cfg.seed = rep_seed(base.seed, r);
      Simulator sim(cfg);
      sim.run_until(per_rep, 0);
      parts[static_cast<size_t>(r)] = sim.finish();
    });
  }
  for (auto& t : threads) t.join();
  SimStats merged = std::move(parts[0]);
  for (size_t r = 1; r < parts.size(); ++r) merged.merge(parts[r]);
  return merged;
}

// ------------------------------------------------------------ criterion 1

void criterion_1_table_i() {
  start_timer();
  struct Col {
    SizingModel model;
    int expect[4];
  };
  const Col cols[] = {{SizingModel::full, {47, 60, 73, 84}},
                      {SizingModel::no_1pr, {20, 29, 39, 49}},
                      {SizingModel::no_queue, {32, 39, 45, 52}}};
  const int ns[4] = {40, 60, 80, 100};
  bool pass = true;
  std::string detail = "reference B* table";
  for (const auto& col : cols) {
    SizingSpec spec;
    spec.model = col.model;
    SystemParams sys(40, 48, 5.0);
    const auto table = b_star_table({40, 60, 80, 100}, sys, kSecV, spec);
    detail += " | " + to_string(col.model) + ":";
    for (int i = 0; i < 4; ++i) {
      const bool ok =
          table[static_cast<size_t>(i)].result.feasible() &&
          *table[static_cast<size_t>(i)].result.b_star == col.expect[i];
      if (!ok) pass = false;
      detail += " N=" + std::to_string(ns[i]) + " B*=";
      detail += table[static_cast<size_t>(i)].result.feasible()
                    ? std::to_string(*table[static_cast<size_t>(i)].result.b_star)
                    : std::string("inf");
      detail += ok ? "" : "(want " + std::to_string(col.expect[i]) + ")";
    }
  }
  report(1, pass, detail);
}

// ------------------------------------------------------------ criterion 2

void criterion_2_attempt_anchor() {
  start_timer();
  SystemParams sys(20, 20, 10.0);
  const FullChainSolution sol = solve_full_chain(sys, kSecV);
  const bool pass = std::abs(sol.attempt_rate_tti - 0.0286) <= 3e-4;
  char buf[128];
  std::snprintf(buf, sizeof buf, "attempt rate %.5f UEs/TTI vs 0.0286 +/- 0.0003",
                sol.attempt_rate_tti);
  report(2, pass, buf);
}

// ------------------------------------------------------------ criterion 3

void criterion_3_p1_oracle() {
  start_timer();
  bool pass = true;
  double worst = 0.0;
  for (double mu : {0.25, 0.5, 1.0, 2.0, 2.512, 4.0}) {
    for (double rho : {1e2, 1e4, std::pow(10.0, 5.2)}) {
      ChannelParams ch = ChannelParams::from_dbm(0.0, 10.0 * std::log10(rho), 0.0);
      ch.mu = mu;
      const double diff = std::abs(p1_closed(ch) - p1_numeric(ch));
      worst = std::max(worst, diff);
      if (diff > 1e-8) pass = false;
    }
  }
  for (double mu : {0.25, 0.5, 1.0, 2.0, 2.512, 4.0}) {
    ChannelParams ch = ChannelParams::from_dbm(0.0, 80.0, 0.0);  // rho = 1e8
    ch.mu = mu;
    if (std::abs(p1_closed(ch) - p1_star(mu)) > 1e-5) pass = false;
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "max |closed - quadrature| = %.2e on the grid", worst);
  report(3, pass, buf);
}

// ------------------------------------------------------------ criterion 4

void criterion_4_theorem1() {
  start_timer();
  bool pass = true;
  std::string detail = "ideal rounds equal;";
  // on a noiseless channel the collision echo is full (Pr{S1|H} = 1), so
  // every retransmission round sees the same rate even at finite B; the
  // tolerance covers cancellation in 1 - (1 - mu/(mu+1) g/B)
  SystemParams sys_small(100, 1000, 10.0);
  for (double mu : {0.5, 2.0, 4.0}) {
    auto [gf, gr] = ideal_limit(sys_small, mu);
    const ChannelParams ideal = ChannelParams::ideal(mu);
    const double via_cascade = cascade_step(gf, gf, sys_small, ideal);
    if (std::abs(via_cascade - gr) > 1e-8) pass = false;
    const FullChainSolution sol = solve_full_chain(sys_small, ideal);
    for (double g : sol.g_r)
      if (std::abs(g - sol.g_r[0]) > 1e-9) pass = false;
  }
  for (double mu_db : {2.0, 4.0, 6.0}) {
    SystemParams sys(100, 48, 10.0);
    const ChannelParams ch = ChannelParams::from_dbm(-112.0, -60.0, mu_db);
    const FullChainSolution sol = solve_full_chain(sys, ch);
    double spread = 0.0;
    for (double g : sol.g_r) spread = std::max(spread, std::abs(g - sol.g_r[0]));
    const double jump = sol.g_r[0] - sol.g_f;
    char buf[64];
    std::snprintf(buf, sizeof buf, " mu=%.0fdB spread/jump=%.3f", mu_db, spread / jump);
    detail += buf;
    if (!(spread < 0.2 * jump)) pass = false;
  }
  report(4, pass, detail);
}

// ------------------------------------------------------------ criterion 5

void criterion_5_fig6() {
  for (double lam : {5.0, 10.0}) {
    start_timer();
    SystemParams sys(40, 48, lam);
    const SimplifiedSolution sol = solve_simplified(sys, kSecV);
    const DelayDistribution analytic = delay_distribution(sol, sys);
    const DelayDistribution no1pr = delay_no_1pr(sys, kSecV);

    SimConfig cfg;
    cfg.sys = sys;
    cfg.ch = kSecV;
    cfg.seed = 20260810;
    const SimStats stats = run_parallel(cfg, 100000000);
    const DelayDistribution emp = empirical_ccdf(stats, 0.01);

    bool pass = stats.n_success >= 100000000;
    double max_gap = 0.0, at_t = 0.0;
    const size_t n = std::min(analytic.ccdf.size(), emp.ccdf.size());
    for (size_t k = 0; k < n; ++k) {
      const double a = analytic.ccdf[k];
      const double e = emp.ccdf[k];
      if (a < 1e-5 || e < 1e-5) continue;
      const double gap = std::abs(a - e) / std::max(a, e);
      if (gap > max_gap) {
        max_gap = gap;
        at_t = static_cast<double>(k) * 0.01;
      }
    }
    if (max_gap > 0.10) pass = false;

    // the no-1pR baseline must sit well below the simulation on the
    // second-step plateau
    double worst_under = 0.0;
    for (double t = 7.2; t <= 9.8; t += 0.1) {
      const double e = emp.ccdf_at(t);
      const double a = no1pr.ccdf_at(t);
      if (e > 0.0) worst_under = std::max(worst_under, (e - a) / e);
    }
    if (!(worst_under > 0.20)) pass = false;

    char buf[192];
    std::snprintf(buf, sizeof buf,
                  "lambda=%g: delivered=%.2e max rel gap %.3f at t=%.2f (<=0.10); "
                  "no-1pr under-prediction %.2f (>0.20)",
                  lam, static_cast<double>(stats.n_success), max_gap, at_t, worst_under);
    report(5, pass, buf);
  }
}

// ------------------------------------------------------------ criterion 6

void criterion_6_mg1_oracle() {
  start_timer();
  SystemParams sys(40, 48, 5.0);
  const SimplifiedSolution sol = solve_simplified(sys, kSecV);
  const double lam = sys.lambda_tti();
  bool pass = true;
  std::string detail;

  // (a) brute-force Lindley recursion vs the constructed waiting law
  const GriddedLaw w = waiting_law(sol, sys);
  const auto w_ccdf = w.ccdf();
  const ServiceTimeDist x = service_pmf(sol);
  std::vector<double> xs, xw;
  for (const auto& [t, wgt] : x.pmf) {
    xs.push_back(static_cast<double>(t));
    xw.push_back(wgt);
  }
  // cumulative for inverse sampling
  std::vector<double> xcum(xw.size());
  double acc = 0.0;
  for (size_t i = 0; i < xw.size(); ++i) {
    acc += xw[i];
    xcum[i] = acc;
  }
  Rng rng(987654321);
  const size_t n_samples = 10000000, burn = 100000;
  std::vector<double> waits;
  waits.reserve(n_samples);
  double wcur = 0.0;
  for (size_t i = 0; i < n_samples + burn; ++i) {
    const double u = rng.u01();
    size_t j = 0;
    while (j + 1 < xcum.size() && u > xcum[j]) ++j;
    const double service = xs[j];
    const double gap = rng.expo(lam);
    if (i >= burn) waits.push_back(wcur);
    wcur = std::max(0.0, wcur + service - gap);
  }
  // probe points: deciles of (W | W > 0) plus the 1e-4 tail
  const double p_busy = w_ccdf[0];
  std::vector<double> probe_levels;
  for (int d = 1; d <= 9; ++d) probe_levels.push_back(p_busy * (1.0 - d / 10.0));
  probe_levels.push_back(1e-4);
  for (double level : probe_levels) {
    size_t k = 0;
    while (k + 1 < w_ccdf.size() && w_ccdf[k] > level) ++k;
    const double t = static_cast<double>(k) * w.step;
    const double p_ana = w_ccdf[k];
    uint64_t count = 0;
    for (double v : waits)
      if (v > t) ++count;
    const double p_emp = static_cast<double>(count) / static_cast<double>(waits.size());
    const double se = std::sqrt(p_ana * (1.0 - p_ana) / static_cast<double>(waits.size()));
    if (std::abs(p_emp - p_ana) > 3.0 * se + 1e-12) {
      pass = false;
      char buf[96];
      std::snprintf(buf, sizeof buf, " MISS t=%.2f ana=%.3e emp=%.3e se=%.1e;", t, p_ana,
                    p_emp, se);
      detail += buf;
    }
  }
  detail = "Lindley cross-check at deciles and 1e-4 tail" + detail;

  // (b) transform oracle on the sojourn law
  const GriddedLaw v = sojourn_law(sol, sys);
  double xbar = x.mean;
  double worst = 0.0;
  for (double s : {0.1, 0.5, 1.0}) {
    double xsum = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) xsum += xw[i] * std::exp(-s * xs[i]);
    const double v_formula = (1.0 - lam * xbar) * s / (s - lam + lam * xsum) * xsum;
    worst = std::max(worst, std::abs(v.laplace(s) - v_formula));
  }
  if (worst > 1e-8) pass = false;
  char buf[64];
  std::snprintf(buf, sizeof buf, "; max transform gap %.2e", worst);
  detail += buf;
  report(6, pass, detail);
}

// ------------------------------------------------------------ criterion 7

void criterion_7_dynamic() {
  for (const bool use_full : {true, false}) {
    start_timer();
    const SizingModel model = use_full ? SizingModel::full : SizingModel::no_1pr;
    SizingSpec spec;
    spec.model = model;
    SystemParams sys_template(60, 48, 5.0);
    std::vector<int> n_range;
    for (int n = 30; n <= 120; ++n) n_range.push_back(n);
    const auto entries = b_star_table(n_range, sys_template, kSecV, spec);
    DynamicConfig dyn;
    dyn.p_leave_per_tti = 2.3e-6;
    dyn.n_bar = 60;
    bool table_ok = true;
    for (const auto& e : entries) {
      if (!e.result.feasible()) {
        table_ok = false;
        continue;
      }
      dyn.b_star_table[e.n_ues] = *e.result.b_star;
    }

    SimConfig cfg;
    cfg.sys = SystemParams(60, dyn.b_star_table.count(60) ? dyn.b_star_table[60] : 48, 5.0);
    cfg.ch = kSecV;
    cfg.seed = use_full ? 77001 : 77002;
    cfg.dynamic = dyn;
    const SimStats stats = run_parallel(cfg, 100000000);

    const double n = stats.delivered();
    const double p = stats.outage_fraction();
    const double se = std::sqrt(std::max(p * (1.0 - p), 1e-300) / n);
    const double lo = p - 2.5758 * se;
    const double hi = p + 2.5758 * se;

    bool pass = table_ok && stats.n_success >= 100000000;
    if (use_full) {
      if (!(p < 1e-5 && hi < 1.5e-5)) pass = false;
    } else {
      if (!(lo > 1e-5)) pass = false;
    }
    char buf[192];
    std::snprintf(buf, sizeof buf,
                  "%s table: outage %.3e (CI99 %.3e..%.3e), delivered %.2e, churn events %zu",
                  to_string(model).c_str(), p, lo, hi, static_cast<double>(stats.n_success),
                  stats.churn_log.size());
    report(7, pass, buf);
  }
}

// ------------------------------------------------------------ criterion 8

void criterion_8_infeasible() {
  start_timer();
  bool pass = true;
  int first_bad = -1;
  SizingSpec spec;
  spec.b_max = 500;
  std::vector<int> ns;
  for (int n = 40; n <= 100; ++n) ns.push_back(n);
  SystemParams sys(40, 48, 10.0);
  const auto table = b_star_table(ns, sys, kSecV, spec);
  for (const auto& e : table) {
    if (e.result.feasible()) {
      pass = false;
      if (first_bad < 0) first_bad = e.n_ues;
    }
  }
  report(8, pass,
         pass ? "lambda=10/s infeasible for every N in 40..100 up to B=500"
              : "unexpected feasible N=" + std::to_string(first_bad));
}

// ------------------------------------------------------------ criterion 9

void criterion_9_properties() {
  start_timer();
  bool pass = true;
  std::string detail;

  // ccdf monotonicity + normalization across the three laws
  SystemParams sys(40, 48, 5.0);
  const SimplifiedSolution sol = solve_simplified(sys, kSecV);
  for (const DelayDistribution& d :
       {delay_distribution(sol, sys), delay_no_queue(sol), delay_no_1pr(sys, kSecV)}) {
    if (std::abs(d.ccdf.front() - 1.0) > 1e-12) pass = false;
    for (size_t k = 0; k + 1 < d.ccdf.size(); ++k)
      if (d.ccdf[k] + 1e-15 < d.ccdf[k + 1]) pass = false;
    if (!(d.ccdf.back() < 1e-12)) pass = false;
  }
  detail += "ccdf laws ok;";

  // conservation and determinism on a mid-size run
  SimConfig cfg;
  cfg.sys = SystemParams(40, 20, 20.0);
  cfg.ch = kSecV;
  cfg.horizon_ttis = 2000000;
  cfg.warmup_ttis = 50000;
  cfg.seed = 99;
  const SimStats a = run(cfg);
  const SimStats b = run(cfg);
  if (a.n_arrivals != a.n_success + a.still_queued + a.churned_away) pass = false;
  if (a.delay_histogram != b.delay_histogram || a.n_success != b.n_success) pass = false;
  detail += " conservation + determinism ok;";

  // service mean identity to 1e-12
  const ServiceTimeDist x = service_pmf(sol);
  double mean_num = 0.0;
  for (const auto& [t, wgt] : x.pmf) mean_num += wgt * t;
  const double closed = 4.0 * (1.0 + sol.p_r_hat - sol.p_f_hat) / sol.p_r_hat;
  if (std::abs(mean_num - closed) > 1e-12) pass = false;
  detail += " service mean identity ok";
  report(9, pass, detail);
}

}  // namespace

int main() {
  criterion_1_table_i();
  criterion_2_attempt_anchor();
  criterion_3_p1_oracle();
  criterion_4_theorem1();
  criterion_5_fig6();
  criterion_6_mg1_oracle();
  criterion_7_dynamic();
  criterion_8_infeasible();
  criterion_9_properties();
  if (g_failures == 0)
    std::printf("ALL CRITERIA PASS\n");
  else
    std::printf("%d criterion failure(s)\n", g_failures);
  return g_failures;
}
