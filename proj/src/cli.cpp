#include "gfa/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "gfa/attempt.hpp"
#include "gfa/channel.hpp"
#include "gfa/des.hpp"
#include "gfa/errors.hpp"
#include "gfa/io.hpp"
#include "gfa/mg1.hpp"
#include "gfa/rng.hpp"
#include "gfa/sizing.hpp"
#include "gfa/version.hpp"

namespace gfa {

namespace {

using nlohmann::json;

struct CommonOpts {
  int n = 40;
  int b = 48;
  double lambda_per_s = 5.0;
  double mu_db = 4.0;
  double noise_dbm = -112.0;
  double power_dbm = -60.0;
  double tti_s = kDefaultTtiSeconds;
  double grid_step = 0.01;
  std::string out = "out";
  std::string config;  // resolved before parsing; listed for --help only
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--n", o.n, "number of UEs in the cell");
  cmd->add_option("--b", o.b, "number of RBs per TTI");
  cmd->add_option("--lambda-per-s", o.lambda_per_s, "packet rate per UE (packets/s)");
  cmd->add_option("--mu-db", o.mu_db, "SINR threshold (dB)");
  cmd->add_option("--noise-dbm", o.noise_dbm, "noise power (dBm)");
  cmd->add_option("--power-dbm", o.power_dbm, "mean received power (dBm)");
  cmd->add_option("--tti-s", o.tti_s, "TTI duration (seconds)");
  cmd->add_option("--grid-step", o.grid_step, "CCDF grid step (TTIs)");
  cmd->add_option("--out", o.out, "output file prefix");
  cmd->add_option("--config", o.config, "flat key=value file; flags override it");
}

// Flat key=value config support: `--config FILE` anywhere in the args
// expands to `--key value` pairs for every key not already given
// explicitly, so command-line flags override the file.
std::vector<std::string> apply_config_file(std::vector<std::string> args) {
  std::string path;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<long>(i));
      break;
    }
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot read config file " + path);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) continue;
    const std::string flag = "--" + key;
    bool given = false;
    for (const auto& a : args)
      if (a == flag || a.rfind(flag + "=", 0) == 0) given = true;
    if (given) continue;
    args.push_back(flag);
    if (!value.empty()) args.push_back(value);
  }
  return args;
}

SystemParams make_sys(const CommonOpts& o) {
  return SystemParams(o.n, o.b, o.lambda_per_s, o.tti_s);
}

ChannelParams make_ch(const CommonOpts& o) {
  return ChannelParams::from_dbm(o.noise_dbm, o.power_dbm, o.mu_db);
}

double threshold_tti(const CommonOpts& o) { return 0.001 / o.tti_s; }

std::vector<std::pair<std::string, std::string>> common_params(const CommonOpts& o) {
  return {{"n", std::to_string(o.n)},
          {"b", std::to_string(o.b)},
          {"lambda-per-s", io::fmt(o.lambda_per_s)},
          {"lambda-per-tti", io::fmt(o.lambda_per_s * o.tti_s)},
          {"mu-db", io::fmt(o.mu_db)},
          {"noise-dbm", io::fmt(o.noise_dbm)},
          {"power-dbm", io::fmt(o.power_dbm)},
          {"tti-s", io::fmt(o.tti_s)},
          {"grid-step", io::fmt(o.grid_step)},
          {"out", o.out}};
}

void write_with_manifest(const std::string& command, const CommonOpts& o,
                         std::vector<std::pair<std::string, std::string>> extra_params,
                         const std::vector<std::pair<std::string, std::string>>& files) {
  io::RunManifest m;
  m.command = command;
  m.version = kVersion;
  m.params = common_params(o);
  for (auto& p : extra_params) m.params.push_back(std::move(p));
  for (const auto& [path, content] : files) {
    io::write_file_atomic(path, content);
    m.output_digests[path] = io::digest_hex(content);
  }
  io::write_file_atomic(o.out + "_manifest.json", m.to_json());
}

uint64_t rep_seed(uint64_t master, int rep) {
  uint64_t s = master;
  for (int i = 0; i <= rep; ++i) splitmix64(s);
  return s;
}

// Fan out replications over threads; deterministic merge by replication
// index regardless of scheduling.
SimStats run_replicated(const SimConfig& base, int replications, uint64_t packets_total,
                        uint64_t horizon) {
  const int reps = std::max(1, replications);
  std::vector<SimStats> parts(static_cast<size_t>(reps));
  std::vector<std::exception_ptr> errs(static_cast<size_t>(reps));
  const uint64_t per_rep_packets =
      packets_total == 0 ? 0 : (packets_total + reps - 1) / static_cast<uint64_t>(reps);
  auto work = [&](int r) {
    try {
      SimConfig cfg = base;
      cfg.seed = rep_seed(base.seed, r);
      Simulator sim(cfg);
      sim.run_until(per_rep_packets, horizon);
      parts[static_cast<size_t>(r)] = sim.finish();
    } catch (...) {
      errs[static_cast<size_t>(r)] = std::current_exception();
    }
  };
  std::vector<std::thread> threads;
  for (int r = 0; r < reps; ++r) threads.emplace_back(work, r);
  for (auto& t : threads) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  SimStats merged = std::move(parts[0]);
  for (int r = 1; r < reps; ++r) merged.merge(parts[static_cast<size_t>(r)]);
  return merged;
}

json round_stats_json(const SimStats& stats, int max_rounds) {
  json rounds = json::array();
  for (int r = 0; r < max_rounds; ++r) {
    const auto ri = static_cast<size_t>(r);
    if (ri >= stats.attempts_success.size()) break;
    const uint64_t events = stats.attempts_success[ri] + stats.attempts_fail[ri];
    if (events < 100) break;
    rounds.push_back({{"round", r},
                      {"attempts", events},
                      {"success_fraction",
                       static_cast<double>(stats.attempts_success[ri]) / events},
                      {"g_hat", stats.sum_others[ri] / static_cast<double>(events)}});
  }
  return rounds;
}

// ---------------------------------------------------------------- analytic

struct AnalyticOpts {
  CommonOpts common;
  std::string model = "full";
  bool attempt_rates = false;
};

int cmd_analytic(const AnalyticOpts& o) {
  const SystemParams sys = make_sys(o.common);
  const ChannelParams ch = make_ch(o.common);
  const double thr = threshold_tti(o.common);

  if (o.attempt_rates) {
    const FullChainSolution fc = solve_full_chain(sys, ch);
    json j;
    j["g_f"] = fc.g_f;
    j["g_r"] = fc.g_r;
    j["p_f"] = fc.p_f;
    j["p_r"] = fc.p_r;
    j["alpha"] = fc.alpha;
    j["pi_f"] = fc.pi_f;
    j["f_tilde"] = fc.f_tilde;
    j["attempt_rate_tti"] = fc.attempt_rate_tti;
    j["residual"] = fc.residual;
    j["truncation_warning"] = fc.truncation_warning;
    std::ostringstream csv;
    csv << "round,g,p\n0," << io::fmt(fc.g_f) << ',' << io::fmt(fc.p_f) << '\n';
    for (size_t i = 0; i < fc.g_r.size(); ++i)
      csv << (i + 1) << ',' << io::fmt(fc.g_r[i]) << ',' << io::fmt(fc.p_r[i]) << '\n';
    write_with_manifest("analytic --attempt-rates", o.common, {{"model", "attempt-rates"}},
                        {{o.common.out + "_attempt_rates.csv", csv.str()},
                         {o.common.out + "_attempt_rates.json", j.dump(2) + "\n"}});
    std::cout << j.dump(2) << std::endl;
    return 0;
  }

  DelayDistribution dist;
  json summary;
  if (o.model == "no-1pr" || o.model == "no_1pr") {
    dist = delay_no_1pr(sys, ch, o.common.grid_step);
    const double pt = p_tilde_no_1pr(sys, ch);
    summary["p_f_hat"] = pt;
    summary["p_r_hat"] = pt;
    summary["alpha_hat"] = 4.0 * sys.lambda_tti() / pt;
    summary["g_f_hat"] = (sys.n_ues - 1.0) * sys.lambda_tti() / pt;
    summary["g_r_hat"] = (sys.n_ues - 1.0) * sys.lambda_tti() / pt;
    summary["mean_service_tti"] = 4.0 / pt;
  } else {
    const SimplifiedSolution sol = solve_simplified(sys, ch);
    dist = (o.model == "no-queue" || o.model == "no_queue")
               ? delay_no_queue(sol, o.common.grid_step)
               : delay_distribution(sol, sys, o.common.grid_step);
    summary["p_f_hat"] = sol.p_f_hat;
    summary["p_r_hat"] = sol.p_r_hat;
    summary["alpha_hat"] = sol.alpha_hat;
    summary["g_f_hat"] = sol.g_f_hat;
    summary["g_r_hat"] = sol.g_r_hat;
    summary["mean_service_tti"] = 4.0 * (1.0 + sol.p_r_hat - sol.p_f_hat) / sol.p_r_hat;
  }
  summary["model"] = o.model;
  summary["outage_1ms"] = outage(dist, thr);
  summary["threshold_tti"] = thr;

  write_with_manifest("analytic", o.common, {{"model", o.model}},
                      {{o.common.out + "_ccdf.csv", io::ccdf_csv(dist, o.common.tti_s)},
                       {o.common.out + "_summary.json", summary.dump(2) + "\n"}});
  std::cout << summary.dump(2) << std::endl;
  return 0;
}

// ---------------------------------------------------------------- simulate

struct SimulateOpts {
  CommonOpts common;
  uint64_t horizon_ttis = 0;
  double packets_min = 0;
  uint64_t warmup_ttis = 100000;
  uint64_t seed = 1;
  int replications = 1;
  bool record_delays = false;
};

SimConfig make_sim_config(const SimulateOpts& o) {
  SimConfig cfg;
  cfg.sys = make_sys(o.common);
  cfg.ch = make_ch(o.common);
  cfg.horizon_ttis = o.horizon_ttis;
  cfg.warmup_ttis = o.warmup_ttis;
  cfg.seed = o.seed;
  cfg.outage_threshold_tti = threshold_tti(o.common);
  cfg.record_samples = o.record_delays;
  return cfg;
}

json sim_stats_json(const SimStats& stats, const SimulateOpts& o) {
  json j;
  j["delivered"] = stats.n_success;
  j["arrivals"] = stats.n_arrivals;
  j["still_queued"] = stats.still_queued;
  j["churned_away"] = stats.churned_away;
  j["measured_ttis"] = stats.measured_ttis;
  j["outage_fraction"] = stats.outage_fraction();
  j["outage_threshold_tti"] = stats.outage_threshold_tti;
  j["tx_per_tti"] = stats.measured_ttis
                        ? static_cast<double>(stats.total_transmissions) / stats.measured_ttis
                        : 0.0;
  j["rounds"] = round_stats_json(stats, 8);
  j["replications"] = o.replications;
  j["seed"] = o.seed;
  return j;
}

int cmd_simulate(const SimulateOpts& o) {
  if (o.horizon_ttis == 0 && o.packets_min <= 0)
    throw Error(ErrorCode::ConfigError, "need --horizon-ttis or --packets-min");
  SimConfig cfg = make_sim_config(o);
  const auto packets = static_cast<uint64_t>(o.packets_min);
  SimStats stats = run_replicated(cfg, o.replications, packets, o.horizon_ttis);

  std::vector<std::pair<std::string, std::string>> files;
  json j = sim_stats_json(stats, o);
  if (stats.n_success > 0) {
    const DelayDistribution emp = empirical_ccdf(stats, o.common.grid_step);
    files.emplace_back(o.common.out + "_ccdf.csv", io::ccdf_csv(emp, o.common.tti_s));
  } else {
    j["note"] = "no packets delivered in the measurement window";
  }
  files.emplace_back(o.common.out + "_stats.json", j.dump(2) + "\n");
  files.emplace_back(o.common.out + "_hist.csv", io::histogram_csv(stats));
  if (o.record_delays) files.emplace_back(o.common.out + "_delays.csv", io::delays_csv(stats));

  write_with_manifest("simulate", o.common,
                      {{"horizon-ttis", std::to_string(o.horizon_ttis)},
                       {"packets-min", io::fmt(o.packets_min)},
                       {"warmup-ttis", std::to_string(o.warmup_ttis)},
                       {"seed", std::to_string(o.seed)},
                       {"replications", std::to_string(o.replications)}},
                      files);
  std::cout << j.dump(2) << std::endl;
  return 0;
}

// ---------------------------------------------------------------- size

struct SizeOpts {
  CommonOpts common;
  std::vector<int> n_list = {40, 60, 80, 100};
  std::string model = "full";
  double outage_target = 1e-5;
  int b_init = 8;
  int b_step = 8;
  int b_max = 500;
  uint64_t seed = 1;
};

SizingSpec make_spec(const SizeOpts& o) {
  SizingSpec spec;
  spec.model = sizing_model_from_string(o.model);
  spec.outage_target = o.outage_target;
  spec.threshold_tti = threshold_tti(o.common);
  spec.b_init = o.b_init;
  spec.b_step = o.b_step;
  spec.b_max = o.b_max;
  spec.grid_step = o.common.grid_step;
  spec.sim_seed = o.seed;
  return spec;
}

int cmd_size(const SizeOpts& o) {
  const SystemParams sys = make_sys(o.common);
  const ChannelParams ch = make_ch(o.common);
  const SizingSpec spec = make_spec(o);
  const std::vector<TableEntry> table = b_star_table(o.n_list, sys, ch, spec);

  std::string n_list_str;
  for (size_t i = 0; i < o.n_list.size(); ++i)
    n_list_str += (i ? "," : "") + std::to_string(o.n_list[i]);
  write_with_manifest("size", o.common,
                      {{"model", o.model},
                       {"n-list", n_list_str},
                       {"outage-target", io::fmt(o.outage_target)},
                       {"b-init", std::to_string(o.b_init)},
                       {"b-step", std::to_string(o.b_step)},
                       {"b-max", std::to_string(o.b_max)}},
                      {{o.common.out + "_table.csv", io::table_csv(table, spec.model)}});
  for (const auto& e : table) {
    std::cout << "N=" << e.n_ues << " -> "
              << (e.result.feasible() ? "B*=" + std::to_string(*e.result.b_star)
                                      : "infeasible (" + e.result.reason + ")")
              << std::endl;
  }
  return 0;
}

// ---------------------------------------------------------------- dynamic

struct DynamicOpts {
  CommonOpts common;
  int n_bar = 60;
  double p_leave = 2.3e-6;
  std::string table_file;
  bool auto_table = false;
  std::string table_model = "full";
  int n_lo = 0, n_hi = 0;
  uint64_t horizon_ttis = 0;
  double packets_min = 0;
  uint64_t warmup_ttis = 100000;
  uint64_t seed = 1;
  int replications = 1;
};

int cmd_dynamic(const DynamicOpts& o) {
  if (o.table_file.empty() && !o.auto_table)
    throw Error(ErrorCode::ConfigError, "need --table FILE or --auto-table");
  if (o.horizon_ttis == 0 && o.packets_min <= 0)
    throw Error(ErrorCode::ConfigError, "need --horizon-ttis or --packets-min");

  CommonOpts common = o.common;
  common.n = o.n_bar;
  const ChannelParams ch = make_ch(common);

  std::map<int, int> table;
  std::string table_csv_out;
  if (o.auto_table) {
    const int lo = o.n_lo > 0 ? o.n_lo : std::max(2, o.n_bar / 2);
    const int hi = o.n_hi > 0 ? o.n_hi : 2 * o.n_bar;
    std::vector<int> n_range;
    for (int n = lo; n <= hi; ++n) n_range.push_back(n);
    SizeOpts so;
    so.common = common;
    so.model = o.table_model;
    const SizingSpec spec = make_spec(so);
    const auto entries = b_star_table(n_range, make_sys(common), ch, spec);
    for (const auto& e : entries) {
      if (!e.result.feasible())
        throw Error(ErrorCode::TableMiss,
                    "auto-table infeasible at N=" + std::to_string(e.n_ues));
      table[e.n_ues] = *e.result.b_star;
    }
    table_csv_out = io::table_csv(entries, spec.model);
  } else {
    std::ifstream in(o.table_file);
    if (!in) throw Error(ErrorCode::ConfigError, "cannot read " + o.table_file);
    std::stringstream ss;
    ss << in.rdbuf();
    table = io::parse_table_csv(ss.str());
    if (table.empty()) throw Error(ErrorCode::TableMiss, "table has no feasible rows");
  }

  SimConfig cfg;
  cfg.sys = SystemParams(o.n_bar, table.count(o.n_bar) ? table.at(o.n_bar) : o.common.b,
                         o.common.lambda_per_s, o.common.tti_s);
  cfg.ch = ch;
  cfg.warmup_ttis = o.warmup_ttis;
  cfg.seed = o.seed;
  cfg.outage_threshold_tti = threshold_tti(o.common);
  DynamicConfig dyn;
  dyn.p_leave_per_tti = o.p_leave;
  dyn.n_bar = o.n_bar;
  dyn.b_star_table = table;
  cfg.dynamic = dyn;

  SimStats stats =
      run_replicated(cfg, o.replications, static_cast<uint64_t>(o.packets_min), o.horizon_ttis);

  const double n = stats.delivered();
  const double p = stats.outage_fraction();
  const double se = n > 0 ? std::sqrt(std::max(p * (1.0 - p), 0.0) / n) : 0.0;
  json j;
  j["delivered"] = stats.n_success;
  j["exceed"] = stats.n_exceed_threshold;
  j["outage"] = p;
  j["ci99_lo"] = std::max(0.0, p - 2.5758 * se);
  j["ci99_hi"] = p + 2.5758 * se;
  j["churn_events"] = stats.churn_log.size();
  j["n_bar"] = o.n_bar;
  j["p_leave_per_tti"] = o.p_leave;
  j["table_model"] = o.auto_table ? o.table_model : std::string("file");
  j["replications"] = o.replications;

  std::vector<std::pair<std::string, std::string>> files;
  files.emplace_back(common.out + "_outage.json", j.dump(2) + "\n");
  files.emplace_back(common.out + "_churn.csv", io::churn_csv(stats));
  if (!table_csv_out.empty()) files.emplace_back(common.out + "_table.csv", table_csv_out);
  write_with_manifest("dynamic", common,
                      {{"n-bar", std::to_string(o.n_bar)},
                       {"p-leave", io::fmt(o.p_leave)},
                       {"table", o.auto_table ? "auto:" + o.table_model : o.table_file},
                       {"packets-min", io::fmt(o.packets_min)},
                       {"horizon-ttis", std::to_string(o.horizon_ttis)},
                       {"seed", std::to_string(o.seed)},
                       {"replications", std::to_string(o.replications)}},
                      files);
  std::cout << j.dump(2) << std::endl;
  return 0;
}

// ---------------------------------------------------------------- compare

struct CompareOpts {
  SimulateOpts sim;
  std::string model = "full";
  double ccdf_floor = 1e-5;
};

int cmd_compare(const CompareOpts& o) {
  const SystemParams sys = make_sys(o.sim.common);
  const ChannelParams ch = make_ch(o.sim.common);

  DelayDistribution analytic;
  if (o.model == "no-1pr" || o.model == "no_1pr") {
    analytic = delay_no_1pr(sys, ch, o.sim.common.grid_step);
  } else if (o.model == "no-queue" || o.model == "no_queue") {
    analytic = delay_no_queue(solve_simplified(sys, ch), o.sim.common.grid_step);
  } else {
    analytic = delay_distribution(solve_simplified(sys, ch), sys, o.sim.common.grid_step);
  }

  if (o.sim.horizon_ttis == 0 && o.sim.packets_min <= 0)
    throw Error(ErrorCode::ConfigError, "need --horizon-ttis or --packets-min");
  SimConfig cfg = make_sim_config(o.sim);
  SimStats stats = run_replicated(cfg, o.sim.replications,
                                  static_cast<uint64_t>(o.sim.packets_min), o.sim.horizon_ttis);
  const DelayDistribution emp = empirical_ccdf(stats, o.sim.common.grid_step);

  double max_gap = 0.0, at_t = 0.0;
  size_t n_points = 0;
  const size_t n = std::min(analytic.ccdf.size(), emp.ccdf.size());
  for (size_t k = 0; k < n; ++k) {
    const double a = analytic.ccdf[k];
    const double e = emp.ccdf[k];
    if (a < o.ccdf_floor || e < o.ccdf_floor) continue;
    ++n_points;
    const double gap = std::abs(a - e) / std::max(a, e);
    if (gap > max_gap) {
      max_gap = gap;
      at_t = static_cast<double>(k) * analytic.grid_step;
    }
  }
  json j;
  j["model"] = o.model;
  j["max_rel_gap"] = max_gap;
  j["at_t_tti"] = at_t;
  j["n_points_compared"] = n_points;
  j["ccdf_floor"] = o.ccdf_floor;
  j["delivered"] = stats.n_success;

  write_with_manifest("compare", o.sim.common,
                      {{"model", o.model},
                       {"ccdf-floor", io::fmt(o.ccdf_floor)},
                       {"packets-min", io::fmt(o.sim.packets_min)},
                       {"horizon-ttis", std::to_string(o.sim.horizon_ttis)},
                       {"seed", std::to_string(o.sim.seed)},
                       {"replications", std::to_string(o.sim.replications)}},
                      {{o.sim.common.out + "_compare.csv", io::compare_csv(analytic, emp)},
                       {o.sim.common.out + "_compare.json", j.dump(2) + "\n"}});
  std::cout << j.dump(2) << std::endl;
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"gfa-lab: grant-free access delay laboratory"};
  app.require_subcommand(1);

  AnalyticOpts ao;
  auto* analytic = app.add_subcommand("analytic", "evaluate a delay model");
  add_common(analytic, ao.common);
  analytic->add_option("--model", ao.model, "full | no-1pr | no-queue");
  analytic->add_flag("--attempt-rates", ao.attempt_rates,
                     "solve the full retransmission chain instead of a delay law");

  SimulateOpts so;
  auto* simulate = app.add_subcommand("simulate", "run the protocol simulator");
  add_common(simulate, so.common);
  simulate->add_option("--horizon-ttis", so.horizon_ttis, "TTIs to simulate");
  simulate->add_option("--packets-min", so.packets_min, "run until this many deliveries");
  simulate->add_option("--warmup-ttis", so.warmup_ttis, "TTIs discarded before measuring");
  simulate->add_option("--seed", so.seed, "RNG seed");
  simulate->add_option("--replications", so.replications, "parallel replications");
  simulate->add_flag("--record-delays", so.record_delays, "export raw per-packet delays");

  SizeOpts zo;
  auto* size = app.add_subcommand("size", "find minimum RB counts");
  add_common(size, zo.common);
  size->add_option("--n-list", zo.n_list, "UE populations to size")->delimiter(',');
  size->add_option("--model", zo.model, "full | no-1pr | no-queue | simulation");
  size->add_option("--outage-target", zo.outage_target, "outage target");
  size->add_option("--b-init", zo.b_init, "initial B");
  size->add_option("--b-step", zo.b_step, "coarse step");
  size->add_option("--b-max", zo.b_max, "search cap");
  size->add_option("--seed", zo.seed, "seed for simulation-backed sizing");

  DynamicOpts dy;
  auto* dynamic = app.add_subcommand("dynamic", "churning-population scenario");
  add_common(dynamic, dy.common);
  dynamic->add_option("--n-bar", dy.n_bar, "mean UE population");
  dynamic->add_option("--p-leave", dy.p_leave, "per-TTI departure probability");
  dynamic->add_option("--table", dy.table_file, "B* table CSV");
  dynamic->add_flag("--auto-table", dy.auto_table, "build the table analytically");
  dynamic->add_option("--table-model", dy.table_model, "model for --auto-table");
  dynamic->add_option("--n-lo", dy.n_lo, "auto-table lower N");
  dynamic->add_option("--n-hi", dy.n_hi, "auto-table upper N");
  dynamic->add_option("--horizon-ttis", dy.horizon_ttis, "TTIs to simulate");
  dynamic->add_option("--packets-min", dy.packets_min, "run until this many deliveries");
  dynamic->add_option("--warmup-ttis", dy.warmup_ttis, "warm-up TTIs");
  dynamic->add_option("--seed", dy.seed, "RNG seed");
  dynamic->add_option("--replications", dy.replications, "parallel replications");

  CompareOpts co;
  auto* compare = app.add_subcommand("compare", "analytic vs simulated CCDF");
  add_common(compare, co.sim.common);
  compare->add_option("--model", co.model, "analytic model to compare");
  compare->add_option("--ccdf-floor", co.ccdf_floor, "compare only above this level");
  compare->add_option("--horizon-ttis", co.sim.horizon_ttis, "TTIs to simulate");
  compare->add_option("--packets-min", co.sim.packets_min, "run until this many deliveries");
  compare->add_option("--warmup-ttis", co.sim.warmup_ttis, "warm-up TTIs");
  compare->add_option("--seed", co.sim.seed, "RNG seed");
  compare->add_option("--replications", co.sim.replications, "parallel replications");

  try {
    const std::vector<std::string> expanded = apply_config_file(args);
    std::vector<std::string> rargs(expanded.rbegin(), expanded.rend());
    app.parse(rargs);
  } catch (const Error& e) {
    std::cout << R"({"error": ")" << e.code_name() << R"(", "detail": ")" << e.what() << "\"}"
              << std::endl;
    return 1;
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (analytic->parsed()) return cmd_analytic(ao);
    if (simulate->parsed()) return cmd_simulate(so);
    if (size->parsed()) return cmd_size(zo);
    if (dynamic->parsed()) return cmd_dynamic(dy);
    if (compare->parsed()) return cmd_compare(co);
  } catch (const Error& e) {
    json err;
    err["error"] = e.code_name();
    err["detail"] = e.what();
    std::cout << err.dump() << std::endl;
    switch (e.code()) {
      case ErrorCode::NoFixedPoint:
      case ErrorCode::Unstable:
      case ErrorCode::NoRealRoot:
      case ErrorCode::TableMiss:
        return 2;
      default:
        return 1;
    }
  } catch (const std::exception& e) {
    std::cout << R"({"error": "InternalError", "detail": ")" << e.what() << "\"}" << std::endl;
    return 1;
  }
  return 1;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args);
}

}  // namespace gfa
