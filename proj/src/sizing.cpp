#include "gfa/sizing.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>

#include "gfa/des.hpp"
#include "gfa/errors.hpp"
#include "gfa/mg1.hpp"

namespace gfa {

std::string to_string(SizingModel m) {
  switch (m) {
    case SizingModel::full: return "full";
    case SizingModel::no_1pr: return "no_1pr";
    case SizingModel::no_queue: return "no_queue";
    case SizingModel::simulation: return "simulation";
  }
  return "?";
}

SizingModel sizing_model_from_string(const std::string& s) {
  if (s == "full") return SizingModel::full;
  if (s == "no_1pr" || s == "no-1pr") return SizingModel::no_1pr;
  if (s == "no_queue" || s == "no-queue") return SizingModel::no_queue;
  if (s == "simulation" || s == "sim") return SizingModel::simulation;
  throw Error(ErrorCode::ConfigError, "unknown sizing model: " + s);
}

namespace {

double analytic_outage(const SystemParams& sys, const ChannelParams& ch,
                       const SizingSpec& spec) {
  switch (spec.model) {
    case SizingModel::no_1pr: {
      const DelayDistribution d = delay_no_1pr(sys, ch, spec.grid_step);
      return outage(d, spec.threshold_tti);
    }
    case SizingModel::no_queue: {
      const SimplifiedSolution sol = solve_simplified(sys, ch);
      const DelayDistribution d = delay_no_queue(sol, spec.grid_step);
      return outage(d, spec.threshold_tti);
    }
    case SizingModel::full:
    default: {
      const SimplifiedSolution sol = solve_simplified(sys, ch);
      // cheap exact lower bound P(X >= 12) <= P_o saves the convolution
      // pass for hopeless B
      const double lb = (1.0 - sol.p_f_hat) * (1.0 - sol.p_r_hat);
      if (lb > spec.outage_target) return lb;
      const DelayDistribution d = delay_distribution(sol, sys, spec.grid_step);
      return outage(d, spec.threshold_tti);
    }
  }
}

// Sequential-sampling simulated outage: extends the run until the 99% CI
// excludes the target or the sample budget is exhausted.
double simulated_outage(const SystemParams& sys, const ChannelParams& ch,
                        const SizingSpec& spec) {
  SimConfig cfg;
  cfg.sys = sys;
  cfg.ch = ch;
  cfg.seed = spec.sim_seed;
  cfg.outage_threshold_tti = spec.threshold_tti;
  uint64_t delivered_goal = spec.sim_chunk_delivered;
  Simulator sim(cfg);
  for (;;) {
    sim.run_until(delivered_goal, 0);
    const SimStats& snap = sim.peek();
    const double n = snap.delivered();
    if (n == 0.0) return 1.0;
    const double p = snap.outage_fraction();
    const double se = std::sqrt(std::max(p * (1.0 - p), 1e-300) / n);
    const double lo = p - spec.sim_ci_z * se;
    const double hi = p + spec.sim_ci_z * se;
    if (hi < spec.outage_target || lo > spec.outage_target ||
        n >= static_cast<double>(spec.sim_max_delivered))
      return p;
    delivered_goal += spec.sim_chunk_delivered;
  }
}

}  // namespace

BStarResult find_b_star(const SystemParams& sys, const ChannelParams& ch,
                        const SizingSpec& spec) {
  if (!(spec.outage_target > 0.0) || !(spec.outage_target < 1.0))
    throw Error(ErrorCode::ConfigError, "outage_target must be in (0,1)");
  if (spec.b_step < 1) throw Error(ErrorCode::ConfigError, "b_step must be >= 1");
  if (spec.b_init < 1 || spec.b_max < spec.b_init)
    throw Error(ErrorCode::ConfigError, "need 1 <= b_init <= b_max");

  std::map<int, double> memo;
  auto eval = [&](int b) {
    auto it = memo.find(b);
    if (it != memo.end()) return it->second;
    SystemParams s = sys;
    s.n_rbs = b;
    double p;
    try {
      p = spec.model == SizingModel::simulation ? simulated_outage(s, ch, spec)
                                                : analytic_outage(s, ch, spec);
    } catch (const Error& e) {
      // no fixed point / unstable at this B: treat as total outage
      p = 1.0 + 1e-9;
    }
    memo[b] = p;
    return p;
  };

  BStarResult res;
  const double target = spec.outage_target;

  int lo, hi;  // bracket: outage(lo) > target >= outage(hi)
  if (eval(spec.b_init) <= target) {
    // walk down for the lower edge
    hi = spec.b_init;
    lo = 0;
    int b = spec.b_init;
    while (b > 1) {
      b = std::max(1, b - spec.b_step);
      if (eval(b) > target) {
        lo = b;
        break;
      }
      hi = b;
    }
  } else {
    lo = spec.b_init;
    int b = spec.b_init;
    hi = -1;
    while (b < spec.b_max) {
      b = std::min(spec.b_max, b + spec.b_step);
      if (eval(b) <= target) {
        hi = b;
        break;
      }
      lo = b;
    }
    if (hi < 0) {
      res.reason = "no B <= " + std::to_string(spec.b_max) + " meets the target";
      return res;
    }
  }

  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    if (eval(mid) <= target)
      hi = mid;
    else
      lo = mid;
  }

  // minimality check; a non-monotone profile falls back to a linear scan
  if (hi > 1 && eval(hi - 1) <= target) {
    res.monotone_fallback = true;
    for (int b = 1; b <= spec.b_max; ++b) {
      if (eval(b) <= target) {
        hi = b;
        break;
      }
    }
  }

  res.b_star = hi;
  res.outage_at_b_star = eval(hi);
  return res;
}

std::vector<TableEntry> b_star_table(const std::vector<int>& n_range,
                                     const SystemParams& sys_template, const ChannelParams& ch,
                                     const SizingSpec& spec) {
  if (n_range.empty()) throw Error(ErrorCode::ConfigError, "empty N range");
  std::vector<TableEntry> table(n_range.size());
  const unsigned n_workers =
      std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                      static_cast<unsigned>(n_range.size())));
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(n_workers);
  for (unsigned w = 0; w < n_workers; ++w) {
    workers.emplace_back([&, w]() {
      try {
        for (size_t i = w; i < n_range.size(); i += n_workers) {
          SystemParams s = sys_template;
          s.n_ues = n_range[i];
          table[i].n_ues = n_range[i];
          table[i].result = find_b_star(s, ch, spec);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : workers) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return table;
}

}  // namespace gfa
