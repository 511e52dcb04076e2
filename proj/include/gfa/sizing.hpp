#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gfa/params.hpp"

namespace gfa {

enum class SizingModel { full, no_1pr, no_queue, simulation };

std::string to_string(SizingModel m);
SizingModel sizing_model_from_string(const std::string& s);

struct SizingSpec {
  SizingModel model = SizingModel::full;
  double outage_target = 1e-5;
  double threshold_tti = 7.0;
  int b_init = 8;
  int b_step = 8;
  int b_max = 500;
  double grid_step = 0.01;
  // simulation-backed search
  uint64_t sim_seed = 1;
  int sim_replications = 2;
  uint64_t sim_chunk_delivered = 2000000;
  uint64_t sim_max_delivered = 400000000;
  double sim_ci_z = 2.5758;  // 99% two-sided
};

struct BStarResult {
  std::optional<int> b_star;             // empty when infeasible
  double outage_at_b_star = 1.0;
  std::string reason;                    // set when infeasible
  bool monotone_fallback = false;        // linear scan was needed
  bool feasible() const { return b_star.has_value(); }
};

// Smallest B in [b_init reachable range .. b_max] with outage <= target
// under the chosen delay model. Coarse ascent by b_step, then binary
// refinement; minimality is re-verified and a linear scan takes over if
// the outage turned out non-monotone in B.
BStarResult find_b_star(const SystemParams& sys, const ChannelParams& ch,
                        const SizingSpec& spec);

struct TableEntry {
  int n_ues = 0;
  BStarResult result;
};

// One find_b_star per N; entries are independent and computed
// concurrently.
std::vector<TableEntry> b_star_table(const std::vector<int>& n_range,
                                     const SystemParams& sys_template, const ChannelParams& ch,
                                     const SizingSpec& spec);

}  // namespace gfa
