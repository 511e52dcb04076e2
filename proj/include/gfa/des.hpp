#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <tuple>
#include <vector>

#include "gfa/mg1.hpp"
#include "gfa/params.hpp"

namespace gfa {

// Slowly churning UE population: per-TTI departure probability, target
// mean population and the N -> B* lookup the BS applies on every change.
struct DynamicConfig {
  double p_leave_per_tti = 0.0;
  int n_bar = 0;
  std::map<int, int> b_star_table;
};

struct SimConfig {
  SystemParams sys;
  ChannelParams ch;
  uint64_t horizon_ttis = 0;
  uint64_t warmup_ttis = 100000;
  uint64_t seed = 1;
  std::optional<DynamicConfig> dynamic;
  double outage_threshold_tti = 7.0;
  double bin_step = 0.01;
  bool record_samples = false;
  size_t record_cap = 1 << 20;
};

struct PacketSample {
  double delay;            // TTIs, arrival to end of BS processing
  int transmissions;       // attempts including the first
  double align_plus_wait;  // first transmission start - arrival
};

struct SimStats {
  double bin_step = 0.01;
  double outage_threshold_tti = 7.0;
  // ceil binning: bin b counts delays in ((b-1)*bin_step, b*bin_step]
  std::vector<uint64_t> delay_histogram;
  uint64_t n_success = 0;
  uint64_t n_exceed_threshold = 0;
  uint64_t n_arrivals = 0;
  uint64_t still_queued = 0;
  uint64_t churned_away = 0;
  uint64_t measured_ttis = 0;
  uint64_t total_transmissions = 0;
  std::vector<uint64_t> attempts_success;  // by round, 0 = first transmission
  std::vector<uint64_t> attempts_fail;
  std::vector<double> sum_others;  // by round: sum of concurrent transmitters - 1
  std::vector<uint64_t> rb_counts;
  std::vector<PacketSample> samples;
  std::vector<std::tuple<uint64_t, int, int>> churn_log;  // (tti, N_t, B_t)

  void merge(const SimStats& other);
  double delivered() const { return static_cast<double>(n_success); }
  double outage_fraction() const {
    return n_success ? static_cast<double>(n_exceed_threshold) / n_success : 0.0;
  }
};

// Incremental simulator, usable both for fixed-horizon runs and for
// run-until-N-delivered sampling.
class Simulator {
 public:
  explicit Simulator(const SimConfig& config);
  ~Simulator();
  Simulator(Simulator&&) noexcept;
  Simulator& operator=(Simulator&&) noexcept;

  // Advance until `delivered_target` post-warmup packets are delivered or
  // `horizon_ttis` is reached; either may be 0 for "no bound" (not both).
  void run_until(uint64_t delivered_target, uint64_t horizon_ttis);

  // Close the measurement window (materializes outstanding arrivals so
  // conservation holds) and return the statistics.
  const SimStats& finish();

  // Running counters without closing the window (conservation fields are
  // not final).
  const SimStats& peek() const;

  uint64_t current_tti() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Fixed-horizon static-population run.
SimStats run(const SimConfig& config);

// Churn scenario; requires config.dynamic.
SimStats run_dynamic(const SimConfig& config);

// Right-continuous empirical CCDF on a grid whose step must be a
// multiple of the histogram bin step.
DelayDistribution empirical_ccdf(const SimStats& stats, double grid_step);

struct RoundRate {
  int round = 0;            // 0 = first transmission
  uint64_t attempts = 0;
  double success_fraction = 0.0;
  double g_hat = 0.0;       // mean concurrent transmitters seen, excluding self
};

struct AttemptRateReport {
  std::vector<RoundRate> rounds;
  double tx_per_tti = 0.0;  // unconditional mean transmitters per TTI
};

// Per-round empirical attempt rates; requires at least `min_events`
// samples in every round up to `n_rounds`.
AttemptRateReport measure_attempt_rates(const SimStats& stats, int n_rounds,
                                        uint64_t min_events = 100);

}  // namespace gfa
