#include "gfa/des.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "gfa/channel.hpp"
#include "gfa/errors.hpp"
#include "gfa/rng.hpp"

namespace gfa {

namespace {

constexpr int kMaxRoundTracked = 64;
constexpr size_t kMaxHistBins = 1u << 22;  // ~42k TTIs at 0.01 bins
constexpr uint64_t kNoLimit = std::numeric_limits<uint64_t>::max();

// FIFO of arrival timestamps with cheap pop-front.
struct ArrivalQueue {
  std::vector<double> buf;
  size_t head = 0;
  bool empty() const { return head == buf.size(); }
  size_t size() const { return buf.size() - head; }
  double front() const { return buf[head]; }
  void push(double t) { buf.push_back(t); }
  void pop() {
    if (++head == buf.size()) {
      buf.clear();
      head = 0;
    } else if (head > 64 && head * 2 > buf.size()) {
      buf.erase(buf.begin(), buf.begin() + static_cast<long>(head));
      head = 0;
    }
  }
};

struct Ue {
  ArrivalQueue queue;
  double next_arrival = 0.0;
  Rng rng;
  uint32_t generation = 0;
  int attempts = 0;           // transmissions of the current HOL so far
  uint64_t first_tx_tti = 0;  // of the current HOL packet
  bool alive = false;
  bool idle_waiting = true;   // parked in the wake heap
};

struct HeapEntry {
  uint64_t tti;
  uint32_t slot;
  uint32_t generation;
  bool operator>(const HeapEntry& o) const { return tti > o.tti; }
};

}  // namespace

void SimStats::merge(const SimStats& other) {
  auto grow_u = [](std::vector<uint64_t>& a, const std::vector<uint64_t>& b) {
    if (b.size() > a.size()) a.resize(b.size(), 0);
    for (size_t i = 0; i < b.size(); ++i) a[i] += b[i];
  };
  auto grow_d = [](std::vector<double>& a, const std::vector<double>& b) {
    if (b.size() > a.size()) a.resize(b.size(), 0.0);
    for (size_t i = 0; i < b.size(); ++i) a[i] += b[i];
  };
  grow_u(delay_histogram, other.delay_histogram);
  n_success += other.n_success;
  n_exceed_threshold += other.n_exceed_threshold;
  n_arrivals += other.n_arrivals;
  still_queued += other.still_queued;
  churned_away += other.churned_away;
  measured_ttis += other.measured_ttis;
  total_transmissions += other.total_transmissions;
  grow_u(attempts_success, other.attempts_success);
  grow_u(attempts_fail, other.attempts_fail);
  grow_d(sum_others, other.sum_others);
  grow_u(rb_counts, other.rb_counts);
  samples.insert(samples.end(), other.samples.begin(), other.samples.end());
  if (churn_log.empty()) churn_log = other.churn_log;
}

struct Simulator::Impl {
  SimConfig cfg;
  std::vector<Ue> ues;
  std::vector<uint32_t> alive_ids;  // positions tracked in alive_pos
  std::vector<uint32_t> alive_pos;
  std::vector<uint32_t> free_slots;

  std::array<std::vector<uint64_t>, 8> ring;  // packed slot|gen<<32
  size_t ring_count = 0;
  std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<HeapEntry>> wake;

  int n_rbs = 0;
  Rng churn_rng;
  uint64_t churn_stream_counter = 0;
  uint64_t next_churn = kNoLimit;
  double lam = 0.0;

  uint64_t now = 0;  // next TTI to consider
  bool finished = false;
  SimStats stats;

  // scratch
  std::vector<uint32_t> tx_ues;
  std::vector<int> tx_rb;
  std::vector<double> tx_fade;

  explicit Impl(const SimConfig& config) : cfg(config) {
    cfg.sys.validate();
    if (cfg.dynamic) {
      if (!(cfg.dynamic->p_leave_per_tti >= 0.0) || !(cfg.dynamic->p_leave_per_tti < 1.0))
        throw Error(ErrorCode::ConfigError, "p_leave must be in [0,1)");
      if (cfg.dynamic->b_star_table.empty())
        throw Error(ErrorCode::ConfigError, "dynamic run needs a non-empty B* table");
    }
    lam = cfg.sys.lambda_tti();
    stats.bin_step = cfg.bin_step;
    stats.outage_threshold_tti = cfg.outage_threshold_tti;
    stats.attempts_success.assign(kMaxRoundTracked, 0);
    stats.attempts_fail.assign(kMaxRoundTracked, 0);
    stats.sum_others.assign(kMaxRoundTracked, 0.0);

    n_rbs = cfg.sys.n_rbs;
    int max_b = n_rbs;
    if (cfg.dynamic) {
      n_rbs = lookup_b(cfg.sys.n_ues);
      for (const auto& [n, b] : cfg.dynamic->b_star_table) max_b = std::max(max_b, b);
    }
    stats.rb_counts.assign(static_cast<size_t>(max_b), 0);

    churn_rng = Rng(cfg.seed, 0xC0FFEE00000000ULL);
    ues.reserve(static_cast<size_t>(cfg.sys.n_ues) * 2);
    for (int i = 0; i < cfg.sys.n_ues; ++i) spawn_ue(0.0);
    if (cfg.dynamic) schedule_churn();
  }

  int lookup_b(int n) const {
    auto it = cfg.dynamic->b_star_table.find(n);
    if (it == cfg.dynamic->b_star_table.end())
      throw Error(ErrorCode::TableMiss, "no B* entry for N = " + std::to_string(n));
    return it->second;
  }

  void spawn_ue(double t_join) {
    uint32_t slot;
    if (!free_slots.empty()) {
      slot = free_slots.back();
      free_slots.pop_back();
    } else {
      slot = static_cast<uint32_t>(ues.size());
      ues.emplace_back();
    }
    Ue& ue = ues[slot];
    ue.queue = ArrivalQueue{};
    ue.rng = Rng(cfg.seed, 1 + churn_stream_counter++);
    ue.generation++;
    ue.alive = true;
    ue.attempts = 0;
    ue.next_arrival = t_join + ue.rng.expo(lam);
    ue.idle_waiting = true;
    alive_pos.resize(ues.size(), 0);
    alive_pos[slot] = static_cast<uint32_t>(alive_ids.size());
    alive_ids.push_back(slot);
    push_wake(slot);
  }

  void remove_ue(uint32_t slot, uint64_t t) {
    Ue& ue = ues[slot];
    // account packets that leave the cell with the UE
    materialize(ue, static_cast<double>(t));
    for (size_t i = ue.queue.head; i < ue.queue.buf.size(); ++i)
      if (in_window(ue.queue.buf[i])) stats.churned_away++;
    ue.alive = false;
    ue.generation++;
    ue.queue = ArrivalQueue{};
    const uint32_t pos = alive_pos[slot];
    alive_ids[pos] = alive_ids.back();
    alive_pos[alive_ids[pos]] = pos;
    alive_ids.pop_back();
    free_slots.push_back(slot);
  }

  bool in_window(double arrival) const {
    return arrival >= static_cast<double>(cfg.warmup_ttis);
  }

  void push_wake(uint32_t slot) {
    Ue& ue = ues[slot];
    const uint64_t tti = static_cast<uint64_t>(std::floor(ue.next_arrival)) + 1;
    ue.idle_waiting = true;
    wake.push(HeapEntry{tti, slot, ue.generation});
  }

  // pull arrivals strictly before `up_to` into the queue
  void materialize(Ue& ue, double up_to) {
    while (ue.next_arrival < up_to) {
      ue.queue.push(ue.next_arrival);
      if (in_window(ue.next_arrival)) stats.n_arrivals++;
      ue.next_arrival += ue.rng.expo(lam);
    }
  }

  void schedule_ring(uint32_t slot, uint64_t tti) {
    ring[tti & 7].push_back(static_cast<uint64_t>(slot) |
                            (static_cast<uint64_t>(ues[slot].generation) << 32));
    ring_count++;
  }

  void schedule_churn() {
    // skip to the next TTI with any leave or join activity
    const double pl = cfg.dynamic->p_leave_per_tti;
    const auto n_t = static_cast<double>(alive_ids.size());
    const double mean_join =
        std::max(0.0, (2.0 * cfg.dynamic->n_bar - n_t) * pl);
    const double p0_leave = std::pow(1.0 - pl, n_t);
    const double p0_join = std::exp(-mean_join);
    const double q0 = p0_leave * p0_join;
    if (q0 >= 1.0) {
      next_churn = kNoLimit;
      return;
    }
    const double u = churn_rng.u01();
    const double skip = std::floor(std::log(u) / std::log(q0));
    next_churn = now + 1 + static_cast<uint64_t>(std::min(skip, 1e18));
  }

  int truncated_binomial(double n, double p, Rng& rng) {
    // L | L >= 1 for Binomial(n, p) via inversion
    const double q0 = std::pow(1.0 - p, n);
    double u = rng.u01() * (1.0 - q0);
    double pk = q0;
    int k = 0;
    double cum = 0.0;
    while (k < static_cast<int>(n)) {
      pk *= (n - k) / (k + 1.0) * (p / (1.0 - p));
      ++k;
      cum += pk;
      if (u <= cum) return k;
    }
    return std::max(1, k);
  }

  int truncated_poisson(double mean, Rng& rng) {
    const double q0 = std::exp(-mean);
    double u = rng.u01() * (1.0 - q0);
    double pk = q0;
    int k = 0;
    double cum = 0.0;
    while (k < 1000000) {
      pk *= mean / (k + 1.0);
      ++k;
      cum += pk;
      if (u <= cum) return k;
    }
    return 1;
  }

  void apply_churn(uint64_t t) {
    const double pl = cfg.dynamic->p_leave_per_tti;
    const auto n_before = static_cast<int>(alive_ids.size());
    const double mean_join = std::max(0.0, (2.0 * cfg.dynamic->n_bar - n_before) * pl);
    const double p0_leave = std::pow(1.0 - pl, static_cast<double>(n_before));
    const double p0_join = std::exp(-mean_join);

    // conditioned on "some activity this TTI"
    int leaves = 0, joins = 0;
    const double w_l = (1.0 - p0_leave) * p0_join;
    const double w_j = p0_leave * (1.0 - p0_join);
    const double w_b = (1.0 - p0_leave) * (1.0 - p0_join);
    double u = churn_rng.u01() * (w_l + w_j + w_b);
    if (u < w_l) {
      leaves = truncated_binomial(n_before, pl, churn_rng);
    } else if (u < w_l + w_j) {
      joins = truncated_poisson(mean_join, churn_rng);
    } else {
      leaves = truncated_binomial(n_before, pl, churn_rng);
      joins = truncated_poisson(mean_join, churn_rng);
    }
    leaves = std::min(leaves, n_before);
    for (int i = 0; i < leaves; ++i) {
      const uint32_t pick = churn_rng.below(static_cast<uint32_t>(alive_ids.size()));
      remove_ue(alive_ids[pick], t);
    }
    for (int i = 0; i < joins; ++i) spawn_ue(static_cast<double>(t));

    const auto n_after = static_cast<int>(alive_ids.size());
    if (n_after != n_before) {
      n_rbs = lookup_b(n_after);
      stats.churn_log.emplace_back(t, n_after, n_rbs);
    }
    schedule_churn();
  }

  // service bookkeeping after the decode outcome of a transmission that
  // started at TTI t
  void complete_or_retry(uint32_t slot, uint64_t t, bool success) {
    Ue& ue = ues[slot];
    if (!success) {
      ue.attempts++;
      schedule_ring(slot, t + 4);
      return;
    }
    const double arrival = ue.queue.front();
    const double delay = static_cast<double>(t) + 2.0 - arrival;
    if (in_window(arrival)) {
      stats.n_success++;
      if (delay > cfg.outage_threshold_tti) stats.n_exceed_threshold++;
      size_t bin = static_cast<size_t>(std::ceil(delay / cfg.bin_step));
      bin = std::min(bin, kMaxHistBins - 1);
      if (bin >= stats.delay_histogram.size())
        stats.delay_histogram.resize(std::max(bin + 1, stats.delay_histogram.size() * 2), 0);
      stats.delay_histogram[bin]++;
      if (cfg.record_samples && stats.samples.size() < cfg.record_cap) {
        stats.samples.push_back(
            {delay, ue.attempts + 1,
             static_cast<double>(ue.first_tx_tti) - arrival});
      }
    }
    ue.queue.pop();
    ue.attempts = 0;
    // HOL departs when ACK processing ends at t+4; the next packet (if
    // any arrived by then) starts at that boundary
    const double depart = static_cast<double>(t) + 4.0;
    materialize(ue, depart);
    if (!ue.queue.empty()) {
      ue.first_tx_tti = t + 4;
      schedule_ring(slot, t + 4);
    } else {
      push_wake(slot);
    }
  }

  void process_tti(uint64_t t, bool measured) {
    if (cfg.dynamic && t == next_churn) apply_churn(t);

    tx_ues.clear();

    // idle UEs whose first queued arrival aligns to this boundary
    while (!wake.empty() && wake.top().tti <= t) {
      const HeapEntry e = wake.top();
      wake.pop();
      if (e.slot >= ues.size()) continue;
      Ue& ue = ues[e.slot];
      if (!ue.alive || ue.generation != e.generation || !ue.idle_waiting) continue;
      materialize(ue, static_cast<double>(t));
      if (ue.queue.empty()) {  // arrival drifted past this boundary
        push_wake(e.slot);
        continue;
      }
      ue.idle_waiting = false;
      ue.attempts = 0;
      ue.first_tx_tti = t;
      tx_ues.push_back(e.slot);
    }

    // scheduled retransmissions / back-to-back services
    auto& slot_vec = ring[t & 7];
    for (uint64_t packed : slot_vec) {
      const auto slot = static_cast<uint32_t>(packed);
      const auto gen = static_cast<uint32_t>(packed >> 32);
      if (slot < ues.size() && ues[slot].alive && ues[slot].generation == gen)
        tx_ues.push_back(slot);
    }
    ring_count -= slot_vec.size();
    slot_vec.clear();

    if (tx_ues.empty()) return;

    const size_t m = tx_ues.size();
    tx_rb.resize(m);
    tx_fade.resize(m);
    for (size_t i = 0; i < m; ++i) {
      Ue& ue = ues[tx_ues[i]];
      tx_rb[i] = static_cast<int>(ue.rng.below(static_cast<uint32_t>(n_rbs)));
      tx_fade[i] = ue.rng.exp1();
      if (measured) stats.rb_counts[static_cast<size_t>(tx_rb[i])]++;
    }

    for (size_t i = 0; i < m; ++i) {
      double fade_sum = tx_fade[i];
      for (size_t j = 0; j < m; ++j)
        if (j != i && tx_rb[j] == tx_rb[i]) fade_sum += tx_fade[j];
      const bool ok = captures(tx_fade[i], fade_sum, cfg.ch);
      Ue& ue = ues[tx_ues[i]];
      if (measured) {
        const int round = std::min(ue.attempts, kMaxRoundTracked - 1);
        (ok ? stats.attempts_success : stats.attempts_fail)[static_cast<size_t>(round)]++;
        stats.sum_others[static_cast<size_t>(round)] += static_cast<double>(m - 1);
        stats.total_transmissions++;
      }
      complete_or_retry(tx_ues[i], t, ok);
    }
  }

  uint64_t next_event_tti() const {
    uint64_t best = kNoLimit;
    if (ring_count > 0) {
      for (uint64_t d = 0; d < 5; ++d) {
        if (!ring[(now + d) & 7].empty()) {
          best = now + d;
          break;
        }
      }
    }
    if (!wake.empty()) best = std::min(best, std::max(wake.top().tti, now));
    if (cfg.dynamic) best = std::min(best, std::max(next_churn, now));
    return best;
  }

  void run_until(uint64_t delivered_target, uint64_t horizon) {
    if (delivered_target == 0) delivered_target = kNoLimit;
    if (horizon == 0) horizon = kNoLimit;
    if (delivered_target == kNoLimit && horizon == kNoLimit)
      throw Error(ErrorCode::ConfigError, "run_until needs a bound");
    while (stats.n_success < delivered_target) {
      const uint64_t t = next_event_tti();
      if (t >= horizon) {
        now = horizon;
        return;
      }
      now = t;
      process_tti(t, t >= cfg.warmup_ttis);
      now = t + 1;
    }
  }

  void finish() {
    if (finished) return;
    finished = true;
    stats.measured_ttis = now > cfg.warmup_ttis ? now - cfg.warmup_ttis : 0;
    // close the arrival window at `now` so conservation is exact
    for (uint32_t slot : alive_ids) {
      Ue& ue = ues[slot];
      materialize(ue, static_cast<double>(now));
      for (size_t i = ue.queue.head; i < ue.queue.buf.size(); ++i)
        if (in_window(ue.queue.buf[i])) stats.still_queued++;
    }
  }
};

Simulator::Simulator(const SimConfig& config) : impl_(std::make_unique<Impl>(config)) {}
Simulator::~Simulator() = default;
Simulator::Simulator(Simulator&&) noexcept = default;
Simulator& Simulator::operator=(Simulator&&) noexcept = default;

void Simulator::run_until(uint64_t delivered_target, uint64_t horizon_ttis) {
  impl_->run_until(delivered_target, horizon_ttis);
}

const SimStats& Simulator::finish() {
  impl_->finish();
  return impl_->stats;
}

const SimStats& Simulator::peek() const { return impl_->stats; }

uint64_t Simulator::current_tti() const { return impl_->now; }

SimStats run(const SimConfig& config) {
  if (config.dynamic)
    throw Error(ErrorCode::ConfigError, "run() is for static populations; use run_dynamic");
  if (config.horizon_ttis == 0)
    throw Error(ErrorCode::ConfigError, "horizon_ttis must be > 0");
  if (config.horizon_ttis <= config.warmup_ttis)
    throw Error(ErrorCode::ConfigError, "horizon must exceed warmup");
  Simulator sim(config);
  sim.run_until(0, config.horizon_ttis);
  return sim.finish();
}

SimStats run_dynamic(const SimConfig& config) {
  if (!config.dynamic)
    throw Error(ErrorCode::ConfigError, "run_dynamic needs a dynamic config");
  if (config.horizon_ttis == 0)
    throw Error(ErrorCode::ConfigError, "horizon_ttis must be > 0");
  Simulator sim(config);
  sim.run_until(0, config.horizon_ttis);
  return sim.finish();
}

DelayDistribution empirical_ccdf(const SimStats& stats, double grid_step) {
  if (stats.n_success == 0)
    throw Error(ErrorCode::EmptyStats, "no delivered packets");
  const double ratio = grid_step / stats.bin_step;
  const auto m = static_cast<size_t>(std::lround(ratio));
  if (m < 1 || std::abs(ratio - static_cast<double>(m)) > 1e-9)
    throw Error(ErrorCode::ConfigError, "grid_step must be a multiple of the bin step");
  const size_t n_bins = stats.delay_histogram.size();
  const size_t n_grid = n_bins / m + 2;
  DelayDistribution d;
  d.grid_step = grid_step;
  d.label = DelayModel::empirical;
  d.ccdf.assign(n_grid, 0.0);
  // suffix[j] = #bins >= j; bin b holds delays in ((b-1)*s, b*s], so
  // #{delay > k*grid_step} = suffix[k*m + 1] exactly (ceil binning)
  std::vector<uint64_t> suffix(n_bins + 1, 0);
  for (size_t b = n_bins; b-- > 0;) suffix[b] = suffix[b + 1] + stats.delay_histogram[b];
  const auto n = static_cast<double>(stats.n_success);
  for (size_t k = 0; k < n_grid; ++k) {
    const size_t j = std::min(k * m + 1, n_bins);
    d.ccdf[k] = static_cast<double>(suffix[j]) / n;
  }
  return d;
}

AttemptRateReport measure_attempt_rates(const SimStats& stats, int n_rounds,
                                        uint64_t min_events) {
  AttemptRateReport rep;
  if (stats.measured_ttis > 0)
    rep.tx_per_tti =
        static_cast<double>(stats.total_transmissions) / static_cast<double>(stats.measured_ttis);
  for (int r = 0; r < n_rounds; ++r) {
    const auto ri = static_cast<size_t>(r);
    const uint64_t succ = ri < stats.attempts_success.size() ? stats.attempts_success[ri] : 0;
    const uint64_t fail = ri < stats.attempts_fail.size() ? stats.attempts_fail[ri] : 0;
    const uint64_t events = succ + fail;
    if (events < min_events)
      throw Error(ErrorCode::InsufficientSamples,
                  "round " + std::to_string(r) + " has " + std::to_string(events) + " events");
    RoundRate rr;
    rr.round = r;
    rr.attempts = events;
    rr.success_fraction = static_cast<double>(succ) / static_cast<double>(events);
    rr.g_hat = stats.sum_others[ri] / static_cast<double>(events);
    rep.rounds.push_back(rr);
  }
  return rep;
}

}  // namespace gfa
