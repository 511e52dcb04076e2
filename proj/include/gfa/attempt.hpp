#pragma once

#include <vector>

#include "gfa/params.hpp"

namespace gfa {

// Converged state of the full retransmission chain. g_r/p_r/pi_r are
// indexed by retransmission round, entry 0 being the first
// retransmission. attempt_rate_tti is the unconditional mean number of
// transmitting UEs per TTI (N*alpha/4); g_f is the rate seen by a tagged
// first transmission, alpha*(N-1)/4.
struct FullChainSolution {
  double g_f = 0.0;
  std::vector<double> g_r;
  double p_f = 0.0;
  std::vector<double> p_r;
  double alpha = 0.0;
  double pi_f = 0.0;
  std::vector<double> pi_r;
  double f_tilde = 0.0;
  double attempt_rate_tti = 0.0;
  double residual = 0.0;
  double truncation_tail = 0.0;  // limiting-probability mass beyond i_max
  bool truncation_warning = false;
  int iterations = 0;
};

// One step of the retransmission cascade: attempt rate seen in round i
// from the rate seen in round i-1 (g_prev) and the first-transmission
// rate g_f. With g_prev = g_f this is the first-retransmission formula.
double cascade_step(double g_prev, double g_f, const SystemParams& sys,
                    const ChannelParams& ch);

// Joint fixed point of limiting probabilities, attempt rates and success
// probabilities. Throws NoFixedPoint when the load admits no solution
// (alpha > 1 or success probabilities leave (0,1)).
FullChainSolution solve_full_chain(const SystemParams& sys, const ChannelParams& ch,
                                   int i_max = 25, double tol = 1e-12);

// Noiseless limit: g_f* = (N-1)*lambda_tti and
// g_r* = (1 - 1/(N-1)) g_f* + p1*(mu), identical for every round.
std::pair<double, double> ideal_limit(const SystemParams& sys, double mu);

}  // namespace gfa
