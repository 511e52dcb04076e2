#pragma once

#include <cstdint>
#include <vector>

#include "gfa/params.hpp"

namespace gfa {

// Probability that a packet is decoded when k other packets share its RB:
// exp(-mu/rho) / (mu+1)^k. Decreasing in k and in mu.
double success_prob_given_k(int k, const ChannelParams& ch);

// Closed form of p1: the probability that the UE colliding with a tagged
// UE also fails, given the tagged UE failed its transmission. Two
// branches over mu <= 1 / mu > 1.
double p1_closed(const ChannelParams& ch);

// Noiseless limit of p1: 0 for mu <= 1, 1 - 1/mu for mu > 1.
double p1_star(double mu);

struct QuadratureSpec {
  double abs_tol = 1e-10;
  int max_depth = 60;
  // integration cut-off where exp(-x) drops below ~1e-17
  double tail_cut = 39.0;
};

// Independent oracle for p1_closed: evaluates the double integral of
// exp(-g1-g2) over the region where both colliding packets miss the SINR
// threshold, divided by the single-packet failure probability. Adaptive
// quadrature; throws QuadratureError if the tolerance is not reached.
double p1_numeric(const ChannelParams& ch, const QuadratureSpec& spec = {});

// Capture-effect decoding of one RB. powers[i] is the mean received
// power of packet i (linear), fades[i] its Exp(1) channel gain. Every
// packet is tested independently against threshold mu with the others as
// interference. Returns indices of decoded packets.
std::vector<int> decode_rb(const std::vector<double>& powers, const ChannelParams& ch,
                           const std::vector<double>& fades);

// Equal-power fast path used by the simulator: decoded iff
// fade_j * (1 + mu) >= mu * (inv_rho + fade_sum).
inline bool captures(double fade, double fade_sum, const ChannelParams& ch) {
  return fade * (1.0 + ch.mu) >= ch.mu * (ch.inv_rho + fade_sum);
}

}  // namespace gfa
