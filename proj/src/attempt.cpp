#include "gfa/attempt.hpp"

#include <algorithm>
#include <cmath>

#include "gfa/channel.hpp"
#include "gfa/errors.hpp"

namespace gfa {

double cascade_step(double g_prev, double g_f, const SystemParams& sys,
                    const ChannelParams& ch) {
  const double b = static_cast<double>(sys.n_rbs);
  const double ea = ch.exp_neg_mu_over_rho();
  const double num = g_prev / b * (1.0 - ea / (ch.mu + 1.0));
  if (num == 0.0) return g_f;  // no load in the previous round, no echo
  const double den = 1.0 - ea * (1.0 - ch.mu / (ch.mu + 1.0) * g_prev / b);
  const double collide_given_fail = num / den;  // Pr{S_1 | H}
  const double s = collide_given_fail / (sys.n_ues - 1);
  return (1.0 - s) * g_f + p1_closed(ch) * collide_given_fail;
}

FullChainSolution solve_full_chain(const SystemParams& sys, const ChannelParams& ch,
                                   int i_max, double tol) {
  sys.validate();
  if (i_max < 1) throw Error(ErrorCode::ConfigError, "i_max must be >= 1");
  if (!(tol > 0.0)) throw Error(ErrorCode::ConfigError, "tol must be > 0");

  const double lam = sys.lambda_tti();
  const double n = static_cast<double>(sys.n_ues);
  const double b = static_cast<double>(sys.n_rbs);
  const double ea = ch.exp_neg_mu_over_rho();

  const int kMaxIter = 100000;
  const double kDamping = 0.5;

  double p_f = ea;
  std::vector<double> p_r(static_cast<size_t>(i_max), ea);
  std::vector<double> g_r(static_cast<size_t>(i_max), 0.0);
  double alpha = 0.0, g_f = 0.0, pi_f = 0.0;
  double residual = 0.0;
  int iter = 0;

  for (iter = 0; iter < kMaxIter; ++iter) {
    // limiting probabilities for the current success probabilities
    double cum = 1.0;  // prod_{j<i} (1 - p_Rj), i = 1 gives the empty product
    double sum_terms = 0.0;
    for (int i = 0; i < i_max; ++i) {
      sum_terms += cum;
      cum *= (1.0 - p_r[static_cast<size_t>(i)]);
    }
    const double big_s = 1.0 + (1.0 - p_f) * sum_terms;
    pi_f = 1.0 / (2.0 * big_s);
    const double f_tilde = 0.5 * pi_f;
    alpha = lam / f_tilde;
    if (alpha > 1.0)
      throw Error(ErrorCode::NoFixedPoint, "non-empty probability exceeds 1 (overload)");
    g_f = alpha * (n - 1.0) / 4.0;

    // cascade of retransmission attempt rates
    double prev = g_f;
    for (int i = 0; i < i_max; ++i) {
      g_r[static_cast<size_t>(i)] = cascade_step(prev, g_f, sys, ch);
      prev = g_r[static_cast<size_t>(i)];
    }

    // refreshed success probabilities
    const double p_f_new = ch.success_vs_load(g_f, b);
    if (!(p_f_new > 0.0) || !(p_f_new < 1.0 + 1e-15))
      throw Error(ErrorCode::NoFixedPoint, "p_F left (0,1)");
    residual = std::abs(p_f_new - p_f);
    p_f += kDamping * (p_f_new - p_f);
    for (int i = 0; i < i_max; ++i) {
      const double p_new = ch.success_vs_load(g_r[static_cast<size_t>(i)], b);
      if (!(p_new > 0.0) || !(p_new < 1.0 + 1e-15))
        throw Error(ErrorCode::NoFixedPoint, "p_R left (0,1)");
      residual = std::max(residual, std::abs(p_new - p_r[static_cast<size_t>(i)]));
      p_r[static_cast<size_t>(i)] += kDamping * (p_new - p_r[static_cast<size_t>(i)]);
    }
    if (residual <= tol) break;
  }
  if (residual > tol)
    throw Error(ErrorCode::NoFixedPoint, "fixed-point iteration did not converge");

  FullChainSolution sol;
  sol.p_f = p_f;
  sol.p_r = p_r;

  // final consistent pass
  double cum = 1.0, sum_terms = 0.0;
  std::vector<double> cums(static_cast<size_t>(i_max));
  for (int i = 0; i < i_max; ++i) {
    sum_terms += cum;
    cums[static_cast<size_t>(i)] = cum;  // prod_{j<i+1 ... } for pi_R_{i+1}
    cum *= (1.0 - p_r[static_cast<size_t>(i)]);
  }
  const double big_s = 1.0 + (1.0 - p_f) * sum_terms;
  sol.pi_f = 1.0 / (2.0 * big_s);
  sol.f_tilde = 0.5 * sol.pi_f;
  sol.alpha = lam / sol.f_tilde;
  sol.g_f = sol.alpha * (n - 1.0) / 4.0;
  sol.attempt_rate_tti = n * sol.alpha / 4.0;
  sol.pi_r.resize(static_cast<size_t>(i_max));
  for (int i = 0; i < i_max; ++i)
    sol.pi_r[static_cast<size_t>(i)] = (1.0 - p_f) * cums[static_cast<size_t>(i)] * sol.pi_f;
  sol.g_r.resize(static_cast<size_t>(i_max));
  double prev = sol.g_f;
  for (int i = 0; i < i_max; ++i) {
    sol.g_r[static_cast<size_t>(i)] = cascade_step(prev, sol.g_f, sys, ch);
    prev = sol.g_r[static_cast<size_t>(i)];
  }
  sol.residual = residual;
  sol.iterations = iter + 1;

  // mass beyond the truncation (states R_i, W_Ri for i > i_max)
  const double p_last = p_r.back();
  const double tail_sum = p_last > 0.0 ? cum / p_last : 1e300;
  sol.truncation_tail = 4.0 * sol.pi_f * 0.5 * (1.0 - p_f) * tail_sum;
  sol.truncation_warning = sol.truncation_tail > 1e-12;
  return sol;
}

std::pair<double, double> ideal_limit(const SystemParams& sys, double mu) {
  sys.validate();
  if (!(mu > 0.0)) throw Error(ErrorCode::ConfigError, "mu must be > 0");
  const double n = static_cast<double>(sys.n_ues);
  const double g_f_star = (n - 1.0) * sys.lambda_tti();
  const double g_r_star = (1.0 - 1.0 / (n - 1.0)) * g_f_star + p1_star(mu);
  return {g_f_star, g_r_star};
}

}  // namespace gfa
