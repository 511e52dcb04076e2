#pragma once

#include <map>
#include <string>
#include <vector>

#include "gfa/grid_law.hpp"
#include "gfa/params.hpp"

namespace gfa {

// Fixed point of the four-state chain: non-empty probability, attempt
// rates and per-attempt success probabilities.
struct SimplifiedSolution {
  double alpha_hat = 0.0;
  double g_f_hat = 0.0;
  double g_r_hat = 0.0;
  double p_f_hat = 0.0;
  double p_r_hat = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

SimplifiedSolution solve_simplified(const SystemParams& sys, const ChannelParams& ch,
                                    double tol = 1e-13);

// Service-time law on the 4-TTI lattice.
struct ServiceTimeDist {
  std::map<int, double> pmf;  // x in TTIs (4, 8, 12, ...) -> probability
  double mean = 0.0;          // closed form 4(1 + pR - pF)/pR
  double second_moment = 0.0;
};

ServiceTimeDist service_pmf(const SimplifiedSolution& sol, double eps_trunc = 1e-16);

enum class DelayModel { full, no_1pr, no_queue, empirical };

std::string to_string(DelayModel m);

// User-plane delay law, queryable as a CCDF on a uniform grid. All times
// in TTIs. atoms is kept for laws with true point masses; the delay laws
// themselves are atom-free (the alignment term smooths every lattice
// component).
struct DelayDistribution {
  double grid_step = 0.01;
  std::vector<double> ccdf;  // ccdf[k] = P(D > k*grid_step)
  std::vector<std::pair<double, double>> atoms;
  DelayModel label = DelayModel::full;

  double ccdf_at(double t_tti) const;  // linear interpolation on the grid
};

// P(D > threshold); threshold in TTIs (7 TTIs = 1 ms at the default TTI).
double outage(const DelayDistribution& dist, double threshold_tti);

// Full law of D = A + W + X - 2: uniform alignment, M/G/1 waiting time
// via the geometric equilibrium expansion, service X from the solved
// chain, success registered 2 TTIs before the service ends.
DelayDistribution delay_distribution(const SimplifiedSolution& sol, const SystemParams& sys,
                                     double grid_step = 0.01);

// Baseline without the 1-pR effect: single success probability p_tilde
// from the closed-form quadratic, geometric service on the same lattice.
DelayDistribution delay_no_1pr(const SystemParams& sys, const ChannelParams& ch,
                               double grid_step = 0.01);

// Root of the no-1pR quadratic (exposed for tests).
double p_tilde_no_1pr(const SystemParams& sys, const ChannelParams& ch);

// Baseline without queueing: D_nq = A + X - 2.
DelayDistribution delay_no_queue(const SimplifiedSolution& sol, double grid_step = 0.01);

// Sojourn-time law V = W + X on the grid (atoms exact). Exposed so the
// transform oracle can compare the construction against the P-K formula.
GriddedLaw sojourn_law(const SimplifiedSolution& sol, const SystemParams& sys,
                       double grid_step = 0.01);

// Waiting-time CCDF of the same construction (for the brute-force M/G/1
// cross-check). Returned law has the idle atom at 0 plus the cell part.
GriddedLaw waiting_law(const SimplifiedSolution& sol, const SystemParams& sys,
                       double grid_step = 0.01);

}  // namespace gfa
