#include "gfa/mg1.hpp"

#include <algorithm>
#include <cmath>

#include "gfa/attempt.hpp"
#include "gfa/channel.hpp"
#include "gfa/errors.hpp"

namespace gfa {

std::string to_string(DelayModel m) {
  switch (m) {
    case DelayModel::full: return "full";
    case DelayModel::no_1pr: return "no_1pr";
    case DelayModel::no_queue: return "no_queue";
    case DelayModel::empirical: return "empirical";
  }
  return "?";
}

SimplifiedSolution solve_simplified(const SystemParams& sys, const ChannelParams& ch,
                                    double tol) {
  sys.validate();
  if (!(tol > 0.0)) throw Error(ErrorCode::ConfigError, "tol must be > 0");
  const double lam = sys.lambda_tti();
  const double n = static_cast<double>(sys.n_ues);
  const double b = static_cast<double>(sys.n_rbs);
  const double ea = ch.exp_neg_mu_over_rho();

  const int kMaxIter = 100000;
  const double kDamping = 0.5;

  double pf = ea, pr = ea;
  double alpha = 0.0, gf = 0.0, gr = 0.0, residual = 0.0;
  int iter = 0;
  for (iter = 0; iter < kMaxIter; ++iter) {
    alpha = 4.0 * (1.0 + pr - pf) * lam / pr;
    if (alpha > 1.0)
      throw Error(ErrorCode::NoFixedPoint, "non-empty probability exceeds 1 (overload)");
    gf = (n - 1.0) * alpha / 4.0;
    gr = cascade_step(gf, gf, sys, ch);
    const double pf_new = ch.success_vs_load(gf, b);
    const double pr_new = ch.success_vs_load(gr, b);
    if (!(pf_new > 0.0) || !(pr_new > 0.0))
      throw Error(ErrorCode::NoFixedPoint, "success probability left (0,1)");
    residual = std::max(std::abs(pf_new - pf), std::abs(pr_new - pr));
    pf += kDamping * (pf_new - pf);
    pr += kDamping * (pr_new - pr);
    if (residual <= tol) break;
  }
  if (residual > tol)
    throw Error(ErrorCode::NoFixedPoint, "fixed-point iteration did not converge");

  SimplifiedSolution sol;
  sol.p_f_hat = pf;
  sol.p_r_hat = pr;
  sol.alpha_hat = 4.0 * (1.0 + pr - pf) * lam / pr;
  sol.g_f_hat = (n - 1.0) * sol.alpha_hat / 4.0;
  sol.g_r_hat = cascade_step(sol.g_f_hat, sol.g_f_hat, sys, ch);
  sol.residual = residual;
  sol.iterations = iter + 1;

  const double xbar = 4.0 * (1.0 + pr - pf) / pr;
  if (!(lam * xbar < 1.0))
    throw Error(ErrorCode::Unstable, "utilization lambda*X >= 1");
  return sol;
}

ServiceTimeDist service_pmf(const SimplifiedSolution& sol, double eps_trunc) {
  const double pf = sol.p_f_hat;
  const double pr = sol.p_r_hat;
  if (!(pr > 0.0)) throw Error(ErrorCode::ConfigError, "p_R must be > 0");
  ServiceTimeDist out;
  out.mean = 4.0 * (1.0 + pr - pf) / pr;
  if (pf > 0.0) out.pmf[4] = pf;
  // tail after i retransmissions: (1-pF)(1-pR)^i
  double tail = 1.0 - pf;
  for (int i = 1; tail > eps_trunc && i < 100000; ++i) {
    const double w = tail * pr;  // (1-pF)(1-pR)^{i-1} pR
    if (w > 0.0) out.pmf[4 * (i + 1)] = w;
    tail *= (1.0 - pr);
  }
  out.second_moment = 0.0;
  for (const auto& [x, w] : out.pmf) out.second_moment += w * double(x) * double(x);
  return out;
}

double p_tilde_no_1pr(const SystemParams& sys, const ChannelParams& ch) {
  const double lam = sys.lambda_tti();
  const double n = static_cast<double>(sys.n_ues);
  const double b = static_cast<double>(sys.n_rbs);
  const double a = ch.mu_over_rho();
  const double disc = 1.0 - 4.0 * std::exp(a) * (n - 1.0) * ch.mu * lam / (b * (ch.mu + 1.0));
  if (disc < 0.0)
    throw Error(ErrorCode::NoRealRoot, "no real root for the no-1pR success probability");
  return 0.5 * std::exp(-a) * (1.0 + std::sqrt(disc));
}

double DelayDistribution::ccdf_at(double t_tti) const {
  if (ccdf.empty()) return 0.0;
  if (t_tti <= 0.0) return ccdf.front();
  const double pos = t_tti / grid_step;
  const auto lo = static_cast<size_t>(std::floor(pos));
  if (lo >= ccdf.size() - 1) return ccdf.back();
  const double frac = pos - static_cast<double>(lo);
  return ccdf[lo] * (1.0 - frac) + ccdf[lo + 1] * frac;
}

double outage(const DelayDistribution& dist, double threshold_tti) {
  if (threshold_tti < 0.0) throw Error(ErrorCode::ConfigError, "threshold must be >= 0");
  return dist.ccdf_at(threshold_tti);
}

namespace {

int cells_per_tti(double grid_step) {
  if (grid_step > 0.1)
    throw Error(ErrorCode::GridTooCoarse, "grid_step must be <= 0.1 TTI");
  const double cpt = 1.0 / grid_step;
  const int n = static_cast<int>(std::lround(cpt));
  if (n < 10 || std::abs(cpt - n) > 1e-9 * cpt)
    throw Error(ErrorCode::ConfigError, "grid_step must divide 1 TTI");
  return n;
}

// Service pmf on the 4-TTI lattice as a plain vector: pmf[i] = P(X = 4(i+1)).
std::vector<double> lattice_pmf(double pf, double pr, double eps) {
  std::vector<double> pmf;
  pmf.push_back(pf);
  double tail = 1.0 - pf;
  while (tail > eps && pmf.size() < 100000) {
    pmf.push_back(tail * pr);
    tail *= (1.0 - pr);
  }
  return pmf;
}

struct MG1Parts {
  double rho_q = 0.0;
  std::vector<double> x_pmf;    // P(X = 4(i+1))
  std::vector<double> w_cells;  // continuous part of W
  double w_atom = 0.0;          // idle atom at 0
};

// Waiting-time construction: equilibrium (stationary-excess) law of X is
// piecewise constant over 4-TTI spans; W is the geometric mixture of its
// self-convolutions.
MG1Parts build_waiting(double pf, double pr, double lam, int cpt, size_t max_cells) {
  MG1Parts parts;
  const double eps = 1e-17;
  parts.x_pmf = lattice_pmf(pf, pr, eps);
  const double xbar = 4.0 * (1.0 + pr - pf) / pr;
  parts.rho_q = lam * xbar;
  if (!(parts.rho_q < 1.0))
    throw Error(ErrorCode::Unstable, "utilization lambda*X >= 1");
  parts.w_atom = 1.0 - parts.rho_q;

  const int span = 4 * cpt;
  // excess density: value P(X > 4k)/xbar on [4k, 4(k+1))
  std::vector<double> xe;
  double ccdf_span = 1.0;  // P(X > 4k), k = 0
  for (size_t k = 0; ccdf_span > eps && xe.size() < max_cells; ++k) {
    const double cell_mass = ccdf_span / xbar / cpt;
    for (int c = 0; c < span && xe.size() < max_cells; ++c) xe.push_back(cell_mass);
    ccdf_span -= (k < parts.x_pmf.size() ? parts.x_pmf[k] : 0.0);
    if (ccdf_span < 0.0) ccdf_span = 0.0;
  }

  parts.w_cells.assign(max_cells, 0.0);
  std::vector<double> conv_k = xe;  // k-fold self-convolution
  double coef = parts.rho_q * parts.w_atom;
  for (int k = 1; k < 10000; ++k) {
    add_shifted(parts.w_cells, conv_k, 0, coef);
    coef *= parts.rho_q;
    if (coef < 1e-17) break;
    conv_k = conv_cells(conv_k, xe, max_cells);
  }
  return parts;
}

// V = W + X with exact atom handling (atoms of V sit on the 4-TTI lattice).
GriddedLaw build_sojourn(const MG1Parts& parts, int cpt, size_t max_cells, double step) {
  const int span = 4 * cpt;
  GriddedLaw v;
  v.step = step;
  v.cells.assign(max_cells, 0.0);
  for (size_t i = 0; i < parts.x_pmf.size(); ++i) {
    const int64_t at = static_cast<int64_t>(i + 1) * span;
    if (parts.x_pmf[i] <= 0.0) continue;
    if (at < static_cast<int64_t>(max_cells))
      v.atoms.emplace_back(at, parts.w_atom * parts.x_pmf[i]);
    add_shifted(v.cells, parts.w_cells, at, parts.x_pmf[i]);
  }
  return v;
}

DelayDistribution finish_delay(std::vector<double> cells, double step, DelayModel label) {
  DelayDistribution d;
  d.grid_step = step;
  d.label = label;
  // tail mass beyond the grid: account as "above the horizon" so the
  // ccdf stays exact despite truncation
  double total = 0.0, comp = 0.0;
  for (double c : cells) {  // Kahan
    const double y = c - comp;
    const double t = total + y;
    comp = (t - total) - y;
    total = t;
  }
  double beyond = 1.0 - total;
  if (beyond < 0.0) beyond = 0.0;
  d.ccdf.assign(cells.size() + 1, 0.0);
  double tail = beyond;
  d.ccdf[cells.size()] = tail;
  for (size_t k = cells.size(); k-- > 0;) {
    tail += cells[k];
    d.ccdf[k] = tail;
  }
  return d;
}

// Full pipeline for laws of the form A + W + X - 2 given per-attempt
// success probabilities; used by both the full model and the no-1pR
// baseline (which differs only in its p's).
DelayDistribution delay_from_probs(double pf, double pr, double lam, double grid_step,
                                   DelayModel label) {
  const int cpt = cells_per_tti(grid_step);

  // initial horizon: service lattice extent + room for queueing; extended
  // until the truncated tail drops below 1e-13
  const size_t x_len = lattice_pmf(pf, pr, 1e-17).size();
  size_t horizon = (4 * (x_len + 3) + 24) * static_cast<size_t>(cpt);
  const size_t horizon_cap = 4000 * static_cast<size_t>(cpt);

  for (;;) {
    MG1Parts parts = build_waiting(pf, pr, lam, cpt, horizon);
    GriddedLaw v = build_sojourn(parts, cpt, horizon, grid_step);

    // D - 2 = V + A; A is exactly uniform per cell, so atom terms are
    // exact uniform spans and the cell term uses the triangle rule.
    std::vector<double> a_cells(static_cast<size_t>(cpt), 1.0 / cpt);
    std::vector<double> d_cells = conv_cells(v.cells, a_cells, horizon);
    d_cells.resize(horizon, 0.0);
    for (const auto& [at, w] : v.atoms) add_shifted(d_cells, a_cells, at, w);

    // shift by -2 TTIs; minimum of V is 4 TTIs so indices stay positive
    std::vector<double> shifted(horizon, 0.0);
    add_shifted(shifted, d_cells, -2 * static_cast<int64_t>(cpt), 1.0);

    DelayDistribution d = finish_delay(std::move(shifted), grid_step, label);
    if (d.ccdf.back() <= 1e-13 || horizon >= horizon_cap) return d;
    horizon = std::min(horizon_cap, horizon * 2);
  }
}

}  // namespace

DelayDistribution delay_distribution(const SimplifiedSolution& sol, const SystemParams& sys,
                                     double grid_step) {
  return delay_from_probs(sol.p_f_hat, sol.p_r_hat, sys.lambda_tti(), grid_step,
                          DelayModel::full);
}

DelayDistribution delay_no_1pr(const SystemParams& sys, const ChannelParams& ch,
                               double grid_step) {
  const double pt = p_tilde_no_1pr(sys, ch);
  return delay_from_probs(pt, pt, sys.lambda_tti(), grid_step, DelayModel::no_1pr);
}

DelayDistribution delay_no_queue(const SimplifiedSolution& sol, double grid_step) {
  const int cpt = cells_per_tti(grid_step);
  const std::vector<double> pmf = lattice_pmf(sol.p_f_hat, sol.p_r_hat, 1e-17);
  const size_t horizon = (4 * pmf.size() + 8) * static_cast<size_t>(cpt);
  std::vector<double> cells(horizon, 0.0);
  // density p(X=4(i+1)) on [2+4i, 3+4i)
  for (size_t i = 0; i < pmf.size(); ++i) {
    const size_t start = (2 + 4 * i) * static_cast<size_t>(cpt);
    for (int c = 0; c < cpt; ++c) cells[start + static_cast<size_t>(c)] += pmf[i] / cpt;
  }
  return finish_delay(std::move(cells), grid_step, DelayModel::no_queue);
}

GriddedLaw sojourn_law(const SimplifiedSolution& sol, const SystemParams& sys,
                       double grid_step) {
  const int cpt = cells_per_tti(grid_step);
  const size_t x_len = lattice_pmf(sol.p_f_hat, sol.p_r_hat, 1e-17).size();
  const size_t horizon = (4 * (x_len + 3) + 80) * static_cast<size_t>(cpt);
  MG1Parts parts = build_waiting(sol.p_f_hat, sol.p_r_hat, sys.lambda_tti(), cpt, horizon);
  return build_sojourn(parts, cpt, horizon, grid_step);
}

GriddedLaw waiting_law(const SimplifiedSolution& sol, const SystemParams& sys,
                       double grid_step) {
  const int cpt = cells_per_tti(grid_step);
  const size_t x_len = lattice_pmf(sol.p_f_hat, sol.p_r_hat, 1e-17).size();
  const size_t horizon = (4 * (x_len + 3) + 80) * static_cast<size_t>(cpt);
  MG1Parts parts = build_waiting(sol.p_f_hat, sol.p_r_hat, sys.lambda_tti(), cpt, horizon);
  GriddedLaw w;
  w.step = grid_step;
  w.atoms.emplace_back(0, parts.w_atom);
  w.cells = std::move(parts.w_cells);
  return w;
}

}  // namespace gfa
