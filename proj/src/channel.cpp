#include "gfa/channel.hpp"

#include <algorithm>
#include <cmath>

#include "gfa/errors.hpp"

namespace gfa {

double success_prob_given_k(int k, const ChannelParams& ch) {
  return ch.exp_neg_mu_over_rho() / std::pow(ch.mu + 1.0, static_cast<double>(k));
}

double p1_star(double mu) { return mu <= 1.0 ? 0.0 : 1.0 - 1.0 / mu; }

double p1_closed(const ChannelParams& ch) {
  const double mu = ch.mu;
  const double a = ch.mu_over_rho();
  const double ea = std::exp(-a);
  const double den = 1.0 - ea / (mu + 1.0);
  double num;
  if (mu <= 1.0) {
    // the extra term vanishes smoothly as mu -> 1 (its coefficient -> 0)
    double extra = 0.0;
    if (mu < 1.0) {
      extra = (1.0 - mu) / (1.0 + mu) * std::exp(-2.0 * mu / ((1.0 - mu)) * ch.inv_rho);
    }
    num = 1.0 - 2.0 / (1.0 + mu) * ea + extra;
  } else {
    num = 1.0 - 2.0 / (1.0 + mu) * ea;
  }
  return num / den;
}

namespace {

// Inner integral of exp(-g1) over the admissible g1 range at fixed g2.
// a = mu/rho. Both failure constraints together give
// max(0, (g2-a)/mu) <= g1 <= mu*g2 + a.
double inner_mass(double g2, double mu, double a) {
  double lo = g2 > a ? (g2 - a) / mu : 0.0;
  double hi = mu * g2 + a;
  if (hi <= lo) return 0.0;
  return std::exp(-lo) - std::exp(-hi);
}

struct Quad {
  double mu, a, tol;
  int max_depth;
  bool converged = true;

  double f(double g2) const { return std::exp(-g2) * inner_mass(g2, mu, a); }

  double simpson(double lo, double hi, double flo, double fmid, double fhi) const {
    return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
  }

  double adapt(double lo, double hi, double flo, double fmid, double fhi, double whole,
               double tol_here, int depth) {
    double mid = 0.5 * (lo + hi);
    double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
    double flm = f(lm), frm = f(rm);
    double left = simpson(lo, mid, flo, flm, fmid);
    double right = simpson(mid, hi, fmid, frm, fhi);
    double err = left + right - whole;
    if (std::abs(err) <= 15.0 * tol_here || (hi - lo) < 1e-14) {
      return left + right + err / 15.0;
    }
    if (depth >= max_depth) {
      converged = false;
      return left + right;
    }
    return adapt(lo, mid, flo, flm, fmid, left, 0.5 * tol_here, depth + 1) +
           adapt(mid, hi, fmid, frm, fhi, right, 0.5 * tol_here, depth + 1);
  }

  double integrate(double lo, double hi, double tol_here) {
    if (hi <= lo) return 0.0;
    double mid = 0.5 * (lo + hi);
    double flo = f(lo), fmid = f(mid), fhi = f(hi);
    double whole = simpson(lo, hi, flo, fmid, fhi);
    return adapt(lo, hi, flo, fmid, fhi, whole, tol_here, 0);
  }
};

}  // namespace

double p1_numeric(const ChannelParams& ch, const QuadratureSpec& spec) {
  const double mu = ch.mu;
  const double a = ch.mu_over_rho();

  // For mu < 1 the admissible region is empty beyond g2 = a/(1-mu).
  double g2_max = spec.tail_cut;
  if (mu < 1.0) g2_max = std::min(g2_max, a / (1.0 - mu));

  Quad q{mu, a, spec.abs_tol, spec.max_depth};
  // Split at the kink g2 = a where the lower g1 bound leaves zero.
  double joint;
  if (a < g2_max) {
    joint = q.integrate(0.0, a, 0.5 * spec.abs_tol) +
            q.integrate(a, g2_max, 0.5 * spec.abs_tol);
  } else {
    joint = q.integrate(0.0, g2_max, spec.abs_tol);
  }
  if (!q.converged)
    throw Error(ErrorCode::QuadratureError, "p1 quadrature did not reach tolerance");

  const double fail_given_s1 = 1.0 - std::exp(-a) / (mu + 1.0);
  return joint / fail_given_s1;
}

std::vector<int> decode_rb(const std::vector<double>& powers, const ChannelParams& ch,
                           const std::vector<double>& fades) {
  if (powers.size() != fades.size())
    throw Error(ErrorCode::ConfigError, "decode_rb: powers/fades size mismatch");
  const size_t n = powers.size();
  const double noise = ch.inv_rho == 0.0
                           ? 0.0
                           : std::pow(10.0, (ch.noise_power_dbm - 30.0) / 10.0);
  double total = 0.0;
  std::vector<double> rx(n);
  for (size_t i = 0; i < n; ++i) {
    rx[i] = powers[i] * fades[i];
    total += rx[i];
  }
  std::vector<int> decoded;
  for (size_t i = 0; i < n; ++i) {
    const double interference = total - rx[i];
    if (rx[i] >= ch.mu * (noise + interference)) decoded.push_back(static_cast<int>(i));
  }
  return decoded;
}

}  // namespace gfa
