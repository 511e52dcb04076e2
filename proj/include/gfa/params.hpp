#pragma once

#include <cmath>
#include <limits>

#include "gfa/errors.hpp"

namespace gfa {

// Default mini-slot length: 1/7 ms.
inline constexpr double kDefaultTtiSeconds = 1.0 / 7000.0;

// Cell population, RB budget and traffic. All rates are per UE; the
// per-TTI rate lambda_tti() is the one used by every internal formula.
struct SystemParams {
  int n_ues = 0;               // N
  int n_rbs = 0;               // B
  double lambda_per_s = 0.0;   // packets/s per UE
  double tti_seconds = kDefaultTtiSeconds;

  SystemParams() = default;
  SystemParams(int n, int b, double lam_s, double tti = kDefaultTtiSeconds)
      : n_ues(n), n_rbs(b), lambda_per_s(lam_s), tti_seconds(tti) {
    validate();
  }

  double lambda_tti() const { return lambda_per_s * tti_seconds; }

  void validate() const {
    if (n_ues < 2) throw Error(ErrorCode::ConfigError, "n_ues must be >= 2");
    if (n_rbs < 1) throw Error(ErrorCode::ConfigError, "n_rbs must be >= 1");
    if (!(lambda_per_s > 0.0))
      throw Error(ErrorCode::ConfigError, "lambda_per_s must be > 0");
    if (!(tti_seconds > 0.0))
      throw Error(ErrorCode::ConfigError, "tti_seconds must be > 0");
    // A packet needs at least 4 TTIs of service; above 1/4 packets/TTI
    // per UE no configuration can be stable.
    if (!(lambda_tti() < 0.25))
      throw Error(ErrorCode::ConfigError, "lambda per TTI must be < 1/4");
  }
};

// Fading-channel description. Constructed from dBm/dB figures; all math
// downstream runs on the linear quantities. rho may be +inf (noiseless
// channel), in which case inv_rho == 0.
struct ChannelParams {
  double noise_power_dbm = 0.0;
  double mean_rx_power_dbm = 0.0;
  double sinr_threshold_db = 0.0;
  double rho = 0.0;      // linear mean SNR = P/sigma^2
  double mu = 0.0;       // linear SINR threshold
  double inv_rho = 0.0;  // sigma^2/P; 0 for the ideal channel

  static ChannelParams from_dbm(double noise_dbm, double power_dbm, double threshold_db) {
    ChannelParams ch;
    ch.noise_power_dbm = noise_dbm;
    ch.mean_rx_power_dbm = power_dbm;
    ch.sinr_threshold_db = threshold_db;
    ch.rho = std::pow(10.0, (power_dbm - noise_dbm) / 10.0);
    ch.mu = std::pow(10.0, threshold_db / 10.0);
    ch.inv_rho = 1.0 / ch.rho;
    ch.check();
    return ch;
  }

  // Noiseless channel: rho -> inf, failures come from collisions only.
  static ChannelParams ideal(double mu_linear) {
    ChannelParams ch;
    ch.noise_power_dbm = -std::numeric_limits<double>::infinity();
    ch.mean_rx_power_dbm = 0.0;
    ch.sinr_threshold_db = 10.0 * std::log10(mu_linear);
    ch.rho = std::numeric_limits<double>::infinity();
    ch.mu = mu_linear;
    ch.inv_rho = 0.0;
    ch.check();
    return ch;
  }

  double mu_over_rho() const { return mu * inv_rho; }
  double exp_neg_mu_over_rho() const { return std::exp(-mu_over_rho()); }

  // Per-attempt success probability at offered per-RB load g/b,
  // exp(-mu/rho) * (1 - mu/(mu+1) * g/b). Shared by the full and the
  // simplified chain solvers.
  double success_vs_load(double g, double b) const {
    return exp_neg_mu_over_rho() * (1.0 - mu / (mu + 1.0) * g / b);
  }

  void check() const {
    if (!(mu > 0.0)) throw Error(ErrorCode::ConfigError, "mu must be > 0");
    if (!(rho > 0.0)) throw Error(ErrorCode::ConfigError, "rho must be > 0");
  }
};

}  // namespace gfa
