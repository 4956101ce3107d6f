#pragma once

#include <cstdint>
#include <span>

#include "noma/core_regions.hpp"
#include "noma/philox.hpp"

namespace noma {

/// User pairing drawn from M ordered Rayleigh users: the m-th weakest is
/// paired with the n-th weakest at transmit SNR rho (linear).
struct PairingConfig {
  int M = 2;
  int m = 1;
  int n = 2;
  double rho = 1.0;

  /// Throws DomainError unless 1 <= m < n <= M and rho > 0 finite.
  void validate() const;
};

/// Constants shared by the closed-form event probabilities.
struct AnalyticConstants {
  double w1 = 1.0;  ///< M! / ((m-1)! (n-1-m)! (M-n)!)
  double w2 = 0.0;  ///< (1 - 2 a2) / a2^2
  double w3 = 1.0;  ///< M! / ((n-1)! (M-n)!), n-th order statistic constant
  double d = 1.0;   ///< exp(-w2 / rho)
};

AnalyticConstants analytic_constants(const PairingConfig& cfg, double a2);

/// log(M! / ((m-1)! (n-1-m)! (M-n)!)).
double log_w1(const PairingConfig& cfg);
/// log(M! / ((n-1)! (M-n)!)).
double log_w3(const PairingConfig& cfg);

/// Joint density of (x, y) = (m-th, n-th) order statistics of M i.i.d.
/// exponential(mean rho) SNRs. Zero off the support x < y.
double joint_pdf(double x, double y, const PairingConfig& cfg);

/// Same density after the substitution u = exp(-x/rho), v = exp(-y/rho):
/// w1 (1-u)^(m-1) v^(M-n) (u-v)^(n-1-m) on 0 < v < u < 1.
double joint_pdf_uv(double u, double v, const PairingConfig& cfg);

/// CDF of the n-th order statistic.
double marginal_cdf_n(double t, const PairingConfig& cfg);

/// Draws M exponentials from the counter stream of `trial`, sorts them and
/// returns the (m-th, n-th) pair. `scratch` must hold at least M doubles.
ChannelPair sample_pair(const PairingConfig& cfg, const Philox4x64& rng, std::uint64_t trial,
                        std::span<double> scratch);

ChannelPair sample_pair(const PairingConfig& cfg, const Philox4x64& rng, std::uint64_t trial);

}  // namespace noma
