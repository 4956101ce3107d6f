#include "noma/order_stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "noma/errors.hpp"
#include "noma/events.hpp"

namespace noma {
namespace {

double log_factorial(int k) { return std::lgamma(static_cast<double>(k) + 1.0); }

double log_choose(int p, int q) { return log_factorial(p) - log_factorial(q) - log_factorial(p - q); }

}  // namespace

void PairingConfig::validate() const {
  if (!(1 <= m && m < n && n <= M)) {
    throw DomainError("PairingConfig: requires 1 <= m < n <= M (got M=" + std::to_string(M) +
                      ", m=" + std::to_string(m) + ", n=" + std::to_string(n) + ")");
  }
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw DomainError("PairingConfig: rho must be positive and finite");
  }
}

double log_w1(const PairingConfig& cfg) {
  cfg.validate();
  return log_factorial(cfg.M) - log_factorial(cfg.m - 1) - log_factorial(cfg.n - 1 - cfg.m) -
         log_factorial(cfg.M - cfg.n);
}

double log_w3(const PairingConfig& cfg) {
  cfg.validate();
  return log_factorial(cfg.M) - log_factorial(cfg.n - 1) - log_factorial(cfg.M - cfg.n);
}

AnalyticConstants analytic_constants(const PairingConfig& cfg, double a2) {
  AnalyticConstants c;
  c.w1 = std::exp(log_w1(cfg));
  c.w3 = std::exp(log_w3(cfg));
  c.w2 = w2_threshold(a2);
  c.d = std::exp(-c.w2 / cfg.rho);
  return c;
}

double joint_pdf(double x, double y, const PairingConfig& cfg) {
  cfg.validate();
  if (!(x > 0.0) || !(y > 0.0)) throw DomainError("joint_pdf: SNRs must be positive");
  if (x >= y) return 0.0;
  const double rho = cfg.rho;
  const int M = cfg.M, m = cfg.m, n = cfg.n;
  double log_pdf = log_w1(cfg) - 2.0 * std::log(rho) - (x + y) / rho;
  if (m > 1) log_pdf += (m - 1) * std::log(-std::expm1(-x / rho));
  if (M > n) log_pdf += (M - n) * (-y / rho);
  if (n - 1 - m > 0) {
    // F(y) - F(x) = e^{-x/rho} (1 - e^{-(y-x)/rho})
    log_pdf += (n - 1 - m) * (-x / rho + std::log(-std::expm1(-(y - x) / rho)));
  }
  return std::exp(log_pdf);
}

double joint_pdf_uv(double u, double v, const PairingConfig& cfg) {
  if (!(v > 0.0 && v < u && u < 1.0)) return 0.0;
  const int M = cfg.M, m = cfg.m, n = cfg.n;
  double log_pdf = log_w1(cfg);
  if (m > 1) log_pdf += (m - 1) * std::log1p(-u);
  if (M > n) log_pdf += (M - n) * std::log(v);
  if (n - 1 - m > 0) log_pdf += (n - 1 - m) * std::log(u - v);
  return std::exp(log_pdf);
}

double marginal_cdf_n(double t, const PairingConfig& cfg) {
  cfg.validate();
  if (std::isnan(t)) throw DomainError("marginal_cdf_n: t is NaN");
  if (t <= 0.0) return 0.0;
  const double log_tail = -t / cfg.rho;           // log(1 - F)
  const double log_f = std::log(-std::expm1(log_tail));  // log F
  if (log_f == 0.0) return 1.0;
  double total = 0.0;
  for (int i = cfg.n; i <= cfg.M; ++i) {
    double log_term = log_choose(cfg.M, i) + i * log_f;
    if (cfg.M > i) log_term += (cfg.M - i) * log_tail;
    total += std::exp(log_term);
  }
  return std::min(total, 1.0);
}

ChannelPair sample_pair(const PairingConfig& cfg, const Philox4x64& rng, std::uint64_t trial,
                        std::span<double> scratch) {
  cfg.validate();
  const auto count = static_cast<std::size_t>(cfg.M);
  if (scratch.size() < count) throw DomainError("sample_pair: scratch buffer too small");
  for (std::uint64_t attempt = 0;; ++attempt) {
    std::uint64_t block = 0;
    for (std::size_t i = 0; i < count; i += 4, ++block) {
      const Philox4x64::Counter words = rng({trial, block, attempt, 0});
      for (std::size_t j = 0; j < 4 && i + j < count; ++j) {
        scratch[i + j] = -cfg.rho * std::log(Philox4x64::to_open_unit(words[j]));
      }
    }
    std::sort(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(count));
    const double x = scratch[static_cast<std::size_t>(cfg.m - 1)];
    const double y = scratch[static_cast<std::size_t>(cfg.n - 1)];
    if (x > 0.0 && x < y) return ChannelPair(x, y);
  }
}

ChannelPair sample_pair(const PairingConfig& cfg, const Philox4x64& rng, std::uint64_t trial) {
  cfg.validate();
  std::vector<double> scratch(static_cast<std::size_t>(cfg.M));
  return sample_pair(cfg, rng, trial, scratch);
}

}  // namespace noma
