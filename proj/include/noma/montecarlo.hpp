#pragma once

#include <array>
#include <cstdint>

#include "noma/analytic.hpp"
#include "noma/order_stats.hpp"

namespace noma {

struct McConfig {
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 42;
  unsigned shards = 8;

  void validate() const;
  /// trials rounded up to a multiple of shards.
  std::uint64_t actual_trials() const;
};

/// Trials are folded in fixed blocks of this size, in block order.
inline constexpr std::uint64_t kMcBlockSize = 4096;

/// Worker threads: $NOMA_THREADS if set to a positive integer, otherwise the
/// hardware default.
unsigned worker_threads();

struct AverageRates {
  double r1_noma = 0.0;
  double r2_noma = 0.0;
  double r1_tdma = 0.0;
  double r2_tdma = 0.0;
  std::array<double, 4> stderr_{};  ///< same order as the means
  std::uint64_t trials = 0;
};

/// Empirical event frequencies with binomial standard errors.
EventProbabilities estimate_event_probs(const PairingConfig& cfg, double a2, double b2,
                                        const McConfig& mc);

AverageRates estimate_average_rates(const PairingConfig& cfg, double a2, double b2,
                                    const McConfig& mc);

/// Standard error of a frequency k/n: normal approximation when n >= 1e4 and
/// k/n is at least 10/n away from 0 and 1, otherwise the larger half-width of
/// the 68.27% Clopper-Pearson interval.
double frequency_stderr(std::uint64_t k, std::uint64_t n);

}  // namespace noma
