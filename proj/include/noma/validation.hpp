#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace noma::validation {

enum class Suite { propositions, regions, orderstats, probabilities, all };

std::optional<Suite> parse_suite(std::string_view name);

struct Options {
  std::uint64_t seed = 42;
  std::uint64_t random_checks = 1'000'000;  ///< dominance / equivalence samples
  std::uint64_t sampler_draws = 1'000'000;  ///< order-statistics fidelity draws
  std::uint64_t mc_trials = 1'000'000;      ///< three-way grid Monte Carlo trials
  double quad_tol = 1e-6;
};

/// Outcome of a single check; `value` is compared against `threshold`.
struct CheckRecord {
  std::string suite;
  std::string name;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

std::vector<CheckRecord> run_suite(Suite suite, const Options& opts);

/// Mass of the joint density over 0 < v < u < 1 by nested adaptive quadrature.
double joint_pdf_total_mass(int M, int m, int n, double tol);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 0.0;
};

/// Sampler vs. cell-integrated density on a bins x bins grid in (u, v).
ChiSquareResult sampler_chi_square(int M, int m, int n, double rho, std::uint64_t draws,
                                   std::uint64_t seed, int bins = 20);

/// Kolmogorov-Smirnov statistic of sampled y against marginal_cdf_n.
double sampler_ks_statistic(int M, int m, int n, double rho, std::uint64_t draws,
                            std::uint64_t seed);

/// Asymptotic 1% critical value of the one-sample KS statistic.
double ks_critical_1pct(std::uint64_t draws);

}  // namespace noma::validation
