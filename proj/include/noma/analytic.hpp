#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "noma/events.hpp"
#include "noma/order_stats.hpp"
#include "noma/quadrature.hpp"

namespace noma {

enum class ProbabilityMethod { closed_form, quadrature, monte_carlo };

std::string_view to_string(ProbabilityMethod m) noexcept;

/// Distribution of the TDMA point over the four subsegments.
struct EventProbabilities {
  std::array<double, 4> p{};
  ProbabilityMethod method = ProbabilityMethod::closed_form;
  std::optional<std::array<double, 4>> stderr_;  ///< Monte Carlo only
  std::uint64_t trials = 0;                      ///< Monte Carlo only

  double operator[](EventId e) const { return p[static_cast<std::size_t>(index_of(e))]; }
  double total() const { return p[0] + p[1] + p[2] + p[3]; }
};

using SeriesReal = boost::multiprecision::cpp_bin_float_50;

/// One term of an alternating binomial series, kept in log-magnitude form.
struct SeriesTerm {
  int k = 0;
  int i = 0;
  int j = 0;
  SeriesReal log_magnitude = 0;
  int sign = 1;

  SeriesReal value() const;
};

/// Sums terms largest-magnitude first in 50-digit arithmetic. Throws
/// UnsupportedSize when the accumulated rounding bound exceeds
/// `absolute_floor`.
double sum_series(std::vector<SeriesTerm> terms, double absolute_floor = 1e-9);

/// P(E2) for b2 = 1/2 by the double alternating series.
double p_eps2_closed(const PairingConfig& cfg, double a2);

/// P(E2) for the pairing m = 1, n = M: 1 - (1-d)^M - d^M.
double p_eps2_special(int M, double d);

/// Power split making d = exp(-w2/rho) = 1/2, which maximises p_eps2_special.
double optimal_a2_special(double rho);

/// P(y > w2) by the 1 - w3 * sum(... (1 - d^k)) series.
double p_strong_above_threshold(const PairingConfig& cfg, double a2);

/// P(E1) = P(y > w2) - P(E2).
double p_eps1_closed(const PairingConfig& cfg, double a2);

/// P(E4): one minus a 1-D integral series and the upper-tail series.
double p_eps4_closed(const PairingConfig& cfg, double a2, double quad_tol = 1e-8);

/// P(E3) = 1 - P(E1) - P(E2) - P(E4).
double p_eps3_closed(const PairingConfig& cfg, double a2, double quad_tol = 1e-8);

EventProbabilities closed_form_event_probs(const PairingConfig& cfg, double a2,
                                           double quad_tol = 1e-8);

struct QuadratureDiagnostics {
  quad::Diagnostics outer;
  std::size_t inner_pieces = 0;   ///< smooth v-pieces integrated
  std::size_t boundary_roots = 0; ///< comparison sign changes located
};

/// Integrates the joint density over each event region on the (u, v)
/// triangle. Independent of the closed forms.
EventProbabilities quadrature_event_probs(const PairingConfig& cfg, double a2, double b2,
                                          double tol = 1e-8,
                                          QuadratureDiagnostics* diag = nullptr);

double p_event_quadrature(EventId event, const PairingConfig& cfg, double a2, double b2,
                          double tol = 1e-8);

}  // namespace noma
