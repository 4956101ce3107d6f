#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "noma/analytic.hpp"
#include "noma/core_regions.hpp"
#include "noma/errors.hpp"
#include "noma/montecarlo.hpp"
#include "noma/quadrature.hpp"

using namespace noma;

namespace {

const double kRho25 = std::pow(10.0, 2.5);

// E[g(k-th smallest of M exponentials)] via u = exp(-x / rho).
template <class G>
double order_stat_mean(int M, int k, double rho, G g) {
  const double log_c = std::lgamma(M + 1.0) - std::lgamma(k + 0.0) - std::lgamma(M - k + 1.0);
  auto f = [&](double u) {
    if (!(u > 0.0 && u < 1.0)) return 0.0;
    return std::exp(log_c + (k - 1) * std::log1p(-u) + (M - k) * std::log(u)) *
           g(-rho * std::log(u));
  };
  return quad::integrate(f, 0.0, 1.0, 1e-11, 1e-300).value;
}

}  // namespace

TEST_CASE("frequencies form a distribution") {
  const auto p = estimate_event_probs(PairingConfig{10, 2, 7, kRho25}, 1.0 / std::sqrt(kRho25), 0.5,
                                      McConfig{50000, 1, 4});
  CHECK(p.total() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(p.trials == 50000);
  CHECK(p.method == ProbabilityMethod::monte_carlo);
  REQUIRE(p.stderr_.has_value());
  for (double s : *p.stderr_) CHECK(s > 0.0);
}

TEST_CASE("results depend on the seed only") {
  const PairingConfig cfg{10, 4, 5, kRho25};
  const double a2 = 0.05;
  const auto a = estimate_event_probs(cfg, a2, 0.5, McConfig{30000, 9, 1});
  const auto b = estimate_event_probs(cfg, a2, 0.5, McConfig{30000, 9, 8});
  const auto c = estimate_event_probs(cfg, a2, 0.5, McConfig{30000, 10, 8});
  CHECK(a.p == b.p);
  CHECK(a.p != c.p);

  ::setenv("NOMA_THREADS", "3", 1);
  CHECK(worker_threads() == 3);
  const auto r3 = estimate_average_rates(cfg, a2, 0.5, McConfig{20000, 5, 8});
  ::setenv("NOMA_THREADS", "1", 1);
  const auto r1 = estimate_average_rates(cfg, a2, 0.5, McConfig{20000, 5, 2});
  ::unsetenv("NOMA_THREADS");
  CHECK(r3.r1_noma == r1.r1_noma);
  CHECK(r3.r2_tdma == r1.r2_tdma);
  CHECK(r3.stderr_ == r1.stderr_);
}

TEST_CASE("single trial equals direct evaluation") {
  const PairingConfig cfg{10, 2, 7, kRho25};
  const double a2 = 0.07;
  const auto p = estimate_event_probs(cfg, a2, 0.5, McConfig{1, 42, 1});
  const ChannelPair ch = sample_pair(cfg, Philox4x64(42), 0);
  const EventId e = classify_full(ch, PowerSplit(a2), TimeSplit(0.5));
  CHECK(p[e] == 1.0);

  const auto r = estimate_average_rates(cfg, a2, 0.5, McConfig{1, 42, 1});
  CHECK(r.r1_noma == noma_rate_pair(ch, PowerSplit(a2)).r1);
  CHECK(r.r2_tdma == tdma_rate_pair(ch, TimeSplit(0.5)).r2);
}

TEST_CASE("trial count rounding and argument checks") {
  CHECK(McConfig{10, 1, 8}.actual_trials() == 16);
  CHECK(McConfig{16, 1, 8}.actual_trials() == 16);
  CHECK_THROWS_AS((McConfig{0, 1, 8}.validate()), DomainError);
  CHECK_THROWS_AS((McConfig{10, 1, 0}.validate()), DomainError);
  const PairingConfig cfg{10, 2, 7, kRho25};
  CHECK_THROWS_AS(estimate_event_probs(cfg, 0.6, 0.5, McConfig{10, 1, 1}), InfeasibleSplit);
  CHECK_THROWS_AS(estimate_event_probs(cfg, 0.1, 1.0, McConfig{10, 1, 1}), DegenerateSplit);
  CHECK_THROWS_AS(estimate_average_rates(cfg, 0.6, 0.5, McConfig{10, 1, 1}), InfeasibleSplit);
}

TEST_CASE("standard error of a frequency") {
  CHECK(frequency_stderr(5000, 10000) == doctest::Approx(0.005).epsilon(1e-12));
  // Clopper-Pearson at the edges: the one-sided bound solves (1 - p)^n = alpha / 2.
  const double half_alpha = (1.0 - 0.6826894921370859) / 2.0;
  const double edge = 1.0 - std::pow(half_alpha, 1.0 / 100.0);
  CHECK(frequency_stderr(0, 100) == doctest::Approx(edge).epsilon(1e-10));
  CHECK(frequency_stderr(100, 100) == doctest::Approx(edge).epsilon(1e-10));
  // Small counts stay wider than the normal approximation.
  CHECK(frequency_stderr(3, 1'000'000) > std::sqrt(3e-6 * (1 - 3e-6) / 1e6));
  CHECK_THROWS_AS(frequency_stderr(0, 0), DomainError);
}

TEST_CASE("standard error shrinks as one over root N") {
  const PairingConfig cfg{10, 1, 2, kRho25};
  const double a2 = 1.0 / std::sqrt(kRho25);
  const auto small = estimate_event_probs(cfg, a2, 0.5, McConfig{30000, 3, 1});
  const auto large = estimate_event_probs(cfg, a2, 0.5, McConfig{90000, 3, 1});
  const double ratio = (*large.stderr_)[2] / (*small.stderr_)[2];
  CHECK(ratio == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(0.2));
}

TEST_CASE("special pairing agrees with the closed form") {
  const double a2 = optimal_a2_special(kRho25);
  const auto p = estimate_event_probs(PairingConfig{10, 1, 10, kRho25}, a2, 0.5,
                                      McConfig{200000, 42, 8});
  CHECK(std::abs(p[EventId::E2] - 0.998046875) <= 3.0 * (*p.stderr_)[1]);
}

TEST_CASE("event frequencies agree with the closed forms") {
  const PairingConfig cfg{10, 2, 7, kRho25};
  const double a2 = 1.0 / std::sqrt(kRho25);
  const auto closed = closed_form_event_probs(cfg, a2);
  const auto mc = estimate_event_probs(cfg, a2, 0.5, McConfig{200000, 11, 8});
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(std::abs(mc.p[i] - closed.p[i]) <= std::max(1e-3, 3.0 * (*mc.stderr_)[i]));
  }
}

TEST_CASE("average rates agree with order-statistic marginals") {
  const int M = 10, m = 2, n = 7;
  const double rho = kRho25;
  const double a2 = 0.05, b2 = 0.5;
  const auto r = estimate_average_rates(PairingConfig{M, m, n, rho}, a2, b2,
                                        McConfig{200000, 17, 8});
  const double r1_noma =
      order_stat_mean(M, m, rho, [&](double x) { return std::log2((1 + x) / (1 + a2 * x)); });
  const double r2_noma = order_stat_mean(M, n, rho, [&](double y) { return std::log2(1 + a2 * y); });
  const double r1_tdma = order_stat_mean(M, m, rho, [&](double x) { return (1 - b2) * std::log2(1 + x); });
  const double r2_tdma = order_stat_mean(M, n, rho, [&](double y) { return b2 * std::log2(1 + y); });
  CHECK(std::abs(r.r1_noma - r1_noma) <= 4.0 * r.stderr_[0]);
  CHECK(std::abs(r.r2_noma - r2_noma) <= 4.0 * r.stderr_[1]);
  CHECK(std::abs(r.r1_tdma - r1_tdma) <= 4.0 * r.stderr_[2]);
  CHECK(std::abs(r.r2_tdma - r2_tdma) <= 4.0 * r.stderr_[3]);
  CHECK(r.trials == 200000);
}
