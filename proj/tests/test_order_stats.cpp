#include <doctest.h>

#include <cmath>
#include <vector>

#include "noma/errors.hpp"
#include "noma/order_stats.hpp"
#include "noma/quadrature.hpp"
#include "noma/validation.hpp"

using namespace noma;

TEST_CASE("pairing config invariants") {
  CHECK_THROWS_AS((PairingConfig{1, 1, 1, 1.0}.validate()), DomainError);
  CHECK_THROWS_AS((PairingConfig{10, 3, 3, 1.0}.validate()), DomainError);
  CHECK_THROWS_AS((PairingConfig{10, 0, 3, 1.0}.validate()), DomainError);
  CHECK_THROWS_AS((PairingConfig{10, 2, 11, 1.0}.validate()), DomainError);
  CHECK_THROWS_AS((PairingConfig{10, 2, 3, 0.0}.validate()), DomainError);
  CHECK_NOTHROW((PairingConfig{10, 2, 3, 5.0}.validate()));
}

TEST_CASE("analytic constants") {
  const AnalyticConstants c = analytic_constants(PairingConfig{10, 2, 7, 100.0}, 0.25);
  CHECK(c.w1 == doctest::Approx(3628800.0 / (1.0 * 24.0 * 6.0)));  // 10!/(1! 4! 3!)
  CHECK(c.w3 == doctest::Approx(3628800.0 / (720.0 * 6.0)));       // 10!/(6! 3!)
  CHECK(c.w2 == doctest::Approx(8.0));
  CHECK(c.d == doctest::Approx(std::exp(-0.08)));
}

TEST_CASE("joint pdf spot values and support") {
  const PairingConfig two{2, 1, 2, 1.0};
  CHECK(joint_pdf(0.5, 1.0, two) == doctest::Approx(2.0 * std::exp(-1.5)).epsilon(1e-14));
  CHECK(joint_pdf(1.0, 1.0, two) == 0.0);
  CHECK(joint_pdf(2.0, 1.0, two) == 0.0);
  CHECK_THROWS_AS(joint_pdf(0.0, 1.0, two), DomainError);
  CHECK_THROWS_AS(joint_pdf(-1.0, 1.0, two), DomainError);

  // Density in (u, v) is the (x, y) density times the Jacobian rho^2 e^{(x+y)/rho}.
  const PairingConfig cfg{10, 2, 7, 30.0};
  for (auto [x, y] : {std::pair{3.0, 40.0}, std::pair{0.1, 0.2}, std::pair{20.0, 90.0}}) {
    const double u = std::exp(-x / cfg.rho);
    const double v = std::exp(-y / cfg.rho);
    const double jac = cfg.rho * cfg.rho * std::exp((x + y) / cfg.rho);
    CHECK(joint_pdf_uv(u, v, cfg) == doctest::Approx(joint_pdf(x, y, cfg) * jac).epsilon(1e-12));
  }
}

TEST_CASE("joint pdf integrates to one") {
  for (auto [M, m, n] : {std::tuple{2, 1, 2}, std::tuple{10, 1, 10}, std::tuple{10, 2, 7},
                         std::tuple{10, 4, 5}, std::tuple{7, 3, 6}}) {
    const PairingConfig cfg{M, m, n, 1.0};
    auto inner = [&](double u) {
      return quad::integrate([&](double v) { return joint_pdf_uv(u, v, cfg); }, 0.0, u, 1e-11,
                             1e-300)
          .value;
    };
    const double mass = quad::integrate(inner, 0.0, 1.0, 1e-11, 1e-300).value;
    CHECK(std::abs(mass - 1.0) <= 1e-6);
  }
  CHECK(std::abs(validation::joint_pdf_total_mass(10, 5, 6, 1e-10) - 1.0) <= 1e-6);
}

TEST_CASE("marginal cdf of the n-th order statistic") {
  const PairingConfig two{2, 1, 2, 1.0};
  CHECK(marginal_cdf_n(0.0, two) == 0.0);
  CHECK(marginal_cdf_n(std::log(2.0), two) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(marginal_cdf_n(1e6, two) == 1.0);
  CHECK(marginal_cdf_n(INFINITY, two) == 1.0);

  // Against the integrated order-statistic density.
  const PairingConfig cfg{10, 2, 7, 50.0};
  const double log_c = std::lgamma(11.0) - std::lgamma(7.0) - std::lgamma(4.0);
  auto pdf_n = [&](double t) {
    const double F = -std::expm1(-t / cfg.rho);
    return std::exp(log_c) * std::pow(F, 6) * std::pow(1.0 - F, 3) * std::exp(-t / cfg.rho) /
           cfg.rho;
  };
  for (double t : {5.0, 30.0, 80.0, 250.0}) {
    const double integral = quad::integrate(pdf_n, 0.0, t, 1e-12).value;
    CHECK(marginal_cdf_n(t, cfg) == doctest::Approx(integral).epsilon(1e-10));
  }
}

TEST_CASE("marginal of y from the joint pdf matches d/dt of marginal_cdf_n") {
  const PairingConfig cfg{10, 2, 7, 20.0};
  for (double y : {5.0, 15.0, 40.0}) {
    const double marginal =
        quad::integrate([&](double x) { return joint_pdf(x, y, cfg); }, 1e-300, y, 1e-12).value;
    const double h = 1e-4 * y;
    const double derivative = (marginal_cdf_n(y + h, cfg) - marginal_cdf_n(y - h, cfg)) / (2 * h);
    CHECK(std::abs(marginal - derivative) <= 1e-4 * marginal);
  }
}

TEST_CASE("sampling is deterministic and ordered") {
  const PairingConfig cfg{10, 2, 7, 316.0};
  const Philox4x64 rng(42);
  for (std::uint64_t t = 0; t < 100; ++t) {
    const ChannelPair a = sample_pair(cfg, rng, t);
    const ChannelPair b = sample_pair(cfg, rng, t);
    CHECK(a.x() == b.x());
    CHECK(a.y() == b.y());
    CHECK(a.x() < a.y());
  }
  std::vector<double> small(3);
  CHECK_THROWS_AS(sample_pair(cfg, rng, 0, small), DomainError);
}

TEST_CASE("sample mean of the larger of two exponentials") {
  const PairingConfig cfg{2, 1, 2, 1.0};
  const Philox4x64 rng(7);
  constexpr int kDraws = 200000;
  double sum = 0.0;
  for (int t = 0; t < kDraws; ++t) sum += sample_pair(cfg, rng, static_cast<std::uint64_t>(t)).y();
  const double mean = sum / kDraws;
  const double stderr_ = std::sqrt(1.25 / kDraws);  // Var(max) = 1 + 1/4
  CHECK(std::abs(mean - 1.5) <= 3.0 * stderr_);
}

TEST_CASE("sampler agrees with the density") {
  const double rho = std::pow(10.0, 2.5);
  const auto chi = validation::sampler_chi_square(10, 2, 7, rho, 200000, 3);
  CHECK(chi.dof > 20);
  CHECK(chi.p_value > 1e-3);
  const double ks = validation::sampler_ks_statistic(10, 1, 10, rho, 200000, 4);
  CHECK(ks < validation::ks_critical_1pct(200000));
}
