#include "noma/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "noma/analytic.hpp"
#include "noma/core_regions.hpp"
#include "noma/events.hpp"
#include "noma/montecarlo.hpp"
#include "noma/order_stats.hpp"
#include "noma/philox.hpp"

namespace noma::validation {
namespace {

// Sequential open-interval uniforms from one Philox stream.
class UniformStream {
 public:
  UniformStream(std::uint64_t seed, std::uint64_t stream) : rng_(Philox4x64::Key{seed, stream}) {}

  double next() {
    if (pos_ == 4) {
      buffer_ = rng_({counter_++, 0, 0, 0});
      pos_ = 0;
    }
    return Philox4x64::to_open_unit(buffer_[pos_++]);
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next(); }

  /// Channel with x log-uniform over [1e-3, 1e6] and y/x - 1 log-uniform over [1e-3, 1e3].
  ChannelPair channel() {
    while (true) {
      const double x = std::pow(10.0, uniform(-3.0, 6.0));
      const double y = x * (1.0 + std::pow(10.0, uniform(-3.0, 3.0)));
      if (y > x) return {x, y};
    }
  }

 private:
  Philox4x64 rng_;
  Philox4x64::Counter buffer_{};
  std::size_t pos_ = 4;
  std::uint64_t counter_ = 0;
};

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

CheckRecord at_most(std::string suite, std::string name, double value, double threshold,
                    std::string detail = {}) {
  return {std::move(suite), std::move(name), value <= threshold, value, threshold,
          std::move(detail)};
}

void propositions(const Options& o, std::vector<CheckRecord>& out) {
  const char* s = "propositions";
  UniformStream rs(o.seed, 1);
  std::uint64_t prop1 = 0, prop2 = 0;
  for (std::uint64_t i = 0; i < o.random_checks; ++i) {
    const ChannelPair ch = rs.channel();
    const double r2 = single_user_rates(ch).second;
    const double z0 = rs.uniform(0.0, r2);
    const double above = rs.uniform(z0, r2);
    const double below = rs.uniform(0.0, z0);
    if (!(noma_boundary(above, ch) + above > tdma_boundary(z0, ch) + z0)) ++prop1;
    if (!(noma_boundary(below, ch) > tdma_boundary(z0, ch))) ++prop2;
  }
  out.push_back(at_most(s, "noma_sum_rate_beats_tdma_above", static_cast<double>(prop1), 0.0,
                        std::to_string(o.random_checks) + " random (x, y, z0, z > z0)"));
  out.push_back(at_most(s, "noma_weak_rate_beats_tdma_below", static_cast<double>(prop2), 0.0,
                        std::to_string(o.random_checks) + " random (x, y, z0, z < z0)"));

  UniformStream es(o.seed, 2);
  std::uint64_t disagree = 0, ties = 0, threshold_mismatch = 0, sum_bound = 0;
  for (std::uint64_t i = 0; i < o.random_checks; ++i) {
    const ChannelPair ch = es.channel();
    const PowerSplit p(es.uniform(0.0, 0.5));
    const TimeSplit t(es.uniform(0.0, 1.0));
    const RateDifferences d = rate_differences(ch, p, t);
    const bool tie = std::abs(d.r1) <= kTieTolerance || std::abs(d.r2) <= kTieTolerance ||
                     std::abs(d.sum) <= kTieTolerance;
    if (tie) {
      ++ties;
    } else if (classify_full(ch, p, t) != classify_reduced(ch, p, t)) {
      ++disagree;
    }
    const TimeSplit half(0.5);
    const RateDifferences dh = rate_differences(ch, p, half);
    if (std::abs(dh.r1) > kTieTolerance && std::abs(dh.r2) > kTieTolerance &&
        std::abs(dh.sum) > kTieTolerance) {
      if (epsilon2_threshold(ch, p) != (classify_full(ch, p, half) == EventId::E2)) {
        ++threshold_mismatch;
      }
    }
    if (!(noma_rate_pair(ch, p).sum() < single_user_rates(ch).second)) ++sum_bound;
  }
  out.push_back(at_most(s, "full_vs_reduced_classification", static_cast<double>(disagree), 0.0,
                        std::to_string(ties) + " tie samples skipped"));
  out.push_back(at_most(s, "epsilon2_threshold_equivalence",
                        static_cast<double>(threshold_mismatch), 0.0, "b2 = 1/2"));
  out.push_back(at_most(s, "noma_sum_below_strong_single_user", static_cast<double>(sum_bound),
                        0.0));
}

void regions(const Options& o, std::vector<CheckRecord>& out) {
  const char* s = "regions";
  UniformStream rs(o.seed, 3);
  double endpoint = 0.0, dominance = 0.0, concavity = 0.0, point_f = 0.0, on_curve = 0.0,
         slope = 0.0;
  std::uint64_t sum_not_increasing = 0;
  constexpr int kChannels = 1000;
  for (int i = 0; i < kChannels; ++i) {
    const ChannelPair ch = rs.channel();
    const auto [r1, r2] = single_user_rates(ch);
    endpoint = std::max({endpoint, std::abs(noma_boundary(0.0, ch) - r1),
                         std::abs(tdma_boundary(0.0, ch) - r1), std::abs(noma_boundary(r2, ch)),
                         std::abs(tdma_boundary(r2, ch))});
    const double z = rs.uniform(0.0, r2);
    dominance = std::max(dominance, tdma_boundary(z, ch) - noma_boundary(z, ch));

    // Concavity and monotone sum on a 64-point grid.
    constexpr int kGrid = 64;
    const double h = r2 / kGrid;
    double prev_sum = noma_boundary(0.0, ch);
    for (int k = 1; k < kGrid; ++k) {
      const double zk = k * h;
      const double f0 = noma_boundary(zk, ch);
      const double second = noma_boundary(zk + h, ch) - 2.0 * f0 + noma_boundary(zk - h, ch);
      const double scale = std::max({std::abs(f0), r1, 1.0});
      concavity = std::max(concavity, second / scale);
      const double sum = f0 + zk;
      if (!(sum > prev_sum)) ++sum_not_increasing;
      prev_sum = sum;
    }

    const RatePair corner = noma_corner(ch);
    const RatePair f_pt = noma_rate_pair(ch, PowerSplit(0.5));
    point_f = std::max({point_f, std::abs(corner.r2 - f_pt.r2), std::abs(corner.r1 - f_pt.r1),
                        std::abs(noma_boundary(noma_arc_end(ch), ch) - corner.r1)});

    const RatePair n = noma_rate_pair(ch, PowerSplit(rs.uniform(0.0, 0.5)));
    on_curve = std::max(on_curve, std::abs(n.r1 - noma_boundary(n.r2, ch)));

    const double zd = rs.uniform(0.05 * r2, 0.95 * r2);
    const double step = 1e-5 * r2;
    const double fd = (noma_boundary(zd + step, ch) - noma_boundary(zd - step, ch)) / (2 * step);
    const double exact = noma_boundary_slope(zd, ch);
    slope = std::max(slope, std::abs(fd - exact) / std::max(std::abs(exact), 1e-300));
  }
  out.push_back(at_most(s, "endpoint_identities", endpoint, 1e-12));
  out.push_back(at_most(s, "noma_dominates_tdma", dominance, 0.0, "max f^T - f^N"));
  out.push_back(at_most(s, "noma_boundary_concave", concavity, 1e-8, "max scaled 2nd difference"));
  out.push_back(at_most(s, "sum_rate_monotone", static_cast<double>(sum_not_increasing), 0.0));
  out.push_back(at_most(s, "point_f_coordinates", point_f, 1e-10));
  out.push_back(at_most(s, "noma_pair_on_boundary", on_curve, 1e-10));
  out.push_back(at_most(s, "boundary_slope_vs_finite_difference", slope, 1e-6));
}

void orderstats(const Options& o, std::vector<CheckRecord>& out) {
  const char* s = "orderstats";
  struct Case {
    int M, m, n;
  };
  const Case cases[] = {{2, 1, 2}, {10, 1, 10}, {10, 2, 7}, {10, 5, 6}};
  for (const Case& c : cases) {
    const std::string tag = "(" + std::to_string(c.M) + "," + std::to_string(c.m) + "," +
                            std::to_string(c.n) + ")";
    const double mass = joint_pdf_total_mass(c.M, c.m, c.n, 1e-10);
    out.push_back(at_most(s, "pdf_normalization" + tag, std::abs(mass - 1.0), 1e-6));
  }
  const double rho = std::pow(10.0, 2.5);
  for (const Case& c : {Case{10, 2, 7}, Case{10, 1, 10}}) {
    const std::string tag = "(" + std::to_string(c.M) + "," + std::to_string(c.m) + "," +
                            std::to_string(c.n) + ")";
    const ChiSquareResult chi = sampler_chi_square(c.M, c.m, c.n, rho, o.sampler_draws, o.seed);
    out.push_back({s, "sampler_chi_square" + tag, chi.p_value > 1e-3, chi.p_value, 1e-3,
                   "chi2 = " + fmt("%.3f", chi.statistic) + ", dof = " + std::to_string(chi.dof)});
    const double ks = sampler_ks_statistic(c.M, c.m, c.n, rho, o.sampler_draws, o.seed + 1);
    out.push_back(at_most(s, "sampler_ks_marginal" + tag, ks, ks_critical_1pct(o.sampler_draws)));
  }
}

void probabilities(const Options& o, std::vector<CheckRecord>& out) {
  const char* s = "probabilities";
  const std::pair<int, int> pairs[] = {{1, 2}, {1, 10}, {2, 7}, {4, 5}, {5, 6}};
  for (double rho_db : {20.0, 25.0, 30.0}) {
    const double rho = std::pow(10.0, rho_db / 10.0);
    const double a2 = 1.0 / std::sqrt(rho);
    for (const auto& [m, n] : pairs) {
      const PairingConfig cfg{10, m, n, rho};
      const EventProbabilities closed = closed_form_event_probs(cfg, a2, 1e-10);
      const EventProbabilities quad = quadrature_event_probs(cfg, a2, 0.5, o.quad_tol);
      const EventProbabilities mc =
          estimate_event_probs(cfg, a2, 0.5, McConfig{o.mc_trials, o.seed, 8});
      const std::string tag = "(m=" + std::to_string(m) + ",n=" + std::to_string(n) +
                              ",rho_db=" + fmt("%g", rho_db) + ")";
      double worst_cq = 0.0, worst_ratio = 0.0;
      for (std::size_t e = 0; e < 4; ++e) {
        const double band = std::max(1e-3, 3.0 * (*mc.stderr_)[e]);
        worst_cq = std::max(worst_cq, std::abs(closed.p[e] - quad.p[e]));
        worst_ratio = std::max({worst_ratio, std::abs(closed.p[e] - mc.p[e]) / band,
                                std::abs(quad.p[e] - mc.p[e]) / band});
      }
      out.push_back(at_most(s, "closed_vs_quadrature" + tag, worst_cq, 1e-3));
      out.push_back(at_most(s, "analytic_vs_mc" + tag, worst_ratio, 1.0,
                            "max |diff| / max(1e-3, 3 stderr)"));
      out.push_back(at_most(s, "closed_sum" + tag, std::abs(closed.total() - 1.0), 1e-9));
      out.push_back(at_most(s, "quadrature_sum" + tag, std::abs(quad.total() - 1.0), 1e-9));
    }
  }
  for (int M : {2, 5, 10, 20}) {
    const double rho = 100.0;
    const double a2 = optimal_a2_special(rho);
    const double p = p_eps2_closed(PairingConfig{M, 1, M, rho}, a2);
    out.push_back(at_most(s, "special_case_M" + std::to_string(M),
                          std::abs(p - (1.0 - std::ldexp(1.0, -(M - 1)))), 1e-12));
  }
}

}  // namespace

std::optional<Suite> parse_suite(std::string_view name) {
  if (name == "propositions") return Suite::propositions;
  if (name == "regions") return Suite::regions;
  if (name == "orderstats") return Suite::orderstats;
  if (name == "probabilities") return Suite::probabilities;
  if (name == "all") return Suite::all;
  return std::nullopt;
}

std::vector<CheckRecord> run_suite(Suite suite, const Options& opts) {
  std::vector<CheckRecord> out;
  const bool all = suite == Suite::all;
  if (all || suite == Suite::propositions) propositions(opts, out);
  if (all || suite == Suite::regions) regions(opts, out);
  if (all || suite == Suite::orderstats) orderstats(opts, out);
  if (all || suite == Suite::probabilities) probabilities(opts, out);
  return out;
}

double joint_pdf_total_mass(int M, int m, int n, double tol) {
  const PairingConfig cfg{M, m, n, 1.0};
  cfg.validate();
  auto inner = [&](double u) {
    return quad::integrate([&](double v) { return joint_pdf_uv(u, v, cfg); }, 0.0, u, tol, 1e-300)
        .value;
  };
  return quad::integrate(inner, 0.0, 1.0, tol, 1e-300).value;
}

ChiSquareResult sampler_chi_square(int M, int m, int n, double rho, std::uint64_t draws,
                                   std::uint64_t seed, int bins) {
  const PairingConfig cfg{M, m, n, rho};
  cfg.validate();
  const quad::GaussLegendre rule(static_cast<std::size_t>(M / 2 + 2));
  const double h = 1.0 / bins;
  const auto nb = static_cast<std::size_t>(bins);

  std::vector<double> expected(nb * nb, 0.0);
  for (int i = 0; i < bins; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double u0 = i * h, v0 = j * h;
      auto column = [&](double u) {
        const double v1 = std::min(v0 + h, u);
        if (!(v1 > v0)) return 0.0;
        return rule.integrate([&](double v) { return joint_pdf_uv(u, v, cfg); }, v0, v1);
      };
      expected[static_cast<std::size_t>(i) * nb + static_cast<std::size_t>(j)] =
          rule.integrate(column, u0, u0 + h) * static_cast<double>(draws);
    }
  }

  std::vector<double> observed(nb * nb, 0.0);
  const Philox4x64 rng(seed);
  std::vector<double> scratch(static_cast<std::size_t>(M));
  for (std::uint64_t t = 0; t < draws; ++t) {
    const ChannelPair ch = sample_pair(cfg, rng, t, scratch);
    const double u = std::exp(-ch.x() / rho);
    const double v = std::exp(-ch.y() / rho);
    const auto i = std::min<std::size_t>(static_cast<std::size_t>(u * bins), nb - 1);
    const auto j = std::min<std::size_t>(static_cast<std::size_t>(v * bins), nb - 1);
    observed[i * nb + j] += 1.0;
  }

  // Cells expecting fewer than 5 counts are pooled into one bin.
  ChiSquareResult r;
  double pooled_e = 0.0, pooled_o = 0.0;
  int cells = 0;
  for (std::size_t c = 0; c < expected.size(); ++c) {
    if (expected[c] < 5.0) {
      pooled_e += expected[c];
      pooled_o += observed[c];
      continue;
    }
    r.statistic += (observed[c] - expected[c]) * (observed[c] - expected[c]) / expected[c];
    ++cells;
  }
  if (pooled_e >= 5.0) {
    r.statistic += (pooled_o - pooled_e) * (pooled_o - pooled_e) / pooled_e;
    ++cells;
  }
  r.dof = cells - 1;
  r.p_value = boost::math::cdf(
      boost::math::complement(boost::math::chi_squared(r.dof), r.statistic));
  return r;
}

double sampler_ks_statistic(int M, int m, int n, double rho, std::uint64_t draws,
                            std::uint64_t seed) {
  const PairingConfig cfg{M, m, n, rho};
  cfg.validate();
  const Philox4x64 rng(seed);
  std::vector<double> scratch(static_cast<std::size_t>(M));
  std::vector<double> ys;
  ys.reserve(draws);
  for (std::uint64_t t = 0; t < draws; ++t) ys.push_back(sample_pair(cfg, rng, t, scratch).y());
  std::sort(ys.begin(), ys.end());
  double d = 0.0;
  const double nn = static_cast<double>(draws);
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const double F = marginal_cdf_n(ys[i], cfg);
    d = std::max({d, static_cast<double>(i + 1) / nn - F, F - static_cast<double>(i) / nn});
  }
  return d;
}

double ks_critical_1pct(std::uint64_t draws) {
  // Quantile 0.99 of the Kolmogorov distribution.
  return 1.6276236115189506 / std::sqrt(static_cast<double>(draws));
}

}  // namespace noma::validation
