#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "noma/analytic.hpp"
#include "noma/errors.hpp"

namespace noma {
namespace {

int strict_sign(double v) { return (v > 0.0) - (v < 0.0); }

// Integrand of the outer u-integral. For fixed u (i.e. fixed weak-user SNR)
// the v-axis is cut at every sign change of the three rate differences; on
// each piece the event is constant and the density is a polynomial in v.
class SliceIntegrator {
 public:
  SliceIntegrator(const PairingConfig& cfg, double a2, double b2)
      : cfg_(cfg),
        power_(a2),
        time_(b2),
        log_w1_(log_w1(cfg)),
        rule_(static_cast<std::size_t>(cfg.M / 2 + 2)) {
    constexpr int kUniform = 64;
    for (int k = 1; k < kUniform; ++k) fractions_.push_back(static_cast<double>(k) / kUniform);
    for (int k = 7; k <= 50; ++k) fractions_.push_back(1.0 - std::ldexp(1.0, -k));
    for (int k = 7; k <= 60; ++k) fractions_.push_back(std::ldexp(1.0, -k));
    std::sort(fractions_.begin(), fractions_.end());
  }

  std::array<double, 4> operator()(double u) {
    std::array<double, 4> out{};
    if (!(u > 0.0 && u < 1.0)) return out;
    const double x = -cfg_.rho * std::log(u);
    if (!(x > 0.0)) return out;

    // Sample the differences on the clustered grid, keeping only points with y > x.
    samples_.clear();
    for (double f : fractions_) {
      const double v = f * u;
      const double y = -cfg_.rho * std::log(v);
      if (!(y > x) || !std::isfinite(y)) continue;
      samples_.push_back({v, differences(x, y)});
    }
    breaks_.assign({0.0, u});
    for (std::size_t s = 1; s < samples_.size(); ++s) {
      const Sample& lo = samples_[s - 1];
      const Sample& hi = samples_[s];
      for (int c = 0; c < 3; ++c) {
        if (strict_sign(lo.d[c]) != strict_sign(hi.d[c])) {
          breaks_.push_back(bisect(x, lo.v, hi.v, c, lo.d[c]));
          ++roots_;
        }
      }
    }
    std::sort(breaks_.begin(), breaks_.end());

    const double log_front = log_w1_ + (cfg_.m > 1 ? (cfg_.m - 1) * std::log1p(-u) : 0.0);
    const double front = std::exp(log_front);
    const int tail_power = cfg_.M - cfg_.n;
    const int gap_power = cfg_.n - 1 - cfg_.m;
    auto poly = [&](double v) {
      return std::pow(v, tail_power) * std::pow(u - v, gap_power);
    };
    for (std::size_t b = 1; b < breaks_.size(); ++b) {
      const double lo = breaks_[b - 1];
      const double hi = breaks_[b];
      if (!(hi > lo)) continue;
      const double mid = 0.5 * (lo + hi);
      const double y = -cfg_.rho * std::log(mid);
      if (!(y > x)) continue;  // sliver on the diagonal below resolution
      const EventId e = classify_full(ChannelPair(x, y), power_, time_);
      out[static_cast<std::size_t>(index_of(e))] += front * rule_.integrate(poly, lo, hi);
      ++pieces_;
    }
    return out;
  }

  std::size_t pieces() const { return pieces_; }
  std::size_t roots() const { return roots_; }

 private:
  struct Sample {
    double v;
    std::array<double, 3> d;
  };

  std::array<double, 3> differences(double x, double y) const {
    const RateDifferences d = rate_differences(ChannelPair(x, y), power_, time_);
    return {d.r1, d.r2, d.sum};
  }

  double bisect(double x, double lo, double hi, int component, double f_lo) const {
    const int s_lo = strict_sign(f_lo);
    for (int iter = 0; iter < 200; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (!(mid > lo && mid < hi)) break;
      const double y = -cfg_.rho * std::log(mid);
      if (!(y > x)) {
        hi = mid;
        continue;
      }
      const int s_mid = strict_sign(differences(x, y)[static_cast<std::size_t>(component)]);
      if (s_mid == s_lo) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  }

  PairingConfig cfg_;
  PowerSplit power_;
  TimeSplit time_;
  double log_w1_;
  quad::GaussLegendre rule_;
  std::vector<double> fractions_;
  std::vector<Sample> samples_;
  std::vector<double> breaks_;
  std::size_t pieces_ = 0;
  std::size_t roots_ = 0;
};

}  // namespace

EventProbabilities quadrature_event_probs(const PairingConfig& cfg, double a2, double b2,
                                          double tol, QuadratureDiagnostics* diag) {
  cfg.validate();
  if (!(tol >= 1e-10 && tol < 1.0)) throw DomainError("quadrature: tol must lie in [1e-10, 1)");
  if (!(a2 > 0.0 && a2 <= 0.5)) throw DomainError("quadrature: a2 must lie in (0, 1/2]");
  if (!(b2 > 0.0 && b2 < 1.0)) throw DegenerateSplit("quadrature: b2 must lie in (0, 1)");

  SliceIntegrator slice(cfg, a2, b2);
  auto f = [&slice](double u) { return slice(u); };

  // Event regions can be thin slivers near u = 1 (weak user close to zero
  // SNR) whose mass a single initial rule never samples. Seed the partition
  // geometrically towards both ends and at the x-thresholds.
  std::vector<double> breaks{0.0, 1.0};
  for (int k = 1; k <= 40; ++k) {
    breaks.push_back(std::ldexp(1.0, -k));
    breaks.push_back(1.0 - std::ldexp(1.0, -k));
  }
  const double w2 = w2_threshold(a2);
  for (double x : {w2, w2 / (std::sqrt(w2 + 1.0) + 1.0)}) {
    if (x > 0.0) breaks.push_back(std::exp(-x / cfg.rho));
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  quad::VectorResult<4> res;
  try {
    res = quad::integrate_vector<4>(f, breaks, tol, 0.0, 20000);
  } catch (const NonConvergence& e) {
    throw NonConvergence(std::string(e.what()) + "; inner pieces " +
                         std::to_string(slice.pieces()) + ", boundary roots " +
                         std::to_string(slice.roots()));
  }
  if (diag != nullptr) *diag = {res.diag, slice.pieces(), slice.roots()};

  EventProbabilities out;
  out.method = ProbabilityMethod::quadrature;
  for (std::size_t i = 0; i < 4; ++i) out.p[i] = std::clamp(res.value[i], 0.0, 1.0);
  return out;
}

double p_event_quadrature(EventId event, const PairingConfig& cfg, double a2, double b2,
                          double tol) {
  return quadrature_event_probs(cfg, a2, b2, tol)[event];
}

}  // namespace noma
