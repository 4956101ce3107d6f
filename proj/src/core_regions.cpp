#include "noma/core_regions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "noma/errors.hpp"

namespace noma {
namespace {

double log2_1p(double v) { return std::log1p(v) / std::numbers::ln2; }

// Clamps z into [0, z_max] when it lies within kDomainSlack of the interval.
double checked_rate(double z, double z_max, const char* what) {
  if (!(z >= -kDomainSlack && z <= z_max + kDomainSlack)) {
    throw DomainError(std::string(what) + ": rate " + std::to_string(z) +
                      " outside [0, " + std::to_string(z_max) + "]");
  }
  return std::clamp(z, 0.0, z_max);
}

}  // namespace

ChannelPair::ChannelPair(double x, double y) : x_(x), y_(y) {
  if (!std::isfinite(x) || !std::isfinite(y)) {
    throw DomainError("ChannelPair: SNRs must be finite");
  }
  if (!(x > 0.0 && x < y)) {
    throw DomainError("ChannelPair: requires 0 < x < y");
  }
}

PowerSplit::PowerSplit(double a2) : a2_(a2) {
  if (!(a2 >= 0.0 && a2 <= 1.0)) {
    throw DomainError("PowerSplit: a2 must lie in [0, 1]");
  }
}

TimeSplit::TimeSplit(double b2) : b2_(b2) {
  if (!(b2 >= 0.0 && b2 <= 1.0)) {
    throw DomainError("TimeSplit: b2 must lie in [0, 1]");
  }
}

const char* to_string(RegionKind kind) noexcept {
  switch (kind) {
    case RegionKind::capacity: return "capacity";
    case RegionKind::noma: return "noma";
    case RegionKind::tdma: return "tdma";
  }
  return "unknown";
}

std::pair<double, double> single_user_rates(const ChannelPair& ch) {
  return {log2_1p(ch.x()), log2_1p(ch.y())};
}

RatePair superposition_rate_pair(const ChannelPair& ch, const PowerSplit& p) {
  // 1 + a1 x / (1 + a2 x) = (1 + x) / (1 + a2 x)
  const double r1 = (std::log1p(ch.x()) - std::log1p(p.a2() * ch.x())) / std::numbers::ln2;
  return {std::max(r1, 0.0), log2_1p(p.a2() * ch.y())};
}

RatePair noma_rate_pair(const ChannelPair& ch, const PowerSplit& p) {
  if (!p.noma_feasible()) {
    throw InfeasibleSplit("noma_rate_pair: a2 = " + std::to_string(p.a2()) +
                          " exceeds 1/2 (a1 >= a2 required)");
  }
  return superposition_rate_pair(ch, p);
}

RatePair tdma_rate_pair(const ChannelPair& ch, const TimeSplit& t) {
  const auto [r1_star, r2_star] = single_user_rates(ch);
  return {t.b1() * r1_star, t.b2() * r2_star};
}

double noma_boundary(double z, const ChannelPair& ch) {
  const double r2_star = log2_1p(ch.y());
  z = checked_rate(z, r2_star, "noma_boundary");
  const double x = ch.x();
  const double y = ch.y();
  const double denom = y + std::expm1(z * std::numbers::ln2) * x;
  const double v = (std::log1p(x) + std::log(y) - std::log(denom)) / std::numbers::ln2;
  return std::max(v, 0.0);
}

double noma_boundary_slope(double z, const ChannelPair& ch) {
  z = checked_rate(z, log2_1p(ch.y()), "noma_boundary_slope");
  const double x = ch.x();
  const double p = std::exp2(z);
  return -x * p / (ch.y() - x + x * p);
}

double tdma_boundary(double z, const ChannelPair& ch) {
  const auto [r1_star, r2_star] = single_user_rates(ch);
  z = checked_rate(z, r2_star, "tdma_boundary");
  return (1.0 - z / r2_star) * r1_star;
}

double capacity_boundary(double z, const ChannelPair& ch) { return noma_boundary(z, ch); }

double noma_arc_end(const ChannelPair& ch) { return log2_1p(0.5 * ch.y()); }

RatePair noma_corner(const ChannelPair& ch) {
  return {log2_1p(ch.x() / (2.0 + ch.x())), noma_arc_end(ch)};
}

std::vector<RatePair> noma_boundary_samples(const ChannelPair& ch, std::size_t count,
                                            double a2_max) {
  if (count < 2) throw DomainError("boundary samples: count must be at least 2");
  if (!(a2_max > 0.0 && a2_max <= 1.0)) {
    throw DomainError("boundary samples: a2_max must lie in (0, 1]");
  }
  const double z_max = log2_1p(a2_max * ch.y());
  std::vector<RatePair> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double z = i + 1 == count ? z_max
                                    : z_max * static_cast<double>(i) / static_cast<double>(count - 1);
    out.push_back({noma_boundary(z, ch), z});
  }
  return out;
}

std::vector<RatePair> region_boundary_samples(RegionKind kind, const ChannelPair& ch,
                                              std::size_t count) {
  if (count < 2) throw DomainError("boundary samples: count must be at least 2");
  switch (kind) {
    case RegionKind::noma:
      return noma_boundary_samples(ch, count, 0.5);
    case RegionKind::capacity:
      return noma_boundary_samples(ch, count, 1.0);
    case RegionKind::tdma: {
      const double z_max = log2_1p(ch.y());
      std::vector<RatePair> out;
      out.reserve(count);
      for (std::size_t i = 0; i < count; ++i) {
        const double z = i + 1 == count
                             ? z_max
                             : z_max * static_cast<double>(i) / static_cast<double>(count - 1);
        out.push_back({tdma_boundary(z, ch), z});
      }
      return out;
    }
  }
  return {};
}

}  // namespace noma
