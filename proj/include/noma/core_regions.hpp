#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace noma {

/// Ordered effective SNR pair: x for the weaker user, y for the stronger.
/// Construction enforces 0 < x < y, both finite.
class ChannelPair {
 public:
  ChannelPair(double x, double y);

  double x() const noexcept { return x_; }
  double y() const noexcept { return y_; }

 private:
  double x_;
  double y_;
};

/// NOMA power allocation. Only a2 is stored; a1 = 1 - a2.
class PowerSplit {
 public:
  explicit PowerSplit(double a2);

  double a1() const noexcept { return 1.0 - a2_; }
  double a2() const noexcept { return a2_; }
  /// True when a1 >= a2, the NOMA fairness constraint.
  bool noma_feasible() const noexcept { return a2_ <= 0.5; }

 private:
  double a2_;
};

/// TDMA time allocation. Only b2 is stored; b1 = 1 - b2.
class TimeSplit {
 public:
  explicit TimeSplit(double b2);

  double b1() const noexcept { return 1.0 - b2_; }
  double b2() const noexcept { return b2_; }

 private:
  double b2_;
};

/// Achievable rates in bits per channel use.
struct RatePair {
  double r1 = 0.0;  ///< weaker user
  double r2 = 0.0;  ///< stronger user

  double sum() const noexcept { return r1 + r2; }
};

enum class RegionKind { capacity, noma, tdma };

const char* to_string(RegionKind kind) noexcept;

/// Absolute slack accepted outside a boundary's domain before it is an error.
inline constexpr double kDomainSlack = 1e-12;

/// Single-user rates (log2(1+x), log2(1+y)).
std::pair<double, double> single_user_rates(const ChannelPair& ch);

/// Superposition coding with SIC at the strong user. Throws InfeasibleSplit
/// for a2 > 1/2.
RatePair noma_rate_pair(const ChannelPair& ch, const PowerSplit& p);

RatePair tdma_rate_pair(const ChannelPair& ch, const TimeSplit& t);

/// Unconstrained superposition point; valid for any a2 in [0, 1].
RatePair superposition_rate_pair(const ChannelPair& ch, const PowerSplit& p);

/// Weak-user rate on the NOMA boundary as a function of the strong-user
/// rate z, for 0 <= z <= log2(1+y).
double noma_boundary(double z, const ChannelPair& ch);

/// d/dz of noma_boundary.
double noma_boundary_slope(double z, const ChannelPair& ch);

/// Straight line from (0, R1*) to (R2*, 0).
double tdma_boundary(double z, const ChannelPair& ch);

/// Same curve as noma_boundary, over the whole a2 in [0, 1] sweep.
double capacity_boundary(double z, const ChannelPair& ch);

/// Largest strong-user rate on the NOMA arc, log2(1 + y/2) (point F).
double noma_arc_end(const ChannelPair& ch);

/// Corner of the NOMA region at a2 = 1/2 (point F).
RatePair noma_corner(const ChannelPair& ch);

/// `count` points along a region boundary with r2 evenly spaced on
/// [0, z_max]; z_max is R2* for capacity/tdma and log2(1+y/2) for noma.
std::vector<RatePair> region_boundary_samples(RegionKind kind, const ChannelPair& ch,
                                              std::size_t count);

/// As region_boundary_samples(noma, ...) but with the arc ending at a2 = a2_max.
std::vector<RatePair> noma_boundary_samples(const ChannelPair& ch, std::size_t count,
                                            double a2_max);

}  // namespace noma
