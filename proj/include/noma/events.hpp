#pragma once

#include <array>
#include <string_view>

#include "noma/core_regions.hpp"

namespace noma {

/// Subsegment of the TDMA boundary A-E holding the TDMA point T:
/// E1 = A-B, E2 = B-C, E3 = C-D, E4 = D-E.
enum class EventId { E1 = 1, E2 = 2, E3 = 3, E4 = 4 };

inline constexpr std::array<EventId, 4> kAllEvents{EventId::E1, EventId::E2, EventId::E3,
                                                   EventId::E4};

inline constexpr int index_of(EventId e) noexcept { return static_cast<int>(e) - 1; }
std::string_view to_string(EventId e) noexcept;

/// Comparisons within this absolute distance count as ties.
inline constexpr double kTieTolerance = 1e-12;

/// Raw NOMA-minus-TDMA rate differences.
struct RateDifferences {
  double r1 = 0.0;
  double r2 = 0.0;
  double sum = 0.0;
};

/// Signs (-1, 0, +1) of the three NOMA-vs-TDMA comparisons.
struct ComparisonOutcome {
  int r1_cmp = 0;
  int r2_cmp = 0;
  int sum_cmp = 0;
};

RateDifferences rate_differences(const ChannelPair& ch, const PowerSplit& p, const TimeSplit& t);
ComparisonOutcome compare(const ChannelPair& ch, const PowerSplit& p, const TimeSplit& t);

/// Classifies by the complete three-comparison event definitions.
/// Requires a2 in (0, 1/2] and b2 in (0, 1); ties go to the lower-numbered event.
EventId classify_full(const ChannelPair& ch, const PowerSplit& p, const TimeSplit& t);

/// Classifies using only the non-redundant comparisons of each event.
EventId classify_reduced(const ChannelPair& ch, const PowerSplit& p, const TimeSplit& t);

/// (1 - 2 a2) / a2^2.
double w2_threshold(double a2);

/// With b2 = 1/2, E2 holds exactly when x < w2 < y.
bool epsilon2_threshold(const ChannelPair& ch, const PowerSplit& p);

/// Points where the lines R1 = R1^N, R2 = R2^N and R1 + R2 = sum^N cross the
/// TDMA segment, ordered from A towards E.
struct SegmentCuts {
  RatePair b;
  RatePair c;
  RatePair d;
};

SegmentCuts segment_cuts(const ChannelPair& ch, const PowerSplit& p);

}  // namespace noma
