#include "noma/events.hpp"

#include <cmath>
#include <string>

#include "noma/errors.hpp"

namespace noma {
namespace {

int sign_with_tolerance(double v) {
  if (v > kTieTolerance) return 1;
  if (v < -kTieTolerance) return -1;
  return 0;
}

void check_splits(const PowerSplit& p, const TimeSplit& t) {
  if (!p.noma_feasible()) {
    throw InfeasibleSplit("classify: a2 = " + std::to_string(p.a2()) + " exceeds 1/2");
  }
  if (p.a2() == 0.0) throw DegenerateSplit("classify: a2 = 0 puts N at endpoint A");
  if (t.b2() == 0.0 || t.b2() == 1.0) {
    throw DegenerateSplit("classify: b2 must lie strictly inside (0, 1)");
  }
}

// A required sign of +1/-1; a tie (0) satisfies either.
bool admits(int cmp, int required) { return cmp == 0 || cmp == required; }

}  // namespace

std::string_view to_string(EventId e) noexcept {
  switch (e) {
    case EventId::E1: return "E1";
    case EventId::E2: return "E2";
    case EventId::E3: return "E3";
    case EventId::E4: return "E4";
  }
  return "?";
}

RateDifferences rate_differences(const ChannelPair& ch, const PowerSplit& p,
                                 const TimeSplit& t) {
  const RatePair n = noma_rate_pair(ch, p);
  const RatePair tt = tdma_rate_pair(ch, t);
  return {n.r1 - tt.r1, n.r2 - tt.r2, n.sum() - tt.sum()};
}

ComparisonOutcome compare(const ChannelPair& ch, const PowerSplit& p, const TimeSplit& t) {
  const RateDifferences d = rate_differences(ch, p, t);
  return {sign_with_tolerance(d.r1), sign_with_tolerance(d.r2), sign_with_tolerance(d.sum)};
}

EventId classify_full(const ChannelPair& ch, const PowerSplit& p, const TimeSplit& t) {
  check_splits(p, t);
  const ComparisonOutcome c = compare(ch, p, t);
  struct Pattern {
    EventId id;
    int r1, r2, sum;
  };
  static constexpr Pattern patterns[] = {
      {EventId::E1, -1, +1, +1},
      {EventId::E2, +1, +1, +1},
      {EventId::E3, +1, -1, +1},
      {EventId::E4, +1, -1, -1},
  };
  for (const Pattern& pat : patterns) {
    if (admits(c.r1_cmp, pat.r1) && admits(c.r2_cmp, pat.r2) && admits(c.sum_cmp, pat.sum)) {
      return pat.id;
    }
  }
  throw InternalInconsistency("classify_full: comparison signs (" + std::to_string(c.r1_cmp) +
                              ", " + std::to_string(c.r2_cmp) + ", " +
                              std::to_string(c.sum_cmp) + ") match no event");
}

EventId classify_reduced(const ChannelPair& ch, const PowerSplit& p, const TimeSplit& t) {
  check_splits(p, t);
  const RatePair n = noma_rate_pair(ch, p);
  const RatePair tt = tdma_rate_pair(ch, t);
  const int r1 = sign_with_tolerance(n.r1 - tt.r1);
  const int r2 = sign_with_tolerance(n.r2 - tt.r2);
  if (admits(r1, -1) && admits(r2, +1)) return EventId::E1;
  if (admits(r1, +1) && admits(r2, +1)) return EventId::E2;
  const int sum = sign_with_tolerance(n.sum() - tt.sum());
  if (admits(r2, -1) && admits(sum, +1)) return EventId::E3;
  if (admits(sum, -1)) return EventId::E4;
  throw InternalInconsistency("classify_reduced: no reduced condition holds");
}

double w2_threshold(double a2) {
  if (!(a2 > 0.0 && a2 <= 0.5)) throw DomainError("w2_threshold: a2 must lie in (0, 1/2]");
  return (1.0 - 2.0 * a2) / (a2 * a2);
}

bool epsilon2_threshold(const ChannelPair& ch, const PowerSplit& p) {
  const double w2 = w2_threshold(p.a2());
  return ch.x() < w2 && ch.y() > w2;
}

SegmentCuts segment_cuts(const ChannelPair& ch, const PowerSplit& p) {
  const RatePair n = noma_rate_pair(ch, p);
  const auto [r1_star, r2_star] = single_user_rates(ch);
  // TDMA segment: r1 = r1_star * (1 - r2 / r2_star).
  const double b_r2 = r2_star * (1.0 - n.r1 / r1_star);
  const double d_r2 = (n.sum() - r1_star) / (1.0 - r1_star / r2_star);
  auto on_segment = [&](double r2) { return RatePair{r1_star * (1.0 - r2 / r2_star), r2}; };
  return {on_segment(b_r2), on_segment(n.r2), on_segment(d_r2)};
}

}  // namespace noma
