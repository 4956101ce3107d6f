#include "noma/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "noma/errors.hpp"
#include "noma/events.hpp"

namespace noma {
namespace {

// Runs body(block) for every block, spreading contiguous block ranges over
// at most `shards` workers.
template <class Body>
void for_each_block(std::uint64_t blocks, unsigned shards, Body&& body) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>({shards, worker_threads(), blocks}));
  if (workers <= 1) {
    for (std::uint64_t b = 0; b < blocks; ++b) body(b);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t begin = blocks * w / workers;
    const std::uint64_t end = blocks * (w + 1) / workers;
    pool.emplace_back([begin, end, &body] {
      for (std::uint64_t b = begin; b < end; ++b) body(b);
    });
  }
}

struct Moments {
  std::uint64_t count = 0;
  std::array<double, 4> mean{};
  std::array<double, 4> m2{};

  void add(const std::array<double, 4>& v) {
    ++count;
    for (std::size_t i = 0; i < 4; ++i) {
      const double delta = v[i] - mean[i];
      mean[i] += delta / static_cast<double>(count);
      m2[i] += delta * (v[i] - mean[i]);
    }
  }

  // Chan et al. pairwise merge.
  void merge(const Moments& o) {
    if (o.count == 0) return;
    const double na = static_cast<double>(count);
    const double nb = static_cast<double>(o.count);
    const double n = na + nb;
    for (std::size_t i = 0; i < 4; ++i) {
      const double delta = o.mean[i] - mean[i];
      mean[i] += delta * nb / n;
      m2[i] += o.m2[i] + delta * delta * na * nb / n;
    }
    count += o.count;
  }
};

}  // namespace

void McConfig::validate() const {
  if (trials < 1) throw DomainError("McConfig: trials must be at least 1");
  if (shards < 1) throw DomainError("McConfig: shards must be at least 1");
}

std::uint64_t McConfig::actual_trials() const {
  validate();
  return (trials + shards - 1) / shards * shards;
}

unsigned worker_threads() {
  if (const char* env = std::getenv("NOMA_THREADS"); env != nullptr) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

double frequency_stderr(std::uint64_t k, std::uint64_t n) {
  if (n == 0) throw DomainError("frequency_stderr: no trials");
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  if (n >= 10'000 && p >= 10.0 / nn && p <= 1.0 - 10.0 / nn) return std::sqrt(p * (1.0 - p) / nn);
  constexpr double kAlpha = 1.0 - 0.6826894921370859;
  const double kd = static_cast<double>(k);
  const double lower = k == 0 ? 0.0 : boost::math::ibeta_inv(kd, nn - kd + 1.0, kAlpha / 2.0);
  const double upper =
      k == n ? 1.0 : boost::math::ibeta_inv(kd + 1.0, nn - kd, 1.0 - kAlpha / 2.0);
  return std::max(p - lower, upper - p);
}

EventProbabilities estimate_event_probs(const PairingConfig& cfg, double a2, double b2,
                                        const McConfig& mc) {
  cfg.validate();
  const std::uint64_t trials = mc.actual_trials();
  const PowerSplit power(a2);
  const TimeSplit time(b2);
  // Surface split errors here rather than inside the workers.
  (void)classify_full(ChannelPair(1.0, 2.0), power, time);
  const Philox4x64 rng(mc.seed);
  const std::uint64_t blocks = (trials + kMcBlockSize - 1) / kMcBlockSize;
  std::vector<std::array<std::uint64_t, 4>> counts(blocks);

  for_each_block(blocks, mc.shards, [&](std::uint64_t b) {
    std::vector<double> scratch(static_cast<std::size_t>(cfg.M));
    std::array<std::uint64_t, 4> local{};
    const std::uint64_t end = std::min(trials, (b + 1) * kMcBlockSize);
    for (std::uint64_t t = b * kMcBlockSize; t < end; ++t) {
      const ChannelPair ch = sample_pair(cfg, rng, t, scratch);
      ++local[static_cast<std::size_t>(index_of(classify_full(ch, power, time)))];
    }
    counts[b] = local;
  });

  std::array<std::uint64_t, 4> total{};
  for (const auto& c : counts) {
    for (std::size_t i = 0; i < 4; ++i) total[i] += c[i];
  }
  EventProbabilities out;
  out.method = ProbabilityMethod::monte_carlo;
  out.trials = trials;
  std::array<double, 4> se{};
  for (std::size_t i = 0; i < 4; ++i) {
    out.p[i] = static_cast<double>(total[i]) / static_cast<double>(trials);
    se[i] = frequency_stderr(total[i], trials);
  }
  out.stderr_ = se;
  return out;
}

AverageRates estimate_average_rates(const PairingConfig& cfg, double a2, double b2,
                                    const McConfig& mc) {
  cfg.validate();
  const std::uint64_t trials = mc.actual_trials();
  const PowerSplit power(a2);
  const TimeSplit time(b2);
  if (!power.noma_feasible()) throw InfeasibleSplit("estimate_average_rates: a2 exceeds 1/2");
  const Philox4x64 rng(mc.seed);
  const std::uint64_t blocks = (trials + kMcBlockSize - 1) / kMcBlockSize;
  std::vector<Moments> partial(blocks);

  for_each_block(blocks, mc.shards, [&](std::uint64_t b) {
    std::vector<double> scratch(static_cast<std::size_t>(cfg.M));
    Moments local;
    const std::uint64_t end = std::min(trials, (b + 1) * kMcBlockSize);
    for (std::uint64_t t = b * kMcBlockSize; t < end; ++t) {
      const ChannelPair ch = sample_pair(cfg, rng, t, scratch);
      const RatePair n = noma_rate_pair(ch, power);
      const RatePair tt = tdma_rate_pair(ch, time);
      local.add({n.r1, n.r2, tt.r1, tt.r2});
    }
    partial[b] = local;
  });

  Moments total;
  for (const Moments& m : partial) total.merge(m);
  AverageRates out;
  out.r1_noma = total.mean[0];
  out.r2_noma = total.mean[1];
  out.r1_tdma = total.mean[2];
  out.r2_tdma = total.mean[3];
  out.trials = trials;
  const double n = static_cast<double>(total.count);
  for (std::size_t i = 0; i < 4; ++i) {
    out.stderr_[i] = total.count > 1 ? std::sqrt(total.m2[i] / (n - 1.0) / n) : 0.0;
  }
  return out;
}

}  // namespace noma
