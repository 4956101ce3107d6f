// Acceptance criteria. Usage: acceptance [criterion ...]; no arguments runs
// all of them. One PASS/FAIL line per criterion; exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "noma/analytic.hpp"
#include "noma/montecarlo.hpp"
#include "noma/validation.hpp"

using namespace noma;

namespace {

struct Outcome {
  bool passed;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double rho_of_db(double db) { return std::pow(10.0, db / 10.0); }

Outcome suite_outcome(validation::Suite suite, const validation::Options& opts) {
  const auto records = validation::run_suite(suite, opts);
  std::string failed;
  for (const auto& r : records) {
    if (!r.passed) {
      failed += (failed.empty() ? "" : "; ") + r.name + " = " + fmt("%.3g", r.value) +
                " (limit " + fmt("%.3g", r.threshold) + ")";
    }
  }
  if (failed.empty()) return {true, std::to_string(records.size()) + " checks passed"};
  return {false, failed};
}

Outcome special_case() {
  double worst = 0.0;
  for (double db = 0.0; db <= 60.0; db += 2.5) {
    const double rho = rho_of_db(db);
    const double p = p_eps2_closed(PairingConfig{10, 1, 10, rho}, optimal_a2_special(rho));
    worst = std::max(worst, std::abs(p - 0.998046875));
  }
  const double rho = rho_of_db(25.0);
  const auto mc = estimate_event_probs(PairingConfig{10, 1, 10, rho}, optimal_a2_special(rho), 0.5,
                                       McConfig{1'000'000, 42, 8});
  const double dev = std::abs(mc[EventId::E2] - 0.998046875);
  const double band = 3.0 * (*mc.stderr_)[1];
  return {worst <= 1e-12 && dev <= band,
          "closed max |p - (1 - 2^-9)| = " + fmt("%.2e", worst) + " over 0..60 dB; MC " +
              fmt("%.6f", mc[EventId::E2]) + ", |dev| " + fmt("%.2e", dev) + " vs 3 stderr " +
              fmt("%.2e", band)};
}

const std::pair<int, int> kGridPairs[] = {{1, 2}, {1, 10}, {2, 7}, {4, 5}, {5, 6}};
constexpr double kGridDb[] = {20.0, 25.0, 30.0};

Outcome three_way() {
  double worst_ratio = 0.0, worst_sum = 0.0;
  std::string where;
  for (double db : kGridDb) {
    const double rho = rho_of_db(db);
    const double a2 = 1.0 / std::sqrt(rho);
    for (const auto& [m, n] : kGridPairs) {
      const PairingConfig cfg{10, m, n, rho};
      const auto closed = closed_form_event_probs(cfg, a2, 1e-10);
      const auto quad = quadrature_event_probs(cfg, a2, 0.5, 1e-6);
      const auto mc = estimate_event_probs(cfg, a2, 0.5, McConfig{1'000'000, 42, 8});
      worst_sum = std::max({worst_sum, std::abs(closed.total() - 1.0), std::abs(quad.total() - 1.0)});
      for (std::size_t e = 0; e < 4; ++e) {
        const double band = std::max(1e-3, 3.0 * (*mc.stderr_)[e]);
        const double ratio = std::max({std::abs(closed.p[e] - quad.p[e]),
                                       std::abs(closed.p[e] - mc.p[e]),
                                       std::abs(quad.p[e] - mc.p[e])}) /
                             band;
        if (ratio > worst_ratio) {
          worst_ratio = ratio;
          where = "E" + std::to_string(e + 1) + " at (" + std::to_string(m) + "," +
                  std::to_string(n) + ") " + fmt("%g", db) + " dB";
        }
      }
    }
  }
  return {worst_ratio <= 1.0 && worst_sum <= 1e-9,
          "worst pairwise |diff| / max(1e-3, 3 stderr) = " + fmt("%.3f", worst_ratio) + " (" +
              where + "); worst |sum - 1| = " + fmt("%.1e", worst_sum)};
}

Outcome fig4_trend() {
  const double rho = rho_of_db(25.0);
  const double a2 = 1.0 / std::sqrt(rho);
  std::vector<double> p;
  for (int n = 2; n <= 10; ++n) p.push_back(p_eps2_closed(PairingConfig{10, 1, n, rho}, a2));
  const bool monotone = std::is_sorted(p.begin(), p.end());
  return {monotone && p.back() > p.front(),
          std::string(monotone ? "non-decreasing" : "NOT monotone") + " over n = 2..10; P(E2) " +
              fmt("%.6f", p.front()) + " at n = 2, " + fmt("%.6f", p.back()) + " at n = 10"};
}

Outcome fig5_gaps() {
  auto gaps = [](double db) {
    const double rho = rho_of_db(db);
    const auto r = estimate_average_rates(PairingConfig{10, 1, 10, rho}, optimal_a2_special(rho), 0.5,
                                          McConfig{1'000'000, 42, 8});
    return std::pair{r.r1_noma - r.r1_tdma, r.r2_noma - r.r2_tdma};
  };
  const auto [g1_55, g2_55] = gaps(55.0);
  const auto [g1_50, g2_50] = gaps(50.0);
  const bool weak_ok = g1_55 >= 0.5 && g1_55 <= 1.5;
  const bool strong_ok = g2_55 >= 1.5 && g2_55 <= 2.5;
  const double drift = std::max(std::abs(g1_55 - g1_50), std::abs(g2_55 - g2_50));
  return {weak_ok && strong_ok && drift < 0.3,
          "55 dB gaps: r1 " + fmt("%.3f", g1_55) + (weak_ok ? "" : " (outside [0.5, 1.5])") +
              ", r2 " + fmt("%.3f", g2_55) + (strong_ok ? "" : " (outside [1.5, 2.5])") +
              "; 50 dB gaps: r1 " + fmt("%.3f", g1_50) + ", r2 " + fmt("%.3f", g2_50) +
              "; max drift " + fmt("%.3f", drift)};
}

Outcome eps4_adjudication() {
  double worst = 0.0;
  std::string where;
  for (double db : kGridDb) {
    const double rho = rho_of_db(db);
    const double a2 = 1.0 / std::sqrt(rho);
    for (const auto& [m, n] : kGridPairs) {
      const PairingConfig cfg{10, m, n, rho};
      const double closed = p_eps4_closed(cfg, a2, 1e-10);
      const double oracle = p_event_quadrature(EventId::E4, cfg, a2, 0.5, 1e-9);
      if (std::abs(closed - oracle) >= worst) {
        worst = std::abs(closed - oracle);
        where = "(" + std::to_string(m) + "," + std::to_string(n) + ") " + fmt("%g", db) + " dB";
      }
    }
  }
  return {worst <= 1e-3, "corrected exponent; max |closed - quadrature| = " + fmt("%.2e", worst) +
                             " at " + where + "; closed form retained"};
}

struct Criterion {
  int id;
  const char* title;
  double time_limit_s;  // 0: none
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  validation::Options opts;
  opts.seed = 42;

  const std::vector<Criterion> criteria{
      {1, "special-case probability", 10.0, special_case},
      {2, "three-way agreement", 300.0, three_way},
      {3, "sum-rate and weak-rate dominance", 60.0,
       [&] { return suite_outcome(validation::Suite::propositions, opts); }},
      {4, "region geometry", 0.0, [&] { return suite_outcome(validation::Suite::regions, opts); }},
      {5, "order-statistics fidelity", 0.0,
       [&] { return suite_outcome(validation::Suite::orderstats, opts); }},
      {6, "P(E2) trend in n", 0.0, fig4_trend},
      {7, "average-rate gaps", 60.0, fig5_gaps},
      {8, "E4 closed form vs quadrature", 0.0, eps4_adjudication},
  };

  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    char* end = nullptr;
    const long id = std::strtol(argv[i], &end, 10);
    if (*end != '\0' || id < 1 || id > static_cast<long>(criteria.size())) {
      std::fprintf(stderr, "usage: %s [criterion 1-%zu ...]\n", argv[0], criteria.size());
      return 2;
    }
    selected.push_back(static_cast<int>(id));
  }
  if (selected.empty()) {
    for (const auto& c : criteria) selected.push_back(c.id);
  }

  bool all_passed = true;
  for (int id : selected) {
    const Criterion& c = criteria[static_cast<std::size_t>(id - 1)];
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit_s > 0.0 && elapsed > c.time_limit_s) {
      o.passed = false;
      o.detail += "; runtime " + fmt("%.1f", elapsed) + " s exceeds " + fmt("%.0f", c.time_limit_s) + " s";
    }
    std::printf("%s criterion %d (%s): %s [%.1f s]\n", o.passed ? "PASS" : "FAIL", c.id, c.title,
                o.detail.c_str(), elapsed);
    std::fflush(stdout);
    all_passed = all_passed && o.passed;
  }
  return all_passed ? 0 : 1;
}
