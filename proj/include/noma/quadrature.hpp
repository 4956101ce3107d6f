#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <string>
#include <vector>

#include "noma/errors.hpp"

namespace noma::quad {

struct Diagnostics {
  std::size_t intervals = 0;     ///< subintervals in the final partition
  std::size_t evaluations = 0;   ///< integrand calls
  double error_estimate = 0.0;
};

template <std::size_t N>
struct VectorResult {
  std::array<double, N> value{};
  Diagnostics diag;
};

struct Result {
  double value = 0.0;
  Diagnostics diag;
};

namespace detail {

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
inline constexpr std::array<double, 8> kXgk{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <std::size_t N>
struct Segment {
  double a = 0.0;
  double b = 0.0;
  std::array<double, N> value{};
  double error = 0.0;

  bool operator<(const Segment& o) const { return error < o.error; }
};

template <std::size_t N, class F>
Segment<N> kronrod15(const F& f, double a, double b, std::size_t& evals) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::array<double, N> kron{};
  std::array<double, N> gauss{};
  const std::array<double, N> fc = f(center);
  for (std::size_t c = 0; c < N; ++c) {
    kron[c] = kWgk[7] * fc[c];
    gauss[c] = kWg[3] * fc[c];
  }
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const std::array<double, N> f1 = f(center - dx);
    const std::array<double, N> f2 = f(center + dx);
    for (std::size_t c = 0; c < N; ++c) {
      const double s = f1[c] + f2[c];
      kron[c] += kWgk[j] * s;
      if (j % 2 == 1) gauss[c] += kWg[j / 2] * s;
    }
  }
  evals += 15;
  Segment<N> seg{a, b, {}, 0.0};
  for (std::size_t c = 0; c < N; ++c) {
    seg.value[c] = kron[c] * half;
    seg.error = std::max(seg.error, std::abs((kron[c] - gauss[c]) * half));
  }
  return seg;
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (G7/K15) integration of a vector-valued
/// integrand over the partition given by sorted `breaks`. The interval with
/// the largest error estimate is bisected until the summed estimate drops
/// below max(abs_tol, rel_tol * max_c |I_c|). Breaks let the caller place
/// features the initial rule would otherwise straddle or miss.
template <std::size_t N, class F>
VectorResult<N> integrate_vector(const F& f, const std::vector<double>& breaks, double rel_tol,
                                 double abs_tol = 0.0, std::size_t max_intervals = 20000) {
  VectorResult<N> out;
  std::size_t evals = 0;
  std::priority_queue<detail::Segment<N>> heap;
  for (std::size_t i = 1; i < breaks.size(); ++i) {
    if (breaks[i] > breaks[i - 1]) heap.push(detail::kronrod15<N>(f, breaks[i - 1], breaks[i], evals));
  }
  if (heap.empty()) return out;
  auto totals = [&heap] {
    // Sums in a fixed order so results do not depend on heap layout.
    std::vector<detail::Segment<N>> segs;
    auto copy = heap;
    while (!copy.empty()) {
      segs.push_back(copy.top());
      copy.pop();
    }
    std::sort(segs.begin(), segs.end(),
              [](const auto& l, const auto& r) { return l.a < r.a; });
    std::array<double, N> value{};
    double error = 0.0;
    for (const auto& s : segs) {
      for (std::size_t c = 0; c < N; ++c) value[c] += s.value[c];
      error += s.error;
    }
    return std::pair{value, error};
  };
  auto [running, error_sum] = totals();
  while (true) {
    double scale = 0.0;
    for (double v : running) scale = std::max(scale, std::abs(v));
    if (error_sum <= std::max(abs_tol, rel_tol * scale)) break;
    if (heap.size() >= max_intervals) {
      throw NonConvergence("adaptive quadrature: subdivision budget of " +
                           std::to_string(max_intervals) + " intervals exhausted (error estimate " +
                           std::to_string(error_sum) + ", " + std::to_string(evals) +
                           " evaluations)");
    }
    const detail::Segment<N> worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw NonConvergence("adaptive quadrature: interval collapsed below machine resolution");
    }
    const auto left = detail::kronrod15<N>(f, worst.a, mid, evals);
    const auto right = detail::kronrod15<N>(f, mid, worst.b, evals);
    error_sum += left.error + right.error - worst.error;
    for (std::size_t c = 0; c < N; ++c) {
      running[c] += left.value[c] + right.value[c] - worst.value[c];
    }
    heap.push(left);
    heap.push(right);
  }
  const auto [value, error] = totals();
  out.value = value;
  out.diag = {heap.size(), evals, error};
  return out;
}

template <std::size_t N, class F>
VectorResult<N> integrate_vector(const F& f, double a, double b, double rel_tol,
                                 double abs_tol = 0.0, std::size_t max_intervals = 20000) {
  return integrate_vector<N>(f, std::vector<double>{a, b}, rel_tol, abs_tol, max_intervals);
}

template <class F>
Result integrate(const F& f, double a, double b, double rel_tol, double abs_tol = 0.0,
                 std::size_t max_intervals = 20000) {
  auto wrapped = [&f](double t) { return std::array<double, 1>{f(t)}; };
  const auto r = integrate_vector<1>(wrapped, a, b, rel_tol, abs_tol, max_intervals);
  return {r.value[0], r.diag};
}

/// Gauss-Legendre rule with `points` nodes on [-1, 1], exact for
/// polynomials of degree 2 * points - 1.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussLegendre(std::size_t points);

  template <class F>
  double integrate(const F& f, double a, double b) const {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(center + half * nodes[i]);
    return s * half;
  }
};

}  // namespace noma::quad
