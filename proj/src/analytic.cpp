#include "noma/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/special_functions/beta.hpp>

#include "noma/errors.hpp"

namespace noma {
namespace {

// The alternating sums lose roughly log10(w1) digits to cancellation, so
// terms are formed and summed in 50-digit arithmetic.
class LogFactorials {
 public:
  explicit LogFactorials(int max) : table_(static_cast<std::size_t>(max) + 1) {
    for (int k = 2; k <= max; ++k) {
      table_[static_cast<std::size_t>(k)] = table_[static_cast<std::size_t>(k) - 1] + log(SeriesReal(k));
    }
  }
  const SeriesReal& operator()(int k) const { return table_[static_cast<std::size_t>(k)]; }
  SeriesReal choose(int p, int q) const { return (*this)(p) - (*this)(q) - (*this)(p - q); }

 private:
  std::vector<SeriesReal> table_;
};

SeriesReal log_int(int k) { return log(SeriesReal(k)); }

int parity_sign(int power) { return power % 2 == 0 ? 1 : -1; }

void check_a2(double a2, const char* what) {
  if (std::isnan(a2)) throw DomainError(std::string(what) + ": a2 is NaN");
  if (a2 > 0.5) throw InfeasibleSplit(std::string(what) + ": a2 must not exceed 1/2");
  if (!(a2 > 0.0)) throw DegenerateSplit(std::string(what) + ": a2 must be positive");
}

SeriesReal log_w1_ext(const PairingConfig& cfg, const LogFactorials& lf) {
  return lf(cfg.M) - lf(cfg.m - 1) - lf(cfg.n - 1 - cfg.m) - lf(cfg.M - cfg.n);
}

SeriesReal log_w3_ext(const PairingConfig& cfg, const LogFactorials& lf) {
  return lf(cfg.M) - lf(cfg.n - 1) - lf(cfg.M - cfg.n);
}

SeriesReal log_d_of(const PairingConfig& cfg, double a2) {
  return -SeriesReal(w2_threshold(a2)) / SeriesReal(cfg.rho);
}

// Clamps a probability that may stray outside [0, 1] by round-off only.
double clamp_probability(double p, double slack, const char* what) {
  if (p < -slack || p > 1.0 + slack) {
    throw InternalInconsistency(std::string(what) + ": value " + std::to_string(p) +
                                " outside [0, 1]");
  }
  return std::clamp(p, 0.0, 1.0);
}

// w3 * sum_j (-1)^j C(n-1, j) / (M-n+j+1) * d^(M-n+j+1), i.e. P(y > w2)
// written as the direct upper-tail series.
double upper_tail_direct(const PairingConfig& cfg, double a2) {
  const int M = cfg.M, n = cfg.n;
  const LogFactorials lf(M);
  const SeriesReal lw3 = log_w3_ext(cfg, lf);
  const SeriesReal log_d = log_d_of(cfg, a2);
  std::vector<SeriesTerm> terms;
  terms.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j <= n - 1; ++j) {
    const int power = M - n + j + 1;
    terms.push_back({0, 0, j, lw3 + lf.choose(n - 1, j) - log_int(power) + power * log_d,
                     parity_sign(j)});
  }
  return sum_series(std::move(terms));
}

constexpr int kMaxAlternatingOrder = 16;

struct Eps4Parts {
  double integral_term = 0.0;
  double tail_term = 0.0;
};

Eps4Parts eps4_parts(const PairingConfig& cfg, double a2, double quad_tol) {
  if (!(quad_tol >= 1e-12 && quad_tol <= 1e-4)) {
    throw DomainError("p_eps4_closed: quad_tol must lie in [1e-12, 1e-4]");
  }
  const AnalyticConstants c = analytic_constants(cfg, a2);
  const int M = cfg.M, m = cfg.m, n = cfg.n;
  const double rho = cfg.rho;
  const double w2 = c.w2;
  const int r = n - 1 - m;

  // Inner sum over i. It equals int_{F_g}^{F_y} t^(m-1) (F_y - t)^r dt, the
  // complementary incomplete beta below; the alternating form is used only
  // while its binomial coefficients stay small.
  const bool alternating = r <= kMaxAlternatingOrder;
  std::vector<double> coef(static_cast<std::size_t>(r + 1));
  for (int i = 0; i <= r && alternating; ++i) {
    coef[static_cast<std::size_t>(i)] =
        parity_sign(i) * std::exp(std::lgamma(r + 1.0) - std::lgamma(i + 1.0) - std::lgamma(r - i + 1.0)) /
        static_cast<double>(m + i);
  }
  auto inner_sum = [&](double F_y, double F_g) {
    if (!alternating) {
      return std::pow(F_y, m + r) * boost::math::betac(static_cast<double>(m), r + 1.0, F_g / F_y);
    }
    double s = 0.0;
    for (int i = 0; i <= r; ++i) {
      const double a = std::pow(F_y, r - i) * (std::pow(F_y, m + i) - std::pow(F_g, m + i));
      s += coef[static_cast<std::size_t>(i)] * a;
    }
    return s;
  };
  auto integrand = [&](double y) {
    const double tail = std::exp(-y / rho);
    const double F_y = -std::expm1(-y / rho);
    const double g = (w2 - y) / (1.0 + y);
    const double F_g = -std::expm1(-std::max(g, 0.0) / rho);
    return (tail / rho) * std::pow(tail, M - n) * inner_sum(F_y, F_g);
  };

  Eps4Parts parts;
  // sqrt(w2 + 1) - 1 without cancellation.
  const double lower = w2 / (std::sqrt(w2 + 1.0) + 1.0);
  if (w2 > lower) {
    // Absolute floor far below quad_tol on the probability scale: a tiny
    // integral is otherwise chased into round-off.
    const quad::Result res = quad::integrate(integrand, lower, w2, quad_tol, 1e-3 * quad_tol / c.w1);
    parts.integral_term = c.w1 * res.value;
  }
  parts.tail_term = upper_tail_direct(cfg, a2);
  return parts;
}

}  // namespace

std::string_view to_string(ProbabilityMethod m) noexcept {
  switch (m) {
    case ProbabilityMethod::closed_form: return "closed";
    case ProbabilityMethod::quadrature: return "quadrature";
    case ProbabilityMethod::monte_carlo: return "mc";
  }
  return "?";
}

SeriesReal SeriesTerm::value() const { return sign * exp(log_magnitude); }

double sum_series(std::vector<SeriesTerm> terms, double absolute_floor) {
  std::sort(terms.begin(), terms.end(), [](const SeriesTerm& a, const SeriesTerm& b) {
    return a.log_magnitude > b.log_magnitude;
  });
  const SeriesReal eps = std::numeric_limits<SeriesReal>::epsilon();
  SeriesReal sum = 0;
  SeriesReal error = 0;
  for (const SeriesTerm& t : terms) {
    const SeriesReal v = t.value();
    // The log of a term is a sum of O(M) rounded logs; the relative error of
    // exp() of it scales with that count and with |log|.
    error += eps * (abs(t.log_magnitude) + 4 * (t.k + t.i + t.j + 64)) * abs(v);
    sum += v;
    error += eps * abs(sum);
  }
  const double error_bound = static_cast<double>(error);
  if (!(error_bound <= absolute_floor)) {
    char msg[128];
    std::snprintf(msg, sizeof msg, "alternating series: cancellation error bound %.3g exceeds %.3g",
                  error_bound, absolute_floor);
    throw UnsupportedSize(msg);
  }
  return static_cast<double>(sum);
}

double p_eps2_closed(const PairingConfig& cfg, double a2) {
  cfg.validate();
  check_a2(a2, "p_eps2_closed");
  // w2 = 0: E2 needs x < 0.
  if (a2 == 0.5) return 0.0;
  const int M = cfg.M, m = cfg.m, n = cfg.n;
  const LogFactorials lf(M);
  const SeriesReal lw1 = log_w1_ext(cfg, lf);
  const SeriesReal log_d = log_d_of(cfg, a2);
  // Largest term is below w1 2^(2n); leave at least 10 of the 50 digits.
  const double log10_peak = static_cast<double>(lw1) / std::numbers::ln10 + 2.0 * n * std::log10(2.0);
  if (log10_peak > 40.0) {
    throw UnsupportedSize("p_eps2_closed: series terms reach 1e" +
                          std::to_string(static_cast<int>(log10_peak)) +
                          ", beyond the working precision");
  }

  std::vector<SeriesTerm> terms;
  for (int k = 0; k <= m - 1; ++k) {
    // (-1)^(m-1-k) C(m-1, k) / (n-1-k)
    const SeriesReal log_coef = lw1 + lf.choose(m - 1, k) - log_int(n - 1 - k);
    const int coef_sign = parity_sign(m - 1 - k);
    for (int i = 0; i <= n - 1; ++i) {  // Q1
      terms.push_back({k, i, -1,
                       log_coef + lf.choose(n - 1, i) + (M - i) * log_d - log_int(M - i),
                       coef_sign * parity_sign(n - 1 - i)});
    }
    for (int i = 0; i <= k; ++i) {  // -Q2,k
      for (int j = 0; j <= n - 1 - k; ++j) {
        terms.push_back({k, i, j,
                         log_coef + lf.choose(k, i) + lf.choose(n - 1 - k, j) +
                             (M - i) * log_d - log_int(M - i - j),
                         -coef_sign * parity_sign(n - 1 - i - j)});
      }
    }
  }
  return clamp_probability(sum_series(std::move(terms)), 1e-9, "p_eps2_closed");
}

double p_eps2_special(int M, double d) {
  if (M < 2) throw DomainError("p_eps2_special: M must be at least 2");
  if (!(d > 0.0 && d <= 1.0)) throw DomainError("p_eps2_special: d must lie in (0, 1]");
  return 1.0 - std::pow(1.0 - d, M) - std::pow(d, M);
}

double optimal_a2_special(double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw DomainError("optimal_a2_special: rho must be positive and finite");
  }
  // (sqrt(1 + r) - 1) / r with r = rho ln 2, rationalised.
  return 1.0 / (std::sqrt(1.0 + rho * std::numbers::ln2) + 1.0);
}

double p_strong_above_threshold(const PairingConfig& cfg, double a2) {
  cfg.validate();
  check_a2(a2, "p_strong_above_threshold");
  const int M = cfg.M, n = cfg.n;
  if (a2 == 0.5) return 1.0;
  const LogFactorials lf(M);
  const SeriesReal log_d = log_d_of(cfg, a2);
  const SeriesReal lw3 = log_w3_ext(cfg, lf);
  std::vector<SeriesTerm> terms;
  for (int i = 0; i <= n - 1; ++i) {
    const int power = M - n + i + 1;
    const SeriesReal one_minus = 1 - exp(power * log_d);  // 1 - d^power
    terms.push_back({0, i, 0, lw3 + lf.choose(n - 1, i) - log_int(power) + log(one_minus),
                     parity_sign(i)});
  }
  return clamp_probability(1.0 - sum_series(std::move(terms)), 1e-9, "p_strong_above_threshold");
}

double p_eps1_closed(const PairingConfig& cfg, double a2) {
  const double p = p_strong_above_threshold(cfg, a2) - p_eps2_closed(cfg, a2);
  return clamp_probability(p, 1e-9, "p_eps1_closed");
}

double p_eps4_closed(const PairingConfig& cfg, double a2, double quad_tol) {
  cfg.validate();
  check_a2(a2, "p_eps4_closed");
  // w2 = 0: E4 needs x < sqrt(w2 + 1) - 1 = 0.
  if (a2 == 0.5) return 0.0;
  const Eps4Parts parts = eps4_parts(cfg, a2, quad_tol);
  return clamp_probability(1.0 - parts.integral_term - parts.tail_term, 1e-9, "p_eps4_closed");
}

double p_eps3_closed(const PairingConfig& cfg, double a2, double quad_tol) {
  return closed_form_event_probs(cfg, a2, quad_tol).p[2];
}

EventProbabilities closed_form_event_probs(const PairingConfig& cfg, double a2, double quad_tol) {
  cfg.validate();
  check_a2(a2, "closed_form_event_probs");
  const double p2 = p_eps2_closed(cfg, a2);
  const double p1 = clamp_probability(p_strong_above_threshold(cfg, a2) - p2, 1e-9, "P(E1)");
  const double p4 = p_eps4_closed(cfg, a2, quad_tol);
  const double p3 = clamp_probability(1.0 - p1 - p2 - p4, 1e-6, "p_eps3_closed");
  EventProbabilities out;
  out.p = {p1, p2, p3, p4};
  out.method = ProbabilityMethod::closed_form;
  return out;
}

}  // namespace noma
