#ifndef REPARAM_NUMERICS_HPP
#define REPARAM_NUMERICS_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>

#include "reparam/errors.hpp"
#include "reparam/rng.hpp"

namespace reparam {

inline constexpr double kLog2Pi = 1.8378770664093453;       // log(2*pi)
inline constexpr double kHalfLog2Pi = 0.9189385332046727;   // log(2*pi)/2
inline constexpr double kHalfLog2PiE = 1.4189385332046727;  // (1+log(2*pi))/2
inline constexpr double kInvSqrtPi = 0.5641895835477563;    // 1/sqrt(pi)
inline constexpr double kSqrt2 = 1.4142135623730951;
inline constexpr double kSqrt2Pi = 2.5066282746310002;
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Interval {
  double lo;
  double hi;

  Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (!std::isfinite(lo) || !std::isfinite(hi))
      throw DomainError("Interval endpoints must be finite");
    if (!(lo < hi)) throw DomainError("Interval requires lo < hi");
  }

  double width() const { return hi - lo; }
  double midpoint() const { return 0.5 * (lo + hi); }
};

namespace detail {

inline double checked_eval(const std::function<double(double)>& f, double x) {
  double v = f(x);
  if (!std::isfinite(v))
    throw NonFiniteIntegrand("integrand returned non-finite value at x = " +
                             std::to_string(x));
  return v;
}

inline double simpson(double fa, double fm, double fb, double h) {
  return h / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson(const std::function<double(double)>& f,
                               double a, double fa, double b, double fb,
                               double m, double fm, double whole,
                               double abs_tol, int depth) {
  double lm = 0.5 * (a + m);
  double rm = 0.5 * (m + b);
  double flm = checked_eval(f, lm);
  double frm = checked_eval(f, rm);
  double left = simpson(fa, flm, fm, m - a);
  double right = simpson(fm, frm, fb, b - m);
  double delta = left + right - whole;
  if (std::fabs(delta) <= 15.0 * abs_tol) return left + right + delta / 15.0;
  if (depth <= 0)
    throw MaxDepthExceeded("quadrature refinement limit reached on [" +
                           std::to_string(a) + ", " + std::to_string(b) + "]");
  // error budget halves per split
  return adaptive_simpson(f, a, fa, m, fm, lm, flm, left, 0.5 * abs_tol,
                          depth - 1) +
         adaptive_simpson(f, m, fm, b, fb, rm, frm, right, 0.5 * abs_tol,
                          depth - 1);
}

}  // namespace detail

// Adaptive Simpson quadrature with absolute error target. Exact (to
// rounding) on polynomials of degree <= 3 per panel.
inline double integrate_1d(const std::function<double(double)>& f,
                           const Interval& domain, double abs_tol) {
  if (!(abs_tol > 0.0)) throw DomainError("abs_tol must be positive");
  double a = domain.lo, b = domain.hi;
  double fa = detail::checked_eval(f, a);
  double fb = detail::checked_eval(f, b);
  double m = 0.5 * (a + b);
  double fm = detail::checked_eval(f, m);
  double whole = detail::simpson(fa, fm, fb, b - a);
  constexpr int kMaxDepth = 40;
  return detail::adaptive_simpson(f, a, fa, b, fb, m, fm, whole, abs_tol,
                                  kMaxDepth);
}

// Signed integral: integrate_1d with oriented limits (returns 0 when a == b).
inline double integrate_signed(const std::function<double(double)>& f,
                               double a, double b, double abs_tol) {
  if (a == b) return 0.0;
  if (a < b) return integrate_1d(f, Interval(a, b), abs_tol);
  return -integrate_1d(f, Interval(b, a), abs_tol);
}

// Bracketed root-finding for monotone functions: bisection with secant
// acceleration. The bracket never widens, so the result stays inside it.
inline double find_root_monotone(const std::function<double(double)>& g,
                                 const Interval& bracket, double tol) {
  if (!(tol > 0.0)) throw DomainError("tol must be positive");
  double a = bracket.lo, b = bracket.hi;
  double ga = g(a), gb = g(b);
  if (ga == 0.0) return a;
  if (gb == 0.0) return b;
  if ((ga > 0.0) == (gb > 0.0))
    throw NoSignChange("g(" + std::to_string(a) + ") and g(" +
                       std::to_string(b) + ") have the same strict sign");
  constexpr int kMaxIter = 200;
  bool force_bisect = false;
  for (int iter = 0; iter < kMaxIter; ++iter) {
    double width = b - a;
    if (width < tol) return 0.5 * (a + b);
    double x;
    if (force_bisect) {
      x = 0.5 * (a + b);
    } else {
      double denom = gb - ga;
      x = (denom != 0.0) ? b - gb * (b - a) / denom : 0.5 * (a + b);
      if (!(x > a && x < b)) x = 0.5 * (a + b);
    }
    double gx = g(x);
    if (gx == 0.0) return x;
    if ((gx > 0.0) == (ga > 0.0)) {
      a = x;
      ga = gx;
    } else {
      b = x;
      gb = gx;
    }
    // if the secant step failed to halve the bracket, bisect next round
    force_bisect = (b - a) > 0.5 * width;
  }
  throw MaxIterations("root not bracketed to tolerance " + std::to_string(tol) +
                      " within 200 iterations");
}

namespace detail {

// Rational approximations for erf/erfc after W. J. Cody's SPECFUN,
// relative error below 1e-14 in double precision.
inline double erfc_cody(double x) {
  static const double A[5] = {3.16112374387056560e+00, 1.13864154151050156e+02,
                              3.77485237685302021e+02, 3.20937758913846947e+03,
                              1.85777706184603153e-01};
  static const double B[4] = {2.36012909523441209e+01, 2.44024637934444173e+02,
                              1.28261652607737228e+03,
                              2.84423683343917062e+03};
  static const double C[9] = {
      5.64188496988670089e-01, 8.88314979438837594e+00,
      6.61191906371416295e+01, 2.98635138197400131e+02,
      8.81952221241769090e+02, 1.71204761263407058e+03,
      2.05107837782607147e+03, 1.23033935479799725e+03,
      2.15311535474403846e-08};
  static const double D[8] = {
      1.57449261107098347e+01, 1.17693950891312499e+02,
      5.37181101862009858e+02, 1.62138957456669019e+03,
      3.29079923573345963e+03, 4.36261909014324716e+03,
      3.43936767414372164e+03, 1.23033935480374942e+03};
  static const double P[6] = {3.05326634961232344e-01, 3.60344899949804439e-01,
                              1.25781726111229246e-01, 1.60837851487422766e-02,
                              6.58749161529837803e-04,
                              1.63153871373020978e-02};
  static const double Q[5] = {2.56852019228982242e+00, 1.87295284992346047e+00,
                              5.27905102951428412e-01, 6.05183413124413191e-02,
                              2.33520497626869185e-03};

  double y = std::fabs(x);
  double result;
  if (y <= 0.46875) {
    double z = y * y;
    double xnum = A[4] * z;
    double xden = z;
    for (int i = 0; i < 3; ++i) {
      xnum = (xnum + A[i]) * z;
      xden = (xden + B[i]) * z;
    }
    double erf_val = x * (xnum + A[3]) / (xden + B[3]);
    return 1.0 - erf_val;
  } else if (y <= 4.0) {
    double xnum = C[8] * y;
    double xden = y;
    for (int i = 0; i < 7; ++i) {
      xnum = (xnum + C[i]) * y;
      xden = (xden + D[i]) * y;
    }
    result = (xnum + C[7]) / (xden + D[7]);
  } else {
    if (y >= 26.6) {
      result = 0.0;
    } else {
      double z = 1.0 / (y * y);
      double xnum = P[5] * z;
      double xden = z;
      for (int i = 0; i < 4; ++i) {
        xnum = (xnum + P[i]) * z;
        xden = (xden + Q[i]) * z;
      }
      result = z * (xnum + P[4]) / (xden + Q[4]);
      result = (kInvSqrtPi - result) / y;
    }
  }
  if (result != 0.0) {
    // split exp(-y^2) to avoid cancellation in the exponent
    double ysq = std::trunc(y * 16.0) / 16.0;
    double del = (y - ysq) * (y + ysq);
    result = std::exp(-ysq * ysq) * std::exp(-del) * result;
  }
  return (x < 0.0) ? 2.0 - result : result;
}

}  // namespace detail

inline double std_normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / kSqrt2Pi;
}

inline double std_normal_log_pdf(double x) {
  return -0.5 * x * x - kHalfLog2Pi;
}

inline double std_normal_cdf(double x) {
  return 0.5 * detail::erfc_cody(-x / kSqrt2);
}

// Acklam's rational initializer refined by one Halley step.
inline double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw DomainError("quantile argument must lie strictly inside (0, 1)");
  static const double A[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double B[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double C[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double D[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double kPLow = 0.02425;

  double x;
  if (p < kPLow) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5]) /
        ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0);
  } else if (p <= 1.0 - kPLow) {
    double q = p - 0.5;
    double r = q * q;
    x = (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) *
        q /
        (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q +
          C[5]) /
        ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0);
  }
  double e = std_normal_cdf(x) - p;
  double u = e * kSqrt2Pi * std::exp(0.5 * x * x);
  x = x - u / (1.0 + 0.5 * x * u);
  return x;
}

// Inverse-CDF sampling keeps draws bit-reproducible across platforms and
// consumes exactly one uniform per variate.
inline double sample_std_normal(RngState& rng) {
  return std_normal_quantile(rng.next_open01());
}

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t n = 0;
};

// Welford accumulation; deterministic for a fixed draw order.
class RunningMean {
 public:
  void add(double v) {
    ++n_;
    double d = v - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (v - mean_);
  }
  McEstimate estimate() const {
    McEstimate e;
    e.mean = mean_;
    e.n = n_;
    if (n_ > 1)
      e.std_error =
          std::sqrt(m2_ / static_cast<double>(n_ - 1) / static_cast<double>(n_));
    return e;
  }
  double variance() const {
    return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
  }

 private:
  std::int64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

}  // namespace reparam

#endif  // REPARAM_NUMERICS_HPP
