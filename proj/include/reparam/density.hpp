#ifndef REPARAM_DENSITY_HPP
#define REPARAM_DENSITY_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "reparam/errors.hpp"
#include "reparam/numerics.hpp"
#include "reparam/rng.hpp"
#include "reparam/vec.hpp"

namespace reparam {

struct Support {
  enum class Kind { Box, AllSpace, UnitCube };

  Kind kind = Kind::AllSpace;
  int dim = 0;
  Vec lo;  // populated for Box / UnitCube
  Vec hi;

  static Support all_space(int dim) {
    if (dim < 1) throw DomainError("support dimension must be >= 1");
    Support s;
    s.kind = Kind::AllSpace;
    s.dim = dim;
    return s;
  }

  static Support box(Vec lo, Vec hi) {
    if (lo.empty() || lo.size() != hi.size())
      throw DomainError("box support needs matching non-empty bounds");
    for (std::size_t i = 0; i < lo.size(); ++i) {
      if (!std::isfinite(lo[i]) || !std::isfinite(hi[i]) || !(lo[i] < hi[i]))
        throw DomainError("box support requires finite lo < hi componentwise");
    }
    Support s;
    s.kind = Kind::Box;
    s.dim = static_cast<int>(lo.size());
    s.lo = std::move(lo);
    s.hi = std::move(hi);
    return s;
  }

  static Support unit_cube(int dim) {
    Support s = box(Vec(dim, 0.0), Vec(dim, 1.0));
    s.kind = Kind::UnitCube;
    return s;
  }

  bool bounded() const { return kind != Kind::AllSpace; }

  bool contains(const Vec& x) const {
    if (!bounded()) return true;
    for (int i = 0; i < dim; ++i)
      if (x[i] < lo[i] || x[i] > hi[i]) return false;
    return true;
  }

  bool strictly_inside(const Vec& x) const {
    if (!bounded()) return true;
    for (int i = 0; i < dim; ++i)
      if (x[i] <= lo[i] || x[i] >= hi[i]) return false;
    return true;
  }

  // Does this support contain the other one?
  bool covers(const Support& other) const {
    if (dim != other.dim) return false;
    if (!bounded()) return true;
    if (!other.bounded()) return false;
    for (int i = 0; i < dim; ++i)
      if (other.lo[i] < lo[i] || other.hi[i] > hi[i]) return false;
    return true;
  }
};

// Evaluable probability density with sampling and (when known) closed-form
// entropy. Immutable after construction; sampling mutates only the caller's
// RngState. Optional fields expose structure some operations exploit:
// an analytic 1-D CDF/quantile, or a factorization into 1-D marginals.
struct Density {
  int dim = 0;
  Support support;
  std::function<double(const Vec&)> log_density;
  std::function<Vec(RngState&)> sampler;
  std::optional<double> entropy_analytic;

  std::function<double(double)> cdf1d;       // dim == 1 only
  std::function<double(double)> quantile1d;  // dim == 1 only
  std::vector<Density> marginals;            // product structure when known
  std::string describe;
};

struct MixtureSpec {
  Vec weights;
  std::vector<Density> components;
};

struct EntropyEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t n_mc = 0;  // 0 when analytic
  bool analytic = false;
};

// ---------------------------------------------------------------------------
// Operations

inline double evaluate_log_density(const Density& d, const Vec& x) {
  check_dim(x, d.dim, "evaluate_log_density");
  return d.log_density(x);
}

inline std::vector<Vec> sample(const Density& d, std::int64_t n,
                               RngState& rng) {
  if (n < 1) throw DomainError("sample count must be >= 1");
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) out.push_back(d.sampler(rng));
  return out;
}

inline EntropyEstimate entropy(const Density& d, std::int64_t n_mc,
                               RngState& rng) {
  EntropyEstimate e;
  if (d.entropy_analytic) {
    e.value = *d.entropy_analytic;
    e.analytic = true;
    return e;
  }
  if (n_mc < 2)
    throw DomainError("Monte Carlo entropy needs n_mc >= 2 when no analytic "
                      "entropy is available");
  RunningMean acc;
  for (std::int64_t i = 0; i < n_mc; ++i)
    acc.add(-d.log_density(d.sampler(rng)));
  McEstimate m = acc.estimate();
  e.value = m.mean;
  e.std_error = m.std_error;
  e.n_mc = n_mc;
  return e;
}

// ---------------------------------------------------------------------------
// Factories

inline Density normal_1d(double mean, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(mean) || !std::isfinite(sigma))
    throw DomainError("normal_1d requires finite mean and sigma > 0");
  Density d;
  d.dim = 1;
  d.support = Support::all_space(1);
  d.log_density = [mean, sigma](const Vec& x) {
    return std_normal_log_pdf((x[0] - mean) / sigma) - std::log(sigma);
  };
  d.sampler = [mean, sigma](RngState& rng) {
    return Vec{mean + sigma * sample_std_normal(rng)};
  };
  d.entropy_analytic = kHalfLog2PiE + std::log(sigma);
  d.cdf1d = [mean, sigma](double x) {
    return std_normal_cdf((x - mean) / sigma);
  };
  d.quantile1d = [mean, sigma](double p) {
    return mean + sigma * std_normal_quantile(p);
  };
  d.describe = "N(" + std::to_string(mean) + ", " + std::to_string(sigma) +
               "^2)";
  return d;
}

inline Density uniform_1d(double lo, double hi) {
  Support sup = Support::box({lo}, {hi});
  double log_len = std::log(hi - lo);
  Density d;
  d.dim = 1;
  d.support = sup;
  d.log_density = [lo, hi, log_len](const Vec& x) {
    return (x[0] < lo || x[0] > hi) ? kNegInf : -log_len;
  };
  d.sampler = [lo, hi](RngState& rng) {
    return Vec{lo + (hi - lo) * rng.next_double()};
  };
  d.entropy_analytic = log_len;
  d.cdf1d = [lo, hi](double x) {
    if (x <= lo) return 0.0;
    if (x >= hi) return 1.0;
    return (x - lo) / (hi - lo);
  };
  d.quantile1d = [lo, hi](double p) { return lo + p * (hi - lo); };
  d.describe = "U([" + std::to_string(lo) + ", " + std::to_string(hi) + "])";
  return d;
}

// Independent product of 1-D marginals.
inline Density product(std::vector<Density> marginals, std::string name = "") {
  if (marginals.empty()) throw DomainError("product needs >= 1 marginal");
  for (const Density& m : marginals)
    if (m.dim != 1) throw DomainError("product marginals must be 1-D");
  int dim = static_cast<int>(marginals.size());

  bool all_box = true;
  for (const Density& m : marginals)
    all_box = all_box && m.support.bounded();
  Support sup = Support::all_space(dim);
  if (all_box) {
    Vec lo(dim), hi(dim);
    for (int i = 0; i < dim; ++i) {
      lo[i] = marginals[i].support.lo[0];
      hi[i] = marginals[i].support.hi[0];
    }
    sup = Support::box(std::move(lo), std::move(hi));
  }

  std::optional<double> ent = 0.0;
  for (const Density& m : marginals) {
    if (!m.entropy_analytic) {
      ent.reset();
      break;
    }
    *ent += *m.entropy_analytic;
  }

  Density d;
  d.dim = dim;
  d.support = sup;
  d.marginals = std::move(marginals);
  const std::vector<Density>& ms = d.marginals;  // closures capture a copy
  d.log_density = [ms](const Vec& x) {
    double s = 0.0;
    Vec xi(1);
    for (std::size_t i = 0; i < ms.size(); ++i) {
      xi[0] = x[i];
      double v = ms[i].log_density(xi);
      if (v == kNegInf) return kNegInf;
      s += v;
    }
    return s;
  };
  d.sampler = [ms](RngState& rng) {
    Vec x(ms.size());
    for (std::size_t i = 0; i < ms.size(); ++i) x[i] = ms[i].sampler(rng)[0];
    return x;
  };
  d.entropy_analytic = ent;
  d.describe = name.empty() ? "product of " + std::to_string(dim) +
                                  " marginals"
                            : std::move(name);
  if (dim == 1) {
    d.cdf1d = d.marginals[0].cdf1d;
    d.quantile1d = d.marginals[0].quantile1d;
  }
  return d;
}

inline Density std_normal(int dim) {
  if (dim < 1) throw DomainError("std_normal dimension must be >= 1");
  if (dim == 1) return normal_1d(0.0, 1.0);
  std::vector<Density> ms;
  ms.reserve(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) ms.push_back(normal_1d(0.0, 1.0));
  Density d = product(std::move(ms), "N(0, I_" + std::to_string(dim) + ")");
  // direct form avoids the marginal loop on hot paths
  int D = dim;
  d.log_density = [D](const Vec& x) {
    double q = 0.0;
    for (int i = 0; i < D; ++i) q += x[i] * x[i];
    return -0.5 * q - 0.5 * D * kLog2Pi;
  };
  return d;
}

inline Density uniform_box(Vec lo, Vec hi, std::string name = "") {
  std::vector<Density> ms;
  ms.reserve(lo.size());
  for (std::size_t i = 0; i < lo.size(); ++i)
    ms.push_back(uniform_1d(lo[i], hi[i]));
  Density d = product(std::move(ms),
                      name.empty() ? "uniform box" : std::move(name));
  bool is_unit = true;
  for (std::size_t i = 0; i < lo.size(); ++i)
    is_unit = is_unit && lo[i] == 0.0 && hi[i] == 1.0;
  if (is_unit) d.support.kind = Support::Kind::UnitCube;
  return d;
}

inline Density mixture(MixtureSpec spec, std::string name = "") {
  const std::size_t k = spec.components.size();
  if (k == 0 || spec.weights.size() != k)
    throw DomainError("mixture needs matching weights and components");
  double wsum = 0.0;
  for (double w : spec.weights) {
    if (!(w >= 0.0)) throw DomainError("mixture weights must be >= 0");
    wsum += w;
  }
  if (std::fabs(wsum - 1.0) > 1e-12)
    throw DomainError("mixture weights must sum to 1 within 1e-12");
  int dim = spec.components[0].dim;
  for (const Density& c : spec.components)
    if (c.dim != dim) throw DomainError("mixture components must share dim");

  bool all_box = true;
  for (const Density& c : spec.components)
    all_box = all_box && c.support.bounded();
  Support sup = Support::all_space(dim);
  if (all_box) {
    Vec lo = spec.components[0].support.lo;
    Vec hi = spec.components[0].support.hi;
    for (const Density& c : spec.components)
      for (int i = 0; i < dim; ++i) {
        lo[i] = std::min(lo[i], c.support.lo[i]);
        hi[i] = std::max(hi[i], c.support.hi[i]);
      }
    sup = Support::box(std::move(lo), std::move(hi));
  }

  const Vec weights = spec.weights;
  Vec log_w(k);
  for (std::size_t i = 0; i < k; ++i)
    log_w[i] = weights[i] > 0.0 ? std::log(weights[i]) : kNegInf;
  Vec cum(k);
  double acc = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    acc += weights[i];
    cum[i] = acc;
  }
  cum[k - 1] = 1.0;

  Density d;
  d.dim = dim;
  d.support = sup;
  const std::vector<Density> comps = std::move(spec.components);
  d.log_density = [comps, log_w](const Vec& x) {
    // log-sum-exp over components
    double mx = kNegInf;
    Vec terms(comps.size(), kNegInf);
    for (std::size_t i = 0; i < comps.size(); ++i) {
      if (log_w[i] == kNegInf) continue;
      double lp = comps[i].log_density(x);
      if (lp == kNegInf) continue;
      terms[i] = log_w[i] + lp;
      mx = std::max(mx, terms[i]);
    }
    if (mx == kNegInf) return kNegInf;
    double s = 0.0;
    for (double t : terms)
      if (t != kNegInf) s += std::exp(t - mx);
    return mx + std::log(s);
  };
  d.sampler = [comps, cum](RngState& rng) {
    double u = rng.next_double();
    std::size_t idx = comps.size() - 1;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      if (u < cum[i]) {
        idx = i;
        break;
      }
    }
    return comps[idx].sampler(rng);
  };
  if (dim == 1) {
    bool all_cdf = true;
    for (const Density& c : comps) all_cdf = all_cdf && bool(c.cdf1d);
    if (all_cdf) {
      const Vec& w = weights;
      d.cdf1d = [comps, w](double x) {
        double s = 0.0;
        for (std::size_t i = 0; i < comps.size(); ++i)
          s += w[i] * comps[i].cdf1d(x);
        return std::min(1.0, std::max(0.0, s));
      };
    }
  }
  d.describe = name.empty() ? "mixture of " + std::to_string(k) +
                                  " components"
                            : std::move(name);
  return d;
}

// Bimodal 1-D Gaussian mixture used by the uniformization demos.
inline Density bimodal_gaussian_1d() {
  MixtureSpec spec;
  spec.weights = {0.35, 0.65};
  spec.components.push_back(normal_1d(-1.8, 0.6));
  spec.components.push_back(normal_1d(1.2, 0.9));
  return mixture(std::move(spec), "bimodal Gaussian mixture");
}

// Three disjoint uniform cubes over pixel space: white [255,256]^3 with
// weight (1-beta)*alpha, black [0,10]^3 with weight (1-beta)*(1-alpha),
// dark grey [10,11]^3 with weight beta. beta = 0 is allowed (no grey mass).
inline Density build_pixel_mixture(double alpha, double beta) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DomainError("pixel mixture alpha must lie in (0, 1)");
  if (!(beta >= 0.0 && beta < 1.0))
    throw DomainError("pixel mixture beta must lie in [0, 1)");
  MixtureSpec spec;
  spec.weights = {beta, (1.0 - beta) * alpha, (1.0 - beta) * (1.0 - alpha)};
  spec.components.push_back(
      uniform_box({10.0, 10.0, 10.0}, {11.0, 11.0, 11.0}, "U([10,11]^3)"));
  spec.components.push_back(uniform_box({255.0, 255.0, 255.0},
                                        {256.0, 256.0, 256.0},
                                        "U([255,256]^3)"));
  spec.components.push_back(
      uniform_box({0.0, 0.0, 0.0}, {10.0, 10.0, 10.0}, "U([0,10]^3)"));
  Density d = mixture(std::move(spec), "pixel mixture");
  // disjoint supports: H = sum_i w_i (log Vol_i - log w_i)
  const double vols[3] = {1.0, 1.0, 1000.0};
  const double w[3] = {beta, (1.0 - beta) * alpha,
                       (1.0 - beta) * (1.0 - alpha)};
  double H = 0.0;
  for (int i = 0; i < 3; ++i)
    if (w[i] > 0.0) H += w[i] * (std::log(vols[i]) - std::log(w[i]));
  d.entropy_analytic = H;
  return d;
}

}  // namespace reparam

#endif  // REPARAM_DENSITY_HPP
