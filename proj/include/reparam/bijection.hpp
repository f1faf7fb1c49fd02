#ifndef REPARAM_BIJECTION_HPP
#define REPARAM_BIJECTION_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "reparam/density.hpp"
#include "reparam/errors.hpp"
#include "reparam/numerics.hpp"
#include "reparam/vec.hpp"

namespace reparam {

// Continuous invertible map with exact inverse and log|det J|. The
// log-abs-det is always evaluated at the *forward input* x; composition and
// pushforward formulas below follow that convention. Immutable after
// construction, evaluation is pure.
struct Bijection {
  int dim = 0;
  Support domain;
  Support codomain;
  std::function<Vec(const Vec&)> forward;
  std::function<Vec(const Vec&)> inverse;
  std::function<double(const Vec&)> log_abs_det_jacobian;
  std::string describe;
};

// Positive score target for the arbitrary-scoring construction. eval must
// stay >= lower_bound everywhere it is probed.
struct ScoreFunction {
  std::function<double(const Vec&)> eval;
  double lower_bound = 0.0;
};

struct RotationParams {
  Vec center;
  double r0 = 0.0;
  double r_max = 0.0;
  Vec plane_e1;
  Vec plane_e2;

  void validate(int dim) const {
    if (static_cast<int>(center.size()) != dim ||
        static_cast<int>(plane_e1.size()) != dim ||
        static_cast<int>(plane_e2.size()) != dim)
      throw DimensionMismatch("rotation parameters disagree with dimension");
    if (!(r0 > 0.0) || !(r_max > r0))
      throw DomainError("rotation radii require r_max > r0 > 0");
    if (std::fabs(norm2(plane_e1) - 1.0) > 1e-12 ||
        std::fabs(norm2(plane_e2) - 1.0) > 1e-12)
      throw DomainError("rotation plane vectors must be unit length");
    if (std::fabs(dot(plane_e1, plane_e2)) > 1e-12)
      throw DomainError("rotation plane vectors must be orthogonal");
  }
};

inline Bijection identity_bijection(int dim) {
  Bijection b;
  b.dim = dim;
  b.domain = Support::all_space(dim);
  b.codomain = Support::all_space(dim);
  b.forward = [](const Vec& x) { return x; };
  b.inverse = [](const Vec& z) { return z; };
  b.log_abs_det_jacobian = [](const Vec&) { return 0.0; };
  b.describe = "identity";
  return b;
}

inline Bijection compose(const Bijection& f, const Bijection& g) {
  if (f.dim != g.dim || f.codomain.dim != g.domain.dim)
    throw DimensionMismatch("compose: dimensions disagree");
  Bijection h;
  h.dim = f.dim;
  h.domain = f.domain;
  h.codomain = g.codomain;
  h.forward = [f = f.forward, g = g.forward](const Vec& x) {
    return g(f(x));
  };
  h.inverse = [fi = f.inverse, gi = g.inverse](const Vec& z) {
    return fi(gi(z));
  };
  h.log_abs_det_jacobian = [ff = f.forward, fl = f.log_abs_det_jacobian,
                            gl = g.log_abs_det_jacobian](const Vec& x) {
    return fl(x) + gl(ff(x));
  };
  h.describe = g.describe + " o " + f.describe;
  return h;
}

inline Bijection invert(const Bijection& f) {
  Bijection h;
  h.dim = f.dim;
  h.domain = f.codomain;
  h.codomain = f.domain;
  h.forward = f.inverse;
  h.inverse = f.forward;
  h.log_abs_det_jacobian = [fi = f.inverse,
                            fl = f.log_abs_det_jacobian](const Vec& z) {
    return -fl(fi(z));
  };
  h.describe = "inverse of " + f.describe;
  return h;
}

// Change of variables: the density of f(X) evaluates at z as
// p(f^-1(z)) * exp(-log|det J|(f^-1(z))).
inline Density pushforward(const Density& p, const Bijection& f) {
  if (p.dim != f.dim)
    throw DimensionMismatch("pushforward: density and bijection dims differ");
  if (!f.domain.covers(p.support))
    throw DomainError("pushforward: density support exceeds bijection domain");
  Density q;
  q.dim = f.dim;
  q.support = f.codomain;
  q.log_density = [codomain = f.codomain, inv = f.inverse,
                   ld = f.log_abs_det_jacobian,
                   plog = p.log_density](const Vec& z) {
    if (!codomain.contains(z))
      throw PointOutsideCodomain("pushforward density evaluated outside the "
                                 "bijection image");
    Vec x = inv(z);
    double lp = plog(x);
    if (lp == kNegInf) return kNegInf;
    return lp - ld(x);
  };
  q.sampler = [fwd = f.forward, samp = p.sampler](RngState& rng) {
    return fwd(samp(rng));
  };
  q.describe = "pushforward of " + p.describe + " through " + f.describe;
  return q;
}

namespace detail {

constexpr double kCdfClampEps = 1e-15;
constexpr double kQuadTol = 1e-11;
constexpr double kRootTol = 1e-12;

// Quadrature fallback bounds for an unbounded 1-D density: expand until the
// log-density is negligible at both ends.
inline Interval effective_bounds_1d(const Density& p) {
  double lo = -1.0, hi = 1.0;
  Vec probe(1);
  for (int i = 0; i < 60; ++i) {
    probe[0] = lo;
    if (p.log_density(probe) < -60.0) break;
    lo *= 2.0;
  }
  for (int i = 0; i < 60; ++i) {
    probe[0] = hi;
    if (p.log_density(probe) < -60.0) break;
    hi *= 2.0;
  }
  return Interval(lo, hi);
}

}  // namespace detail

// Forward map is the CDF of p onto (0, 1); log|det J| is log p itself.
// Analytic CDF/quantile are used when the density carries them, quadrature
// and monotone root-finding otherwise. Inputs to the inverse are clamped to
// [1e-15, 1 - 1e-15] so exact 0/1 have finite preimages.
inline Bijection cdf_bijection_1d(const Density& p) {
  if (p.dim != 1) throw DimensionMismatch("cdf_bijection_1d needs a 1-D density");

  std::function<double(double)> cdf = p.cdf1d;
  double blo, bhi;  // effective bounds for quadrature / bracketing
  if (p.support.bounded()) {
    blo = p.support.lo[0];
    bhi = p.support.hi[0];
  } else {
    Interval b = detail::effective_bounds_1d(p);
    blo = b.lo;
    bhi = b.hi;
  }
  if (!cdf) {
    cdf = [plog = p.log_density, blo](double x) {
      if (x <= blo) return 0.0;
      Vec t(1);
      double mass = integrate_signed(
          [&](double u) {
            t[0] = u;
            double lp = plog(t);
            return lp == kNegInf ? 0.0 : std::exp(lp);
          },
          blo, x, detail::kQuadTol);
      return std::min(1.0, std::max(0.0, mass));
    };
  }

  std::function<double(double)> quantile = p.quantile1d;
  if (!quantile) {
    quantile = [cdf, blo, bhi](double u) {
      return find_root_monotone([&](double x) { return cdf(x) - u; },
                                Interval(blo, bhi), detail::kRootTol);
    };
  }

  Bijection b;
  b.dim = 1;
  b.domain = p.support;
  b.codomain = Support::unit_cube(1);
  b.forward = [cdf](const Vec& x) { return Vec{cdf(x[0])}; };
  b.inverse = [quantile](const Vec& z) {
    double u = std::min(1.0 - detail::kCdfClampEps,
                        std::max(detail::kCdfClampEps, z[0]));
    return Vec{quantile(u)};
  };
  b.log_abs_det_jacobian = [plog = p.log_density](const Vec& x) {
    return plog(x);
  };
  b.describe = "CDF map of " + p.describe;
  return b;
}

// Coordinatewise CDF map of a product density onto the unit hypercube.
// Restricted to factorized densities; the pushforward is U([0,1]^D).
inline Bijection knothe_rosenblatt(const Density& p) {
  std::vector<Bijection> coord;
  if (p.dim == 1) {
    coord.push_back(cdf_bijection_1d(p));
  } else {
    if (static_cast<int>(p.marginals.size()) != p.dim)
      throw NotFactorized("knothe_rosenblatt needs a product density with "
                          "1-D marginals");
    coord.reserve(p.marginals.size());
    for (const Density& m : p.marginals) coord.push_back(cdf_bijection_1d(m));
  }

  Bijection b;
  b.dim = p.dim;
  b.domain = p.support;
  b.codomain = Support::unit_cube(p.dim);
  b.forward = [coord](const Vec& x) {
    Vec z(x.size());
    Vec xi(1);
    for (std::size_t i = 0; i < x.size(); ++i) {
      xi[0] = x[i];
      z[i] = coord[i].forward(xi)[0];
    }
    return z;
  };
  b.inverse = [coord](const Vec& z) {
    Vec x(z.size());
    Vec zi(1);
    for (std::size_t i = 0; i < z.size(); ++i) {
      zi[0] = z[i];
      x[i] = coord[i].inverse(zi)[0];
    }
    return x;
  };
  b.log_abs_det_jacobian = [coord](const Vec& x) {
    double s = 0.0;
    Vec xi(1);
    for (std::size_t i = 0; i < x.size(); ++i) {
      xi[0] = x[i];
      s += coord[i].log_abs_det_jacobian(xi);
    }
    return s;
  };
  b.describe = "Knothe-Rosenblatt map of " + p.describe;
  return b;
}

// Spherical -> cartesian coordinates. Input (r, phi_1..phi_{D-1}) with
// r > 0, phi_i in (0, pi) for i <= D-2 and phi_{D-1} free (2pi-periodic).
// log|det J| = (D-1) log r + sum_{d<=D-2} (D-d-1) log sin(phi_d).
inline Bijection hyperspherical(int dim) {
  if (dim < 2) throw DomainError("hyperspherical needs dimension >= 2");
  const int D = dim;

  auto check_coords = [D](const Vec& c) {
    if (!(c[0] > 0.0)) throw DomainError("radial coordinate must be positive");
    for (int i = 1; i <= D - 2; ++i) {
      if (c[i] == 0.0 || c[i] == M_PI)
        throw SingularCoordinates("phi_" + std::to_string(i) +
                                  " lies on the coordinate singularity");
      if (c[i] < 0.0 || c[i] > M_PI)
        throw DomainError("phi_" + std::to_string(i) +
                          " must lie inside (0, pi)");
    }
  };

  Bijection b;
  b.dim = D;
  b.domain = Support::all_space(D);
  b.codomain = Support::all_space(D);
  b.forward = [D, check_coords](const Vec& c) {
    check_dim(c, D, "hyperspherical.forward");
    check_coords(c);
    Vec x(D);
    double prod = c[0];
    for (int d = 1; d <= D - 1; ++d) {
      x[d - 1] = prod * std::cos(c[d]);
      prod *= std::sin(c[d]);
    }
    x[D - 1] = prod;
    return x;
  };
  b.inverse = [D](const Vec& x) {
    check_dim(x, D, "hyperspherical.inverse");
    Vec c(D);
    double r = norm2(x);
    if (!(r > 0.0))
      throw SingularCoordinates("origin has no spherical representation");
    c[0] = r;
    // tail_d = sqrt(x_{d+1}^2 + ... + x_D^2), accumulated backwards
    Vec tail(D + 1, 0.0);
    for (int d = D - 1; d >= 0; --d)
      tail[d] = std::hypot(x[d], tail[d + 1]);
    for (int d = 1; d <= D - 2; ++d) c[d] = std::atan2(tail[d], x[d - 1]);
    double last = std::atan2(x[D - 1], x[D - 2]);
    if (last < 0.0) last += 2.0 * M_PI;
    c[D - 1] = last;
    return c;
  };
  b.log_abs_det_jacobian = [D, check_coords](const Vec& c) {
    check_coords(c);
    double s = (D - 1) * std::log(c[0]);
    for (int d = 1; d <= D - 2; ++d)
      s += (D - d - 1) * std::log(std::sin(c[d]));
    return s;
  };
  b.describe = "hyperspherical -> cartesian (D=" + std::to_string(D) + ")";
  return b;
}

// The constructive bijection behind arbitrary scoring: identity on the
// first D-1 coordinates, and on the last one the integral of p/s from a
// fixed base point (the support's lower edge, or 0 on unbounded supports).
// The pushforward density of p then equals s pointwise.
inline Bijection arbitrary_score_bijection(const Density& p,
                                           const ScoreFunction& s) {
  if (!(s.lower_bound > 0.0))
    throw DomainError("score lower_bound must be strictly positive");
  const int D = p.dim;
  const bool boxed = p.support.bounded();
  const double base = boxed ? p.support.lo[D - 1] : 0.0;
  const double last_lo = boxed ? p.support.lo[D - 1] : 0.0;
  const double last_hi = boxed ? p.support.hi[D - 1] : 0.0;

  auto score_at = [eval = s.eval, bound = s.lower_bound](const Vec& x) {
    double v = eval(x);
    if (!(v >= bound))
      throw ScoreBelowBound("score " + std::to_string(v) +
                            " fell below declared lower bound " +
                            std::to_string(bound));
    return v;
  };

  // signed integral of p/s along the last coordinate
  auto last_map = [plog = p.log_density, score_at, base, D](const Vec& x,
                                                            double t_end) {
    Vec probe(x);
    return integrate_signed(
        [&](double t) {
          probe[D - 1] = t;
          double lp = plog(probe);
          double dens = lp == kNegInf ? 0.0 : std::exp(lp);
          if (dens == 0.0) return 0.0;
          return dens / score_at(probe);
        },
        base, t_end, detail::kQuadTol);
  };

  Bijection b;
  b.dim = D;
  b.domain = p.support;
  b.codomain = Support::all_space(D);
  b.forward = [last_map, D](const Vec& x) {
    check_dim(x, D, "arbitrary_score_bijection.forward");
    Vec z(x);
    z[D - 1] = last_map(x, x[D - 1]);
    return z;
  };
  b.inverse = [last_map, D, boxed, last_lo, last_hi](const Vec& z) {
    check_dim(z, D, "arbitrary_score_bijection.inverse");
    Vec x(z);
    double target = z[D - 1];
    auto g = [&](double t) { return last_map(x, t) - target; };
    // bracket the strictly increasing last-coordinate map
    double a, bb;
    if (boxed) {
      a = last_lo;
      bb = last_hi;
    } else {
      a = -1.0;
      bb = 1.0;
    }
    int expand = 0;
    while (g(a) > 0.0) {
      double w = bb - a;
      a -= w;
      if (++expand > 60)
        throw PointOutsideCodomain("no preimage under the score bijection");
    }
    expand = 0;
    while (g(bb) < 0.0) {
      double w = bb - a;
      bb += w;
      if (++expand > 60)
        throw PointOutsideCodomain("no preimage under the score bijection");
    }
    x[D - 1] = find_root_monotone(g, Interval(a, bb), detail::kRootTol);
    return x;
  };
  b.log_abs_det_jacobian = [plog = p.log_density, score_at, D](const Vec& x) {
    return plog(x) - std::log(score_at(x));
  };
  b.describe = "score-matching bijection over " + p.describe;
  return b;
}

// Rotates the (e1, e2)-plane component of x - center by an angle that decays
// linearly from pi (at radius r0) to 0 (at r_max); identity beyond r_max.
// The angle depends only on the full radius, so every sphere around the
// center maps to itself and the map is volume-preserving.
inline Bijection norm_dependent_rotation(const RotationParams& params,
                                         int dim) {
  params.validate(dim);
  const Vec center = params.center;
  const Vec e1 = params.plane_e1;
  const Vec e2 = params.plane_e2;
  const double r0 = params.r0;
  const double r_max = params.r_max;

  auto rotate = [center, e1, e2, r0, r_max](const Vec& x, double sign) {
    Vec v = sub(x, center);
    double r = norm2(v);
    if (r >= r_max) return x;
    double theta = sign * M_PI * (r_max - r) / (r_max - r0);
    double a = dot(v, e1);
    double b = dot(v, e2);
    double c = std::cos(theta);
    double s = std::sin(theta);
    double da = (a * c - b * s) - a;
    double db = (a * s + b * c) - b;
    Vec out = axpy(x, da, e1);
    return axpy(out, db, e2);
  };

  Bijection b;
  b.dim = dim;
  b.domain = Support::all_space(dim);
  b.codomain = Support::all_space(dim);
  b.forward = [rotate, dim](const Vec& x) {
    check_dim(x, dim, "norm_dependent_rotation.forward");
    return rotate(x, 1.0);
  };
  b.inverse = [rotate, dim](const Vec& z) {
    check_dim(z, dim, "norm_dependent_rotation.inverse");
    return rotate(z, -1.0);
  };
  b.log_abs_det_jacobian = [](const Vec&) { return 0.0; };
  b.describe = "norm-dependent rotation";
  return b;
}

// Linear map keeping the u-component and scaling the orthogonal complement
// by k; log|det J| = (D-1) log k.
inline Bijection orthogonal_squeeze(const Vec& u, double k) {
  if (std::fabs(norm2(u) - 1.0) > 1e-12)
    throw DomainError("orthogonal_squeeze direction must be unit length");
  if (!(k > 0.0)) throw DomainError("orthogonal_squeeze factor must be > 0");
  const int dim = static_cast<int>(u.size());
  auto apply = [u](const Vec& x, double scale) {
    double a = dot(x, u);
    Vec out = scaled(x, scale);
    return axpy(out, (1.0 - scale) * a, u);
  };
  Bijection b;
  b.dim = dim;
  b.domain = Support::all_space(dim);
  b.codomain = Support::all_space(dim);
  b.forward = [apply, k, dim](const Vec& x) {
    check_dim(x, dim, "orthogonal_squeeze.forward");
    return apply(x, k);
  };
  b.inverse = [apply, k, dim](const Vec& z) {
    check_dim(z, dim, "orthogonal_squeeze.inverse");
    return apply(z, 1.0 / k);
  };
  b.log_abs_det_jacobian = [dim, k](const Vec&) {
    return (dim - 1) * std::log(k);
  };
  b.describe = "orthogonal squeeze (k=" + std::to_string(k) + ")";
  return b;
}

// Householder reflection sending u to the first standard basis vector;
// orthogonal, involutive, log|det J| = 0.
inline Bijection align_rotation(const Vec& u) {
  if (std::fabs(norm2(u) - 1.0) > 1e-12)
    throw DomainError("align_rotation direction must be unit length");
  const int dim = static_cast<int>(u.size());
  Vec v = u;
  v[0] -= 1.0;
  double vv = dot(v, v);
  std::function<Vec(const Vec&)> apply;
  if (vv < 1e-24) {
    apply = [](const Vec& x) { return x; };
  } else {
    apply = [v, vv](const Vec& x) {
      return axpy(x, -2.0 * dot(v, x) / vv, v);
    };
  }
  Bijection b;
  b.dim = dim;
  b.domain = Support::all_space(dim);
  b.codomain = Support::all_space(dim);
  b.forward = apply;
  b.inverse = apply;
  b.log_abs_det_jacobian = [](const Vec&) { return 0.0; };
  b.describe = "alignment reflection";
  return b;
}

}  // namespace reparam

#endif  // REPARAM_BIJECTION_HPP
