#ifndef REPARAM_VEC_HPP
#define REPARAM_VEC_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "reparam/errors.hpp"

namespace reparam {

using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double norm_inf(const Vec& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::fabs(v));
  return m;
}

inline Vec sub(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vec add(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Vec scaled(const Vec& a, double c) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
  return r;
}

// a + c*b
inline Vec axpy(const Vec& a, double c, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + c * b[i];
  return r;
}

inline void check_dim(const Vec& x, int dim, const char* where) {
  if (static_cast<int>(x.size()) != dim)
    throw DimensionMismatch(std::string(where) + ": point has dimension " +
                            std::to_string(x.size()) + ", expected " +
                            std::to_string(dim));
}

}  // namespace reparam

#endif  // REPARAM_VEC_HPP
