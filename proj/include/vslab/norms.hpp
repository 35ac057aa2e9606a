#pragma once

#include "vslab/stencils.hpp"

namespace vslab {

// Exponentially weighted Sobolev norms
//   ||u||^2_{H^k_gamma} = sum_{|a| <= k} gamma^{2(k-|a|)} ||e^{-gamma t} D^a u||^2_{L2}
// over the space-time grid (trapezoid in t and x2, periodic uniform in x1).
// The L2Hk variant counts only tangential derivatives.
enum class NormDomain { Interior, Boundary, InteriorTangential };

struct WeightedNormSpec {
  int k = 0;
  double gamma = 1.0;
  NormDomain domain = NormDomain::Interior;
};

namespace detail {

inline double quad_weight_t(const GridSpec& g, int it) {
  return (it == 0 || it == g.nt - 1) ? 0.5 * g.dt() : g.dt();
}
inline double quad_weight_2(const GridSpec& g, int i2) {
  return (i2 == 0 || i2 == g.n2 - 1) ? 0.5 * g.h2() : g.h2();
}

inline double l2_weighted_sq(const Field& u, double gamma) {
  double acc = 0.0;
  for (int it = 0; it < u.grid.nt; ++it) {
    const double wt = quad_weight_t(u.grid, it) * std::exp(-2.0 * gamma * u.grid.t(it));
    for (int c = 0; c < u.ncomp; ++c)
      for (int i1 = 0; i1 < u.grid.n1; ++i1)
        for (int i2 = 0; i2 < u.grid.n2; ++i2) {
          const double v = u.at(c, it, i1, i2);
          acc += wt * u.grid.h1() * quad_weight_2(u.grid, i2) * v * v;
        }
  }
  return acc;
}

inline double l2_weighted_sq(const BoundaryField& u, double gamma) {
  double acc = 0.0;
  for (int it = 0; it < u.grid.nt; ++it) {
    const double wt = quad_weight_t(u.grid, it) * std::exp(-2.0 * gamma * u.grid.t(it));
    for (int c = 0; c < u.ncomp; ++c)
      for (int i1 = 0; i1 < u.grid.n1; ++i1) {
        const double v = u.at(c, it, i1);
        acc += wt * u.grid.h1() * v * v;
      }
  }
  return acc;
}

}  // namespace detail

inline double weighted_norm_sq(const Field& u, const WeightedNormSpec& spec) {
  double acc = 0.0;
  Field ut = u;
  for (int a0 = 0; a0 <= spec.k; ++a0) {
    if (a0 > 0) ut = derivative(ut, Axis::T);
    Field u1 = ut;
    for (int a1 = 0; a0 + a1 <= spec.k; ++a1) {
      if (a1 > 0) u1 = derivative(u1, Axis::X1);
      if (spec.domain == NormDomain::InteriorTangential) {
        const double w = std::pow(spec.gamma, 2.0 * (spec.k - a0 - a1));
        acc += w * detail::l2_weighted_sq(u1, spec.gamma);
        continue;
      }
      Field u2 = u1;
      for (int a2 = 0; a0 + a1 + a2 <= spec.k; ++a2) {
        if (a2 > 0) u2 = derivative(u2, Axis::X2);
        const double w = std::pow(spec.gamma, 2.0 * (spec.k - a0 - a1 - a2));
        acc += w * detail::l2_weighted_sq(u2, spec.gamma);
      }
    }
  }
  return acc;
}

inline double weighted_norm_sq(const BoundaryField& u, const WeightedNormSpec& spec) {
  double acc = 0.0;
  BoundaryField ut = u;
  for (int a0 = 0; a0 <= spec.k; ++a0) {
    if (a0 > 0) ut = derivative(ut, Axis::T);
    BoundaryField u1 = ut;
    for (int a1 = 0; a0 + a1 <= spec.k; ++a1) {
      if (a1 > 0) u1 = derivative(u1, Axis::X1);
      const double w = std::pow(spec.gamma, 2.0 * (spec.k - a0 - a1));
      acc += w * detail::l2_weighted_sq(u1, spec.gamma);
    }
  }
  return acc;
}

inline double weighted_norm(const Field& u, const WeightedNormSpec& spec) {
  return std::sqrt(weighted_norm_sq(u, spec));
}
inline double weighted_norm(const BoundaryField& u, const WeightedNormSpec& spec) {
  return std::sqrt(weighted_norm_sq(u, spec));
}

}  // namespace vslab
