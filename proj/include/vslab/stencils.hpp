#pragma once

#include "vslab/grid.hpp"

namespace vslab {

// Second-order differences: centered in the interior, one-sided at the t and
// x2 ends, periodic wrap in x1. These are the stencils used by every residual
// report and by the weighted norms, so that checks stay mutually consistent.

namespace fd {

inline double dt(const Field& f, int c, int it, int i1, int i2) {
  const double d = f.grid.dt();
  const int nt = f.grid.nt;
  if (it == 0)
    return (-3.0 * f.at(c, 0, i1, i2) + 4.0 * f.at(c, 1, i1, i2) - f.at(c, 2, i1, i2)) / (2.0 * d);
  if (it == nt - 1)
    return (3.0 * f.at(c, nt - 1, i1, i2) - 4.0 * f.at(c, nt - 2, i1, i2) + f.at(c, nt - 3, i1, i2)) /
           (2.0 * d);
  return (f.at(c, it + 1, i1, i2) - f.at(c, it - 1, i1, i2)) / (2.0 * d);
}

inline double d1(const Field& f, int c, int it, int i1, int i2) {
  const double h = f.grid.h1();
  const int n1 = f.grid.n1;
  const int ip = (i1 + 1) % n1;
  const int im = (i1 + n1 - 1) % n1;
  return (f.at(c, it, ip, i2) - f.at(c, it, im, i2)) / (2.0 * h);
}

inline double d2(const Field& f, int c, int it, int i1, int i2) {
  const double h = f.grid.h2();
  const int n2 = f.grid.n2;
  if (i2 == 0)
    return (-3.0 * f.at(c, it, i1, 0) + 4.0 * f.at(c, it, i1, 1) - f.at(c, it, i1, 2)) / (2.0 * h);
  if (i2 == n2 - 1)
    return (3.0 * f.at(c, it, i1, n2 - 1) - 4.0 * f.at(c, it, i1, n2 - 2) + f.at(c, it, i1, n2 - 3)) /
           (2.0 * h);
  return (f.at(c, it, i1, i2 + 1) - f.at(c, it, i1, i2 - 1)) / (2.0 * h);
}

inline double dt(const BoundaryField& f, int c, int it, int i1) {
  const double d = f.grid.dt();
  const int nt = f.grid.nt;
  if (it == 0) return (-3.0 * f.at(c, 0, i1) + 4.0 * f.at(c, 1, i1) - f.at(c, 2, i1)) / (2.0 * d);
  if (it == nt - 1)
    return (3.0 * f.at(c, nt - 1, i1) - 4.0 * f.at(c, nt - 2, i1) + f.at(c, nt - 3, i1)) / (2.0 * d);
  return (f.at(c, it + 1, i1) - f.at(c, it - 1, i1)) / (2.0 * d);
}

inline double d1(const BoundaryField& f, int c, int it, int i1) {
  const double h = f.grid.h1();
  const int n1 = f.grid.n1;
  const int ip = (i1 + 1) % n1;
  const int im = (i1 + n1 - 1) % n1;
  return (f.at(c, it, ip) - f.at(c, it, im)) / (2.0 * h);
}

inline double d1(const SpaceField& f, double h1, int c, int i1, int i2) {
  const int n1 = f.n1;
  const int ip = (i1 + 1) % n1;
  const int im = (i1 + n1 - 1) % n1;
  return (f.at(c, ip, i2) - f.at(c, im, i2)) / (2.0 * h1);
}

inline double d2(const SpaceField& f, double h2, int c, int i1, int i2) {
  const int n2 = f.n2;
  if (i2 == 0) return (-3.0 * f.at(c, i1, 0) + 4.0 * f.at(c, i1, 1) - f.at(c, i1, 2)) / (2.0 * h2);
  if (i2 == n2 - 1)
    return (3.0 * f.at(c, i1, n2 - 1) - 4.0 * f.at(c, i1, n2 - 2) + f.at(c, i1, n2 - 3)) / (2.0 * h2);
  return (f.at(c, i1, i2 + 1) - f.at(c, i1, i2 - 1)) / (2.0 * h2);
}

}  // namespace fd

enum class Axis { T, X1, X2 };

inline Field derivative(const Field& f, Axis ax) {
  Field out(f.grid, f.ncomp, f.past_vanishing);
  for (int c = 0; c < f.ncomp; ++c)
    for (int it = 0; it < f.grid.nt; ++it)
      for (int i1 = 0; i1 < f.grid.n1; ++i1)
        for (int i2 = 0; i2 < f.grid.n2; ++i2) {
          double v = 0.0;
          switch (ax) {
            case Axis::T: v = fd::dt(f, c, it, i1, i2); break;
            case Axis::X1: v = fd::d1(f, c, it, i1, i2); break;
            case Axis::X2: v = fd::d2(f, c, it, i1, i2); break;
          }
          out.at(c, it, i1, i2) = v;
        }
  return out;
}

inline BoundaryField derivative(const BoundaryField& f, Axis ax) {
  BoundaryField out(f.grid, f.ncomp, f.past_vanishing);
  for (int c = 0; c < f.ncomp; ++c)
    for (int it = 0; it < f.grid.nt; ++it)
      for (int i1 = 0; i1 < f.grid.n1; ++i1)
        out.at(c, it, i1) = (ax == Axis::T) ? fd::dt(f, c, it, i1) : fd::d1(f, c, it, i1);
  return out;
}

inline BoundaryField trace(const Field& f) {
  BoundaryField out(f.grid, f.ncomp, f.past_vanishing);
  for (int c = 0; c < f.ncomp; ++c)
    for (int it = 0; it < f.grid.nt; ++it)
      for (int i1 = 0; i1 < f.grid.n1; ++i1) out.at(c, it, i1) = f.at(c, it, i1, 0);
  return out;
}

}  // namespace vslab
