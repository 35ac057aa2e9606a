#pragma once

#include <cassert>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <vector>

#include "vslab/util.hpp"

namespace vslab {

// Uniform tensor grid on [-t_past, t_final] x [-l1, l1) x [0, l2].
// x1 is periodic (n1 cells, right end excluded); t and x2 include both ends.
struct GridSpec {
  int nt = 0;
  int n1 = 0;
  int n2 = 0;
  double t_past = 0.0;
  double t_final = 1.0;
  double l1 = 1.0;
  double l2 = 1.0;

  double dt() const { return (t_final + t_past) / (nt - 1); }
  double h1() const { return 2.0 * l1 / n1; }
  double h2() const { return l2 / (n2 - 1); }
  double t(int it) const { return -t_past + it * dt(); }
  double x1(int i1) const { return -l1 + i1 * h1(); }
  double x2(int i2) const { return i2 * h2(); }

  void validate() const {
    if (nt < 2 || n1 < 4 || n2 < 2) throw config_error("grid: nt>=2, n1>=4, n2>=2 required");
    if (t_past < 0 || t_final <= 0) throw config_error("grid: t_past>=0 and t_final>0 required");
    if (l1 <= 0 || l2 <= 0) throw config_error("grid: l1, l2 must be positive");
    // t = 0 must land on a grid point so that hard past-masks are exact.
    const double k = t_past / dt();
    if (std::abs(k - std::round(k)) > 1e-9)
      throw config_error("grid: t_past must be an integer multiple of dt");
  }

  int time_index_of_zero() const { return static_cast<int>(std::round(t_past / dt())); }

  bool operator==(const GridSpec&) const = default;
};

// Multi-component scalar data on the space-time grid, index (c, it, i1, i2).
struct Field {
  GridSpec grid;
  int ncomp = 0;
  bool past_vanishing = false;
  std::vector<double> data;

  Field() = default;
  Field(const GridSpec& g, int nc, bool past = true)
      : grid(g), ncomp(nc), past_vanishing(past),
        data(static_cast<std::size_t>(nc) * g.nt * g.n1 * g.n2, 0.0) {}

  std::size_t idx(int c, int it, int i1, int i2) const {
    return ((static_cast<std::size_t>(c) * grid.nt + it) * grid.n1 + i1) * grid.n2 + i2;
  }
  double& at(int c, int it, int i1, int i2) { return data[idx(c, it, i1, i2)]; }
  double at(int c, int it, int i1, int i2) const { return data[idx(c, it, i1, i2)]; }

  std::size_t size() const { return data.size(); }

  void zero_past() {
    if (!past_vanishing) return;
    for (int it = 0; it < grid.nt; ++it) {
      if (grid.t(it) >= -1e-14) break;
      for (int c = 0; c < ncomp; ++c)
        for (int i1 = 0; i1 < grid.n1; ++i1)
          for (int i2 = 0; i2 < grid.n2; ++i2) at(c, it, i1, i2) = 0.0;
    }
  }

  bool past_is_zero(double tol = 0.0) const {
    for (int it = 0; it < grid.nt; ++it) {
      if (grid.t(it) >= -1e-14) break;
      for (int c = 0; c < ncomp; ++c)
        for (int i1 = 0; i1 < grid.n1; ++i1)
          for (int i2 = 0; i2 < grid.n2; ++i2)
            if (std::abs(at(c, it, i1, i2)) > tol) return false;
    }
    return true;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : data) m = std::max(m, std::abs(v));
    return m;
  }

  Field& operator+=(const Field& o) {
    assert(data.size() == o.data.size());
    for (std::size_t i = 0; i < data.size(); ++i) data[i] += o.data[i];
    return *this;
  }
  Field& operator-=(const Field& o) {
    assert(data.size() == o.data.size());
    for (std::size_t i = 0; i < data.size(); ++i) data[i] -= o.data[i];
    return *this;
  }
  Field& operator*=(double a) {
    for (double& v : data) v *= a;
    return *this;
  }
};

inline Field operator-(Field a, const Field& b) { a -= b; return a; }
inline Field operator+(Field a, const Field& b) { a += b; return a; }
inline Field operator*(double s, Field a) { a *= s; return a; }

// Data on the boundary x2 = 0, index (c, it, i1).
struct BoundaryField {
  GridSpec grid;
  int ncomp = 0;
  bool past_vanishing = false;
  std::vector<double> data;

  BoundaryField() = default;
  BoundaryField(const GridSpec& g, int nc, bool past = true)
      : grid(g), ncomp(nc), past_vanishing(past),
        data(static_cast<std::size_t>(nc) * g.nt * g.n1, 0.0) {}

  std::size_t idx(int c, int it, int i1) const {
    return (static_cast<std::size_t>(c) * grid.nt + it) * grid.n1 + i1;
  }
  double& at(int c, int it, int i1) { return data[idx(c, it, i1)]; }
  double at(int c, int it, int i1) const { return data[idx(c, it, i1)]; }

  void zero_past() {
    if (!past_vanishing) return;
    for (int it = 0; it < grid.nt; ++it) {
      if (grid.t(it) >= -1e-14) break;
      for (int c = 0; c < ncomp; ++c)
        for (int i1 = 0; i1 < grid.n1; ++i1) at(c, it, i1) = 0.0;
    }
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : data) m = std::max(m, std::abs(v));
    return m;
  }

  BoundaryField& operator+=(const BoundaryField& o) {
    assert(data.size() == o.data.size());
    for (std::size_t i = 0; i < data.size(); ++i) data[i] += o.data[i];
    return *this;
  }
  BoundaryField& operator-=(const BoundaryField& o) {
    assert(data.size() == o.data.size());
    for (std::size_t i = 0; i < data.size(); ++i) data[i] -= o.data[i];
    return *this;
  }
  BoundaryField& operator*=(double a) {
    for (double& v : data) v *= a;
    return *this;
  }
};

inline BoundaryField operator-(BoundaryField a, const BoundaryField& b) { a -= b; return a; }
inline BoundaryField operator+(BoundaryField a, const BoundaryField& b) { a += b; return a; }

// Purely spatial data, index (c, i1, i2). Used for time slices and jets.
struct SpaceField {
  int ncomp = 0, n1 = 0, n2 = 0;
  std::vector<double> data;

  SpaceField() = default;
  SpaceField(int nc, int m1, int m2)
      : ncomp(nc), n1(m1), n2(m2), data(static_cast<std::size_t>(nc) * m1 * m2, 0.0) {}

  std::size_t idx(int c, int i1, int i2) const {
    return (static_cast<std::size_t>(c) * n1 + i1) * n2 + i2;
  }
  double& at(int c, int i1, int i2) { return data[idx(c, i1, i2)]; }
  double at(int c, int i1, int i2) const { return data[idx(c, i1, i2)]; }

  double max_abs() const {
    double m = 0.0;
    for (double v : data) m = std::max(m, std::abs(v));
    return m;
  }

  SpaceField& operator+=(const SpaceField& o) {
    assert(data.size() == o.data.size());
    for (std::size_t i = 0; i < data.size(); ++i) data[i] += o.data[i];
    return *this;
  }
  SpaceField& operator*=(double a) {
    for (double& v : data) v *= a;
    return *this;
  }
};

inline void write_csv_number(std::ostream& os, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << buf;
}

// One row per grid point: t, x1, x2, components...
inline void write_csv(std::ostream& os, const Field& f, const std::string& comp_prefix = "c") {
  os << "t,x1,x2";
  for (int c = 0; c < f.ncomp; ++c) os << ',' << comp_prefix << c;
  os << '\n';
  for (int it = 0; it < f.grid.nt; ++it)
    for (int i1 = 0; i1 < f.grid.n1; ++i1)
      for (int i2 = 0; i2 < f.grid.n2; ++i2) {
        write_csv_number(os, f.grid.t(it));
        os << ',';
        write_csv_number(os, f.grid.x1(i1));
        os << ',';
        write_csv_number(os, f.grid.x2(i2));
        for (int c = 0; c < f.ncomp; ++c) {
          os << ',';
          write_csv_number(os, f.at(c, it, i1, i2));
        }
        os << '\n';
      }
}

inline void write_csv(std::ostream& os, const BoundaryField& f,
                      const std::string& comp_prefix = "c") {
  os << "t,x1";
  for (int c = 0; c < f.ncomp; ++c) os << ',' << comp_prefix << c;
  os << '\n';
  for (int it = 0; it < f.grid.nt; ++it)
    for (int i1 = 0; i1 < f.grid.n1; ++i1) {
      write_csv_number(os, f.grid.t(it));
      os << ',';
      write_csv_number(os, f.grid.x1(i1));
      for (int c = 0; c < f.ncomp; ++c) {
        os << ',';
        write_csv_number(os, f.at(c, it, i1));
      }
      os << '\n';
    }
}

}  // namespace vslab
