#pragma once

#include <algorithm>
#include <complex>
#include <optional>
#include <random>
#include <vector>

#include "vslab/matrices.hpp"

namespace vslab {

using Complex = std::complex<double>;
using CMat2 = Eigen::Matrix2cd;
using CVec2 = Eigen::Vector2cd;
using CVec4 = Eigen::Vector4cd;
using CVec8 = Eigen::Matrix<Complex, 8, 1>;

// Dual variables of the tangential Laplace-Fourier transform: tau = gamma + i delta,
// tangential wavenumber eta.
struct FrequencyPoint {
  double gamma = 0.0;
  double delta = 0.0;
  double eta = 1.0;
  Complex tau() const { return {gamma, delta}; }
  double norm() const { return std::sqrt(gamma * gamma + delta * delta + eta * eta); }
  FrequencyPoint hemisphere_normalized() const {
    const double n = norm();
    return {gamma / n, delta / n, eta / n};
  }
};

enum class StabilityTag { ViolentlyUnstable, ThresholdBoundary, WeaklyStable, CriticalDoubleRoot };

inline const char* to_string(StabilityTag t) {
  switch (t) {
    case StabilityTag::ViolentlyUnstable: return "ViolentlyUnstable";
    case StabilityTag::ThresholdBoundary: return "ThresholdBoundary";
    case StabilityTag::WeaklyStable: return "WeaklyStable";
    case StabilityTag::CriticalDoubleRoot: return "CriticalDoubleRoot";
  }
  return "?";
}

struct StabilityClass {
  StabilityTag tag = StabilityTag::WeaklyStable;
  // In the isentropic case the threshold speed and the double-root speed coincide.
  bool threshold_double_coincide = false;
};

// v_threshold = (c+^{2/3} + c-^{2/3})^{3/2} / 2,  v_double = sqrt(2)(c+ + c-)/2.
inline std::pair<double, double> critical_speeds(double c_plus, double c_minus) {
  if (c_plus <= 0.0 || c_minus <= 0.0)
    throw std::domain_error("critical_speeds: sound speeds must be positive");
  const double a = std::pow(c_plus, 2.0 / 3.0) + std::pow(c_minus, 2.0 / 3.0);
  const double v_thr = 0.5 * std::pow(a, 1.5);
  const double v_dbl = 0.5 * std::sqrt(2.0) * (c_plus + c_minus);
  return {v_thr, v_dbl};
}

inline StabilityClass classify_background(const BackgroundSheet& sheet, double rel_tol = 1e-9) {
  const auto [v_thr, v_dbl] = critical_speeds(sheet.c_plus(), sheet.c_minus());
  const double v = sheet.v_bar;
  StabilityClass cls;
  cls.threshold_double_coincide = nearly_equal(v_thr, v_dbl, rel_tol);
  if (nearly_equal(v, v_thr, rel_tol)) {
    cls.tag = StabilityTag::ThresholdBoundary;
  } else if (v < v_thr) {
    cls.tag = StabilityTag::ViolentlyUnstable;
  } else if (nearly_equal(v, v_dbl, rel_tol)) {
    cls.tag = StabilityTag::CriticalDoubleRoot;
  } else {
    cls.tag = StabilityTag::WeaklyStable;
  }
  return cls;
}

struct RootRecord {
  FrequencyPoint location;
  int multiplicity = 1;
  bool on_boundary = false;
  double det_modulus = 0.0;
};

// Assembles the constant-coefficient boundary determinant around the piecewise
// constant sheet: per side, the interior system in characteristic variables is
// reduced to a 2x2 ODE in x2 for the noncharacteristic pair; the determinant
// couples the two stable directions and the front symbol through the
// linearized jump conditions.
class LopatinskiiEvaluator {
 public:
  explicit LopatinskiiEvaluator(const BackgroundSheet& sheet) : sheet_(sheet) {
    for (int side = 0; side < 2; ++side) {
      const PrimitiveState st = sheet.state(side == 0 ? kRight : kLeft);
      const PhiDerivs dphi{0.0, 0.0, side == 0 ? 1.0 : -1.0};
      const Mat4 t = transform_T(st, sheet.eos, dphi.d1);
      const Mat4 tinv = transform_T_inv(st, sheet.eos, dphi.d1);
      const Mat4 a0 = a0_weight(st, sheet.eos, dphi);
      a0_[side] = a0;
      a1_bold_[side] = a0 * tinv * flux_a1(st, sheet.eos) * t;
      m_bdy_.block<3, 4>(0, 4 * side) = mbar_matrix(0.0).block<3, 4>(0, 4 * side) * t;
    }
    bbar_ = bbar_matrix(sheet.v_bar, -sheet.v_bar);
  }

  // Continuation state for paths that cross gamma = 0: remembers the selected
  // spatial eigenvalue per side so the branch is followed, not re-picked.
  struct Track {
    bool init = false;
    Complex mu[2];
  };

  Complex det(const FrequencyPoint& fp, bool* glancing = nullptr) const {
    Track t;
    return det_tracked(fp, t, glancing);
  }

  Complex det_tracked(const FrequencyPoint& fp, Track& track, bool* glancing = nullptr) const {
    const double gamma = (track.init || fp.gamma > kGammaFloor) ? fp.gamma
                                                                : std::max(fp.gamma, kGammaFloor);
    const Complex tau(gamma, fp.delta);
    const Complex ieta(0.0, fp.eta);
    CVec8 cols[2];
    for (int side = 0; side < 2; ++side) {
      Eigen::Matrix4cd g = tau * a0_[side].cast<Complex>() + ieta * a1_bold_[side].cast<Complex>();
      // Rows/components {0,3} are algebraic, {1,2} carry the x2 derivative.
      CMat2 gss, gsd, gds, gdd;
      gss << g(0, 0), g(0, 3), g(3, 0), g(3, 3);
      gsd << g(0, 1), g(0, 2), g(3, 1), g(3, 2);
      gds << g(1, 0), g(1, 3), g(2, 0), g(2, 3);
      gdd << g(1, 1), g(1, 2), g(2, 1), g(2, 2);
      const CMat2 r = -gss.inverse() * gsd;
      const CMat2 h = -(gds * r + gdd);

      // Eigenvalues of the traceless-ish 2x2 block.
      const Complex tr = h.trace();
      const Complex disc = std::sqrt(tr * tr - 4.0 * h.determinant());
      const Complex mu_a = 0.5 * (tr + disc);
      const Complex mu_b = 0.5 * (tr - disc);
      Complex mu;
      if (track.init) {
        mu = (std::abs(mu_a - track.mu[side]) <= std::abs(mu_b - track.mu[side])) ? mu_a : mu_b;
      } else {
        mu = (mu_a.real() < mu_b.real()) ? mu_a : mu_b;  // decaying direction
        if (glancing && std::abs(mu_a.real() - mu_b.real()) < 1e-10 * (std::abs(mu_a) + 1.0))
          *glancing = true;
      }
      track.mu[side] = mu;

      // Eigenvector of h for mu, from the larger-residual row.
      CVec2 w;
      const CVec2 cand1(h(0, 1), mu - h(0, 0));
      const CVec2 cand2(mu - h(1, 1), h(1, 0));
      w = (cand1.norm() >= cand2.norm()) ? cand1 : cand2;

      // Normalize so the pressure trace is 1: p = <d1phi>(W2 + W3), <> = 1 here.
      const Complex p_hat = w(0) + w(1);
      if (std::abs(p_hat) < 1e-14 * w.norm()) {
        if (glancing) *glancing = true;
        w /= w.norm();
      } else {
        w /= p_hat;
      }
      const CVec2 ws = r * w;
      CVec4 full;
      full << ws(0), w(0), w(1), ws(1);
      cols[side].setZero();
      cols[side].segment<4>(4 * side) = full;
    }
    track.init = true;

    Eigen::Vector3cd c0 = m_bdy_.cast<Complex>() * cols[0];
    Eigen::Vector3cd c1 = m_bdy_.cast<Complex>() * cols[1];
    Eigen::Vector2cd grad(tau, ieta);
    Eigen::Vector3cd c2 = bbar_.cast<Complex>() * grad;
    return c0(0) * (c1(1) * c2(2) - c1(2) * c2(1)) - c1(0) * (c0(1) * c2(2) - c0(2) * c2(1)) +
           c2(0) * (c0(1) * c1(2) - c0(2) * c1(1));
  }

  const BackgroundSheet& sheet() const { return sheet_; }

  static constexpr double kGammaFloor = 1e-12;

 private:
  BackgroundSheet sheet_;
  Mat4 a0_[2], a1_bold_[2];
  Mat38 m_bdy_ = Mat38::Zero();
  Eigen::Matrix<double, 3, 2> bbar_;
};

struct ScanRect {
  double gamma_min = 1e-6;
  double gamma_max = 2.0;
  double delta_min = -4.0;
  double delta_max = 4.0;
};

struct ScanOptions {
  int n_gamma = 200;
  int n_delta = 200;
  double eta = 1.0;
  double root_tol = 1e-9;       // |det| after Newton refinement
  double circle_radius = 1e-3;  // winding circle
  int circle_points = 256;
  double boundary_gamma_tol = 1e-7;
  int newton_max_iter = 60;
  double dedupe_dist = 1e-5;
};

namespace detail {

inline Complex newton_derivative(const LopatinskiiEvaluator& ev, const FrequencyPoint& fp) {
  const double h = 1e-7 * std::max(1.0, std::abs(fp.tau()));
  FrequencyPoint fp_p = fp, fp_m = fp;
  fp_p.gamma += h;
  fp_m.gamma -= h;
  if (fp_m.gamma < 0.0) {  // one-sided toward the interior of {gamma >= 0}
    fp_m = fp;
    return (ev.det(fp_p) - ev.det(fp_m)) / Complex(h, 0.0);
  }
  return (ev.det(fp_p) - ev.det(fp_m)) / Complex(2.0 * h, 0.0);
}

// Newton in the complex tau plane, projected onto {gamma >= 0}.
inline bool newton_refine(const LopatinskiiEvaluator& ev, FrequencyPoint& fp,
                          const ScanOptions& opt) {
  for (int k = 0; k < opt.newton_max_iter; ++k) {
    const Complex f = ev.det(fp);
    if (std::abs(f) < 0.2 * opt.root_tol) return true;
    const Complex df = newton_derivative(ev, fp);
    if (std::abs(df) == 0.0) return false;
    Complex step = f / df;
    const double max_step = 0.1;
    if (std::abs(step) > max_step) step *= max_step / std::abs(step);
    fp.gamma = std::max(0.0, fp.gamma - step.real());
    fp.delta -= step.imag();
  }
  return std::abs(ev.det(fp)) < opt.root_tol;
}

// Polishes a candidate that has collapsed onto the boundary gamma = 0 by a 1D
// Newton in delta along the axis (limit from gamma > 0).
inline void axis_polish(const LopatinskiiEvaluator& ev, FrequencyPoint& fp,
                        const ScanOptions& opt) {
  fp.gamma = 0.0;
  for (int k = 0; k < opt.newton_max_iter; ++k) {
    const double h = 1e-8 * std::max(1.0, std::abs(fp.delta));
    FrequencyPoint a = fp, b = fp;
    a.delta += h;
    b.delta -= h;
    const Complex f = ev.det(fp);
    const Complex df = (ev.det(a) - ev.det(b)) / Complex(2.0 * h, 0.0);
    if (std::abs(df) == 0.0) return;
    const Complex step = f / df;
    // Move only along the axis; the double root makes the normal component blow up.
    const double d_step = step.imag();
    if (std::abs(d_step) > 0.05) return;
    fp.delta -= d_step;
    if (std::abs(ev.det(fp)) < 0.2 * opt.root_tol) return;
  }
}

}  // namespace detail

// Winding number of det along a circle around center; crosses gamma = 0 with
// branch tracking when needed.
inline int winding_number(const LopatinskiiEvaluator& ev, const FrequencyPoint& center,
                          double radius, int npoints, double eta) {
  LopatinskiiEvaluator::Track track;
  double total = 0.0;
  Complex prev;
  for (int k = 0; k <= npoints; ++k) {
    const double ang = 2.0 * pi * k / npoints;
    FrequencyPoint fp{center.gamma + radius * std::cos(ang), center.delta + radius * std::sin(ang),
                      eta};
    if (k == 0) {
      // Anchor the branch at the rightmost point (largest gamma).
      FrequencyPoint anchor = fp;
      anchor.gamma = std::max(anchor.gamma, LopatinskiiEvaluator::kGammaFloor);
      prev = ev.det_tracked(anchor, track);
      continue;
    }
    const Complex cur = ev.det_tracked(fp, track);
    total += std::arg(cur / prev);
    prev = cur;
  }
  return static_cast<int>(std::lround(total / (2.0 * pi)));
}

// Number of determinant zeros strictly inside the rectangle (argument
// principle with adaptive edge sampling). Rectangle must satisfy gamma_min > 0.
inline int count_roots_rect(const LopatinskiiEvaluator& ev, ScanRect rect, double eta,
                            int max_restarts = 6) {
  for (int attempt = 0; attempt < max_restarts; ++attempt) {
    const double g0 = rect.gamma_min, g1 = rect.gamma_max;
    const double d0 = rect.delta_min, d1 = rect.delta_max;
    // Corners counterclockwise in tau = gamma + i delta.
    const std::array<std::pair<double, double>, 5> corners = {
        {{g1, d0}, {g1, d1}, {g0, d1}, {g0, d0}, {g1, d0}}};
    double total = 0.0;
    bool bad = false;
    for (int e = 0; e < 4 && !bad; ++e) {
      int n = 128;
      for (;;) {
        double acc = 0.0;
        bool subdivide = false;
        Complex prev;
        for (int k = 0; k <= n; ++k) {
          const double s = static_cast<double>(k) / n;
          const double g = corners[e].first + s * (corners[e + 1].first - corners[e].first);
          const double d = corners[e].second + s * (corners[e + 1].second - corners[e].second);
          const Complex cur = ev.det({g, d, eta});
          if (std::abs(cur) < 1e-13) {
            bad = true;
            break;
          }
          if (k > 0) {
            const double darg = std::arg(cur / prev);
            if (std::abs(darg) > 0.5 * pi) {
              subdivide = true;
              break;
            }
            acc += darg;
          }
          prev = cur;
        }
        if (bad) break;
        if (!subdivide) {
          total += acc;
          break;
        }
        if (n >= 1 << 16) {
          bad = true;
          break;
        }
        n *= 2;
      }
    }
    if (!bad) {
      const double w = total / (2.0 * pi);
      const int iw = static_cast<int>(std::lround(w));
      if (std::abs(w - iw) < 0.05) return iw;
    }
    // Jitter the rectangle away from a root sitting on the contour.
    rect.gamma_min *= 1.37;
    rect.gamma_max *= 1.0131;
    rect.delta_min -= 3.3e-3;
    rect.delta_max += 4.7e-3;
  }
  throw numerical_abort("count_roots_rect: contour kept hitting roots after jittering");
}

// Coarse modulus scan + Newton refinement + winding-number multiplicities.
inline std::vector<RootRecord> scan_roots(const BackgroundSheet& sheet, const ScanRect& rect,
                                          const ScanOptions& opt = {},
                                          std::vector<std::string>* warnings = nullptr) {
  LopatinskiiEvaluator ev(sheet);
  const double g_lo = std::max(rect.gamma_min, 1e-6);
  std::vector<double> mod(static_cast<std::size_t>(opt.n_gamma) * opt.n_delta);
  auto gamma_of = [&](int i) {
    return g_lo + (rect.gamma_max - g_lo) * i / (opt.n_gamma - 1.0);
  };
  auto delta_of = [&](int j) {
    return rect.delta_min + (rect.delta_max - rect.delta_min) * j / (opt.n_delta - 1.0);
  };
  parallel_for(static_cast<std::int64_t>(opt.n_gamma) * opt.n_delta, [&](std::int64_t k) {
    const int i = static_cast<int>(k / opt.n_delta);
    const int j = static_cast<int>(k % opt.n_delta);
    mod[k] = std::abs(ev.det({gamma_of(i), delta_of(j), opt.eta}));
  });

  // Local minima of |det| on the scan grid are the root candidates.
  std::vector<FrequencyPoint> candidates;
  for (int i = 0; i < opt.n_gamma; ++i)
    for (int j = 0; j < opt.n_delta; ++j) {
      const double v = mod[static_cast<std::size_t>(i) * opt.n_delta + j];
      bool is_min = true;
      for (int di = -1; di <= 1 && is_min; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
          const int ii = i + di, jj = j + dj;
          if (ii < 0 || jj < 0 || ii >= opt.n_gamma || jj >= opt.n_delta || (di == 0 && dj == 0))
            continue;
          if (mod[static_cast<std::size_t>(ii) * opt.n_delta + jj] < v) {
            is_min = false;
            break;
          }
        }
      if (is_min) candidates.push_back({gamma_of(i), delta_of(j), opt.eta});
    }

  std::vector<RootRecord> roots;
  for (FrequencyPoint fp : candidates) {
    if (!detail::newton_refine(ev, fp, opt)) continue;
    if (fp.gamma < opt.boundary_gamma_tol) detail::axis_polish(ev, fp, opt);
    const double res = std::abs(ev.det(fp));
    if (res > opt.root_tol) continue;
    bool dup = false;
    for (const auto& r : roots)
      if (std::abs(r.location.gamma - fp.gamma) + std::abs(r.location.delta - fp.delta) <
          opt.dedupe_dist) {
        dup = true;
        break;
      }
    if (dup) continue;
    RootRecord rec;
    rec.location = fp;
    rec.on_boundary = fp.gamma < opt.boundary_gamma_tol;
    if (rec.on_boundary) rec.location.gamma = 0.0;
    rec.det_modulus = res;
    roots.push_back(rec);
  }

  for (auto& r : roots) {
    r.multiplicity =
        winding_number(ev, r.location, opt.circle_radius, opt.circle_points, opt.eta);
    if (r.multiplicity < 1) r.multiplicity = 1;
  }
  if (warnings) {
    for (std::size_t a = 0; a < roots.size(); ++a)
      for (std::size_t b = a + 1; b < roots.size(); ++b) {
        const double d =
            std::hypot(roots[a].location.gamma - roots[b].location.gamma,
                       roots[a].location.delta - roots[b].location.delta);
        if (d < 2.0 * opt.circle_radius)
          warnings->push_back("roots closer than winding diameter, circle radius " +
                              std::to_string(opt.circle_radius));
      }
  }
  std::sort(roots.begin(), roots.end(), [](const RootRecord& a, const RootRecord& b) {
    if (a.location.gamma != b.location.gamma) return a.location.gamma < b.location.gamma;
    return a.location.delta < b.location.delta;
  });
  return roots;
}

// True when the sheet supports a growing normal mode (a determinant zero with
// gamma > 0); decided by an argument-principle count over a rectangle that
// covers the homogeneity-bounded root region at eta = 1.
inline bool has_unstable_root(const BackgroundSheet& sheet) {
  LopatinskiiEvaluator ev(sheet);
  const double cmax = std::max(sheet.c_plus(), sheet.c_minus());
  const double reach = 1.5 * (sheet.v_bar + cmax) + 1.0;
  ScanRect rect{1e-4, reach, -reach, reach};
  return count_roots_rect(ev, rect, 1.0) > 0;
}

// Bisection for the speed at which gamma > 0 roots disappear.
inline double instability_threshold_speed(double c_plus, double c_minus, double tol,
                                          const EquationOfState& eos, double p_bar) {
  double lo = 0.15 * (c_plus + c_minus);
  double hi = 2.0 * (c_plus + c_minus);
  auto unstable = [&](double v) {
    return has_unstable_root(BackgroundSheet::from_sound_speeds(c_plus, c_minus, v, eos, p_bar));
  };
  if (!unstable(lo) || unstable(hi))
    throw numerical_abort("instability_threshold_speed: bisection bracket invalid");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (unstable(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct DiagramCell {
  double c_plus, v_bar;
  StabilityTag tag;
};

struct StabilityDiagram {
  std::vector<DiagramCell> cells;
  std::vector<std::array<double, 3>> curves;  // c_plus, v_threshold, v_double
};

inline StabilityDiagram stability_diagram(double c_minus, double c_plus_min, double c_plus_max,
                                          double v_min, double v_max, int n_c, int n_v,
                                          const EquationOfState& eos, double p_bar) {
  if (c_minus <= 0 || c_plus_min <= 0 || v_min <= 0)
    throw config_error("stability_diagram: ranges must be positive");
  StabilityDiagram d;
  d.cells.reserve(static_cast<std::size_t>(n_c) * n_v);
  for (int i = 0; i < n_c; ++i) {
    const double cp = c_plus_min + (c_plus_max - c_plus_min) * i / std::max(1, n_c - 1);
    for (int j = 0; j < n_v; ++j) {
      const double v = v_min + (v_max - v_min) * j / std::max(1, n_v - 1);
      const auto sheet = BackgroundSheet::from_sound_speeds(cp, c_minus, v, eos, p_bar);
      d.cells.push_back({cp, v, classify_background(sheet).tag});
    }
    const auto [vt, vd] = critical_speeds(cp, c_minus);
    d.curves.push_back({cp, vt, vd});
  }
  return d;
}

}  // namespace vslab
