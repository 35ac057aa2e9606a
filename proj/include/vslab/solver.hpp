#pragma once

#include "vslab/linear_ops.hpp"
#include "vslab/norms.hpp"

namespace vslab {

// Discretization of the reformulated characteristic-variable system
//   A0 dt W + A1_bold d1 W + I2 d2 W + C_bold W = A0 T^{-1} f
// in marching form (A0 cancels):
//   dt W + Q d1 W + Lam d2up W + Z W = T^{-1} f,
// with Q = T^{-1} A1 T, Lam = diag(0, lam2, -lam2, 0),
// Z = T^{-1}(DtT + A1 D1T + At2 D2T [+ Ccal T]).
// Forward Euler in t, centered + fixed-coefficient LLF viscosity in x1,
// sign-fixed upwinding in x2. The same slice assembly backs the explicit
// solver and the operator applications used by the iteration ledger, so a
// solve satisfies its own discrete equations to rounding.

struct SliceCoeffs {
  int n1 = 0, n2 = 0;
  std::vector<Mat4> T[2], Tinv[2], Q[2], Z[2];
  std::vector<double> lam[2];  // x2 speed of component 1; component 2 carries -lam
  std::vector<BoundaryCoeffs> bdy;
};

// Incoming component at x2 = 0: W2 (index 1) on the right side, W3 (index 2)
// on the left side; fixed by the sign of d2Phi.
inline int incoming_comp(int side) { return side == 0 ? 1 : 2; }
inline int outgoing_comp(int side) { return side == 0 ? 2 : 1; }

class SchemeOps {
 public:
  SchemeOps(const BasicState& basic, double alpha1, bool include_ccal)
      : basic_(&basic), alpha1_(alpha1), include_ccal_(include_ccal) {
    precompute_transforms();
  }

  const BasicState& basic() const { return *basic_; }
  double alpha1() const { return alpha1_; }
  void set_alpha1(double a) {
    alpha1_ = a;
    cache_valid_ = false;
  }

  // Largest tangential speed bound and normal speed, for CFL and viscosity choice.
  struct SpeedBounds {
    double alpha1 = 0.0, lam_max = 0.0, z_max = 0.0;
  };
  SpeedBounds speed_bounds() const {
    SpeedBounds sb;
    for (int it = 0; it < basic_->grid.nt; ++it) {
      const SliceCoeffs& sc = coeffs(it);
      for (int side = 0; side < 2; ++side)
        for (std::size_t k = 0; k < sc.Q[side].size(); ++k) {
          sb.alpha1 = std::max(sb.alpha1, sc.Q[side][k].cwiseAbs().rowwise().sum().maxCoeff());
          sb.lam_max = std::max(sb.lam_max, std::abs(sc.lam[side][k]));
          sb.z_max = std::max(sb.z_max, sc.Z[side][k].cwiseAbs().rowwise().sum().maxCoeff());
        }
    }
    return sb;
  }

  // Coefficient pack of one storage slice (memoized; weight in [0,1) blends
  // the basic state linearly toward slice it+1 for substepping).
  const SliceCoeffs& coeffs(int it, double weight = 0.0) const {
    if (cache_valid_ && cache_it_ == it && cache_weight_ == weight) return cache_;
    assemble(it, weight, cache_);
    cache_it_ = it;
    cache_weight_ = weight;
    cache_valid_ = true;
    return cache_;
  }

  // x2 upwind difference for component c at (i1, i2) of a W slice.
  // Incoming component at i2 = 0 is not an operator row (returns 0; masked).
  double d2_upwind(const SpaceField& w, int side, int c, int i1, int i2, double h2) const {
    if (c == 0 || c == 3) return 0.0;
    const bool positive_speed = (c == 1) == (side == 0);  // sign of the x2 speed
    const int n2 = w.n2;
    if (positive_speed) {
      if (i2 == 0) return 0.0;  // masked: incoming, set by the boundary solve
      return (w.at(c, i1, i2) - w.at(c, i1, i2 - 1)) / h2;
    }
    if (i2 == n2 - 1) return (0.0 - w.at(c, i1, i2)) / h2;  // absorbing ghost
    return (w.at(c, i1, i2 + 1) - w.at(c, i1, i2)) / h2;
  }

  // Interior operator applied to a full space-time pair X (dotV-like):
  // out(it) = T [ (Wx(it+1)-Wx(it))/dt + Q D1 Wx + Lam D2up Wx + Z Wx - visc ],
  // Wx = Tinv X, defined for it <= nt-2; the last slice and the masked
  // boundary rows are zero.
  SidePair apply_interior(const SidePair& x) const {
    const GridSpec& g = basic_->grid;
    SidePair out{Field(g, 4, x.plus.past_vanishing), Field(g, 4, x.minus.past_vanishing)};
    // W-transform of every slice once.
    std::vector<SpaceField> w[2];
    for (int side = 0; side < 2; ++side) {
      w[side].assign(g.nt, SpaceField(4, g.n1, g.n2));
      for (int it = 0; it < g.nt; ++it) {
        const SliceCoeffs& sc = coeffs(it);
        for (int i1 = 0; i1 < g.n1; ++i1)
          for (int i2 = 0; i2 < g.n2; ++i2) {
            Vec4 v;
            for (int c = 0; c < 4; ++c) v(c) = x[side].at(c, it, i1, i2);
            const Vec4 ww = sc.Tinv[side][idx(i1, i2)] * v;
            for (int c = 0; c < 4; ++c) w[side][it].at(c, i1, i2) = ww(c);
          }
      }
    }
    for (int it = 0; it + 1 < g.nt; ++it) {
      const SliceCoeffs& sc = coeffs(it);
      for (int side = 0; side < 2; ++side)
        for (int i1 = 0; i1 < g.n1; ++i1)
          for (int i2 = 0; i2 < g.n2; ++i2) {
            Vec4 r = residual_point(sc, w[side][it], w[side][it + 1], side, i1, i2, g.dt(),
                                    g.h1(), g.h2());
            // The incoming row at x2 = 0 is governed by the boundary
            // conditions, not by the interior scheme; mask it in the W frame.
            if (i2 == 0) r(incoming_comp(side)) = 0.0;
            const Vec4 tr = sc.T[side][idx(i1, i2)] * r;
            for (int c = 0; c < 4; ++c) out[side].at(c, it, i1, i2) = tr(c);
          }
    }
    return out;
  }

  // Interior operator in the W frame: same rows as apply_interior without the
  // final T multiplication. Input and output are W-coordinate pairs.
  SidePair apply_interior_wframe(const std::vector<SpaceField> w[2], bool past) const {
    const GridSpec& g = basic_->grid;
    SidePair out{Field(g, 4, past), Field(g, 4, past)};
    for (int it = 0; it + 1 < g.nt; ++it) {
      const SliceCoeffs& sc = coeffs(it);
      for (int side = 0; side < 2; ++side)
        for (int i1 = 0; i1 < g.n1; ++i1)
          for (int i2 = 0; i2 < g.n2; ++i2) {
            Vec4 r = residual_point(sc, w[side][it], w[side][it + 1], side, i1, i2, g.dt(),
                                    g.h1(), g.h2());
            if (i2 == 0) r(incoming_comp(side)) = 0.0;
            for (int c = 0; c < 4; ++c) out[side].at(c, it, i1, i2) = r(c);
          }
    }
    return out;
  }

  // Discrete linearized boundary rows applied to (W traces, psi):
  //   row 1: forward-Euler transport form at slices 0..nt-2,
  //   rows 0, 2: algebraic at every slice.
  // Matches the solver's psi update and incoming-trace solve exactly.
  BoundaryField apply_boundary(const BoundaryPair& w_traces, const BoundaryField& psi) const {
    const GridSpec& g = basic_->grid;
    BoundaryField out(g, 3, psi.past_vanishing);
    for (int it = 0; it < g.nt; ++it) {
      const SliceCoeffs& sc = coeffs(it);
      for (int i1 = 0; i1 < g.n1; ++i1) {
        const BoundaryCoeffs& bc = sc.bdy[i1];
        Vec8 w8;
        for (int c = 0; c < 4; ++c) {
          w8(c) = w_traces.plus.at(c, it, i1);
          w8(4 + c) = w_traces.minus.at(c, it, i1);
        }
        const int ip = (i1 + 1) % g.n1, im = (i1 + g.n1 - 1) % g.n1;
        const double d1psi = (psi.at(0, it, ip) - psi.at(0, it, im)) / (2.0 * g.h1());
        for (const int row : {0, 2})
          out.at(row, it, i1) = bc.bbar(row, 1) * d1psi + bc.bsharp(row) * psi.at(0, it, i1) +
                                bc.m_w.row(row) * w8;
        if (it + 1 < g.nt) {
          // Transport row: upwind in x1 (the sheet speed fixes the direction).
          const double d1psi_up = (psi.at(0, it, i1) - psi.at(0, it, im)) / g.h1();
          out.at(1, it, i1) = (psi.at(0, it + 1, i1) - psi.at(0, it, i1)) / g.dt() +
                              bc.bbar(1, 1) * d1psi_up + bc.bsharp(1) * psi.at(0, it, i1) +
                              bc.m_w.row(1) * w8;
        }
      }
    }
    return out;
  }

  // Interior residual in W coordinates at one point (component-wise rows).
  Vec4 residual_point(const SliceCoeffs& sc, const SpaceField& w_now, const SpaceField& w_next,
                      int side, int i1, int i2, double dt, double h1, double h2) const {
    const int n1 = w_now.n1;
    const int ip = (i1 + 1) % n1, im = (i1 + n1 - 1) % n1;
    Vec4 wv, w1c, wvisc, wnext;
    for (int c = 0; c < 4; ++c) {
      wv(c) = w_now.at(c, i1, i2);
      w1c(c) = (w_now.at(c, ip, i2) - w_now.at(c, im, i2)) / (2.0 * h1);
      wvisc(c) = (w_now.at(c, ip, i2) - 2.0 * w_now.at(c, i1, i2) + w_now.at(c, im, i2)) / h1;
      wnext(c) = w_next.at(c, i1, i2);
    }
    const std::size_t k = idx(i1, i2);
    Vec4 r = (wnext - wv) / dt + sc.Q[side][k] * w1c + sc.Z[side][k] * wv -
             0.5 * alpha1_ * wvisc;
    const double lam = sc.lam[side][k];
    r(1) += lam * d2_upwind(w_now, side, 1, i1, i2, h2);
    r(2) += -lam * d2_upwind(w_now, side, 2, i1, i2, h2);
    return r;
  }

  std::size_t idx(int i1, int i2) const { return static_cast<std::size_t>(i1) * basic_->grid.n2 + i2; }

 private:
  void precompute_transforms() {
    const GridSpec& g = basic_->grid;
    for (int side = 0; side < 2; ++side) {
      t_all_[side].resize(static_cast<std::size_t>(g.nt) * g.n1 * g.n2);
      for (int it = 0; it < g.nt; ++it)
        for (int i1 = 0; i1 < g.n1; ++i1)
          for (int i2 = 0; i2 < g.n2; ++i2)
            t_all_[side][(static_cast<std::size_t>(it) * g.n1 + i1) * g.n2 + i2] =
                transform_T(basic_->point_state(side, it, i1, i2), basic_->sheet.eos,
                            basic_->dPhi[side].at(1, it, i1, i2));
    }
  }

  const Mat4& t_global(int side, int it, int i1, int i2) const {
    const GridSpec& g = basic_->grid;
    return t_all_[side][(static_cast<std::size_t>(it) * g.n1 + i1) * g.n2 + i2];
  }

  // Interpolated pointwise basic-state sample.
  struct Sample {
    PrimitiveState st;
    PhiDerivs dp;
    Vec4 du1, du2;
  };
  Sample sample(int side, int it, double weight, int i1, int i2) const {
    Sample s;
    auto mix = [&](const Field& f, int c) {
      const double a = f.at(c, it, i1, i2);
      if (weight == 0.0) return a;
      return (1.0 - weight) * a + weight * f.at(c, std::min(it + 1, basic_->grid.nt - 1), i1, i2);
    };
    s.st = {mix(basic_->U[side], 0), mix(basic_->U[side], 1), mix(basic_->U[side], 2),
            mix(basic_->U[side], 3)};
    s.dp = {mix(basic_->dPhi[side], 0), mix(basic_->dPhi[side], 1), mix(basic_->dPhi[side], 2)};
    for (int c = 0; c < 4; ++c) {
      s.du1(c) = mix(basic_->dU1[side], c);
      s.du2(c) = mix(basic_->dU2[side], c);
    }
    return s;
  }

  void assemble(int it, double weight, SliceCoeffs& sc) const {
    const GridSpec& g = basic_->grid;
    sc.n1 = g.n1;
    sc.n2 = g.n2;
    const auto& eos = basic_->sheet.eos;
    for (int side = 0; side < 2; ++side) {
      sc.T[side].resize(static_cast<std::size_t>(g.n1) * g.n2);
      sc.Tinv[side].resize(sc.T[side].size());
      sc.Q[side].resize(sc.T[side].size());
      sc.Z[side].resize(sc.T[side].size());
      sc.lam[side].resize(sc.T[side].size());
      for (int i1 = 0; i1 < g.n1; ++i1)
        for (int i2 = 0; i2 < g.n2; ++i2) {
          const Sample s = sample(side, it, weight, i1, i2);
          const std::size_t k = idx(i1, i2);
          const Mat4 t = (weight == 0.0)
                             ? t_global(side, it, i1, i2)
                             : transform_T(s.st, eos, s.dp.d1);
          const Mat4 ti = transform_T_inv(s.st, eos, s.dp.d1);
          const Mat4 a1 = flux_a1(s.st, eos);
          const Mat4 at2 = a2_tilde_general(s.st, eos, s.dp);
          // T derivatives: forward slope in t across storage slices, centered
          // (periodic / one-sided) in space.
          Mat4 dt_t;
          if (it + 1 < g.nt)
            dt_t = (t_global(side, it + 1, i1, i2) - t_global(side, it, i1, i2)) / g.dt();
          else
            dt_t = (t_global(side, it, i1, i2) - t_global(side, it - 1, i1, i2)) / g.dt();
          const int ip = (i1 + 1) % g.n1, im = (i1 + g.n1 - 1) % g.n1;
          const Mat4 d1_t =
              (t_global(side, it, ip, i2) - t_global(side, it, im, i2)) / (2.0 * g.h1());
          Mat4 d2_t;
          if (i2 == 0)
            d2_t = (-3.0 * t_global(side, it, i1, 0) + 4.0 * t_global(side, it, i1, 1) -
                    t_global(side, it, i1, 2)) /
                   (2.0 * g.h2());
          else if (i2 == g.n2 - 1)
            d2_t = (3.0 * t_global(side, it, i1, g.n2 - 1) - 4.0 * t_global(side, it, i1, g.n2 - 2) +
                    t_global(side, it, i1, g.n2 - 3)) /
                   (2.0 * g.h2());
          else
            d2_t = (t_global(side, it, i1, i2 + 1) - t_global(side, it, i1, i2 - 1)) /
                   (2.0 * g.h2());
          Mat4 inner = dt_t + a1 * d1_t + at2 * d2_t;
          if (include_ccal_)
            inner += c_cal_matrix(s.st, eos, s.dp.d1, s.dp.d2, s.du1, s.du2) * t;
          sc.T[side][k] = t;
          sc.Tinv[side][k] = ti;
          sc.Q[side][k] = ti * a1 * t;
          sc.Z[side][k] = ti * inner;
          sc.lam[side][k] = lambda2_eigenvalue(s.st, eos, s.dp);
        }
    }
    sc.bdy.resize(g.n1);
    for (int i1 = 0; i1 < g.n1; ++i1) sc.bdy[i1] = boundary_coeffs(*basic_, it, i1);
    // Substep boundary coefficients keep slice values; only used when weight = 0
    // for the exact-ledger path, interpolation error is first order otherwise.
  }

  const BasicState* basic_;
  double alpha1_;
  bool include_ccal_;
  std::vector<Mat4> t_all_[2];
  mutable SliceCoeffs cache_;
  mutable int cache_it_ = -1;
  mutable double cache_weight_ = -1.0;
  mutable bool cache_valid_ = false;
};

struct LinearSolveOptions {
  double cfl = 0.6;               // against alpha1/h1 + lam/h2 + z
  double alpha1_override = -1.0;  // fixed LLF speed; negative = auto bound
  int max_substeps = 512;         // per storage step
};

struct LinearSolveResult {
  SidePair vdot;
  SidePair w;
  BoundaryField psi;
  BoundaryPair pv_trace;  // P(phi) dotV per side (2 comps)
  int n_sub = 1;
  double alpha1 = 0.0;
  double dt_sub = 0.0;
  double worst_bdy_det = 1e300;
};

// Explicit solution of the effective linear problem: interior W-march,
// transport update of psi from the second boundary row, and a 2x2 solve of
// the remaining rows for the incoming characteristic traces.
inline LinearSolveResult solve_effective_linear(const BasicState& basic, const SidePair& f,
                                                const BoundaryField& g,
                                                const LinearSolveOptions& opt = {}) {
  const GridSpec& grid = basic.grid;
  if (!f.plus.past_is_zero(0.0) || !f.minus.past_is_zero(0.0))
    throw numerical_abort("solve_effective_linear: interior source must vanish in the past");

  SchemeOps sched(basic, std::max(0.0, opt.alpha1_override), true);
  const SchemeOps::SpeedBounds sb = sched.speed_bounds();
  double alpha1 = opt.alpha1_override;
  if (alpha1 <= 0.0) {
    alpha1 = 1.05 * sb.alpha1;
    sched.set_alpha1(alpha1);
  }

  const double rate = alpha1 / grid.h1() + sb.lam_max / grid.h2() + sb.z_max;
  int n_sub = std::max(1, static_cast<int>(std::ceil(grid.dt() * rate / opt.cfl)));
  if (n_sub > opt.max_substeps)
    throw numerical_abort("solve_effective_linear: CFL requires too many substeps");
  const double dt_sub = grid.dt() / n_sub;

  LinearSolveResult res;
  res.n_sub = n_sub;
  res.alpha1 = alpha1;
  res.dt_sub = dt_sub;
  res.vdot = SidePair{Field(grid, 4, true), Field(grid, 4, true)};
  res.w = SidePair{Field(grid, 4, true), Field(grid, 4, true)};
  res.psi = BoundaryField(grid, 1, true);
  res.pv_trace = BoundaryPair{BoundaryField(grid, 2, true), BoundaryField(grid, 2, true)};

  SpaceField w[2] = {SpaceField(4, grid.n1, grid.n2), SpaceField(4, grid.n1, grid.n2)};
  std::vector<double> psi(grid.n1, 0.0);

  auto store_slice = [&](int it) {
    const SliceCoeffs& sc = sched.coeffs(it);
    for (int side = 0; side < 2; ++side)
      for (int i1 = 0; i1 < grid.n1; ++i1)
        for (int i2 = 0; i2 < grid.n2; ++i2) {
          Vec4 wv;
          for (int c = 0; c < 4; ++c) wv(c) = w[side].at(c, i1, i2);
          const Vec4 v = sc.T[side][sched.idx(i1, i2)] * wv;
          for (int c = 0; c < 4; ++c) {
            res.vdot[side].at(c, it, i1, i2) = v(c);
            res.w[side].at(c, it, i1, i2) = wv(c);
          }
        }
    for (int i1 = 0; i1 < grid.n1; ++i1) res.psi.at(0, it, i1) = psi[i1];
  };
  store_slice(0);

  std::vector<double> psi_new(grid.n1, 0.0);
  SpaceField w_new[2] = {w[0], w[1]};

  for (int it = 0; it + 1 < grid.nt; ++it) {
    for (int sub = 0; sub < n_sub; ++sub) {
      const double weight = static_cast<double>(sub) / n_sub;
      const double wnext = static_cast<double>(sub + 1) / n_sub;
      const SliceCoeffs& sc = sched.coeffs(it, weight);
      // sources at the substep time (linear interpolation between slices)
      auto f_at = [&](int side, int c, int i1, int i2) {
        const double a = f[side].at(c, it, i1, i2);
        const double b = f[side].at(c, it + 1, i1, i2);
        return (1.0 - weight) * a + weight * b;
      };
      auto g_at = [&](int c, int i1, double wgt) {
        return (1.0 - wgt) * g.at(c, it, i1) + wgt * g.at(c, it + 1, i1);
      };

      // interior update
      for (int side = 0; side < 2; ++side)
        for (int i1 = 0; i1 < grid.n1; ++i1)
          for (int i2 = 0; i2 < grid.n2; ++i2) {
            const std::size_t k = sched.idx(i1, i2);
            const int n1 = grid.n1;
            const int ip = (i1 + 1) % n1, im = (i1 + n1 - 1) % n1;
            Vec4 wv, w1c, wvisc, fv;
            for (int c = 0; c < 4; ++c) {
              wv(c) = w[side].at(c, i1, i2);
              w1c(c) = (w[side].at(c, ip, i2) - w[side].at(c, im, i2)) / (2.0 * grid.h1());
              wvisc(c) =
                  (w[side].at(c, ip, i2) - 2.0 * w[side].at(c, i1, i2) + w[side].at(c, im, i2)) /
                  grid.h1();
              fv(c) = f_at(side, c, i1, i2);
            }
            Vec4 rhs = -(sc.Q[side][k] * w1c) - sc.Z[side][k] * wv + 0.5 * alpha1 * wvisc +
                       sc.Tinv[side][k] * fv;
            const double lam = sc.lam[side][k];
            rhs(1) -= lam * sched.d2_upwind(w[side], side, 1, i1, i2, grid.h2());
            rhs(2) -= -lam * sched.d2_upwind(w[side], side, 2, i1, i2, grid.h2());
            for (int c = 0; c < 4; ++c) w_new[side].at(c, i1, i2) = wv(c) + dt_sub * rhs(c);
          }

      // psi transport (second boundary row, forward Euler, upwind in x1)
      for (int i1 = 0; i1 < grid.n1; ++i1) {
        const BoundaryCoeffs& bc = sc.bdy[i1];
        Vec8 w8;
        for (int c = 0; c < 4; ++c) {
          w8(c) = w[0].at(c, i1, 0);
          w8(4 + c) = w[1].at(c, i1, 0);
        }
        const int n1 = grid.n1;
        const int im = (i1 + n1 - 1) % n1;
        const double d1psi_up = (psi[i1] - psi[im]) / grid.h1();
        const double mrow = bc.m_w.row(1) * w8;
        psi_new[i1] = psi[i1] + dt_sub * (g_at(1, i1, weight) - bc.bbar(1, 1) * d1psi_up -
                                          bc.bsharp(1) * psi[i1] - mrow);
      }

      // incoming traces at the new level from boundary rows 0 and 2
      const SliceCoeffs& sc_new = sched.coeffs(it, wnext >= 1.0 ? 0.0 : wnext);
      const SliceCoeffs& sc_bc = (wnext >= 1.0) ? sched.coeffs(it + 1) : sc_new;
      for (int i1 = 0; i1 < grid.n1; ++i1) {
        const BoundaryCoeffs& bc = sc_bc.bdy[i1];
        Vec8 w8;
        for (int c = 0; c < 4; ++c) {
          w8(c) = w_new[0].at(c, i1, 0);
          w8(4 + c) = w_new[1].at(c, i1, 0);
        }
        w8(1) = 0.0;  // unknown incoming slots
        w8(6) = 0.0;
        const int n1 = grid.n1;
        const int ip = (i1 + 1) % n1, im = (i1 + n1 - 1) % n1;
        const double d1psi = (psi_new[ip] - psi_new[im]) / (2.0 * grid.h1());
        Eigen::Vector2d rhs;
        for (int rr = 0; rr < 2; ++rr) {
          const int row = rr == 0 ? 0 : 2;
          rhs(rr) = g_at(row, i1, wnext) - bc.bbar(row, 1) * d1psi -
                    bc.bsharp(row) * psi_new[i1] - bc.m_w.row(row) * w8;
        }
        Eigen::Matrix2d a;
        a << bc.m_w(0, 1), bc.m_w(0, 6), bc.m_w(2, 1), bc.m_w(2, 6);
        const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
        res.worst_bdy_det = std::min(res.worst_bdy_det, std::abs(det));
        if (std::abs(det) < 1e-12)
          throw numerical_abort("solve_effective_linear: boundary solve singular, |det| = " +
                                std::to_string(det));
        const Eigen::Vector2d x = a.inverse() * rhs;
        w_new[0].at(1, i1, 0) = x(0);
        w_new[1].at(2, i1, 0) = x(1);
      }

      std::swap(w[0], w_new[0]);
      std::swap(w[1], w_new[1]);
      std::swap(psi, psi_new);
    }
    store_slice(it + 1);
  }

  const BoundaryPair w_traces{trace(res.w.plus), trace(res.w.minus)};
  res.pv_trace = noncharacteristic_trace(w_traces, basic);
  return res;
}

struct EnergyRow {
  std::string estimate;  // "EL1" or "tame"
  double gamma = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

// Measured two-sided quantities of the L2 estimate and the tame-form variant.
inline std::vector<EnergyRow> energy_report(const LinearSolveResult& sol, const SidePair& f,
                                            const BoundaryField& g, const BasicState& basic,
                                            const std::vector<double>& gammas, int tame_s = 1) {
  std::vector<EnergyRow> rows;
  for (const double gamma : gammas) {
    const WeightedNormSpec l2{0, gamma, NormDomain::Interior};
    const WeightedNormSpec l2b{0, gamma, NormDomain::Boundary};
    const WeightedNormSpec h1b{1, gamma, NormDomain::Boundary};
    const WeightedNormSpec l2h1{1, gamma, NormDomain::InteriorTangential};

    const double nv = weighted_norm(sol.vdot.plus, l2) + weighted_norm(sol.vdot.minus, l2);
    const double npv =
        weighted_norm(sol.pv_trace.plus, l2b) + weighted_norm(sol.pv_trace.minus, l2b);
    const double npsi2 = weighted_norm_sq(sol.psi, h1b);
    const double lhs = gamma * nv * nv + npv * npv + npsi2;

    const double nf = weighted_norm(f.plus, l2h1) + weighted_norm(f.minus, l2h1);
    const double ng2 = weighted_norm_sq(g, h1b);
    const double rhs = std::pow(gamma, -3.0) * nf * nf + std::pow(gamma, -2.0) * ng2;
    rows.push_back({"EL1", gamma, lhs, rhs, rhs > 0.0 ? lhs / rhs : 0.0});
  }
  for (const double gamma : gammas) {
    const WeightedNormSpec hs{tame_s, gamma, NormDomain::Interior};
    const WeightedNormSpec hsb{tame_s, gamma, NormDomain::Boundary};
    const WeightedNormSpec hs1b{tame_s + 1, gamma, NormDomain::Boundary};
    const double lhs = weighted_norm(sol.vdot.plus, hs) + weighted_norm(sol.vdot.minus, hs) +
                       weighted_norm(sol.pv_trace.plus, hsb) +
                       weighted_norm(sol.pv_trace.minus, hsb) + weighted_norm(sol.psi, hs1b);
    const WeightedNormSpec hs1{tame_s + 1, gamma, NormDomain::Interior};
    const double rhs = weighted_norm(f.plus, hs1) + weighted_norm(f.minus, hs1) +
                       weighted_norm(g, hs1b);
    rows.push_back({"tame", gamma, lhs, rhs, rhs > 0.0 ? lhs / rhs : 0.0});
    (void)basic;
  }
  return rows;
}

}  // namespace vslab
