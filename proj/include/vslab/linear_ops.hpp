#pragma once

#include "vslab/basic_state.hpp"

namespace vslab {

struct SidePair {
  Field plus;   // right state
  Field minus;  // left state
  Field& operator[](int s) { return s == 0 ? plus : minus; }
  const Field& operator[](int s) const { return s == 0 ? plus : minus; }
};

struct BoundaryPair {
  BoundaryField plus, minus;
  BoundaryField& operator[](int s) { return s == 0 ? plus : minus; }
  const BoundaryField& operator[](int s) const { return s == 0 ? plus : minus; }
};

// Alinhac substitution: dotV = V - (Psi / d2Phi) d2U.
inline SidePair good_unknown(const SidePair& v, const SidePair& psi, const BasicState& basic) {
  SidePair out{Field(basic.grid, 4, v.plus.past_vanishing),
               Field(basic.grid, 4, v.minus.past_vanishing)};
  for (int side = 0; side < 2; ++side)
    for (int it = 0; it < basic.grid.nt; ++it)
      for (int i1 = 0; i1 < basic.grid.n1; ++i1)
        for (int i2 = 0; i2 < basic.grid.n2; ++i2) {
          const double w =
              psi[side].at(0, it, i1, i2) / basic.dPhi[side].at(2, it, i1, i2);
          for (int c = 0; c < 4; ++c)
            out[side].at(c, it, i1, i2) =
                v[side].at(c, it, i1, i2) - w * basic.dU2[side].at(c, it, i1, i2);
        }
  return out;
}

inline SidePair good_unknown_inverse(const SidePair& vdot, const SidePair& psi,
                                     const BasicState& basic) {
  SidePair out{Field(basic.grid, 4, vdot.plus.past_vanishing),
               Field(basic.grid, 4, vdot.minus.past_vanishing)};
  for (int side = 0; side < 2; ++side)
    for (int it = 0; it < basic.grid.nt; ++it)
      for (int i1 = 0; i1 < basic.grid.n1; ++i1)
        for (int i2 = 0; i2 < basic.grid.n2; ++i2) {
          const double w =
              psi[side].at(0, it, i1, i2) / basic.dPhi[side].at(2, it, i1, i2);
          for (int c = 0; c < 4; ++c)
            out[side].at(c, it, i1, i2) =
                vdot[side].at(c, it, i1, i2) + w * basic.dU2[side].at(c, it, i1, i2);
        }
  return out;
}

// Effective interior operator L(U, Phi) dotV + C(U, Phi) dotV with the
// analysis stencils. Reporting-quality discretization (second order).
inline SidePair apply_L_effective(const SidePair& vdot, const BasicState& basic) {
  SidePair out{Field(basic.grid, 4, vdot.plus.past_vanishing),
               Field(basic.grid, 4, vdot.minus.past_vanishing)};
  for (int side = 0; side < 2; ++side)
    for (int it = 0; it < basic.grid.nt; ++it)
      for (int i1 = 0; i1 < basic.grid.n1; ++i1)
        for (int i2 = 0; i2 < basic.grid.n2; ++i2) {
          const PrimitiveState st = basic.point_state(side, it, i1, i2);
          const PhiDerivs dp = basic.point_dphi(side, it, i1, i2);
          const Mat4 a1 = flux_a1(st, basic.sheet.eos);
          const Mat4 at2 = a2_tilde_general(st, basic.sheet.eos, dp);
          const Mat4 cc = c_cal_matrix(st, basic.sheet.eos, dp.d1, dp.d2,
                                       basic.point_du1(side, it, i1, i2),
                                       basic.point_du2(side, it, i1, i2));
          Vec4 vt, v1, v2, vv;
          for (int c = 0; c < 4; ++c) {
            vt(c) = fd::dt(vdot[side], c, it, i1, i2);
            v1(c) = fd::d1(vdot[side], c, it, i1, i2);
            v2(c) = fd::d2(vdot[side], c, it, i1, i2);
            vv(c) = vdot[side].at(c, it, i1, i2);
          }
          const Vec4 r = vt + a1 * v1 + at2 * v2 + cc * vv;
          for (int c = 0; c < 4; ++c) out[side].at(c, it, i1, i2) = r(c);
        }
  return out;
}

// Boundary data pack at one boundary point.
struct BoundaryCoeffs {
  Mat38 mbar;
  Eigen::Matrix<double, 3, 2> bbar;
  Vec3 bsharp;
  Mat38 m_w;  // mbar * blockdiag(T_r, T_l)
  double d1phi;
};

inline BoundaryCoeffs boundary_coeffs(const BasicState& basic, int it, int i1) {
  BoundaryCoeffs bc;
  const auto ur = basic.point_state(0, it, i1, 0);
  const auto ul = basic.point_state(1, it, i1, 0);
  bc.d1phi = basic.dPhi[0].at(1, it, i1, 0);
  bc.mbar = mbar_matrix(bc.d1phi);
  bc.bbar = bbar_matrix(ur.v, ul.v);
  const Vec4 dr = basic.point_du2(0, it, i1, 0) / basic.dPhi[0].at(2, it, i1, 0);
  const Vec4 dl = basic.point_du2(1, it, i1, 0) / basic.dPhi[1].at(2, it, i1, 0);
  bc.bsharp = bsharp_vector(bc.d1phi, dr, dl);
  bc.m_w = bc.mbar;
  bc.m_w.block<3, 4>(0, 0) = bc.mbar.block<3, 4>(0, 0) * transform_T(ur, basic.sheet.eos, bc.d1phi);
  bc.m_w.block<3, 4>(0, 4) = bc.mbar.block<3, 4>(0, 4) * transform_T(ul, basic.sheet.eos, bc.d1phi);
  return bc;
}

// Effective boundary operator b_underbar grad psi + b_sharp psi + M_underbar dotV|0.
inline BoundaryField apply_B_effective(const BoundaryPair& vdot_trace, const BoundaryField& psi,
                                       const BasicState& basic) {
  BoundaryField out(basic.grid, 3, psi.past_vanishing);
  for (int it = 0; it < basic.grid.nt; ++it)
    for (int i1 = 0; i1 < basic.grid.n1; ++i1) {
      const BoundaryCoeffs bc = boundary_coeffs(basic, it, i1);
      Vec8 v;
      for (int c = 0; c < 4; ++c) {
        v(c) = vdot_trace.plus.at(c, it, i1);
        v(4 + c) = vdot_trace.minus.at(c, it, i1);
      }
      const Eigen::Vector2d grad(fd::dt(psi, 0, it, i1), fd::d1(psi, 0, it, i1));
      const Vec3 r = bc.bbar * grad + bc.bsharp * psi.at(0, it, i1) + bc.mbar * v;
      for (int c = 0; c < 3; ++c) out.at(c, it, i1) = r(c);
    }
  return out;
}

// Characteristic transform W = T^{-1}(U, Phi) dotV and its inverse.
inline SidePair transform_W(const SidePair& vdot, const BasicState& basic) {
  SidePair out{Field(basic.grid, 4, vdot.plus.past_vanishing),
               Field(basic.grid, 4, vdot.minus.past_vanishing)};
  for (int side = 0; side < 2; ++side)
    for (int it = 0; it < basic.grid.nt; ++it)
      for (int i1 = 0; i1 < basic.grid.n1; ++i1)
        for (int i2 = 0; i2 < basic.grid.n2; ++i2) {
          const Mat4 ti = transform_T_inv(basic.point_state(side, it, i1, i2), basic.sheet.eos,
                                          basic.dPhi[side].at(1, it, i1, i2));
          Vec4 v;
          for (int c = 0; c < 4; ++c) v(c) = vdot[side].at(c, it, i1, i2);
          const Vec4 w = ti * v;
          for (int c = 0; c < 4; ++c) out[side].at(c, it, i1, i2) = w(c);
        }
  return out;
}

inline SidePair transform_W_inverse(const SidePair& w, const BasicState& basic) {
  SidePair out{Field(basic.grid, 4, w.plus.past_vanishing),
               Field(basic.grid, 4, w.minus.past_vanishing)};
  for (int side = 0; side < 2; ++side)
    for (int it = 0; it < basic.grid.nt; ++it)
      for (int i1 = 0; i1 < basic.grid.n1; ++i1)
        for (int i2 = 0; i2 < basic.grid.n2; ++i2) {
          const Mat4 t = transform_T(basic.point_state(side, it, i1, i2), basic.sheet.eos,
                                     basic.dPhi[side].at(1, it, i1, i2));
          Vec4 v;
          for (int c = 0; c < 4; ++c) v(c) = w[side].at(c, it, i1, i2);
          const Vec4 u = t * v;
          for (int c = 0; c < 4; ++c) out[side].at(c, it, i1, i2) = u(c);
        }
  return out;
}

// Pointwise reformulated-system matrices (A0, A1_bold, C_bold) of one side.
struct WSystemPoint {
  Mat4 a0, a1_bold, c_bold;
};

inline WSystemPoint w_system_point(const BasicState& basic, int side, int it, int i1, int i2) {
  const auto& eos = basic.sheet.eos;
  const PrimitiveState st = basic.point_state(side, it, i1, i2);
  const PhiDerivs dp = basic.point_dphi(side, it, i1, i2);
  const Mat4 t = transform_T(st, eos, dp.d1);
  const Mat4 ti = transform_T_inv(st, eos, dp.d1);
  const Mat4 a0 = a0_weight(st, eos, dp);
  const Mat4 a1 = flux_a1(st, eos);
  const Mat4 at2 = a2_tilde_general(st, eos, dp);

  // T derivatives by differencing T over neighbor grid points.
  auto t_at = [&](int jt, int j1, int j2) {
    return transform_T(basic.point_state(side, jt, j1, j2), eos,
                       basic.dPhi[side].at(1, jt, j1, j2));
  };
  const GridSpec& g = basic.grid;
  Mat4 dt_t, d1_t, d2_t;
  {
    const int nt = g.nt;
    if (it == 0)
      dt_t = (-3.0 * t_at(0, i1, i2) + 4.0 * t_at(1, i1, i2) - t_at(2, i1, i2)) / (2.0 * g.dt());
    else if (it == nt - 1)
      dt_t = (3.0 * t_at(nt - 1, i1, i2) - 4.0 * t_at(nt - 2, i1, i2) + t_at(nt - 3, i1, i2)) /
             (2.0 * g.dt());
    else
      dt_t = (t_at(it + 1, i1, i2) - t_at(it - 1, i1, i2)) / (2.0 * g.dt());
    const int ip = (i1 + 1) % g.n1, im = (i1 + g.n1 - 1) % g.n1;
    d1_t = (t_at(it, ip, i2) - t_at(it, im, i2)) / (2.0 * g.h1());
    const int n2 = g.n2;
    if (i2 == 0)
      d2_t = (-3.0 * t_at(it, i1, 0) + 4.0 * t_at(it, i1, 1) - t_at(it, i1, 2)) / (2.0 * g.h2());
    else if (i2 == n2 - 1)
      d2_t = (3.0 * t_at(it, i1, n2 - 1) - 4.0 * t_at(it, i1, n2 - 2) + t_at(it, i1, n2 - 3)) /
             (2.0 * g.h2());
    else
      d2_t = (t_at(it, i1, i2 + 1) - t_at(it, i1, i2 - 1)) / (2.0 * g.h2());
  }
  const Mat4 cc = c_cal_matrix(st, eos, dp.d1, dp.d2, basic.point_du1(side, it, i1, i2),
                               basic.point_du2(side, it, i1, i2));
  WSystemPoint w;
  w.a0 = a0;
  w.a1_bold = a0 * ti * a1 * t;
  w.c_bold = a0 * ti * (dt_t + a1 * d1_t + at2 * d2_t + cc * t);
  return w;
}

// Frobenius residual of the dual boundary identity
// diag(At2_r, At2_l)|x2=0 = M1^T Mbar + N1^T N, per boundary point.
inline BoundaryField dual_identity_residual(const BasicState& basic) {
  BoundaryField out(basic.grid, 1, false);
  for (int it = 0; it < basic.grid.nt; ++it)
    for (int i1 = 0; i1 < basic.grid.n1; ++i1) {
      const auto ur = basic.point_state(0, it, i1, 0);
      const auto ul = basic.point_state(1, it, i1, 0);
      const auto dpr = basic.point_dphi(0, it, i1, 0);
      const auto dpl = basic.point_dphi(1, it, i1, 0);
      const double d1phi = dpr.d1;
      Mat8 lhs = Mat8::Zero();
      lhs.block<4, 4>(0, 0) = a2_tilde_general(ur, basic.sheet.eos, dpr);
      lhs.block<4, 4>(4, 4) = a2_tilde_general(ul, basic.sheet.eos, dpl);
      const auto cr = dual_coeffs(ur, basic.sheet.eos, d1phi, dpr.d2);
      const auto cl = dual_coeffs(ul, basic.sheet.eos, d1phi, dpl.d2);
      const Mat8 rhs = m1_matrix(cr, cl).transpose() * mbar_matrix(d1phi) +
                       n1_matrix(cr, cl).transpose() * nmat_matrix(d1phi);
      out.at(0, it, i1) = (lhs - rhs).norm();
    }
  return out;
}

// Noncharacteristic trace P(phi) dotV from the W traces:
//   ( <d1phi> (W2 + W3), (c/(gamma p)) <d1phi>^2 (W2 - W3) ) per side.
inline BoundaryPair noncharacteristic_trace(const BoundaryPair& w_trace, const BasicState& basic) {
  BoundaryPair out{BoundaryField(basic.grid, 2, w_trace.plus.past_vanishing),
                   BoundaryField(basic.grid, 2, w_trace.minus.past_vanishing)};
  for (int side = 0; side < 2; ++side)
    for (int it = 0; it < basic.grid.nt; ++it)
      for (int i1 = 0; i1 < basic.grid.n1; ++i1) {
        const auto st = basic.point_state(side, it, i1, 0);
        const double c = sound_speed(basic.sheet.eos, st.p, st.s);
        const double br = angle_bracket(basic.dPhi[side].at(1, it, i1, 0));
        const double w2 = w_trace[side].at(1, it, i1);
        const double w3 = w_trace[side].at(2, it, i1);
        out[side].at(0, it, i1) = br * (w2 + w3);
        out[side].at(1, it, i1) =
            c / (basic.sheet.eos.gamma_ad * st.p) * br * br * (w2 - w3);
      }
  return out;
}

// P(phi) applied directly to a dotV trace: (V1, V3 - d1phi V2).
inline BoundaryPair p_phi_direct(const BoundaryPair& vdot_trace, const BasicState& basic) {
  BoundaryPair out{BoundaryField(basic.grid, 2, vdot_trace.plus.past_vanishing),
                   BoundaryField(basic.grid, 2, vdot_trace.minus.past_vanishing)};
  for (int side = 0; side < 2; ++side)
    for (int it = 0; it < basic.grid.nt; ++it)
      for (int i1 = 0; i1 < basic.grid.n1; ++i1) {
        const double d1phi = basic.dPhi[side].at(1, it, i1, 0);
        out[side].at(0, it, i1) = vdot_trace[side].at(0, it, i1);
        out[side].at(1, it, i1) =
            vdot_trace[side].at(2, it, i1) - d1phi * vdot_trace[side].at(1, it, i1);
      }
  return out;
}

// Linearized vorticity xi = d1 u_dot - (d1Phi d2 u_dot + d2 v_dot) / d2Phi.
inline SidePair vorticity_field(const SidePair& vdot, const BasicState& basic) {
  SidePair out{Field(basic.grid, 1, vdot.plus.past_vanishing),
               Field(basic.grid, 1, vdot.minus.past_vanishing)};
  for (int side = 0; side < 2; ++side)
    for (int it = 0; it < basic.grid.nt; ++it)
      for (int i1 = 0; i1 < basic.grid.n1; ++i1)
        for (int i2 = 0; i2 < basic.grid.n2; ++i2) {
          const double d1phi = basic.dPhi[side].at(1, it, i1, i2);
          const double d2phi = basic.dPhi[side].at(2, it, i1, i2);
          out[side].at(0, it, i1, i2) =
              fd::d1(vdot[side], 2, it, i1, i2) -
              (d1phi * fd::d2(vdot[side], 2, it, i1, i2) + fd::d2(vdot[side], 1, it, i1, i2)) /
                  d2phi;
        }
  return out;
}

// Residual of the vorticity transport equation. Only the constant-coefficient
// background mode is supported: the lower-order couplings vanish there.
inline SidePair vorticity_transport_residual(const SidePair& vdot, const SidePair& f,
                                             const BasicState& basic) {
  if (!basic.is_background)
    throw numerical_abort(
        "vorticity_transport_residual: only supported at the exact background state");
  const SidePair xi = vorticity_field(vdot, basic);
  SidePair out{Field(basic.grid, 1, true), Field(basic.grid, 1, true)};
  for (int side = 0; side < 2; ++side) {
    const double vbar = basic.sheet.state(side == 0 ? kRight : kLeft).v;
    const double d2phi = side == 0 ? 1.0 : -1.0;
    for (int it = 0; it < basic.grid.nt; ++it)
      for (int i1 = 0; i1 < basic.grid.n1; ++i1)
        for (int i2 = 0; i2 < basic.grid.n2; ++i2) {
          const double lhs =
              fd::dt(xi[side], 0, it, i1, i2) + vbar * fd::d1(xi[side], 0, it, i1, i2);
          const double rhs =
              fd::d1(f[side], 2, it, i1, i2) - fd::d2(f[side], 1, it, i1, i2) / d2phi;
          out[side].at(0, it, i1, i2) = lhs - rhs;
        }
  }
  return out;
}

// Residual of the entropy transport row: dt W4 + v d1 W4 + (C dotV)_4 - f4.
inline SidePair entropy_transport_residual(const SidePair& vdot, const SidePair& f,
                                           const BasicState& basic) {
  SidePair out{Field(basic.grid, 1, true), Field(basic.grid, 1, true)};
  for (int side = 0; side < 2; ++side)
    for (int it = 0; it < basic.grid.nt; ++it)
      for (int i1 = 0; i1 < basic.grid.n1; ++i1)
        for (int i2 = 0; i2 < basic.grid.n2; ++i2) {
          const PrimitiveState st = basic.point_state(side, it, i1, i2);
          const PhiDerivs dp = basic.point_dphi(side, it, i1, i2);
          const Mat4 cc = c_cal_matrix(st, basic.sheet.eos, dp.d1, dp.d2,
                                       basic.point_du1(side, it, i1, i2),
                                       basic.point_du2(side, it, i1, i2));
          Vec4 v;
          for (int c = 0; c < 4; ++c) v(c) = vdot[side].at(c, it, i1, i2);
          out[side].at(0, it, i1, i2) = fd::dt(vdot[side], 3, it, i1, i2) +
                                        st.v * fd::d1(vdot[side], 3, it, i1, i2) +
                                        (cc * v)(3) - f[side].at(3, it, i1, i2);
        }
  return out;
}

struct NormalDerivRecovery {
  SidePair recovered;  // 3 components: d2(W1, W2, W3)
  SidePair mismatch;   // recovered minus stencil d2 W
  SidePair direct_w1;  // component-1 recovery evaluated via the direct display
};

// Normal derivatives of (W1, W2, W3) from tangential derivatives, the source,
// and the linearized vorticity; compared against stencil d2 W.
inline NormalDerivRecovery recover_normal_derivs(const SidePair& w, const SidePair& f,
                                                 const SidePair& xi, const BasicState& basic) {
  NormalDerivRecovery out{
      {Field(basic.grid, 3, true), Field(basic.grid, 3, true)},
      {Field(basic.grid, 3, true), Field(basic.grid, 3, true)},
      {Field(basic.grid, 1, true), Field(basic.grid, 1, true)}};
  const auto& eos = basic.sheet.eos;
  // u_dot = (T W)_3 as a field, for the direct component-1 route.
  SidePair udot{Field(basic.grid, 1, true), Field(basic.grid, 1, true)};
  for (int side = 0; side < 2; ++side)
    for (int it = 0; it < basic.grid.nt; ++it)
      for (int i1 = 0; i1 < basic.grid.n1; ++i1)
        for (int i2 = 0; i2 < basic.grid.n2; ++i2) {
          const Mat4 t = transform_T(basic.point_state(side, it, i1, i2), eos,
                                     basic.dPhi[side].at(1, it, i1, i2));
          Vec4 wv;
          for (int c = 0; c < 4; ++c) wv(c) = w[side].at(c, it, i1, i2);
          udot[side].at(0, it, i1, i2) = (t * wv)(2);
        }

  for (int side = 0; side < 2; ++side)
    for (int it = 0; it < basic.grid.nt; ++it)
      for (int i1 = 0; i1 < basic.grid.n1; ++i1)
        for (int i2 = 0; i2 < basic.grid.n2; ++i2) {
          const auto sys = w_system_point(basic, side, it, i1, i2);
          const PrimitiveState st = basic.point_state(side, it, i1, i2);
          const PhiDerivs dp = basic.point_dphi(side, it, i1, i2);
          const Mat4 t = transform_T(st, eos, dp.d1);
          const Mat4 ti = transform_T_inv(st, eos, dp.d1);
          Vec4 wv, wt, w1v, fv;
          for (int c = 0; c < 4; ++c) {
            wv(c) = w[side].at(c, it, i1, i2);
            wt(c) = fd::dt(w[side], c, it, i1, i2);
            w1v(c) = fd::d1(w[side], c, it, i1, i2);
            fv(c) = f[side].at(c, it, i1, i2);
          }
          const Vec4 cap_f = sys.a0 * ti * fv;
          const Vec4 row = cap_f - sys.a0 * wt - sys.a1_bold * w1v - sys.c_bold * wv;

          // Rows 2, 3 directly from the reformulated system.
          out.recovered[side].at(1, it, i1, i2) = row(1);
          out.recovered[side].at(2, it, i1, i2) = row(2);

          // Row 1 via the vorticity display:
          // <d1Phi>^2 d2W1 = d2Phi (d1 u_dot - xi) - d1Phi ((d2T)W)_3 - ((d2T)W)_2.
          Mat4 d2_t;
          {
            const GridSpec& g = basic.grid;
            auto t_at = [&](int j2) {
              return transform_T(basic.point_state(side, it, i1, j2), eos,
                                 basic.dPhi[side].at(1, it, i1, j2));
            };
            const int n2 = g.n2;
            if (i2 == 0)
              d2_t = (-3.0 * t_at(0) + 4.0 * t_at(1) - t_at(2)) / (2.0 * g.h2());
            else if (i2 == n2 - 1)
              d2_t = (3.0 * t_at(n2 - 1) - 4.0 * t_at(n2 - 2) + t_at(n2 - 3)) / (2.0 * g.h2());
            else
              d2_t = (t_at(i2 + 1) - t_at(i2 - 1)) / (2.0 * g.h2());
          }
          const Vec4 d2tw = d2_t * wv;
          const double br2 = 1.0 + dp.d1 * dp.d1;
          const double direct =
              (dp.d2 * (fd::d1(udot[side], 0, it, i1, i2) - xi[side].at(0, it, i1, i2)) -
               dp.d1 * d2tw(2) - d2tw(1)) /
              br2;
          out.direct_w1[side].at(0, it, i1, i2) = direct;

          // Assembled route for component 1: expand d1 u_dot = (T d1W)_3 + ((d1T)W)_3.
          Mat4 d1_t;
          {
            const GridSpec& g = basic.grid;
            auto t_at1 = [&](int j1) {
              return transform_T(basic.point_state(side, it, j1, i2), eos,
                                 basic.dPhi[side].at(1, it, j1, i2));
            };
            const int ip = (i1 + 1) % basic.grid.n1, im = (i1 + basic.grid.n1 - 1) % basic.grid.n1;
            d1_t = (t_at1(ip) - t_at1(im)) / (2.0 * g.h1());
          }
          const double d1udot = (t * w1v)(2) + (d1_t * wv)(2);
          out.recovered[side].at(0, it, i1, i2) =
              (dp.d2 * (d1udot - xi[side].at(0, it, i1, i2)) - dp.d1 * d2tw(2) - d2tw(1)) / br2;

          for (int c = 0; c < 3; ++c)
            out.mismatch[side].at(c, it, i1, i2) =
                out.recovered[side].at(c, it, i1, i2) - fd::d2(w[side], c, it, i1, i2);
        }
  return out;
}

}  // namespace vslab
