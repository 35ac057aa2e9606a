#pragma once

#include <Eigen/Dense>

#include "vslab/eos.hpp"

namespace vslab {

using Mat4 = Eigen::Matrix4d;
using Vec4 = Eigen::Vector4d;
using Vec3 = Eigen::Vector3d;
using Mat38 = Eigen::Matrix<double, 3, 8>;
using Mat8 = Eigen::Matrix<double, 8, 8>;
using Vec8 = Eigen::Matrix<double, 8, 1>;

struct PhiDerivs {
  double dt = 0.0;
  double d1 = 0.0;
  double d2 = 1.0;
};

inline double angle_bracket(double d1phi) { return std::sqrt(1.0 + d1phi * d1phi); }

inline Mat4 flux_a1(const PrimitiveState& st, const EquationOfState& eos) {
  const double rho = density(eos, st.p, st.s);
  Mat4 a = Mat4::Zero();
  a(0, 0) = st.v; a(0, 1) = eos.gamma_ad * st.p;
  a(1, 0) = 1.0 / rho; a(1, 1) = st.v;
  a(2, 2) = st.v;
  a(3, 3) = st.v;
  return a;
}

inline Mat4 flux_a2(const PrimitiveState& st, const EquationOfState& eos) {
  const double rho = density(eos, st.p, st.s);
  Mat4 a = Mat4::Zero();
  a(0, 0) = st.u; a(0, 2) = eos.gamma_ad * st.p;
  a(1, 1) = st.u;
  a(2, 0) = 1.0 / rho; a(2, 2) = st.u;
  a(3, 3) = st.u;
  return a;
}

// Directional derivatives dA_i(U)X of the flux matrices.
inline Mat4 dflux_a1(const PrimitiveState& st, const EquationOfState& eos, const Vec4& x) {
  const double rho = density(eos, st.p, st.s);
  const double dinv_rho = (1.0 / rho) * (-x(0) / (eos.gamma_ad * st.p) + x(3) / eos.gamma_ad);
  Mat4 a = Mat4::Zero();
  a(0, 0) = x(1); a(0, 1) = eos.gamma_ad * x(0);
  a(1, 0) = dinv_rho; a(1, 1) = x(1);
  a(2, 2) = x(1);
  a(3, 3) = x(1);
  return a;
}

inline Mat4 dflux_a2(const PrimitiveState& st, const EquationOfState& eos, const Vec4& x) {
  const double rho = density(eos, st.p, st.s);
  const double dinv_rho = (1.0 / rho) * (-x(0) / (eos.gamma_ad * st.p) + x(3) / eos.gamma_ad);
  Mat4 a = Mat4::Zero();
  a(0, 0) = x(2); a(0, 2) = eos.gamma_ad * x(0);
  a(1, 1) = x(2);
  a(2, 0) = dinv_rho; a(2, 2) = x(2);
  a(3, 3) = x(2);
  return a;
}

// General interface-fitted normal coefficient (A2 - dtPhi I - d1Phi A1) / d2Phi.
inline Mat4 a2_tilde_general(const PrimitiveState& st, const EquationOfState& eos,
                             const PhiDerivs& dphi) {
  if (dphi.d2 == 0.0) throw numerical_abort("a2_tilde: vanishing normal derivative of Phi");
  Mat4 a = flux_a2(st, eos) - dphi.dt * Mat4::Identity() - dphi.d1 * flux_a1(st, eos);
  return a / dphi.d2;
}

// Sparse form valid when the eikonal relation dtPhi + v d1Phi - u = 0 holds.
inline Mat4 a2_tilde_sparse(const PrimitiveState& st, const EquationOfState& eos,
                            const PhiDerivs& dphi) {
  if (dphi.d2 == 0.0) throw numerical_abort("a2_tilde: vanishing normal derivative of Phi");
  const double rho = density(eos, st.p, st.s);
  const double gp = eos.gamma_ad * st.p;
  Mat4 a = Mat4::Zero();
  a(0, 1) = -gp * dphi.d1; a(0, 2) = gp;
  a(1, 0) = -dphi.d1 / rho;
  a(2, 0) = 1.0 / rho;
  return a / dphi.d2;
}

// Rankine-Hugoniot boundary operator: rows are
//   (v+ - v-) d1phi - (u+ - u-),  dtphi + v+ d1phi - u+,  p+ - p-.
inline Vec3 boundary_operator(const PrimitiveState& up, const PrimitiveState& um, double dtphi,
                              double d1phi) {
  Vec3 b;
  b(0) = (up.v - um.v) * d1phi - (up.u - um.u);
  b(1) = dtphi + up.v * d1phi - up.u;
  b(2) = up.p - um.p;
  return b;
}

// Characteristic transform T(U, Phi) with columns spanning ker and the
// acoustic eigenvectors of the normal coefficient matrix.
inline Mat4 transform_T(const PrimitiveState& st, const EquationOfState& eos, double d1phi) {
  const double c = sound_speed(eos, st.p, st.s);
  const double gp = eos.gamma_ad * st.p;
  const double br = angle_bracket(d1phi);
  Mat4 t = Mat4::Zero();
  t(0, 1) = br; t(0, 2) = br;
  t(1, 0) = 1.0; t(1, 1) = -c * d1phi / gp; t(1, 2) = c * d1phi / gp;
  t(2, 0) = d1phi; t(2, 1) = c / gp; t(2, 2) = -c / gp;
  t(3, 3) = 1.0;
  return t;
}

inline Mat4 transform_T_inv(const PrimitiveState& st, const EquationOfState& eos, double d1phi) {
  const double c = sound_speed(eos, st.p, st.s);
  const double gp = eos.gamma_ad * st.p;
  const double br2 = 1.0 + d1phi * d1phi;
  const double br = std::sqrt(br2);
  // From p = <>(W2+W3), v = W1 - (c d1phi/gp)(W2-W3), u = d1phi W1 + (c/gp)(W2-W3):
  //   W1 = (v + d1phi u) / <>^2, W2-W3 = (gp/c)(u - d1phi v)/<>^2, W2+W3 = p/<>.
  Mat4 ti = Mat4::Zero();
  ti(0, 1) = 1.0 / br2; ti(0, 2) = d1phi / br2;
  ti(1, 0) = 0.5 / br; ti(1, 1) = -0.5 * gp * d1phi / (c * br2); ti(1, 2) = 0.5 * gp / (c * br2);
  ti(2, 0) = 0.5 / br; ti(2, 1) = 0.5 * gp * d1phi / (c * br2); ti(2, 2) = -0.5 * gp / (c * br2);
  ti(3, 3) = 1.0;
  return ti;
}

// Nonzero eigenvalue of the normal coefficient matrix: lambda2 = c<d1Phi>/d2Phi
// (lambda3 = -lambda2).
inline double lambda2_eigenvalue(const PrimitiveState& st, const EquationOfState& eos,
                                 const PhiDerivs& dphi) {
  return sound_speed(eos, st.p, st.s) * angle_bracket(dphi.d1) / dphi.d2;
}

inline Mat4 a0_weight(const PrimitiveState& st, const EquationOfState& eos, const PhiDerivs& dphi) {
  const double l2 = lambda2_eigenvalue(st, eos, dphi);
  Mat4 a = Mat4::Identity();
  a(1, 1) = 1.0 / l2;
  a(2, 2) = -1.0 / l2;
  return a;
}

// Boundary coefficient M_underbar(t, x1) acting on the stacked traces (V+, V-).
inline Mat38 mbar_matrix(double d1phi) {
  Mat38 m = Mat38::Zero();
  m(0, 1) = d1phi; m(0, 2) = -1.0; m(0, 5) = -d1phi; m(0, 6) = 1.0;
  m(1, 1) = d1phi; m(1, 2) = -1.0;
  m(2, 0) = 1.0; m(2, 4) = -1.0;
  return m;
}

// b_underbar(t, x1) multiplying (dt psi, d1 psi).
inline Eigen::Matrix<double, 3, 2> bbar_matrix(double vr0, double vl0) {
  Eigen::Matrix<double, 3, 2> b = Eigen::Matrix<double, 3, 2>::Zero();
  b(0, 1) = vr0 - vl0;
  b(1, 0) = 1.0; b(1, 1) = vr0;
  return b;
}

// b_sharp = M_underbar * stack(d2U_r / d2Phi_r, d2U_l / d2Phi_l) at x2 = 0.
inline Vec3 bsharp_vector(double d1phi, const Vec4& d2u_r_over, const Vec4& d2u_l_over) {
  Vec8 stack;
  stack << d2u_r_over, d2u_l_over;
  return mbar_matrix(d1phi) * stack;
}

// Dual boundary matrices M1, N1, N with the ell coefficients of each side.
struct DualSideCoeffs {
  double ell1, ell2, ell3;
};

inline DualSideCoeffs dual_coeffs(const PrimitiveState& st, const EquationOfState& eos,
                                  double d1phi, double d2phi) {
  const double rho = density(eos, st.p, st.s);
  return {-eos.gamma_ad * st.p / d2phi, -d1phi / (2.0 * rho * d2phi), 1.0 / (2.0 * rho * d2phi)};
}

inline Mat38 m1_matrix(const DualSideCoeffs& r, const DualSideCoeffs& l) {
  Mat38 m = Mat38::Zero();
  m(0, 4) = -l.ell1;
  m(1, 0) = r.ell1; m(1, 4) = l.ell1;
  m(2, 1) = r.ell2; m(2, 2) = r.ell3; m(2, 5) = -l.ell2; m(2, 6) = -l.ell3;
  return m;
}

inline Mat38 n1_matrix(const DualSideCoeffs& r, const DualSideCoeffs& l) {
  Mat38 m = Mat38::Zero();
  m(2, 1) = r.ell2; m(2, 2) = r.ell3; m(2, 5) = l.ell2; m(2, 6) = l.ell3;
  return m;
}

inline Mat38 nmat_matrix(double d1phi) {
  Mat38 m = Mat38::Zero();
  m(0, 1) = d1phi; m(0, 2) = -1.0; m(0, 5) = d1phi; m(0, 6) = -1.0;
  m(1, 1) = d1phi; m(1, 2) = -1.0;
  m(2, 0) = 1.0; m(2, 4) = 1.0;
  return m;
}

inline Mat4 friedrichs_symmetrizer(const PrimitiveState& st, const EquationOfState& eos) {
  const double rho = density(eos, st.p, st.s);
  const double gp = eos.gamma_ad * st.p;
  Mat4 s = Mat4::Zero();
  s(0, 0) = 1.0 / rho;
  s(1, 1) = gp;
  s(2, 2) = gp;
  s(3, 3) = gp;
  return s;
}

// Zero-order coefficient C(U, Phi): column j is
//   dA1(e_j) d1U + (dA2(e_j) - d1Phi dA1(e_j)) d2U / d2Phi.
inline Mat4 c_cal_matrix(const PrimitiveState& st, const EquationOfState& eos, double d1phi,
                         double d2phi, const Vec4& d1u, const Vec4& d2u) {
  Mat4 c;
  const Vec4 d2u_over = d2u / d2phi;
  for (int j = 0; j < 4; ++j) {
    Vec4 e = Vec4::Zero();
    e(j) = 1.0;
    const Mat4 da1 = dflux_a1(st, eos, e);
    const Mat4 da2 = dflux_a2(st, eos, e);
    c.col(j) = da1 * d1u + (da2 - d1phi * da1) * d2u_over;
  }
  return c;
}

}  // namespace vslab
