#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "vslab/linear_ops.hpp"
#include "vslab/solver.hpp"

using namespace vslab;

namespace {
std::mt19937_64 rng(4242);

GridSpec small_grid() {
  GridSpec g{17, 24, 10, 0.25, 0.75, 2.0, 2.0};
  g.validate();
  return g;
}

SidePair random_pair(const GridSpec& g, int ncomp) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SidePair p{Field(g, ncomp, false), Field(g, ncomp, false)};
  for (int side = 0; side < 2; ++side)
    for (auto& v : p[side].data) v = u(rng);
  return p;
}
}  // namespace

TEST_CASE("admissible random basic states satisfy the linearization constraints") {
  const auto g = small_grid();
  for (int trial = 0; trial < 3; ++trial) {
    const auto b = BasicState::random_perturbation(g, demo_sheet(2.0), 0.02, rng);
    const auto rep = b.validate();
    CHECK(rep.eikonal_residual < 1e-13);
    CHECK(rep.trace_gap < 1e-13);
    CHECK(rep.rh_residual < 1e-12);
    CHECK(rep.kappa_min > 0.5);
    CHECK(rep.w1inf < 0.1);
  }
}

TEST_CASE("good unknown: identity cases and exact inverse") {
  const auto g = small_grid();
  const auto bg = BasicState::background(g, demo_sheet(2.0));
  const auto v = random_pair(g, 4);
  const auto psi = random_pair(g, 1);

  // Psi == 0 -> dotV = V.
  SidePair zero{Field(g, 1, false), Field(g, 1, false)};
  auto vd0 = good_unknown(v, zero, bg);
  CHECK((vd0.plus - v.plus).max_abs() == 0.0);

  // Exact background: d2U = 0, so dotV = V for any Psi.
  auto vdbg = good_unknown(v, psi, bg);
  CHECK((vdbg.plus - v.plus).max_abs() < 1e-14);
  CHECK((vdbg.minus - v.minus).max_abs() < 1e-14);

  // Round trip on a perturbed state.
  const auto b = BasicState::random_perturbation(g, demo_sheet(2.0), 0.02, rng);
  const auto fwd = good_unknown(v, psi, b);
  const auto back = good_unknown_inverse(fwd, psi, b);
  CHECK((back.plus - v.plus).max_abs() < 1e-13);
  CHECK((back.minus - v.minus).max_abs() < 1e-13);
}

TEST_CASE("diagonalization identity A0 T^-1 At2 T = diag(0,1,1,0)") {
  const auto g = small_grid();
  Mat4 want = Mat4::Zero();
  want(1, 1) = 1.0;
  want(2, 2) = 1.0;
  for (int trial = 0; trial < 3; ++trial) {
    const auto b = BasicState::random_perturbation(g, demo_sheet(2.0), 0.03, rng);
    double worst = 0.0;
    for (int side = 0; side < 2; ++side)
      for (int it = 0; it < g.nt; it += 3)
        for (int i1 = 0; i1 < g.n1; i1 += 2)
          for (int i2 = 0; i2 < g.n2; ++i2) {
            const auto st = b.point_state(side, it, i1, i2);
            const auto dp = b.point_dphi(side, it, i1, i2);
            const Mat4 t = transform_T(st, b.sheet.eos, dp.d1);
            const Mat4 ti = transform_T_inv(st, b.sheet.eos, dp.d1);
            const Mat4 a0 = a0_weight(st, b.sheet.eos, dp);
            const Mat4 at2 = a2_tilde_general(st, b.sheet.eos, dp);
            worst = std::max(worst, (a0 * ti * at2 * t - want).cwiseAbs().maxCoeff());
          }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("background T matrix matches the closed form") {
  const auto g = small_grid();
  const auto sheet = demo_sheet(2.0);
  const auto bg = BasicState::background(g, sheet);
  const auto st = bg.point_state(0, 0, 0, 0);
  const double cbar = sheet.c_plus();
  const double gp = sheet.eos.gamma_ad * sheet.p_bar;
  const Mat4 t = transform_T(st, sheet.eos, 0.0);
  Mat4 want;
  want << 0, 1, 1, 0, 1, 0, 0, 0, 0, cbar / gp, -cbar / gp, 0, 0, 0, 0, 1;
  CHECK((t - want).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("dual identity residual and rank of N1") {
  const auto g = small_grid();
  const auto bg = BasicState::background(g, demo_sheet(2.0));
  CHECK(dual_identity_residual(bg).max_abs() < 1e-14);
  for (int trial = 0; trial < 4; ++trial) {
    const auto b = BasicState::random_perturbation(g, demo_sheet(2.3), 0.05, rng);
    CHECK(dual_identity_residual(b).max_abs() < 1e-12);
    const auto ur = b.point_state(0, 3, 5, 0);
    const auto ul = b.point_state(1, 3, 5, 0);
    const auto cr = dual_coeffs(ur, b.sheet.eos, b.dPhi[0].at(1, 3, 5, 0), b.dPhi[0].at(2, 3, 5, 0));
    const auto cl = dual_coeffs(ul, b.sheet.eos, b.dPhi[0].at(1, 3, 5, 0), b.dPhi[1].at(2, 3, 5, 0));
    Eigen::JacobiSVD<Mat38> svd(n1_matrix(cr, cl));
    CHECK(svd.singularValues()(0) > 1e-12);
    CHECK(svd.singularValues()(1) < 1e-14);
  }
}

TEST_CASE("apply_L_effective: background constants and the C matrix") {
  const auto g = small_grid();
  const auto bg = BasicState::background(g, demo_sheet(2.0));
  SidePair konst{Field(g, 4, false), Field(g, 4, false)};
  for (int side = 0; side < 2; ++side)
    for (int c = 0; c < 4; ++c)
      for (int it = 0; it < g.nt; ++it)
        for (int i1 = 0; i1 < g.n1; ++i1)
          for (int i2 = 0; i2 < g.n2; ++i2) konst[side].at(c, it, i1, i2) = 0.3 * (c + 1);
  const auto out = apply_L_effective(konst, bg);
  CHECK(out.plus.max_abs() < 1e-13);
  CHECK(out.minus.max_abs() < 1e-13);

  // C vanishes entrywise at the background.
  const Mat4 cc = c_cal_matrix(bg.point_state(0, 2, 3, 4), bg.sheet.eos, 0.0, 1.0,
                               bg.point_du1(0, 2, 3, 4), bg.point_du2(0, 2, 3, 4));
  CHECK(cc.cwiseAbs().maxCoeff() == 0.0);

  // Manufactured smooth field at the background: matches dt + A1 d1 + At2 d2 to O(h^2).
  SidePair smooth{Field(g, 4, false), Field(g, 4, false)};
  auto fun = [&](int c, double t, double x1, double x2) {
    return std::sin(0.5 * pi * x1 + 0.3 * c) * std::cos(t) * std::exp(-0.7 * x2);
  };
  for (int side = 0; side < 2; ++side)
    for (int c = 0; c < 4; ++c)
      for (int it = 0; it < g.nt; ++it)
        for (int i1 = 0; i1 < g.n1; ++i1)
          for (int i2 = 0; i2 < g.n2; ++i2)
            smooth[side].at(c, it, i1, i2) = fun(c, g.t(it), g.x1(i1), g.x2(i2));
  const auto ls = apply_L_effective(smooth, bg);
  double worst = 0.0;
  for (int side = 0; side < 2; ++side) {
    const PrimitiveState st = bg.sheet.state(side == 0 ? kRight : kLeft);
    const Mat4 a1 = flux_a1(st, bg.sheet.eos);
    const Mat4 a2t = a2_tilde_general(st, bg.sheet.eos, {0.0, 0.0, side == 0 ? 1.0 : -1.0});
    for (int it = 2; it < g.nt - 2; ++it)
      for (int i1 = 0; i1 < g.n1; ++i1)
        for (int i2 = 2; i2 < g.n2 - 2; ++i2) {
          const double t = g.t(it), x1 = g.x1(i1), x2 = g.x2(i2);
          Vec4 want;
          for (int c = 0; c < 4; ++c) {
            want(c) = -std::sin(0.5 * pi * x1 + 0.3 * c) * std::sin(t) * std::exp(-0.7 * x2);
            for (int d = 0; d < 4; ++d) {
              const double fd1 =
                  0.5 * pi * std::cos(0.5 * pi * x1 + 0.3 * d) * std::cos(t) * std::exp(-0.7 * x2);
              const double fd2 = -0.7 * fun(d, t, x1, x2);
              want(c) += a1(c, d) * fd1 + a2t(c, d) * fd2;
            }
          }
          for (int c = 0; c < 4; ++c)
            worst = std::max(worst, std::abs(ls[side].at(c, it, i1, i2) - want(c)));
        }
  }
  const double h2 = g.dt() * g.dt() + g.h1() * g.h1() + g.h2() * g.h2();
  CHECK(worst < 10.0 * h2);
}

TEST_CASE("apply_B_effective: background coefficients and P(phi) kernel insensitivity") {
  const auto g = small_grid();
  const auto sheet = demo_sheet(2.0);
  const auto bg = BasicState::background(g, sheet);
  const auto bc = boundary_coeffs(bg, 4, 7);
  CHECK(bc.bbar(0, 1) == Catch::Approx(2.0 * sheet.v_bar));
  CHECK(bc.bbar(1, 0) == 1.0);
  CHECK(bc.bbar(1, 1) == Catch::Approx(sheet.v_bar));
  CHECK(bc.bsharp.norm() == 0.0);

  BoundaryPair zt{BoundaryField(g, 4, false), BoundaryField(g, 4, false)};
  BoundaryField zpsi(g, 1, false);
  CHECK(apply_B_effective(zt, zpsi, bg).max_abs() == 0.0);

  // Perturbing (V2, V3) jointly by (w, d1phi * w) leaves the output unchanged.
  const auto b = BasicState::random_perturbation(g, sheet, 0.04, rng);
  BoundaryPair tr{BoundaryField(g, 4, false), BoundaryField(g, 4, false)};
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int side = 0; side < 2; ++side)
    for (auto& v : tr[side].data) v = u(rng);
  BoundaryField psi(g, 1, false);
  for (auto& v : psi.data) v = u(rng);
  const auto out1 = apply_B_effective(tr, psi, b);
  BoundaryPair tr2 = tr;
  for (int side = 0; side < 2; ++side)
    for (int it = 0; it < g.nt; ++it)
      for (int i1 = 0; i1 < g.n1; ++i1) {
        const double w = u(rng);
        const double d1phi = b.dPhi[side].at(1, it, i1, 0);
        tr2[side].at(1, it, i1) += w;
        tr2[side].at(2, it, i1) += d1phi * w;
      }
  const auto out2 = apply_B_effective(tr2, psi, b);
  CHECK((out1 - out2).max_abs() < 1e-12);
}

TEST_CASE("W transform round trip and noncharacteristic trace paths") {
  const auto g = small_grid();
  const auto b = BasicState::random_perturbation(g, demo_sheet(2.0), 0.04, rng);
  const auto vdot = random_pair(g, 4);
  const auto w = transform_W(vdot, b);
  const auto back = transform_W_inverse(w, b);
  CHECK((back.plus - vdot.plus).max_abs() < 1e-12);
  CHECK((back.minus - vdot.minus).max_abs() < 1e-12);

  const BoundaryPair w_traces{trace(w.plus), trace(w.minus)};
  const BoundaryPair vd_traces{trace(vdot.plus), trace(vdot.minus)};
  const auto via_w = noncharacteristic_trace(w_traces, b);
  const auto direct = p_phi_direct(vd_traces, b);
  CHECK((via_w.plus - direct.plus).max_abs() < 1e-12);
  CHECK((via_w.minus - direct.minus).max_abs() < 1e-12);

  // Background spot values: W2 = 1, W3 = 0 -> (1, c/(gamma p)).
  const auto bg = BasicState::background(g, demo_sheet(2.0));
  BoundaryPair one{BoundaryField(g, 4, false), BoundaryField(g, 4, false)};
  for (int it = 0; it < g.nt; ++it)
    for (int i1 = 0; i1 < g.n1; ++i1) one.plus.at(1, it, i1) = 1.0;
  const auto pv = noncharacteristic_trace(one, bg);
  CHECK(pv.plus.at(0, 3, 3) == Catch::Approx(1.0));
  CHECK(pv.plus.at(1, 3, 3) ==
        Catch::Approx(bg.sheet.c_plus() / (bg.sheet.eos.gamma_ad * bg.sheet.p_bar)));
  // W2 == W3 kills the second component.
  BoundaryPair same{BoundaryField(g, 4, false), BoundaryField(g, 4, false)};
  for (int it = 0; it < g.nt; ++it)
    for (int i1 = 0; i1 < g.n1; ++i1) {
      same.plus.at(1, it, i1) = 0.7;
      same.plus.at(2, it, i1) = 0.7;
    }
  CHECK(noncharacteristic_trace(same, bg).plus.at(1, 5, 5) == 0.0);
}

TEST_CASE("vorticity: pointwise examples") {
  const auto g = small_grid();
  const auto bg = BasicState::background(g, demo_sheet(2.0));
  SidePair vdot{Field(g, 4, false), Field(g, 4, false)};
  for (int side = 0; side < 2; ++side)
    for (int it = 0; it < g.nt; ++it)
      for (int i1 = 0; i1 < g.n1; ++i1)
        for (int i2 = 0; i2 < g.n2; ++i2) vdot[side].at(2, it, i1, i2) = g.x1(i1);
  const auto xi = vorticity_field(vdot, bg);
  // interior column: periodic wrap spoils the two edge columns only
  CHECK(xi.plus.at(0, 5, g.n1 / 2, 4) == Catch::Approx(1.0).margin(1e-12));
  CHECK(xi.minus.at(0, 5, g.n1 / 2, 4) == Catch::Approx(1.0).margin(1e-12));

  SidePair pressure{Field(g, 4, false), Field(g, 4, false)};
  for (int side = 0; side < 2; ++side)
    for (int it = 0; it < g.nt; ++it)
      for (int i1 = 0; i1 < g.n1; ++i1)
        for (int i2 = 0; i2 < g.n2; ++i2)
          pressure[side].at(0, it, i1, i2) = std::sin(g.x1(i1)) * g.x2(i2);
  CHECK(vorticity_field(pressure, bg).plus.max_abs() == 0.0);

  const auto b = BasicState::random_perturbation(g, demo_sheet(2.0), 0.02, rng);
  CHECK_THROWS_AS(vorticity_transport_residual(pressure, pressure, b), numerical_abort);
}

TEST_CASE("entropy transport: exact traveling wave at the background") {
  GridSpec g{33, 48, 8, 0.25, 0.75, 2.0, 1.0};
  g.validate();
  const auto bg = BasicState::background(g, demo_sheet(2.0));
  SidePair vdot{Field(g, 4, false), Field(g, 4, false)};
  SidePair f{Field(g, 4, false), Field(g, 4, false)};
  for (int side = 0; side < 2; ++side) {
    const double vbar = bg.sheet.state(side == 0 ? kRight : kLeft).v;
    for (int it = 0; it < g.nt; ++it)
      for (int i1 = 0; i1 < g.n1; ++i1)
        for (int i2 = 0; i2 < g.n2; ++i2)
          vdot[side].at(3, it, i1, i2) = std::sin(pi / 2.0 * (g.x1(i1) - vbar * g.t(it)));
  }
  const auto res = entropy_transport_residual(vdot, f, bg);
  const double h2 = g.dt() * g.dt() + g.h1() * g.h1();
  CHECK(res.plus.max_abs() < 10.0 * h2);
  CHECK(res.minus.max_abs() < 10.0 * h2);
  CHECK(res.plus.max_abs() > 1e-8);

  SidePair z4{Field(g, 4, false), Field(g, 4, false)};
  CHECK(entropy_transport_residual(z4, z4, bg).plus.max_abs() == 0.0);
}

TEST_CASE("normal derivative recovery: dual paths agree at the background") {
  const auto g = small_grid();
  const auto bg = BasicState::background(g, demo_sheet(2.0));
  const auto w = random_pair(g, 4);
  const auto f = random_pair(g, 4);
  const auto xi = SidePair{Field(g, 1, false), Field(g, 1, false)};
  const auto rec = recover_normal_derivs(w, f, xi, bg);
  double worst = 0.0;
  for (int side = 0; side < 2; ++side)
    for (int it = 0; it < g.nt; ++it)
      for (int i1 = 0; i1 < g.n1; ++i1)
        for (int i2 = 0; i2 < g.n2; ++i2)
          worst = std::max(worst, std::abs(rec.recovered[side].at(0, it, i1, i2) -
                                           rec.direct_w1[side].at(0, it, i1, i2)));
  CHECK(worst < 1e-12);
}

TEST_CASE("normal derivative recovery: x2-independent W gives zero derivatives") {
  const auto g = small_grid();
  const auto bg = BasicState::background(g, demo_sheet(2.0));
  SidePair w{Field(g, 4, false), Field(g, 4, false)};
  for (int side = 0; side < 2; ++side)
    for (int c = 0; c < 4; ++c)
      for (int it = 0; it < g.nt; ++it)
        for (int i1 = 0; i1 < g.n1; ++i1)
          for (int i2 = 0; i2 < g.n2; ++i2) w[side].at(c, it, i1, i2) = 0.25 * (c + 1);
  SidePair f{Field(g, 4, false), Field(g, 4, false)};
  SidePair xi{Field(g, 1, false), Field(g, 1, false)};
  const auto rec = recover_normal_derivs(w, f, xi, bg);
  CHECK(rec.recovered.plus.max_abs() < 1e-13);
  CHECK(rec.mismatch.plus.max_abs() < 1e-13);
}
