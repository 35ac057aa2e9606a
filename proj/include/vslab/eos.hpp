#pragma once

#include <cmath>

#include "vslab/util.hpp"

namespace vslab {

// Polytropic gas: rho = A p^{1/gamma} e^{-s/gamma}.
struct EquationOfState {
  double scale_A = 1.0;
  double gamma_ad = 1.4;

  void validate() const {
    if (scale_A <= 0.0) throw config_error("equation of state: scale_A must be > 0");
    if (gamma_ad <= 1.0) throw config_error("equation of state: gamma_ad must exceed 1");
  }
};

inline double density(const EquationOfState& eos, double p, double s) {
  if (p <= 0.0) throw std::domain_error("density: pressure must be positive");
  return eos.scale_A * std::pow(p, 1.0 / eos.gamma_ad) * std::exp(-s / eos.gamma_ad);
}

// c = sqrt(gamma p / rho); identical to sqrt(gamma e^{s/gamma} / (A p^{1/gamma - 1})).
inline double sound_speed(const EquationOfState& eos, double p, double s) {
  if (p <= 0.0) throw std::domain_error("sound_speed: pressure must be positive");
  return std::sqrt(eos.gamma_ad * p / density(eos, p, s));
}

// Entropy that produces sound speed c at pressure p.
inline double entropy_for_sound_speed(const EquationOfState& eos, double p, double c) {
  if (p <= 0.0 || c <= 0.0) throw std::domain_error("entropy_for_sound_speed: p, c must be positive");
  return eos.gamma_ad *
         std::log(c * c * eos.scale_A * std::pow(p, 1.0 / eos.gamma_ad - 1.0) / eos.gamma_ad);
}

// Pressure with rho(p, s) such that c(p, s) = c for given s.
inline double pressure_for_sound_speed(const EquationOfState& eos, double c, double s) {
  // c^2 = gamma p^{1 - 1/gamma} e^{s/gamma} / A
  const double expo = 1.0 - 1.0 / eos.gamma_ad;
  return std::pow(c * c * eos.scale_A * std::exp(-s / eos.gamma_ad) / eos.gamma_ad, 1.0 / expo);
}

// State vector ordering is fixed as U = (p, v, u, s).
struct PrimitiveState {
  double p = 1.0;
  double v = 0.0;
  double u = 0.0;
  double s = 0.0;
};

enum Side { kRight = 0, kLeft = 1 };

// Piecewise-constant vortex sheet (p, +/-v, 0, s_pm).
struct BackgroundSheet {
  double p_bar = 1.0;
  double v_bar = 1.0;
  double s_plus = 0.0;
  double s_minus = 0.0;
  EquationOfState eos;

  void validate() const {
    eos.validate();
    if (p_bar <= 0.0) throw config_error("background: p_bar must be positive");
    if (v_bar <= 0.0) throw config_error("background: v_bar must be positive");
  }

  double c_plus() const { return sound_speed(eos, p_bar, s_plus); }
  double c_minus() const { return sound_speed(eos, p_bar, s_minus); }
  double rho_plus() const { return density(eos, p_bar, s_plus); }
  double rho_minus() const { return density(eos, p_bar, s_minus); }

  PrimitiveState state(Side side) const {
    return {p_bar, side == kRight ? v_bar : -v_bar, 0.0, side == kRight ? s_plus : s_minus};
  }

  // Sheet with prescribed sound speeds at pressure p_bar.
  static BackgroundSheet from_sound_speeds(double c_plus, double c_minus, double v_bar,
                                           const EquationOfState& eos, double p_bar) {
    BackgroundSheet b;
    b.eos = eos;
    b.p_bar = p_bar;
    b.v_bar = v_bar;
    b.s_plus = entropy_for_sound_speed(eos, p_bar, c_plus);
    b.s_minus = entropy_for_sound_speed(eos, p_bar, c_minus);
    b.validate();
    return b;
  }
};

// Default laboratory sheet: A = 1, gamma = 2, p_bar chosen so that c = 1 at s = 0.
inline BackgroundSheet demo_sheet(double v_bar, double c_plus = 1.0, double c_minus = 1.0) {
  EquationOfState eos{1.0, 2.0};
  const double p_bar = pressure_for_sound_speed(eos, 1.0, 0.0);  // = 1/4
  return BackgroundSheet::from_sound_speeds(c_plus, c_minus, v_bar, eos, p_bar);
}

}  // namespace vslab
