#include "chtn/constants.hpp"

#include <cmath>
#include <string>

#include "chtn/errors.hpp"

namespace chtn {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(name) + " must be strictly positive and finite");
  }
}

}  // namespace

PhysicalConstants::PhysicalConstants(double c, double hbar, double ell_P, double R_AdS)
    : c_(c), hbar_(hbar), ell_P_(ell_P), R_AdS_(R_AdS) {
  require_positive(c, "c");
  require_positive(hbar, "hbar");
  require_positive(ell_P, "ell_P");
  require_positive(R_AdS, "R_AdS");
}

double energy_per_pixel(const PhysicalConstants& pc) {
  return pc.c() * pc.hbar() / (8.0 * kPi * pc.ell_P());
}

double margolus_levitin_time(double epsilon_E, const PhysicalConstants& pc) {
  if (!(epsilon_E > 0.0)) {
    throw DomainError("margolus_levitin_time: epsilon_E must be positive");
  }
  return pc.h() / (4.0 * 2.0 * epsilon_E);
}

double diffusion_coefficient(const PhysicalConstants& pc) {
  const double t_ML = margolus_levitin_time(energy_per_pixel(pc), pc);
  return 2.0 * pc.t_P() / t_ML;
}

double chtn_action(double area_TN, const PhysicalConstants& pc) {
  if (area_TN < 0.0) {
    throw DomainError("chtn_action: area must be non-negative");
  }
  return -pc.hbar() * area_TN;
}

DerivedScales derive_scales(const PhysicalConstants& pc) {
  DerivedScales s{};
  s.epsilon_E = energy_per_pixel(pc);
  s.tension = s.epsilon_E / (pc.R_AdS() * pc.R_AdS());
  s.t_ML = margolus_levitin_time(s.epsilon_E, pc);
  s.kappa = 2.0 * pc.t_P() / s.t_ML;
  return s;
}

}  // namespace chtn
