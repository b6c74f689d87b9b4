#pragma once

// Physical constants of the classicalized tensor network and the scalar
// quantities derived from them. Natural units (c = hbar = ell_P = R_AdS = 1)
// are the default; every quantity below carries its unit in a comment only.

namespace chtn {

inline constexpr double kPi = 3.14159265358979323846;

class PhysicalConstants {
 public:
  // Natural units.
  PhysicalConstants() = default;

  // Throws DomainError unless every argument is strictly positive and finite.
  PhysicalConstants(double c, double hbar, double ell_P, double R_AdS);

  double c() const { return c_; }          // length / time
  double hbar() const { return hbar_; }    // action
  double ell_P() const { return ell_P_; }  // length (3D Planck length)
  double R_AdS() const { return R_AdS_; }  // length (AdS3 curvature radius)

  double h() const { return 2.0 * kPi * hbar_; }  // action
  double t_P() const { return ell_P_ / c_; }      // time

 private:
  double c_ = 1.0;
  double hbar_ = 1.0;
  double ell_P_ = 1.0;
  double R_AdS_ = 1.0;
};

struct DerivedScales {
  double epsilon_E;  // energy per pixel
  double tension;    // epsilon_E / R_AdS^2, energy / area
  double t_ML;       // Margolus-Levitin time of a bipartite-spin gate
  double kappa;      // dimensionless master-equation coefficient 2 t_P / t_ML
};

// c * hbar / (8 pi ell_P).
double energy_per_pixel(const PhysicalConstants& pc);

// h / (4 * 2 * epsilon_E). Throws DomainError if epsilon_E <= 0.
double margolus_levitin_time(double epsilon_E, const PhysicalConstants& pc);

// 2 t_P / t_ML, evaluated through energy_per_pixel and margolus_levitin_time.
// Equals 1/pi^2 for every valid set of constants.
double diffusion_coefficient(const PhysicalConstants& pc);

// -hbar * area. Throws DomainError for a negative area.
double chtn_action(double area_TN, const PhysicalConstants& pc);

DerivedScales derive_scales(const PhysicalConstants& pc);

}  // namespace chtn
