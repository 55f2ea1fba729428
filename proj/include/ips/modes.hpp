#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

namespace ips {

// Species mobility at densities (rho_a, rho_b).  Under the i.i.d. species
// measure the same matrix is the per-site covariance of the centered species
// indicators, so it doubles as the static covariance in mode predictions.
Eigen::Matrix2d mobility_matrix(double rho_a, double rho_b);

// Field differences (E_A - E_C, E_B - E_C) driving the two conserved species.
Eigen::Vector2d drive_vector(const std::array<double, 3>& fields);

// Analytic Jacobian of the drift flux X(rho) g at the given densities.
Eigen::Matrix2d current_jacobian(double rho_a, double rho_b,
                                 const std::array<double, 3>& fields);

enum class ModeClass { kpz, diffusive, undetermined };

struct ModeInfo {
  Eigen::Vector2d coeff;   // left eigenvector; first nonzero entry scaled to 1
  Eigen::Vector2d excite;  // matching right eigenvector, unit norm
  double eigenvalue = 0.0;
  // quadratic coupling of the mode's flux onto itself; nonzero marks the mode
  // as nonlinearly transported
  double self_coupling = 0.0;
  ModeClass predicted = ModeClass::undetermined;
};

struct NormalModeSpec {
  ModeInfo primary;    // stronger quadratic self-coupling first
  ModeInfo secondary;
  double splitting = 0.0;  // eigenvalue gap
  bool degenerate = false; // gap below tolerance; class predictions withheld
};

// Diagonalize the current Jacobian into traveling modes.  Throws for densities
// outside the open simplex or a Jacobian with complex spectrum.
NormalModeSpec normal_modes(double rho_a, double rho_b,
                            const std::array<double, 3>& fields);

// Sites per unit macroscopic time the mode travels under the diffusive clock
// with drift scaling 1/n^gamma; the frame that freezes the mode in view.
double frame_velocity(const ModeInfo& mode, int n, double gamma);

struct FirstMomentCheck {
  Eigen::Matrix2d predicted_rate;  // accel * J * C
  Eigen::Matrix2d fitted_rate;     // through-origin slope of measured moments
  double max_abs_residual = 0.0;   // worst entrywise gap to the linear law
};

// Linear-response law for two-point series: the displacement first moment of
// S grows linearly with rate J*C in macroscopic units.  s[p][ti] holds the
// displacement-indexed series for species pair p in row-major order
// (aa, ab, ba, bb); displacements past half the ring count negative, the
// half-way point keeps positive sign.  accel_per_drift converts the
// macroscopic Jacobian to measured units (n^{2-gamma} under the diffusive
// clock).
FirstMomentCheck mct_first_moment(
    const std::vector<double>& times,
    const std::array<std::vector<std::vector<double>>, 4>& s,
    const Eigen::Matrix2d& jacobian, const Eigen::Matrix2d& static_cov,
    double accel_per_drift);

}  // namespace ips
