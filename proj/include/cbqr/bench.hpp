#pragma once

#include <optional>
#include <string_view>

#include "cbqr/integrate.hpp"
#include "cbqr/model.hpp"

namespace cbqr::bench {

/// Two-floor shear structure with two semi-active variable-stiffness
/// devices under sinusoidal ground acceleration.
struct SavsConstants {
  static constexpr double kMass1 = 100e3;               // kg
  static constexpr double kMass2 = 200e3;               // kg
  static constexpr double kStoryStiffness = 100e6;      // N/m, both stories
  static constexpr double kDampingMassFactor = 0.001;   // C_d = a M + b K
  static constexpr double kDampingStiffnessFactor = 0.0001;
  static constexpr double kDeviceStiffness = 25e6;      // N/m
  static constexpr double kDashpotRate = 5e3;           // kg/s, unlocked
  static constexpr double kExcitationAmplitude = 3.0;   // m/s^2
  static constexpr double kExcitationOmega = 16.55;     // rad/s
  static constexpr double kHorizon = 5.0;               // s
};

/// Unlocked device force relaxation rate (1/s): device stiffness over
/// dashpot rate. Its magnitude bounds the usable RK4 step size; see
/// kSavsDefaultSteps.
inline constexpr double kSavsRelaxationRate = 5000.0;

/// Default SAVS grid. The unlocked-device mode has eigenvalue about
/// -kSavsRelaxationRate, and the backward coefficient equations double it;
/// RK4 needs |2 h lambda| <= 2.78, i.e. h <= 2.785e-4 s over the 5 s
/// horizon. 20000 steps (h = 2.5e-4 s) leaves margin on both passes and
/// still resolves the 16.55 rad/s excitation finely.
inline constexpr int kSavsDefaultSteps = 20000;
inline constexpr int kScalarDefaultSteps = 1000;
inline constexpr int kLinearOracleDefaultSteps = 800;

/// State x = (z1, z2, z1', z2', w1, w2): floor displacements, velocities,
/// device forces. Finite control set {(0,1), (1,0), (0,0)} = both devices
/// unlocked, second unlocked, both locked.
BilinearProblem build_savs_problem(int grid_steps = kSavsDefaultSteps);

/// Textbook scalar regulator: x' = -x + u, Q = R = 1, H = 0, x(0) = 1,
/// horizon 1 s, unconstrained. Its Riccati equation has a closed form.
BilinearProblem build_scalar_analytic(int grid_steps = kScalarDefaultSteps);

/// Deterministic pseudo-random 4-state, 2-input linear problem
/// (N_i = 0, R = I, unconstrained) with sinusoidal drift. Exercises the
/// Riccati oracle on a non-trivial affine term.
BilinearProblem build_linear_oracle(int grid_steps = kLinearOracleDefaultSteps);

/// Builtin problems by CLI name: "savs", "scalar", "lqr-oracle".
std::optional<BilinearProblem> build_builtin(std::string_view name,
                                             std::optional<int> grid_steps);

/// Backward RK4 integration of the standard matrix Riccati equation
///   P' = -P A - A^T P + P B R^{-1} B^T P - Q,          P(tf) = H
///   p' = -(A - B R^{-1} B^T P)^T p - P g,              p(tf) = 0
/// on the problem grid. Only valid for purely linear-quadratic problems:
/// every N_i constant zero, R positive definite, unconstrained set; throws
/// UnsupportedProblem otherwise.
ValueCoefficients riccati_oracle(const BilinearProblem& problem);

}  // namespace cbqr::bench
