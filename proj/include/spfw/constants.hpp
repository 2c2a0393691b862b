#ifndef SPFW_CONSTANTS_HPP
#define SPFW_CONSTANTS_HPP

#include <optional>

#include "spfw/objectives.hpp"

namespace spfw {

// Which branch of the rate calculus applies: a saddle strictly inside the
// domain (border distances), or polytope blocks (pyramidal widths).
enum class RateCase { Interior, Polytope };

// Everything the step rules and the proven bounds consume, computed from
// problem primitives through the documented closed-form bounds. Optional
// fields are absent whenever their preconditions fail (e.g. nu needs a
// usable width, rho needs nu > 0).
struct ProblemConstants {
  LipschitzInfo lip;
  double mu_X = 0.0, mu_Y = 0.0;
  double D_X = 0.0, D_Y = 0.0;

  std::optional<double> delta_X, delta_Y;  // border distances (interior case)
  std::optional<double> delta_A, delta_B;  // pyramidal widths (polytope case)
  std::optional<double> delta_mu;
  std::optional<double> nu;

  double C = 0.0;          // curvature bound L (D_X^2 + D_Y^2) / 2
  double C_partial = 0.0;  // tighter (L_XX D_X^2 + L_YY D_Y^2) / 2, emitted for reference

  std::optional<double> rho;        // nu^2 delta_mu^2 / (2 C), needs nu > 0
  std::optional<double> P_L_bound;  // merit-relation constant, needs mu > 0
  std::optional<double> M_XY_bound, M_YX_bound;
  std::optional<double> C_tilde;  // heuristic step constant, needs mu > 0

  std::optional<double> beta, delta, C_delta, rho_ball;  // strongly convex sets
};

// C = L (D_X^2 + D_Y^2) / 2. Zero diameters are allowed (singleton blocks).
double curvature_bound(double L, double D_X, double D_Y);

struct NuResult {
  double delta_mu = 0.0;
  double nu = 0.0;  // may be <= 0; reported, never an error
};

// Interior case: delta_mu = sqrt(min(mu_X dX^2, mu_Y dY^2)),
// nu = 1 - sqrt(2)/delta_mu * max(D_X L_XY / sqrt(mu_Y), D_Y L_YX / sqrt(mu_X)).
NuResult nu_interior(double delta_X, double delta_Y, double mu_X, double mu_Y, double D_X,
                     double D_Y, double L_XY, double L_YX);

// Polytope case: same shape with pyramidal widths and leading constant 1/2.
NuResult nu_polytope(double delta_A, double delta_B, double mu_X, double mu_Y, double D_X,
                     double D_Y, double L_XY, double L_YX);

// rho = nu^2 delta_mu^2 / (2 C); absent unless nu > 0.
std::optional<double> rate_rho(double nu, double delta_mu, double C);

// Sublinear constant 2 max(w0, 2 C_L / (2 nu - 1)); absent unless nu > 1/2.
std::optional<double> sublinear_constant(double nu, double w0, double C_L);

struct BallConstants {
  double C_delta = 0.0;  // 2L + 8L^2 / (beta delta)
  double rho = 0.0;      // beta delta / (16 C_delta)
};
BallConstants ball_constants(double L, double beta, double delta);

// sqrt(2) max(grad_sup_x / sqrt(mu_X), grad_sup_y / sqrt(mu_Y)).
double p_l_bound(double mu_X, double mu_Y, double grad_sup_x, double grad_sup_y);

struct MBounds {
  std::optional<double> M_XY, M_YX;  // absent when the paired mu is zero
};
// M_XY <= sqrt(2 / mu_Y) L_XY D_X and M_YX <= sqrt(2 / mu_X) L_YX D_Y.
MBounds m_bounds(double mu_X, double mu_Y, double D_X, double D_Y, double L_XY, double L_YX);

// C~ = L D_X^2 + L D_Y^2 + L_XY L_YX (D_X^2 / mu_X + D_Y^2 / mu_Y).
double heuristic_c_tilde(double L, double D_X, double D_Y, double L_XY, double L_YX,
                         double mu_X, double mu_Y);

// Reference-point bound on a gradient-block supremum:
// |grad_b(ref)| + L_BB D_B + L_Bother D_other.
double gradient_sup_bound(double grad_norm_at_ref, double L_BB, double D_B, double L_B_other,
                          double D_other);

// Full bundles per problem family.
ProblemConstants quad_bilinear_constants(const QuadBilinearProblem& problem, RateCase rate_case);
ProblemConstants matrix_game_constants(const MatrixGameProblem& problem);
ProblemConstants ball_game_constants(const BallGameProblem& problem);

}  // namespace spfw

#endif  // SPFW_CONSTANTS_HPP
