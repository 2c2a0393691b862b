#include "spfw/constants.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace spfw {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0) || !std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be positive");
}

void require_nonnegative(double v, const char* what) {
  if (!(v >= 0) || !std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be nonnegative");
}

NuResult nu_common(double a, double width_x, double width_y, double mu_X, double mu_Y,
                   double D_X, double D_Y, double L_XY, double L_YX) {
  require_positive(width_x, "width_x");
  require_positive(width_y, "width_y");
  require_positive(mu_X, "mu_X");
  require_positive(mu_Y, "mu_Y");
  require_nonnegative(D_X, "D_X");
  require_nonnegative(D_Y, "D_Y");
  require_nonnegative(L_XY, "L_XY");
  require_nonnegative(L_YX, "L_YX");
  NuResult r;
  r.delta_mu = std::sqrt(std::min(mu_X * width_x * width_x, mu_Y * width_y * width_y));
  const double coupling =
      std::max(D_X * L_XY / std::sqrt(mu_Y), D_Y * L_YX / std::sqrt(mu_X));
  r.nu = a - std::sqrt(2.0) / r.delta_mu * coupling;
  return r;
}

}  // namespace

double curvature_bound(double L, double D_X, double D_Y) {
  require_positive(L, "L");
  require_nonnegative(D_X, "D_X");
  require_nonnegative(D_Y, "D_Y");
  return L * (D_X * D_X + D_Y * D_Y) / 2.0;
}

NuResult nu_interior(double delta_X, double delta_Y, double mu_X, double mu_Y, double D_X,
                     double D_Y, double L_XY, double L_YX) {
  return nu_common(1.0, delta_X, delta_Y, mu_X, mu_Y, D_X, D_Y, L_XY, L_YX);
}

NuResult nu_polytope(double delta_A, double delta_B, double mu_X, double mu_Y, double D_X,
                     double D_Y, double L_XY, double L_YX) {
  return nu_common(0.5, delta_A, delta_B, mu_X, mu_Y, D_X, D_Y, L_XY, L_YX);
}

std::optional<double> rate_rho(double nu, double delta_mu, double C) {
  require_positive(delta_mu, "delta_mu");
  require_positive(C, "C");
  if (!(nu > 0)) return std::nullopt;
  return nu * nu * delta_mu * delta_mu / (2.0 * C);
}

std::optional<double> sublinear_constant(double nu, double w0, double C_L) {
  require_nonnegative(w0, "w0");
  require_positive(C_L, "C_L");
  if (!(nu > 0.5)) return std::nullopt;
  return 2.0 * std::max(w0, 2.0 * C_L / (2.0 * nu - 1.0));
}

BallConstants ball_constants(double L, double beta, double delta) {
  require_positive(L, "L");
  require_positive(beta, "beta");
  require_positive(delta, "delta");
  BallConstants c;
  c.C_delta = 2.0 * L + 8.0 * L * L / (beta * delta);
  c.rho = beta * delta / (16.0 * c.C_delta);
  return c;
}

double p_l_bound(double mu_X, double mu_Y, double grad_sup_x, double grad_sup_y) {
  require_positive(mu_X, "mu_X");
  require_positive(mu_Y, "mu_Y");
  require_nonnegative(grad_sup_x, "grad_sup_x");
  require_nonnegative(grad_sup_y, "grad_sup_y");
  return std::sqrt(2.0) *
         std::max(grad_sup_x / std::sqrt(mu_X), grad_sup_y / std::sqrt(mu_Y));
}

MBounds m_bounds(double mu_X, double mu_Y, double D_X, double D_Y, double L_XY, double L_YX) {
  require_nonnegative(D_X, "D_X");
  require_nonnegative(D_Y, "D_Y");
  require_nonnegative(L_XY, "L_XY");
  require_nonnegative(L_YX, "L_YX");
  MBounds b;
  if (mu_Y > 0) b.M_XY = std::sqrt(2.0 / mu_Y) * L_XY * D_X;
  if (mu_X > 0) b.M_YX = std::sqrt(2.0 / mu_X) * L_YX * D_Y;
  return b;
}

double heuristic_c_tilde(double L, double D_X, double D_Y, double L_XY, double L_YX,
                         double mu_X, double mu_Y) {
  require_positive(L, "L");
  require_positive(mu_X, "mu_X");
  require_positive(mu_Y, "mu_Y");
  return L * D_X * D_X + L * D_Y * D_Y +
         L_XY * L_YX * (D_X * D_X / mu_X + D_Y * D_Y / mu_Y);
}

double gradient_sup_bound(double grad_norm_at_ref, double L_BB, double D_B, double L_B_other,
                          double D_other) {
  require_nonnegative(grad_norm_at_ref, "grad_norm_at_ref");
  return grad_norm_at_ref + L_BB * D_B + L_B_other * D_other;
}

ProblemConstants quad_bilinear_constants(const QuadBilinearProblem& problem, RateCase rate_case) {
  ProblemConstants c;
  c.lip = problem.lipschitz();
  c.mu_X = problem.mu_x();
  c.mu_Y = problem.mu_y();
  const ProductDomain pd = problem.product_domain();
  c.D_X = pd.x.diameter();
  c.D_Y = pd.y.diameter();
  c.C = curvature_bound(c.lip.L, c.D_X, c.D_Y);
  c.C_partial = (c.lip.L_XX * c.D_X * c.D_X + c.lip.L_YY * c.D_Y * c.D_Y) / 2.0;
  c.P_L_bound = p_l_bound(c.mu_X, c.mu_Y, problem.grad_sup_x(), problem.grad_sup_y());
  const MBounds mb = m_bounds(c.mu_X, c.mu_Y, c.D_X, c.D_Y, c.lip.L_XY, c.lip.L_YX);
  c.M_XY_bound = mb.M_XY;
  c.M_YX_bound = mb.M_YX;
  c.C_tilde = heuristic_c_tilde(c.lip.L, c.D_X, c.D_Y, c.lip.L_XY, c.lip.L_YX, c.mu_X, c.mu_Y);

  const PointPair star = *problem.known_saddle();
  if (rate_case == RateCase::Interior) {
    const double dx = border_distance(pd.x, star.x);
    const double dy = border_distance(pd.y, star.y);
    c.delta_X = dx;
    c.delta_Y = dy;
    if (dx > 0 && dy > 0) {
      const NuResult nr =
          nu_interior(dx, dy, c.mu_X, c.mu_Y, c.D_X, c.D_Y, c.lip.L_XY, c.lip.L_YX);
      c.delta_mu = nr.delta_mu;
      c.nu = nr.nu;
      c.rho = rate_rho(nr.nu, nr.delta_mu, c.C);
    }
  } else {
    if (pd.x.pyramidal_width() && pd.y.pyramidal_width()) {
      c.delta_A = *pd.x.pyramidal_width();
      c.delta_B = *pd.y.pyramidal_width();
      const NuResult nr = nu_polytope(*c.delta_A, *c.delta_B, c.mu_X, c.mu_Y, c.D_X, c.D_Y,
                                      c.lip.L_XY, c.lip.L_YX);
      c.delta_mu = nr.delta_mu;
      c.nu = nr.nu;
      c.rho = rate_rho(nr.nu, nr.delta_mu, c.C);
    }
  }
  return c;
}

ProblemConstants matrix_game_constants(const MatrixGameProblem& problem) {
  ProblemConstants c;
  c.lip = problem.lipschitz();
  const ProductDomain pd = problem.product_domain();
  c.D_X = pd.x.diameter();
  c.D_Y = pd.y.diameter();
  if (c.lip.L > 0) {
    c.C = curvature_bound(c.lip.L, c.D_X, c.D_Y);
    c.C_partial = (c.lip.L_XX * c.D_X * c.D_X + c.lip.L_YY * c.D_Y * c.D_Y) / 2.0;
  }
  return c;
}

ProblemConstants ball_game_constants(const BallGameProblem& problem) {
  ProblemConstants c;
  c.lip = problem.lipschitz();
  const ProductDomain pd = problem.product_domain();
  c.D_X = pd.x.diameter();
  c.D_Y = pd.y.diameter();
  c.C = curvature_bound(c.lip.L, c.D_X, c.D_Y);
  c.C_partial = (c.lip.L_XX * c.D_X * c.D_X + c.lip.L_YY * c.D_Y * c.D_Y) / 2.0;
  c.beta = problem.beta();
  c.delta = problem.gradient_floor();
  const BallConstants bc = ball_constants(c.lip.L, *c.beta, *c.delta);
  c.C_delta = bc.C_delta;
  c.rho_ball = bc.rho;
  return c;
}

}  // namespace spfw
