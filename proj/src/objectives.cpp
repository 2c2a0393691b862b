#include "spfw/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spfw/errors.hpp"

namespace spfw {

namespace {

// Largest distance from p to a cube vertex, coordinatewise exact.
double cube_far_distance(const Vec& p) {
  double s = 0.0;
  for (double c : p) {
    const double d = std::max(c, 1.0 - c);
    s += d * d;
  }
  return std::sqrt(s);
}

Vec clamp01(Vec v) {
  for (double& c : v) c = std::min(1.0, std::max(0.0, c));
  return v;
}

}  // namespace

Vec SaddleObjective::best_response_y(const Vec&) const {
  throw UnsupportedError("objective does not provide best responses");
}

Vec SaddleObjective::best_response_x(const Vec&) const {
  throw UnsupportedError("objective does not provide best responses");
}

std::optional<double> SaddleObjective::known_value() const { return std::nullopt; }

PointPair vip_field(const SaddleObjective& obj, const PointPair& z) {
  PointPair r{obj.grad_x(z), obj.grad_y(z)};
  for (double& g : r.y) g = -g;
  return r;
}

double suboptimality_h(const SaddleObjective& obj, const PointPair& z) {
  if (!obj.has_best_responses())
    throw UnsupportedError("suboptimality_h: best responses unavailable");
  const Vec by = obj.best_response_y(z.x);
  const Vec bx = obj.best_response_x(z.y);
  return obj.value({z.x, by}) - obj.value({bx, z.y});
}

double merit_w(const SaddleObjective& obj, const PointPair& z) {
  const auto saddle = obj.known_saddle();
  if (!saddle) throw UnsupportedError("merit_w: saddle point unknown");
  return obj.value({z.x, saddle->y}) - obj.value({saddle->x, z.y});
}

// --- QuadBilinearProblem ---------------------------------------------------

QuadBilinearProblem::QuadBilinearProblem(double mu, Matrix m, Vec x_star, Vec y_star)
    : mu_(mu), m_(std::move(m)), x_star_(std::move(x_star)), y_star_(std::move(y_star)) {
  if (!(mu_ > 0)) throw std::invalid_argument("QuadBilinearProblem: mu must be positive");
  const std::size_t d = x_star_.size();
  if (y_star_.size() != d || m_.rows() != d || m_.cols() != d)
    throw std::invalid_argument("QuadBilinearProblem: dimension mismatch");
  if (!all_finite(x_star_) || !all_finite(y_star_))
    throw std::invalid_argument("QuadBilinearProblem: non-finite saddle");
  m_norm_ = spectral_norm_estimate(m_);
}

double QuadBilinearProblem::value(const PointPair& z) const {
  const std::size_t d = dim();
  double quad = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double dx = z.x[i] - x_star_[i];
    const double dy = z.y[i] - y_star_[i];
    quad += dx * dx - dy * dy;
  }
  double bilin = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double dx = z.x[i] - x_star_[i];
    if (dx == 0.0) continue;
    double row = 0.0;
    for (std::size_t j = 0; j < d; ++j) row += m_(i, j) * (z.y[j] - y_star_[j]);
    bilin += dx * row;
  }
  return 0.5 * mu_ * quad + bilin;
}

Vec QuadBilinearProblem::grad_x(const PointPair& z) const {
  Vec g = m_.apply(sub(z.y, y_star_));
  for (std::size_t i = 0; i < dim(); ++i) g[i] += mu_ * (z.x[i] - x_star_[i]);
  return g;
}

Vec QuadBilinearProblem::grad_y(const PointPair& z) const {
  Vec g = m_.apply_transposed(sub(z.x, x_star_));
  for (std::size_t i = 0; i < dim(); ++i) g[i] -= mu_ * (z.y[i] - y_star_[i]);
  return g;
}

Vec QuadBilinearProblem::best_response_y(const Vec& x) const {
  // Separable concave quadratic in y: unconstrained optimum clamped to the
  // cube is the exact constrained maximizer.
  Vec y = m_.apply_transposed(sub(x, x_star_));
  for (std::size_t i = 0; i < dim(); ++i) y[i] = y_star_[i] + y[i] / mu_;
  return clamp01(std::move(y));
}

Vec QuadBilinearProblem::best_response_x(const Vec& y) const {
  Vec x = m_.apply(sub(y, y_star_));
  for (std::size_t i = 0; i < dim(); ++i) x[i] = x_star_[i] - x[i] / mu_;
  return clamp01(std::move(x));
}

std::optional<PointPair> QuadBilinearProblem::known_saddle() const {
  return PointPair{x_star_, y_star_};
}

LipschitzInfo QuadBilinearProblem::lipschitz() const {
  return LipschitzInfo{mu_ + m_norm_, mu_, m_norm_, m_norm_, mu_};
}

double QuadBilinearProblem::grad_sup_x() const {
  return mu_ * cube_far_distance(x_star_) + m_norm_ * cube_far_distance(y_star_);
}

double QuadBilinearProblem::grad_sup_y() const {
  return m_norm_ * cube_far_distance(x_star_) + mu_ * cube_far_distance(y_star_);
}

ProductDomain QuadBilinearProblem::product_domain() const {
  return ProductDomain{DomainDescriptor::unit_cube(dim()), DomainDescriptor::unit_cube(dim())};
}

// --- MatrixGameProblem -----------------------------------------------------

MatrixGameProblem::MatrixGameProblem(Matrix payoff) : m_(std::move(payoff)) {
  if (m_.rows() == 0 || m_.cols() == 0)
    throw std::invalid_argument("MatrixGameProblem: empty payoff matrix");
  if (!all_finite(m_.data())) throw std::invalid_argument("MatrixGameProblem: non-finite payoff");
  m_norm_ = spectral_norm_estimate(m_);
  grad_sup_ = 0.0;
  // Gradients are M y and M' x with simplex arguments, so row/column norms
  // bound both suprema.
  for (std::size_t i = 0; i < m_.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m_.cols(); ++j) s += m_(i, j) * m_(i, j);
    grad_sup_ = std::max(grad_sup_, std::sqrt(s));
  }
  for (std::size_t j = 0; j < m_.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m_.rows(); ++i) s += m_(i, j) * m_(i, j);
    grad_sup_ = std::max(grad_sup_, std::sqrt(s));
  }
}

double MatrixGameProblem::value(const PointPair& z) const {
  double v = 0.0;
  for (std::size_t i = 0; i < m_.rows(); ++i) {
    const double xi = z.x[i];
    if (xi == 0.0) continue;
    double row = 0.0;
    for (std::size_t j = 0; j < m_.cols(); ++j) row += m_(i, j) * z.y[j];
    v += xi * row;
  }
  return v;
}

Vec MatrixGameProblem::best_response_y(const Vec& x) const {
  Vec score = m_.apply_transposed(x);
  for (double& s : score) s = -s;  // argmax via the minimizing LMO
  return linmin(DomainDescriptor::simplex(m_.cols()), score);
}

Vec MatrixGameProblem::best_response_x(const Vec& y) const {
  return linmin(DomainDescriptor::simplex(m_.rows()), m_.apply(y));
}

LipschitzInfo MatrixGameProblem::lipschitz() const {
  return LipschitzInfo{m_norm_, 0.0, m_norm_, m_norm_, 0.0};
}

MatrixGameProblem& MatrixGameProblem::with_known_saddle(PointPair saddle, double value) {
  saddle_ = std::move(saddle);
  saddle_value_ = value;
  return *this;
}

ProductDomain MatrixGameProblem::product_domain() const {
  return ProductDomain{DomainDescriptor::simplex(m_.rows()), DomainDescriptor::simplex(m_.cols())};
}

// --- BallGameProblem -------------------------------------------------------

BallGameProblem::BallGameProblem(Vec a, Vec b, Matrix m, double radius_x, double radius_y)
    : a_(std::move(a)), b_(std::move(b)), m_(std::move(m)), radius_x_(radius_x),
      radius_y_(radius_y) {
  const std::size_t d = a_.size();
  if (b_.size() != d || m_.rows() != d || m_.cols() != d)
    throw std::invalid_argument("BallGameProblem: dimension mismatch");
  if (!(radius_x_ > 0) || !(radius_y_ > 0))
    throw std::invalid_argument("BallGameProblem: radii must be positive");
  if (!all_finite(a_) || !all_finite(b_) || !all_finite(m_.data()))
    throw std::invalid_argument("BallGameProblem: non-finite data");
  m_norm_ = spectral_norm_estimate(m_);
  // grad_x = a + M y and |y| <= R_y on the centered ball, so
  // |grad_x| >= |a| - |M| R_y; same shape for the y block.
  delta_ = std::min(norm2(a_) - m_norm_ * radius_y_, norm2(b_) - m_norm_ * radius_x_);
  if (!(delta_ > 0))
    throw std::invalid_argument(
        "BallGameProblem: gradient lower bound is not positive; shrink M or grow a, b");
}

double BallGameProblem::value(const PointPair& z) const {
  double v = 0.0;
  for (std::size_t i = 0; i < a_.size(); ++i) v += a_[i] * z.x[i] - b_[i] * z.y[i];
  for (std::size_t i = 0; i < a_.size(); ++i) {
    const double xi = z.x[i];
    if (xi == 0.0) continue;
    double row = 0.0;
    for (std::size_t j = 0; j < a_.size(); ++j) row += m_(i, j) * z.y[j];
    v += xi * row;
  }
  return v;
}

Vec BallGameProblem::grad_x(const PointPair& z) const {
  Vec g = m_.apply(z.y);
  for (std::size_t i = 0; i < a_.size(); ++i) g[i] += a_[i];
  return g;
}

Vec BallGameProblem::grad_y(const PointPair& z) const {
  Vec g = m_.apply_transposed(z.x);
  for (std::size_t i = 0; i < b_.size(); ++i) g[i] -= b_[i];
  return g;
}

Vec BallGameProblem::best_response_y(const Vec& x) const {
  Vec g = m_.apply_transposed(x);
  for (std::size_t i = 0; i < b_.size(); ++i) g[i] -= b_[i];
  const double nrm = norm2(g);
  Vec y(b_.size(), 0.0);
  if (nrm == 0.0) {
    y[0] = radius_y_;
    return y;
  }
  for (std::size_t i = 0; i < b_.size(); ++i) y[i] = radius_y_ * g[i] / nrm;
  return y;
}

Vec BallGameProblem::best_response_x(const Vec& y) const {
  Vec g = m_.apply(y);
  for (std::size_t i = 0; i < a_.size(); ++i) g[i] += a_[i];
  const double nrm = norm2(g);
  Vec x(a_.size(), 0.0);
  if (nrm == 0.0) {
    x[0] = radius_x_;
    return x;
  }
  for (std::size_t i = 0; i < a_.size(); ++i) x[i] = -radius_x_ * g[i] / nrm;
  return x;
}

LipschitzInfo BallGameProblem::lipschitz() const {
  return LipschitzInfo{m_norm_, 0.0, m_norm_, m_norm_, 0.0};
}

double BallGameProblem::grad_sup_x() const { return norm2(a_) + m_norm_ * radius_y_; }
double BallGameProblem::grad_sup_y() const { return norm2(b_) + m_norm_ * radius_x_; }

double BallGameProblem::beta() const { return 1.0 / std::max(radius_x_, radius_y_); }

ProductDomain BallGameProblem::product_domain() const {
  const std::size_t d = a_.size();
  return ProductDomain{DomainDescriptor::l2_ball(d, radius_x_, Vec(d, 0.0)),
                       DomainDescriptor::l2_ball(d, radius_y_, Vec(d, 0.0))};
}

// --- generators ------------------------------------------------------------

QuadBilinearProblem make_random_quad_bilinear(std::uint64_t seed, std::size_t dim, double mu,
                                              double matrix_scale, SaddleMode mode) {
  SplitMix64 rng(seed);
  Matrix m(dim, dim, 0.0);
  if (matrix_scale > 0.0) {
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) m(i, j) = rng.next_uniform(-matrix_scale, matrix_scale);
  }
  for (int attempt = 0; attempt < 64; ++attempt) {
    Vec xs(dim), ys(dim);
    if (mode == SaddleMode::Interior) {
      for (auto& c : xs) c = rng.next_uniform(0.25, 0.75);
      for (auto& c : ys) c = rng.next_uniform(0.25, 0.75);
    } else {
      for (auto& c : xs) c = rng.next_double() < 0.5 ? 0.0 : 1.0;
      for (auto& c : ys) c = rng.next_double() < 0.5 ? 0.0 : 1.0;
    }
    QuadBilinearProblem problem(mu, m, xs, ys);
    // Certify (x*, y*) as the constrained saddle by first-order optimality
    // of the VIP field over cube vertices (exhaustive for d <= 8, sampled
    // otherwise). Reject and redraw if it ever fails.
    const PointPair star{xs, ys};
    const PointPair f = vip_field(problem, star);
    bool ok = true;
    const auto cube = DomainDescriptor::unit_cube(dim);
    if (dim <= 8) {
      for (const auto& vx : enumerate_vertices(cube)) {
        if (dot(f.x, sub(vx, xs)) < -1e-9) { ok = false; break; }
      }
      if (ok) {
        for (const auto& vy : enumerate_vertices(cube)) {
          if (dot(f.y, sub(vy, ys)) < -1e-9) { ok = false; break; }
        }
      }
    } else {
      SplitMix64 vr(seed ^ 0xF1257C41ULL);
      for (int s = 0; ok && s < 1000; ++s) {
        Vec vx(dim), vy(dim);
        for (auto& c : vx) c = vr.next_double() < 0.5 ? 0.0 : 1.0;
        for (auto& c : vy) c = vr.next_double() < 0.5 ? 0.0 : 1.0;
        if (dot(f.x, sub(vx, xs)) < -1e-9 || dot(f.y, sub(vy, ys)) < -1e-9) ok = false;
      }
    }
    if (ok) return problem;
  }
  throw std::runtime_error("make_random_quad_bilinear: could not certify a saddle");
}

MatrixGameProblem make_random_matrix_game(std::uint64_t seed, std::size_t rows,
                                          std::size_t cols, double scale) {
  SplitMix64 rng(seed);
  Matrix m(rows, cols, 0.0);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.next_uniform(-scale, scale);
  return MatrixGameProblem(std::move(m));
}

BallGameProblem make_random_ball_game(std::uint64_t seed, std::size_t dim, double radius,
                                      double matrix_scale) {
  SplitMix64 rng(seed);
  Matrix m(dim, dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) m(i, j) = rng.next_uniform(-matrix_scale, matrix_scale);
  Vec a(dim), b(dim);
  for (auto& c : a) c = rng.next_uniform(-1.0, 1.0);
  for (auto& c : b) c = rng.next_uniform(-1.0, 1.0);
  const double na = norm2(a), nb = norm2(b);
  if (na == 0.0 || nb == 0.0) throw std::runtime_error("make_random_ball_game: degenerate draw");
  for (auto& c : a) c /= na;  // unit linear terms keep the gradient floor simple
  for (auto& c : b) c /= nb;
  return BallGameProblem(std::move(a), std::move(b), std::move(m), radius, radius);
}

}  // namespace spfw
