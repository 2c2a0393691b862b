#ifndef SPFW_OBJECTIVES_HPP
#define SPFW_OBJECTIVES_HPP

#include <cstdint>
#include <optional>

#include "spfw/domains.hpp"
#include "spfw/linalg.hpp"

namespace spfw {

// Partial Lipschitz constants of the gradient field (Euclidean norms).
// L bounds the full gradient and dominates the four partials.
struct LipschitzInfo {
  double L = 0.0;
  double L_XX = 0.0, L_XY = 0.0, L_YX = 0.0, L_YY = 0.0;
};

// Contract for a smooth convex-concave objective: value, partial gradients,
// and optional best responses / known saddle consumed by the certificates.
// Implementations are immutable; every evaluation is pure.
class SaddleObjective {
 public:
  virtual ~SaddleObjective() = default;

  virtual double value(const PointPair& z) const = 0;
  virtual Vec grad_x(const PointPair& z) const = 0;
  virtual Vec grad_y(const PointPair& z) const = 0;

  virtual bool has_best_responses() const { return false; }
  virtual Vec best_response_y(const Vec& x) const;  // argmax_y L(x, y)
  virtual Vec best_response_x(const Vec& y) const;  // argmin_x L(x, y)

  virtual std::optional<PointPair> known_saddle() const { return std::nullopt; }
  virtual std::optional<double> known_value() const;  // L(x*, y*) when the saddle is known

  virtual LipschitzInfo lipschitz() const = 0;
  virtual double mu_x() const { return 0.0; }  // uniform strong convexity in x
  virtual double mu_y() const { return 0.0; }  // uniform strong concavity in y

  // Upper bounds on sup |grad_x| and sup |grad_y| over the domain.
  virtual double grad_sup_x() const = 0;
  virtual double grad_sup_y() const = 0;
};

// Gradient field of the equivalent variational inequality,
// F(z) = (grad_x L, -grad_y L); this is the direction handed to the LMO.
PointPair vip_field(const SaddleObjective& obj, const PointPair& z);

// Primal-dual suboptimality h = L(x, by(x)) - L(bx(y), y). Needs both best
// responses; nonnegative, zero exactly at a saddle point.
double suboptimality_h(const SaddleObjective& obj, const PointPair& z);

// Merit value w = L(x, y*) - L(x*, y). Needs the saddle; nonnegative and
// never larger than h.
double merit_w(const SaddleObjective& obj, const PointPair& z);

// mu/2 |x-x*|^2 + (x-x*)' M (y-y*) - mu/2 |y-y*|^2 over [0,1]^d x [0,1]^d.
class QuadBilinearProblem : public SaddleObjective {
 public:
  QuadBilinearProblem(double mu, Matrix m, Vec x_star, Vec y_star);

  double value(const PointPair& z) const override;
  Vec grad_x(const PointPair& z) const override;
  Vec grad_y(const PointPair& z) const override;

  bool has_best_responses() const override { return true; }
  Vec best_response_y(const Vec& x) const override;  // coordinatewise clamp
  Vec best_response_x(const Vec& y) const override;

  std::optional<PointPair> known_saddle() const override;
  std::optional<double> known_value() const override { return 0.0; }

  LipschitzInfo lipschitz() const override;
  double mu_x() const override { return mu_; }
  double mu_y() const override { return mu_; }
  double grad_sup_x() const override;
  double grad_sup_y() const override;

  std::size_t dim() const { return x_star_.size(); }
  double mu() const { return mu_; }
  const Matrix& matrix() const { return m_; }
  double matrix_norm() const { return m_norm_; }
  ProductDomain product_domain() const;

 private:
  double mu_;
  Matrix m_;
  Vec x_star_, y_star_;
  double m_norm_;
};

// Bilinear game x' M y over simplex(p) x simplex(q).
class MatrixGameProblem : public SaddleObjective {
 public:
  explicit MatrixGameProblem(Matrix payoff);

  double value(const PointPair& z) const override;
  Vec grad_x(const PointPair& z) const override { return m_.apply(z.y); }
  Vec grad_y(const PointPair& z) const override { return m_.apply_transposed(z.x); }

  bool has_best_responses() const override { return true; }
  Vec best_response_y(const Vec& x) const override;  // exact, via the simplex LMO
  Vec best_response_x(const Vec& y) const override;

  std::optional<PointPair> known_saddle() const override { return saddle_; }
  std::optional<double> known_value() const override { return saddle_value_; }

  LipschitzInfo lipschitz() const override;
  double grad_sup_x() const override { return grad_sup_; }
  double grad_sup_y() const override { return grad_sup_; }

  // Equilibria are not computed here; tests inject them when known.
  MatrixGameProblem& with_known_saddle(PointPair saddle, double value);

  std::size_t rows() const { return m_.rows(); }
  std::size_t cols() const { return m_.cols(); }
  const Matrix& payoff() const { return m_; }
  double matrix_norm() const { return m_norm_; }
  ProductDomain product_domain() const;

 private:
  Matrix m_;
  double m_norm_;
  double grad_sup_;
  std::optional<PointPair> saddle_;
  std::optional<double> saddle_value_;
};

// a'x + x' M y - b'y over two l2 balls, with a certified uniform lower bound
// on both gradient block norms. Construction fails unless that bound is
// strictly positive.
class BallGameProblem : public SaddleObjective {
 public:
  BallGameProblem(Vec a, Vec b, Matrix m, double radius_x, double radius_y);

  double value(const PointPair& z) const override;
  Vec grad_x(const PointPair& z) const override;
  Vec grad_y(const PointPair& z) const override;

  bool has_best_responses() const override { return true; }
  Vec best_response_y(const Vec& x) const override;  // linear in y: on-sphere argmax
  Vec best_response_x(const Vec& y) const override;

  LipschitzInfo lipschitz() const override;
  double grad_sup_x() const override;
  double grad_sup_y() const override;

  // Certified delta with min(|grad_x|, |grad_y|) >= delta everywhere.
  double gradient_floor() const { return delta_; }
  double beta() const;  // common strong-convexity modulus of the two balls

  std::size_t dim() const { return a_.size(); }
  const Matrix& matrix() const { return m_; }
  double matrix_norm() const { return m_norm_; }
  ProductDomain product_domain() const;

 private:
  Vec a_, b_;
  Matrix m_;
  double radius_x_, radius_y_;
  double m_norm_;
  double delta_;
};

enum class SaddleMode { Interior, Vertex };

// Seeded generators for the experiment families. The SplitMix64 stream is
// consumed in a documented order (matrix entries row-major, then x*, then
// y*), so identical seeds give identical problems in any implementation.
QuadBilinearProblem make_random_quad_bilinear(std::uint64_t seed, std::size_t dim, double mu,
                                              double matrix_scale, SaddleMode mode);
MatrixGameProblem make_random_matrix_game(std::uint64_t seed, std::size_t rows,
                                          std::size_t cols, double scale = 1.0);
BallGameProblem make_random_ball_game(std::uint64_t seed, std::size_t dim,
                                      double radius = 1.0, double matrix_scale = 0.1);

}  // namespace spfw

#endif  // SPFW_OBJECTIVES_HPP
