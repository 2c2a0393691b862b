#ifndef SPFW_LINALG_HPP
#define SPFW_LINALG_HPP

#include <cmath>
#include <cstddef>
#include <vector>

namespace spfw {

using Vec = std::vector<double>;

// Joint iterate z = (x, y) on a product domain.
struct PointPair {
  Vec x, y;
};

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double sq_dist(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

inline double dist(const Vec& a, const Vec& b) { return std::sqrt(sq_dist(a, b)); }

inline double linf_dist(const Vec& a, const Vec& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double l1_norm(const Vec& a) {
  double s = 0.0;
  for (double v : a) s += std::abs(v);
  return s;
}

inline bool all_finite(const Vec& a) {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

inline Vec sub(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

// r += c * (a - b), sizes must match.
inline void add_scaled_diff(Vec& r, double c, const Vec& a, const Vec& b) {
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += c * (a[i] - b[i]);
}

// Dense row-major matrix; just enough for the problem generators and the
// spectral-norm estimate, no external linear-algebra dependency.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const Vec& data() const { return data_; }

  Vec apply(const Vec& v) const;             // M v
  Vec apply_transposed(const Vec& v) const;  // M' v
  double max_abs() const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  Vec data_;
};

// Largest singular value, estimated by power iteration on M'M and inflated
// by a 1e-9 relative margin so the result can stand in for an upper bound
// inside the rate formulas.
double spectral_norm_estimate(const Matrix& m);

}  // namespace spfw

#endif  // SPFW_LINALG_HPP
