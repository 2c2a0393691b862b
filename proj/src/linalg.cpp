#include "spfw/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace spfw {

Vec Matrix::apply(const Vec& v) const {
  if (v.size() != cols_) throw std::invalid_argument("Matrix::apply: size mismatch");
  Vec r(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    const double* row = data_.data() + i * cols_;
    for (std::size_t j = 0; j < cols_; ++j) s += row[j] * v[j];
    r[i] = s;
  }
  return r;
}

Vec Matrix::apply_transposed(const Vec& v) const {
  if (v.size() != rows_) throw std::invalid_argument("Matrix::apply_transposed: size mismatch");
  Vec r(cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    const double* row = data_.data() + i * cols_;
    const double vi = v[i];
    for (std::size_t j = 0; j < cols_; ++j) r[j] += row[j] * vi;
  }
  return r;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double spectral_norm_estimate(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0 || m.max_abs() == 0.0) return 0.0;
  // Deterministic non-degenerate start: a ramp is never orthogonal to the
  // top singular subspace for the generated matrices we care about.
  Vec v(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) v[j] = 1.0 + static_cast<double>(j) / (2.0 * static_cast<double>(m.cols()));
  double sigma = 0.0;
  for (int it = 0; it < 500; ++it) {
    Vec u = m.apply(v);
    const double nu = norm2(u);
    if (nu == 0.0) break;
    Vec w = m.apply_transposed(u);
    const double nw = norm2(w);
    if (nw == 0.0) break;
    for (double& c : w) c /= nw;
    v = std::move(w);
    const double next = nu == 0.0 ? 0.0 : nw / nu;
    if (it > 2 && std::abs(next - sigma) <= 1e-14 * std::max(1.0, next)) {
      sigma = next;
      break;
    }
    sigma = next;
  }
  return sigma * (1.0 + 1e-9);
}

}  // namespace spfw
