#include "spfw/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "spfw/errors.hpp"

namespace spfw::oracles {

namespace {

std::size_t simplex_vertex_index(const Vec& v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] == 1.0) return i;
  throw std::logic_error("not a simplex vertex");
}

// All grid points of a domain at the given resolution, canonical order.
std::vector<Vec> grid_points(const DomainDescriptor& d, double resolution,
                             std::size_t cap) {
  if (!(resolution > 0) || resolution > 1)
    throw std::invalid_argument("grid resolution must lie in (0, 1]");
  const auto n_steps = static_cast<std::size_t>(std::lround(1.0 / resolution));
  switch (d.kind()) {
    case DomainKind::UnitCube: {
      const std::size_t per_axis = n_steps + 1;
      double total = 1.0;
      for (std::size_t i = 0; i < d.dim(); ++i) {
        total *= static_cast<double>(per_axis);
        if (total > static_cast<double>(cap)) throw CapacityError("grid_points: cube grid too large");
      }
      std::vector<Vec> pts;
      pts.reserve(static_cast<std::size_t>(total));
      Vec cur(d.dim(), 0.0);
      std::vector<std::size_t> idx(d.dim(), 0);
      while (true) {
        for (std::size_t i = 0; i < d.dim(); ++i)
          cur[i] = static_cast<double>(idx[i]) / static_cast<double>(n_steps);
        pts.push_back(cur);
        std::size_t i = d.dim();
        while (true) {
          if (i == 0) return pts;
          --i;
          if (++idx[i] <= n_steps) break;
          idx[i] = 0;
        }
      }
    }
    case DomainKind::Simplex: {
      // Compositions of n_steps into dim parts, scaled by the denominator.
      std::vector<Vec> pts;
      Vec cur(d.dim(), 0.0);
      std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos,
                                                              std::size_t left) {
        if (pts.size() > cap) throw CapacityError("grid_points: simplex grid too large");
        if (pos + 1 == d.dim()) {
          cur[pos] = static_cast<double>(left) / static_cast<double>(n_steps);
          pts.push_back(cur);
          return;
        }
        for (std::size_t k = 0; k <= left; ++k) {
          cur[pos] = static_cast<double>(k) / static_cast<double>(n_steps);
          rec(pos + 1, left - k);
        }
      };
      rec(0, n_steps);
      return pts;
    }
    default:
      throw UnsupportedError("grid_saddle_search: grids implemented for cube and simplex only");
  }
}

}  // namespace

std::vector<PointPair> fictitious_play(const Matrix& payoff, long rounds,
                                       const PointPair& start) {
  if (rounds < 1) throw std::invalid_argument("fictitious_play: rounds must be >= 1");
  const std::size_t p = payoff.rows(), q = payoff.cols();
  if (start.x.size() != p || start.y.size() != q)
    throw std::invalid_argument("fictitious_play: start dimension mismatch");
  const auto sx = DomainDescriptor::simplex(p);
  const auto sy = DomainDescriptor::simplex(q);

  FictitiousPlayState state;
  state.x_counts.assign(p, 0);
  state.y_counts.assign(q, 0);

  std::vector<PointPair> averages;
  averages.reserve(static_cast<std::size_t>(rounds));
  Vec avg_x = start.x, avg_y = start.y;
  for (long round = 0; round < rounds; ++round) {
    // x minimizes <x, M avg_y>; y maximizes <y, M' avg_x>. Both responses go
    // through the same simplex LMO as the solver, so tie-breaking matches.
    const Vec brx = linmin(sx, payoff.apply(avg_y));
    Vec score = payoff.apply_transposed(avg_x);
    for (double& s : score) s = -s;
    const Vec bry = linmin(sy, score);
    ++state.x_counts[simplex_vertex_index(brx)];
    ++state.y_counts[simplex_vertex_index(bry)];
    ++state.t;
    PointPair avg{Vec(p), Vec(q)};
    for (std::size_t i = 0; i < p; ++i)
      avg.x[i] = static_cast<double>(state.x_counts[i]) / static_cast<double>(state.t);
    for (std::size_t j = 0; j < q; ++j)
      avg.y[j] = static_cast<double>(state.y_counts[j]) / static_cast<double>(state.t);
    averages.push_back(avg);
    avg_x = averages.back().x;
    avg_y = averages.back().y;
  }
  return averages;
}

GridSearchResult grid_saddle_search(const SaddleObjective& obj, const ProductDomain& pd,
                                    double resolution) {
  constexpr std::size_t kGridCap = 10'000'000;  // combined per-block cap
  const auto xs = grid_points(pd.x, resolution, kGridCap);
  const auto ys = grid_points(pd.y, resolution, kGridCap);
  if (xs.size() + ys.size() > kGridCap)
    throw CapacityError("grid_saddle_search: combined grids exceed the cap");

  PointPair z{xs[0], ys[0]};
  double minimax = std::numeric_limits<double>::infinity();
  std::size_t best_x = 0;
  std::vector<double> col_min(ys.size(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    z.x = xs[i];
    double row_max = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < ys.size(); ++j) {
      z.y = ys[j];
      const double v = obj.value(z);
      row_max = std::max(row_max, v);
      col_min[j] = std::min(col_min[j], v);
    }
    if (row_max < minimax) {
      minimax = row_max;
      best_x = i;
    }
  }
  double maximin = -std::numeric_limits<double>::infinity();
  std::size_t best_y = 0;
  for (std::size_t j = 0; j < ys.size(); ++j) {
    if (col_min[j] > maximin) {
      maximin = col_min[j];
      best_y = j;
    }
  }
  GridSearchResult result;
  result.saddle = PointPair{xs[best_x], ys[best_y]};
  result.value = 0.5 * (minimax + maximin);
  result.minimax_gap = minimax - maximin;
  return result;
}

PointPair finite_diff_gradient(const SaddleObjective& obj, const PointPair& z, double h,
                               const ProductDomain* pd) {
  if (!(h > 0)) throw std::invalid_argument("finite_diff_gradient: h must be positive");
  PointPair probe = z;
  if (pd) {
    const auto margin_ok = [&](const DomainDescriptor& d, Vec& block) {
      for (double& c : block) {
        const double orig = c;
        c = orig + h;
        const bool up = in_domain(d, block, 1e-12);
        c = orig - h;
        const bool down = in_domain(d, block, 1e-12);
        c = orig;
        if (!up || !down) return false;
      }
      return true;
    };
    if (!margin_ok(pd->x, probe.x) || !margin_ok(pd->y, probe.y))
      throw std::invalid_argument("finite_diff_gradient: point too close to the boundary");
  }
  PointPair grad{Vec(z.x.size()), Vec(z.y.size())};
  for (std::size_t i = 0; i < z.x.size(); ++i) {
    const double orig = probe.x[i];
    probe.x[i] = orig + h;
    const double up = obj.value(probe);
    probe.x[i] = orig - h;
    const double down = obj.value(probe);
    probe.x[i] = orig;
    grad.x[i] = (up - down) / (2.0 * h);
  }
  for (std::size_t i = 0; i < z.y.size(); ++i) {
    const double orig = probe.y[i];
    probe.y[i] = orig + h;
    const double up = obj.value(probe);
    probe.y[i] = orig - h;
    const double down = obj.value(probe);
    probe.y[i] = orig;
    grad.y[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

double sampled_lipschitz_ratio(const std::function<PointPair(const PointPair&)>& map,
                               const ProductDomain& pd, int n_pairs, std::uint64_t seed) {
  if (n_pairs < 1) throw std::invalid_argument("sampled_lipschitz_ratio: n_pairs must be >= 1");
  SplitMix64 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < n_pairs; ++i) {
    const PointPair a{sample_point(pd.x, rng), sample_point(pd.y, rng)};
    const PointPair b{sample_point(pd.x, rng), sample_point(pd.y, rng)};
    const double dz = dist(a.x, b.x) + dist(a.y, b.y);
    if (dz == 0.0) continue;
    const PointPair fa = map(a);
    const PointPair fb = map(b);
    const double df = dist(fa.x, fb.x) + dist(fa.y, fb.y);
    worst = std::max(worst, df / dz);
  }
  return worst;
}

double jacobi_spectral_norm(const Matrix& m) {
  const std::size_t n = m.cols();
  if (n == 0 || m.rows() == 0) return 0.0;
  // A = M'M, symmetric PSD.
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) a[j][k] += m(i, j) * m(i, k);

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-24) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  double lam = 0.0;
  for (std::size_t i = 0; i < n; ++i) lam = std::max(lam, a[i][i]);
  return std::sqrt(std::max(0.0, lam));
}

}  // namespace spfw::oracles
