#include "spfw/domains.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include "spfw/errors.hpp"

namespace spfw {

namespace {

void require_finite(const Vec& v, const char* what) {
  if (!all_finite(v)) throw std::invalid_argument(std::string(what) + ": non-finite entries");
}

void require_dim(const DomainDescriptor& d, const Vec& v, const char* what) {
  if (v.size() != d.dim())
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

double max_pairwise_distance(const std::vector<Vec>& vs) {
  double m = 0.0;
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = i + 1; j < vs.size(); ++j) m = std::max(m, dist(vs[i], vs[j]));
  return m;
}

}  // namespace

const char* domain_kind_name(DomainKind kind) {
  switch (kind) {
    case DomainKind::UnitCube: return "unit-cube";
    case DomainKind::Simplex: return "simplex";
    case DomainKind::L1Ball: return "l1-ball";
    case DomainKind::L2Ball: return "l2-ball";
    case DomainKind::VertexPolytope: return "vertex-polytope";
  }
  return "?";
}

DomainDescriptor DomainDescriptor::unit_cube(std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("unit_cube: dim must be positive");
  DomainDescriptor d;
  d.kind_ = DomainKind::UnitCube;
  d.dim_ = dim;
  d.diameter_ = std::sqrt(static_cast<double>(dim));
  d.pyramidal_width_ = 1.0 / std::sqrt(static_cast<double>(dim));
  return d;
}

DomainDescriptor DomainDescriptor::simplex(std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("simplex: dim must be positive");
  DomainDescriptor d;
  d.kind_ = DomainKind::Simplex;
  d.dim_ = dim;
  d.diameter_ = dim > 1 ? std::sqrt(2.0) : 0.0;
  return d;
}

DomainDescriptor DomainDescriptor::l1_ball(std::size_t dim, double radius, Vec center) {
  if (dim == 0) throw std::invalid_argument("l1_ball: dim must be positive");
  if (!(radius > 0)) throw std::invalid_argument("l1_ball: radius must be positive");
  if (center.size() != dim) throw std::invalid_argument("l1_ball: center dimension mismatch");
  require_finite(center, "l1_ball center");
  DomainDescriptor d;
  d.kind_ = DomainKind::L1Ball;
  d.dim_ = dim;
  d.radius_ = radius;
  d.center_ = std::move(center);
  d.diameter_ = 2.0 * radius;
  return d;
}

DomainDescriptor DomainDescriptor::l2_ball(std::size_t dim, double radius, Vec center) {
  if (dim == 0) throw std::invalid_argument("l2_ball: dim must be positive");
  if (!(radius > 0)) throw std::invalid_argument("l2_ball: radius must be positive");
  if (center.size() != dim) throw std::invalid_argument("l2_ball: center dimension mismatch");
  require_finite(center, "l2_ball center");
  DomainDescriptor d;
  d.kind_ = DomainKind::L2Ball;
  d.dim_ = dim;
  d.radius_ = radius;
  d.center_ = std::move(center);
  d.diameter_ = 2.0 * radius;
  d.beta_ = 1.0 / radius;
  return d;
}

DomainDescriptor DomainDescriptor::vertex_polytope(std::vector<Vec> vertices) {
  if (vertices.empty()) throw std::invalid_argument("vertex_polytope: empty vertex list");
  const std::size_t dim = vertices[0].size();
  if (dim == 0) throw std::invalid_argument("vertex_polytope: zero-dimensional vertices");
  std::vector<Vec> dedup;
  for (auto& v : vertices) {
    if (v.size() != dim) throw std::invalid_argument("vertex_polytope: ragged vertex list");
    require_finite(v, "vertex_polytope vertex");
    if (std::find(dedup.begin(), dedup.end(), v) == dedup.end()) dedup.push_back(std::move(v));
  }
  DomainDescriptor d;
  d.kind_ = DomainKind::VertexPolytope;
  d.dim_ = dim;
  d.vertices_ = std::move(dedup);
  d.diameter_ = max_pairwise_distance(d.vertices_);
  return d;
}

DomainDescriptor DomainDescriptor::with_pyramidal_width(double value) const {
  if (!(value > 0) || value > diameter_ + 1e-12)
    throw std::invalid_argument("pyramidal width must satisfy 0 < w <= diameter");
  DomainDescriptor d = *this;
  d.pyramidal_width_ = value;
  return d;
}

Vec linmin(const DomainDescriptor& domain, const Vec& direction) {
  require_dim(domain, direction, "linmin");
  require_finite(direction, "linmin direction");
  const std::size_t n = domain.dim();
  switch (domain.kind()) {
    case DomainKind::UnitCube: {
      Vec s(n, 0.0);
      for (std::size_t i = 0; i < n; ++i) s[i] = direction[i] < 0.0 ? 1.0 : 0.0;
      return s;
    }
    case DomainKind::Simplex: {
      std::size_t best = 0;
      for (std::size_t i = 1; i < n; ++i)
        if (direction[i] < direction[best]) best = i;
      Vec s(n, 0.0);
      s[best] = 1.0;
      return s;
    }
    case DomainKind::L1Ball: {
      std::size_t best = 0;
      double mag = std::abs(direction[0]);
      for (std::size_t i = 1; i < n; ++i) {
        const double m = std::abs(direction[i]);
        if (m > mag) {
          mag = m;
          best = i;
        }
      }
      Vec s = domain.center();
      // Zero direction: every vertex ties, take the first canonical one.
      s[best] += direction[best] > 0.0 ? -domain.radius() : domain.radius();
      return s;
    }
    case DomainKind::L2Ball: {
      const double nrm = norm2(direction);
      Vec s = domain.center();
      if (nrm == 0.0) {
        s[0] += domain.radius();
        return s;
      }
      const double c = -domain.radius() / nrm;
      for (std::size_t i = 0; i < n; ++i) s[i] += c * direction[i];
      return s;
    }
    case DomainKind::VertexPolytope: {
      const auto& vs = domain.stored_vertices();
      std::size_t best = 0;
      double val = dot(vs[0], direction);
      for (std::size_t i = 1; i < vs.size(); ++i) {
        const double v = dot(vs[i], direction);
        if (v < val) {
          val = v;
          best = i;
        }
      }
      return vs[best];
    }
  }
  throw std::logic_error("linmin: unreachable");
}

PointPair linmin_product(const ProductDomain& pd, const PointPair& r) {
  return PointPair{linmin(pd.x, r.x), linmin(pd.y, r.y)};
}

std::vector<Vec> enumerate_vertices(const DomainDescriptor& domain, std::size_t cap) {
  const std::size_t n = domain.dim();
  switch (domain.kind()) {
    case DomainKind::UnitCube: {
      if (n >= 63 || (std::size_t{1} << n) > cap)
        throw CapacityError("enumerate_vertices: 2^d exceeds cap");
      const std::size_t count = std::size_t{1} << n;
      std::vector<Vec> vs;
      vs.reserve(count);
      for (std::size_t idx = 0; idx < count; ++idx) {
        Vec v(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
          v[i] = static_cast<double>((idx >> (n - 1 - i)) & 1u);
        vs.push_back(std::move(v));
      }
      return vs;
    }
    case DomainKind::Simplex: {
      if (n > cap) throw CapacityError("enumerate_vertices: d exceeds cap");
      std::vector<Vec> vs;
      vs.reserve(n);
      for (std::size_t i = 0; i < n; ++i) {
        Vec v(n, 0.0);
        v[i] = 1.0;
        vs.push_back(std::move(v));
      }
      return vs;
    }
    case DomainKind::L1Ball: {
      if (2 * n > cap) throw CapacityError("enumerate_vertices: 2d exceeds cap");
      std::vector<Vec> vs;
      vs.reserve(2 * n);
      for (std::size_t i = 0; i < n; ++i) {
        Vec plus = domain.center();
        plus[i] += domain.radius();
        vs.push_back(std::move(plus));
        Vec minus = domain.center();
        minus[i] -= domain.radius();
        vs.push_back(std::move(minus));
      }
      return vs;
    }
    case DomainKind::L2Ball:
      throw UnsupportedError("enumerate_vertices: l2 ball has no vertex set");
    case DomainKind::VertexPolytope: {
      if (domain.stored_vertices().size() > cap)
        throw CapacityError("enumerate_vertices: vertex list exceeds cap");
      return domain.stored_vertices();
    }
  }
  throw std::logic_error("enumerate_vertices: unreachable");
}

bool in_domain(const DomainDescriptor& domain, const Vec& p, double tol) {
  require_dim(domain, p, "in_domain");
  switch (domain.kind()) {
    case DomainKind::UnitCube: {
      for (double c : p)
        if (c < -tol || c > 1.0 + tol) return false;
      return true;
    }
    case DomainKind::Simplex: {
      double sum = 0.0;
      for (double c : p) {
        if (c < -tol) return false;
        sum += c;
      }
      return std::abs(sum - 1.0) <= tol;
    }
    case DomainKind::L1Ball: {
      double sum = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - domain.center()[i]);
      return sum <= domain.radius() + tol;
    }
    case DomainKind::L2Ball:
      return dist(p, domain.center()) <= domain.radius() + tol;
    case DomainKind::VertexPolytope:
      throw UnsupportedError("in_domain: membership in an explicit polytope needs an LP");
  }
  throw std::logic_error("in_domain: unreachable");
}

double border_distance(const DomainDescriptor& domain, const Vec& p) {
  require_dim(domain, p, "border_distance");
  switch (domain.kind()) {
    case DomainKind::UnitCube: {
      double m = 0.5;
      for (double c : p) m = std::min({m, c, 1.0 - c});
      return std::max(0.0, m);
    }
    case DomainKind::L2Ball:
      return std::max(0.0, domain.radius() - dist(p, domain.center()));
    case DomainKind::L1Ball: {
      double sum = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - domain.center()[i]);
      return std::max(0.0, (domain.radius() - sum) / std::sqrt(static_cast<double>(domain.dim())));
    }
    default:
      throw UnsupportedError("border_distance: supply the value explicitly for this kind");
  }
}

bool ball_inclusion_check(const DomainDescriptor& domain, const Vec& x, const Vec& y,
                          double gamma, int samples) {
  if (!domain.strong_convexity())
    throw UnsupportedError("ball_inclusion_check: domain has no strong-convexity modulus");
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw std::invalid_argument("ball_inclusion_check: gamma must lie in [0, 1]");
  require_dim(domain, x, "ball_inclusion_check");
  require_dim(domain, y, "ball_inclusion_check");
  const double beta = *domain.strong_convexity();
  const double radius = gamma * (1.0 - gamma) * (beta / 2.0) * sq_dist(x, y);
  const std::size_t n = domain.dim();
  Vec center(n);
  for (std::size_t i = 0; i < n; ++i) center[i] = gamma * x[i] + (1.0 - gamma) * y[i];
  if (radius == 0.0) return in_domain(domain, center, 1e-12);
  SplitMix64 rng(0xBA11C8ECULL);
  Vec p(n);
  for (int s = 0; s < samples; ++s) {
    double nrm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = rng.next_gaussian();
      nrm += p[i] * p[i];
    }
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) p[i] = center[i] + radius * p[i] / nrm;
    if (!in_domain(domain, p, 1e-12)) return false;
  }
  return true;
}

Vec sample_point(const DomainDescriptor& domain, SplitMix64& rng) {
  const std::size_t n = domain.dim();
  switch (domain.kind()) {
    case DomainKind::UnitCube: {
      Vec p(n);
      for (auto& c : p) c = rng.next_double();
      return p;
    }
    case DomainKind::Simplex: {
      Vec p(n);
      double sum = 0.0;
      for (auto& c : p) {
        c = -std::log(1.0 - rng.next_double());
        sum += c;
      }
      for (auto& c : p) c /= sum;
      return p;
    }
    case DomainKind::L2Ball: {
      Vec p(n);
      double nrm = 0.0;
      for (auto& c : p) {
        c = rng.next_gaussian();
        nrm += c * c;
      }
      nrm = std::sqrt(nrm);
      const double r =
          domain.radius() * std::pow(rng.next_double(), 1.0 / static_cast<double>(n));
      Vec q = domain.center();
      if (nrm > 0)
        for (std::size_t i = 0; i < n; ++i) q[i] += r * p[i] / nrm;
      return q;
    }
    case DomainKind::L1Ball: {
      // Dirichlet magnitudes with random signs, scaled into the ball.
      Vec mag(n);
      double sum = 0.0;
      for (auto& c : mag) {
        c = -std::log(1.0 - rng.next_double());
        sum += c;
      }
      const double r =
          domain.radius() * std::pow(rng.next_double(), 1.0 / static_cast<double>(n));
      Vec q = domain.center();
      for (std::size_t i = 0; i < n; ++i) {
        const double sign = rng.next_double() < 0.5 ? -1.0 : 1.0;
        q[i] += sign * r * mag[i] / sum;
      }
      return q;
    }
    case DomainKind::VertexPolytope: {
      const auto& vs = domain.stored_vertices();
      Vec w(vs.size());
      double sum = 0.0;
      for (auto& c : w) {
        c = -std::log(1.0 - rng.next_double());
        sum += c;
      }
      Vec q(n, 0.0);
      for (std::size_t k = 0; k < vs.size(); ++k)
        for (std::size_t i = 0; i < n; ++i) q[i] += (w[k] / sum) * vs[k][i];
      return q;
    }
  }
  throw std::logic_error("sample_point: unreachable");
}

bool is_vertex(const DomainDescriptor& domain, const Vec& p, Vec* snapped) {
  if (p.size() != domain.dim()) return false;
  constexpr double tol = 1e-12;
  switch (domain.kind()) {
    case DomainKind::UnitCube: {
      Vec v(p.size());
      for (std::size_t i = 0; i < p.size(); ++i) {
        if (std::abs(p[i]) <= tol)
          v[i] = 0.0;
        else if (std::abs(p[i] - 1.0) <= tol)
          v[i] = 1.0;
        else
          return false;
      }
      if (snapped) *snapped = std::move(v);
      return true;
    }
    case DomainKind::Simplex: {
      std::size_t ones = 0, idx = 0;
      for (std::size_t i = 0; i < p.size(); ++i) {
        if (std::abs(p[i] - 1.0) <= tol) {
          ++ones;
          idx = i;
        } else if (std::abs(p[i]) > tol) {
          return false;
        }
      }
      if (ones != 1) return false;
      if (snapped) {
        Vec v(p.size(), 0.0);
        v[idx] = 1.0;
        *snapped = std::move(v);
      }
      return true;
    }
    case DomainKind::L1Ball:
    case DomainKind::VertexPolytope: {
      for (const auto& v : enumerate_vertices(domain)) {
        if (linf_dist(v, p) <= tol) {
          if (snapped) *snapped = v;
          return true;
        }
      }
      return false;
    }
    case DomainKind::L2Ball:
      return false;
  }
  return false;
}

}  // namespace spfw
