#ifndef SPFW_DOMAINS_HPP
#define SPFW_DOMAINS_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "spfw/linalg.hpp"
#include "spfw/rng.hpp"

namespace spfw {

enum class DomainKind { UnitCube, Simplex, L1Ball, L2Ball, VertexPolytope };

const char* domain_kind_name(DomainKind kind);

// A compact convex set described just well enough to answer linear
// minimization queries plus the geometric constants the rate calculus needs.
// Instances are immutable after construction and safe to share between
// concurrently running solvers.
class DomainDescriptor {
 public:
  static DomainDescriptor unit_cube(std::size_t dim);
  static DomainDescriptor simplex(std::size_t dim);
  static DomainDescriptor l1_ball(std::size_t dim, double radius, Vec center);
  static DomainDescriptor l2_ball(std::size_t dim, double radius, Vec center);
  static DomainDescriptor vertex_polytope(std::vector<Vec> vertices);

  DomainKind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }

  // Exact Euclidean diameter of the set.
  double diameter() const { return diameter_; }

  double radius() const { return radius_; }
  const Vec& center() const { return center_; }
  const std::vector<Vec>& stored_vertices() const { return vertices_; }

  // Strong-convexity modulus of the set; 1/R for l2 balls, absent otherwise.
  std::optional<double> strong_convexity() const { return beta_; }

  // Pyramidal width. Known analytically only for the unit cube (1/sqrt(d));
  // for every other polytope the caller has to supply a value explicitly.
  std::optional<double> pyramidal_width() const { return pyramidal_width_; }
  DomainDescriptor with_pyramidal_width(double value) const;

  bool polytopal() const { return kind_ != DomainKind::L2Ball; }

 private:
  DomainDescriptor() = default;

  DomainKind kind_ = DomainKind::UnitCube;
  std::size_t dim_ = 0;
  double diameter_ = 0.0;
  double radius_ = 0.0;
  Vec center_;
  std::vector<Vec> vertices_;
  std::optional<double> beta_;
  std::optional<double> pyramidal_width_;
};

struct ProductDomain {
  DomainDescriptor x, y;
};

// Linear minimization oracle: a point of the domain minimizing <s, direction>.
// Polytopal kinds return a canonical vertex. Ties resolve to the lowest-index
// vertex in enumeration order (a zero cube coordinate beats a one; the lowest
// simplex / l1 index wins). A zero direction on an l2 ball returns c + R*e1.
Vec linmin(const DomainDescriptor& domain, const Vec& direction);

// Blockwise LMO over X x Y; equal to the joint minimizer by product structure.
PointPair linmin_product(const ProductDomain& pd, const PointPair& r);

inline constexpr std::size_t kDefaultVertexCap = std::size_t{1} << 20;

// Exact vertex set in a stable canonical order (cube: lexicographic;
// simplex: e1..ed; l1 ball: +e1, -e1, +e2, ...). The cap bounds the number
// of vertices produced.
std::vector<Vec> enumerate_vertices(const DomainDescriptor& domain,
                                    std::size_t cap = kDefaultVertexCap);

// Membership test with an absolute tolerance. Not available for explicit
// vertex polytopes (would need an LP).
bool in_domain(const DomainDescriptor& domain, const Vec& p, double tol = 1e-9);

// Euclidean distance from an interior point to the boundary of the set.
// Available for the cube and both ball kinds.
double border_distance(const DomainDescriptor& domain, const Vec& p);

// Samples the surface of the ball of radius gamma*(1-gamma)*(beta/2)*|x-y|^2
// centered at gamma*x + (1-gamma)*y and reports whether every sample stays in
// the domain (tolerance 1e-12). This is the sampled form of the
// strongly-convex-set definition.
bool ball_inclusion_check(const DomainDescriptor& domain, const Vec& x, const Vec& y,
                          double gamma, int samples);

// In-domain sample used by the sampled verifications (uniform for cube and
// balls, Dirichlet for the simplex, random convex combination for explicit
// polytopes). Never used by the solver itself.
Vec sample_point(const DomainDescriptor& domain, SplitMix64& rng);

// True if p coincides with a canonical vertex (within 1e-12 per coordinate);
// returns the snapped canonical vertex through *snapped when non-null.
bool is_vertex(const DomainDescriptor& domain, const Vec& p, Vec* snapped = nullptr);

}  // namespace spfw

#endif  // SPFW_DOMAINS_HPP
