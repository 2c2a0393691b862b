#ifndef SPFW_ORACLES_HPP
#define SPFW_ORACLES_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "spfw/domains.hpp"
#include "spfw/linalg.hpp"
#include "spfw/objectives.hpp"

// Independent reference implementations used for verification: fictitious
// play, brute-force saddle search, finite-difference gradients, sampled
// Lipschitz ratios. The solver never calls anything in here; that
// independence is what makes these oracles.
namespace spfw::oracles {

struct FictitiousPlayState {
  std::vector<long> x_counts, y_counts;
  long t = 0;  // completed rounds
};

// Count-based fictitious play on min_x max_y x'My over simplices. Both
// players best-respond with the simplex LMO (lowest-index ties). Round 0
// responds to the given start vertex pair; round t >= 1 responds to the
// opponent's empirical average counts/t. Returns the average-strategy pair
// after each round, so result[t-1] matches the t-th iterate of a solver
// doing joint best-response averaging from the same start.
std::vector<PointPair> fictitious_play(const Matrix& payoff, long rounds,
                                       const PointPair& start);

struct GridSearchResult {
  PointPair saddle;
  double value = 0.0;        // midpoint of minimax and maximin
  double minimax_gap = 0.0;  // minimax - maximin, nonnegative
};

// Tensor-grid minimax: for every grid x take the max over grid y, return the
// minimizing x (and symmetrically the maximin y). The per-block grids are
// capped at 1e7 points combined.
GridSearchResult grid_saddle_search(const SaddleObjective& obj, const ProductDomain& pd,
                                    double resolution);

// Central differences per coordinate in both blocks. When a domain is given,
// every probe point must stay inside it (margin check); h must be positive.
PointPair finite_diff_gradient(const SaddleObjective& obj, const PointPair& z, double h,
                               const ProductDomain* pd = nullptr);

// max over sampled in-domain pairs of
// (|f(z).x - f(z').x| + |f(z).y - f(z').y|) / (|z.x - z'.x| + |z.y - z'.y|),
// the blockwise l1 product norm on both sides.
double sampled_lipschitz_ratio(const std::function<PointPair(const PointPair&)>& map,
                               const ProductDomain& pd, int n_pairs,
                               std::uint64_t seed = 0x5A3D13ULL);

// Largest singular value via Jacobi eigenvalue iteration on M'M; the
// independent cross-check for the power-iteration estimate.
double jacobi_spectral_norm(const Matrix& m);

}  // namespace spfw::oracles

#endif  // SPFW_ORACLES_HPP
