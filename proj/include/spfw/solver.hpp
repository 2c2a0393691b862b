#ifndef SPFW_SOLVER_HPP
#define SPFW_SOLVER_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "spfw/domains.hpp"
#include "spfw/objectives.hpp"

namespace spfw {

// Per-block weighted atom collections representing the iterate as two
// independent convex combinations of previously picked vertices. Atom
// identity is exact coordinate equality; the LMOs return canonical vertices.
struct ActiveSetPair {
  std::map<Vec, double> x_atoms, y_atoms;

  static ActiveSetPair singleton(const PointPair& vertex);

  double weight_sum_x() const;
  double weight_sum_y() const;
  void renormalize();
  PointPair reconstruct() const;
};

// Which step-size schedule drives the run. Rule constants are validated at
// construction; in particular the adaptive rule refuses nu <= 0 outright.
struct StepRule {
  enum class Kind { Adaptive, Universal, Harmonic, StronglyConvexSet, Heuristic };

  Kind kind = Kind::Universal;
  double nu = 0.0, C = 0.0;  // adaptive
  double C_delta = 0.0;      // strongly convex sets
  double C_tilde = 0.0;      // heuristic

  static StepRule adaptive(double nu, double C);
  static StepRule universal();
  static StepRule harmonic();
  static StepRule strongly_convex_set(double C_delta);
  static StepRule heuristic(double C_tilde);

  const char* name() const;
};

// Inputs a rule may need. g carries the gap in the rule's slot: the FW gap
// for SP-FW, the pairwise gap for SP-AFW / SP-PFW.
struct StepContext {
  double g = -1.0;
  double g_pfw = -1.0;
  long k_t = -1;
  long t = -1;
  double dist_sq = -1.0;  // |s - z|^2, Euclidean product norm
  double gamma_max = 1.0;
};

// gamma in [0, gamma_max] according to the rule; throws std::invalid_argument
// when the rule's context fields are missing.
double step_size(const StepRule& rule, const StepContext& ctx);

// Per-iteration certificate bundle.
struct GapReport {
  double g_x = 0.0, g_y = 0.0, g_fw = 0.0;
  std::optional<double> g_away, g_pfw;
  std::optional<double> w, h;
};

struct GapComputation {
  GapReport report;
  PointPair r;                 // VIP field at z
  PointPair s;                 // FW atom
  std::optional<PointPair> v;  // away atom (with an active set)
  double dist_sq_fw = 0.0;     // |s - z|^2, Euclidean product norm
  double dist_l1_fw = 0.0;     // |s_x - x| + |s_y - y|
};

// FW atom, gaps, and (with an active set) the away atom and the away /
// pairwise gaps. The active set, when given, must reconstruct z.
GapComputation compute_gaps(const SaddleObjective& obj, const ProductDomain& pd,
                            const PointPair& z, const ActiveSetPair* active = nullptr);

enum class StepKind { FW, Away, Pairwise, Drop };
const char* step_kind_name(StepKind kind);

enum class StopReason { Converged, IterationBudget, NumericalFailure };

struct IterationRecord {
  long t = 0;
  long k_t = 0;  // non-drop steps taken before step t
  StepKind kind = StepKind::FW;
  double gamma = 0.0;
  double gamma_max = 1.0;
  GapReport gaps;
  std::optional<std::size_t> active_x, active_y;
  // Auxiliary distances kept in memory for the bound checks; not serialized.
  double dist_sq_fw = 0.0;
  double dist_l1_fw = 0.0;
};

struct SolverTrace {
  std::vector<IterationRecord> records;
  StopReason reason = StopReason::IterationBudget;
  PointPair final_point;
  long iterations = 0;   // number of recorded iterations
  long drop_steps = 0;
};

using IterationObserver = std::function<void(const IterationRecord&, const PointPair&)>;

struct SolveOptions {
  StepRule rule;
  double eps = 1e-8;
  long max_iters = 1000;
  PointPair start;
  IterationObserver observer;  // called once per recorded iteration
  bool keep_records = true;    // disable for very long runs
};

// SP-FW: joint FW steps z <- z + gamma (s - z); stops when the FW gap drops
// to eps. Works on any domain kinds.
SolverTrace run_spfw(const SaddleObjective& obj, const ProductDomain& pd,
                     const SolveOptions& opts);

// SP-AFW: per-iteration choice between the FW direction and the blockwise
// away direction, with per-block weight bookkeeping and drop-step accounting.
// Requires polytopal blocks and a vertex-pair start.
SolverTrace run_spafw(const SaddleObjective& obj, const ProductDomain& pd,
                      const SolveOptions& opts);

// SP-PFW: pairwise direction s - v, moving weight gamma from the away atom
// to the FW atom in each block. Same preconditions as SP-AFW.
SolverTrace run_sppfw(const SaddleObjective& obj, const ProductDomain& pd,
                      const SolveOptions& opts);

}  // namespace spfw

#endif  // SPFW_SOLVER_HPP
