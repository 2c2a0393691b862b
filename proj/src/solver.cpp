#include "spfw/solver.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "spfw/errors.hpp"

namespace spfw {

namespace {

constexpr double kWeightDriftTol = 1e-10;
constexpr double kReconstructTol = 1e-8;
constexpr long kFullCheckEvery = 100;
constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Algorithm { SpFw, SpAfw, SpPfw };

struct StepDecision {
  double gamma = 0.0;
  bool clipped = false;  // rule value hit gamma_max
};

void require_context(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("step_size: missing context: ") + what);
}

StepDecision decide_step(const StepRule& rule, const StepContext& ctx) {
  double raw = 0.0;
  switch (rule.kind) {
    case StepRule::Kind::Adaptive:
      require_context(ctx.g >= 0.0 && std::isfinite(ctx.g), "gap");
      raw = rule.nu / (2.0 * rule.C) * ctx.g;
      break;
    case StepRule::Kind::Universal:
      require_context(ctx.k_t >= 0, "k_t");
      raw = 2.0 / (2.0 + static_cast<double>(ctx.k_t));
      break;
    case StepRule::Kind::Harmonic:
      require_context(ctx.t >= 0, "t");
      raw = 1.0 / (1.0 + static_cast<double>(ctx.t));
      break;
    case StepRule::Kind::StronglyConvexSet:
      require_context(ctx.g >= 0.0 && std::isfinite(ctx.g), "gap");
      require_context(ctx.dist_sq > 0.0, "dist_sq");
      raw = ctx.g / (ctx.dist_sq * rule.C_delta);
      break;
    case StepRule::Kind::Heuristic:
      require_context(ctx.g >= 0.0 && std::isfinite(ctx.g), "gap");
      raw = ctx.g / rule.C_tilde;
      break;
  }
  if (raw >= ctx.gamma_max) return {ctx.gamma_max, true};
  return {std::max(raw, 0.0), false};
}

double away_max_step(double alpha) {
  return alpha >= 1.0 ? kInf : alpha / (1.0 - alpha);
}

double atom_weight(const std::map<Vec, double>& atoms, const Vec& v) {
  auto it = atoms.find(v);
  if (it == atoms.end()) throw InvariantViolation("atom missing from active set");
  return it->second;
}

bool in_domain_pair_ok(const ProductDomain& pd, const PointPair& z) {
  const auto check = [](const DomainDescriptor& d, const Vec& p) {
    if (d.kind() == DomainKind::VertexPolytope) return p.size() == d.dim();
    return p.size() == d.dim() && in_domain(d, p, 1e-9);
  };
  return check(pd.x, z.x) && check(pd.y, z.y);
}

// Away atom of one block: argmax of <r, v> over the active atoms, first in
// map order on ties.
struct BlockAway {
  const Vec* atom = nullptr;
  double weight = 0.0;
  double score = -kInf;
};

BlockAway best_away_atom(const std::map<Vec, double>& atoms, const Vec& r) {
  BlockAway best;
  for (const auto& [v, w] : atoms) {
    const double s = dot(v, r);
    if (s > best.score) best = BlockAway{&v, w, s};
  }
  return best;
}

void fw_weight_update(std::map<Vec, double>& atoms, const Vec& s, double gamma) {
  if (gamma >= 1.0) {
    atoms.clear();
    atoms[s] = 1.0;
    return;
  }
  for (auto& [v, w] : atoms) w *= (1.0 - gamma);
  atoms[s] += gamma;
}

void away_weight_update(std::map<Vec, double>& atoms, const Vec& v, double gamma, bool evict) {
  for (auto& [u, w] : atoms) w *= (1.0 + gamma);
  auto it = atoms.find(v);
  if (it == atoms.end()) throw InvariantViolation("away atom missing from active set");
  const double nw = it->second - gamma;
  if (evict || nw <= 0.0)
    atoms.erase(it);
  else
    it->second = nw;
}

void pairwise_weight_update(std::map<Vec, double>& atoms, const Vec& s, const Vec& v,
                            double gamma, bool evict) {
  if (s == v) return;  // vacuous transfer
  auto it = atoms.find(v);
  if (it == atoms.end()) throw InvariantViolation("pairwise away atom missing from active set");
  const double nw = it->second - gamma;
  if (evict || nw <= 0.0)
    atoms.erase(it);
  else
    it->second = nw;
  atoms[s] += gamma;
}

PointPair snapped_vertex_start(const ProductDomain& pd, const PointPair& start) {
  Vec sx, sy;
  if (!is_vertex(pd.x, start.x, &sx) || !is_vertex(pd.y, start.y, &sy))
    throw std::invalid_argument("active-set algorithms must start at a vertex pair");
  return PointPair{std::move(sx), std::move(sy)};
}

void maintain_active_set(ActiveSetPair& active, const PointPair& z, long t) {
  if (std::abs(active.weight_sum_x() - 1.0) > kWeightDriftTol ||
      std::abs(active.weight_sum_y() - 1.0) > kWeightDriftTol)
    active.renormalize();
  if ((t + 1) % kFullCheckEvery == 0) {
    const PointPair recon = active.reconstruct();
    if (linf_dist(recon.x, z.x) > kReconstructTol || linf_dist(recon.y, z.y) > kReconstructTol)
      throw InvariantViolation("active set no longer reconstructs the iterate");
  }
}

SolverTrace run_core(Algorithm alg, const SaddleObjective& obj, const ProductDomain& pd,
                     const SolveOptions& opts) {
  if (!(opts.eps >= 0.0)) throw std::invalid_argument("eps must be nonnegative");
  if (opts.max_iters < 0) throw std::invalid_argument("max_iters must be nonnegative");
  const bool track = alg != Algorithm::SpFw;
  if (track && (!pd.x.polytopal() || !pd.y.polytopal()))
    throw UnsupportedError("active-set algorithms need polytopal blocks");

  PointPair z = track ? snapped_vertex_start(pd, opts.start) : opts.start;
  if (!in_domain_pair_ok(pd, z))
    throw std::invalid_argument("start point outside the domain");

  ActiveSetPair active;
  if (track) active = ActiveSetPair::singleton(z);

  const bool have_saddle = obj.known_saddle().has_value();
  const bool have_responses = obj.has_best_responses();

  SolverTrace trace;
  trace.reason = StopReason::IterationBudget;

  for (long t = 0; t < opts.max_iters; ++t) {
    GapComputation gc = compute_gaps(obj, pd, z, track ? &active : nullptr);
    if (!std::isfinite(gc.report.g_fw)) {
      trace.reason = StopReason::NumericalFailure;
      break;
    }
    if (have_saddle) gc.report.w = merit_w(obj, z);
    if (have_responses) gc.report.h = suboptimality_h(obj, z);

    IterationRecord rec;
    rec.t = t;
    rec.k_t = trace.iterations - trace.drop_steps;
    rec.gaps = gc.report;
    rec.dist_sq_fw = gc.dist_sq_fw;
    rec.dist_l1_fw = gc.dist_l1_fw;
    if (track) {
      rec.active_x = active.x_atoms.size();
      rec.active_y = active.y_atoms.size();
    }

    // Direction selection.
    StepKind kind = StepKind::FW;
    double gamma_max = 1.0;
    double ratio_x = kInf, ratio_y = kInf;  // away feasibility per block
    if (alg == Algorithm::SpAfw) {
      const double g_away = *gc.report.g_away;
      if (gc.report.g_fw >= g_away) {
        kind = StepKind::FW;
      } else {
        kind = StepKind::Away;
        ratio_x = away_max_step(atom_weight(active.x_atoms, gc.v->x));
        ratio_y = away_max_step(atom_weight(active.y_atoms, gc.v->y));
        gamma_max = std::min(ratio_x, ratio_y);
      }
    } else if (alg == Algorithm::SpPfw) {
      kind = StepKind::Pairwise;
      ratio_x = atom_weight(active.x_atoms, gc.v->x);
      ratio_y = atom_weight(active.y_atoms, gc.v->y);
      gamma_max = std::min(ratio_x, ratio_y);
    }
    rec.gamma_max = gamma_max;
    rec.kind = kind;

    const bool converged = gc.report.g_fw <= opts.eps;
    StepDecision dec{0.0, false};
    bool drop = false;
    if (!converged) {
      StepContext ctx;
      ctx.g = alg == Algorithm::SpFw ? gc.report.g_fw : *gc.report.g_pfw;
      ctx.g_pfw = gc.report.g_pfw.value_or(-1.0);
      ctx.k_t = rec.k_t;
      ctx.t = t;
      ctx.dist_sq = gc.dist_sq_fw;
      ctx.gamma_max = gamma_max;
      dec = decide_step(opts.rule, ctx);
      drop = kind != StepKind::FW && dec.clipped && gamma_max < 1.0;
      if (drop) rec.kind = StepKind::Drop;
      rec.gamma = dec.gamma;
    }

    ++trace.iterations;
    if (drop) ++trace.drop_steps;
    if (opts.observer) opts.observer(rec, z);
    if (opts.keep_records) trace.records.push_back(rec);
    if (converged) {
      trace.reason = StopReason::Converged;
      break;
    }

    // Apply the step.
    const double gamma = dec.gamma;
    switch (kind) {
      case StepKind::FW: {
        add_scaled_diff(z.x, gamma, gc.s.x, z.x);
        add_scaled_diff(z.y, gamma, gc.s.y, z.y);
        if (track) {
          fw_weight_update(active.x_atoms, gc.s.x, gamma);
          fw_weight_update(active.y_atoms, gc.s.y, gamma);
        }
        break;
      }
      case StepKind::Away: {
        add_scaled_diff(z.x, gamma, z.x, gc.v->x);
        add_scaled_diff(z.y, gamma, z.y, gc.v->y);
        const bool evict_x = dec.clipped && ratio_x <= ratio_y;
        const bool evict_y = dec.clipped && ratio_y <= ratio_x;
        away_weight_update(active.x_atoms, gc.v->x, gamma, evict_x);
        away_weight_update(active.y_atoms, gc.v->y, gamma, evict_y);
        break;
      }
      case StepKind::Pairwise: {
        add_scaled_diff(z.x, gamma, gc.s.x, gc.v->x);
        add_scaled_diff(z.y, gamma, gc.s.y, gc.v->y);
        const bool evict_x = dec.clipped && ratio_x <= ratio_y;
        const bool evict_y = dec.clipped && ratio_y <= ratio_x;
        pairwise_weight_update(active.x_atoms, gc.s.x, gc.v->x, gamma, evict_x);
        pairwise_weight_update(active.y_atoms, gc.s.y, gc.v->y, gamma, evict_y);
        break;
      }
      case StepKind::Drop:
        break;  // classification only, never a direction
    }
    if (track) maintain_active_set(active, z, t);
  }

  trace.final_point = std::move(z);
  return trace;
}

}  // namespace

// --- ActiveSetPair ----------------------------------------------------------

ActiveSetPair ActiveSetPair::singleton(const PointPair& vertex) {
  ActiveSetPair a;
  a.x_atoms[vertex.x] = 1.0;
  a.y_atoms[vertex.y] = 1.0;
  return a;
}

double ActiveSetPair::weight_sum_x() const {
  double s = 0.0;
  for (const auto& [v, w] : x_atoms) s += w;
  return s;
}

double ActiveSetPair::weight_sum_y() const {
  double s = 0.0;
  for (const auto& [v, w] : y_atoms) s += w;
  return s;
}

void ActiveSetPair::renormalize() {
  const double sx = weight_sum_x();
  const double sy = weight_sum_y();
  if (sx > 0)
    for (auto& [v, w] : x_atoms) w /= sx;
  if (sy > 0)
    for (auto& [v, w] : y_atoms) w /= sy;
}

PointPair ActiveSetPair::reconstruct() const {
  if (x_atoms.empty() || y_atoms.empty())
    throw InvariantViolation("empty active set");
  PointPair z{Vec(x_atoms.begin()->first.size(), 0.0), Vec(y_atoms.begin()->first.size(), 0.0)};
  for (const auto& [v, w] : x_atoms)
    for (std::size_t i = 0; i < z.x.size(); ++i) z.x[i] += w * v[i];
  for (const auto& [v, w] : y_atoms)
    for (std::size_t i = 0; i < z.y.size(); ++i) z.y[i] += w * v[i];
  return z;
}

// --- StepRule ---------------------------------------------------------------

StepRule StepRule::adaptive(double nu, double C) {
  if (!(nu > 0)) {
    std::ostringstream msg;
    msg << "adaptive step rule needs nu > 0, got nu=" << nu
        << "; use the universal, harmonic or heuristic rule instead";
    throw std::invalid_argument(msg.str());
  }
  if (!(C > 0)) throw std::invalid_argument("adaptive step rule needs C > 0");
  StepRule r;
  r.kind = Kind::Adaptive;
  r.nu = nu;
  r.C = C;
  return r;
}

StepRule StepRule::universal() {
  StepRule r;
  r.kind = Kind::Universal;
  return r;
}

StepRule StepRule::harmonic() {
  StepRule r;
  r.kind = Kind::Harmonic;
  return r;
}

StepRule StepRule::strongly_convex_set(double C_delta) {
  if (!(C_delta > 0)) throw std::invalid_argument("strongly-convex-set rule needs C_delta > 0");
  StepRule r;
  r.kind = Kind::StronglyConvexSet;
  r.C_delta = C_delta;
  return r;
}

StepRule StepRule::heuristic(double C_tilde) {
  if (!(C_tilde > 0)) throw std::invalid_argument("heuristic rule needs C_tilde > 0");
  StepRule r;
  r.kind = Kind::Heuristic;
  r.C_tilde = C_tilde;
  return r;
}

const char* StepRule::name() const {
  switch (kind) {
    case Kind::Adaptive: return "adaptive";
    case Kind::Universal: return "universal";
    case Kind::Harmonic: return "harmonic";
    case Kind::StronglyConvexSet: return "strongly-convex-set";
    case Kind::Heuristic: return "heuristic";
  }
  return "?";
}

double step_size(const StepRule& rule, const StepContext& ctx) {
  return decide_step(rule, ctx).gamma;
}

const char* step_kind_name(StepKind kind) {
  switch (kind) {
    case StepKind::FW: return "fw";
    case StepKind::Away: return "away";
    case StepKind::Pairwise: return "pairwise";
    case StepKind::Drop: return "drop";
  }
  return "?";
}

// --- gaps -------------------------------------------------------------------

GapComputation compute_gaps(const SaddleObjective& obj, const ProductDomain& pd,
                            const PointPair& z, const ActiveSetPair* active) {
  GapComputation gc;
  gc.r = vip_field(obj, z);
  gc.s = linmin_product(pd, gc.r);
  gc.report.g_x = dot(z.x, gc.r.x) - dot(gc.s.x, gc.r.x);
  gc.report.g_y = dot(z.y, gc.r.y) - dot(gc.s.y, gc.r.y);
  gc.report.g_fw = gc.report.g_x + gc.report.g_y;
  gc.dist_sq_fw = sq_dist(gc.s.x, z.x) + sq_dist(gc.s.y, z.y);
  gc.dist_l1_fw = dist(gc.s.x, z.x) + dist(gc.s.y, z.y);
  if (active) {
    const PointPair recon = active->reconstruct();
    if (linf_dist(recon.x, z.x) > kReconstructTol || linf_dist(recon.y, z.y) > kReconstructTol)
      throw InvariantViolation("compute_gaps: active set does not reconstruct the iterate");
    const BlockAway ax = best_away_atom(active->x_atoms, gc.r.x);
    const BlockAway ay = best_away_atom(active->y_atoms, gc.r.y);
    gc.v = PointPair{*ax.atom, *ay.atom};
    const double g_away =
        (ax.score + ay.score) - (dot(z.x, gc.r.x) + dot(z.y, gc.r.y));
    gc.report.g_away = g_away;
    gc.report.g_pfw = gc.report.g_fw + g_away;
  }
  return gc;
}

// --- entry points -----------------------------------------------------------

SolverTrace run_spfw(const SaddleObjective& obj, const ProductDomain& pd,
                     const SolveOptions& opts) {
  return run_core(Algorithm::SpFw, obj, pd, opts);
}

SolverTrace run_spafw(const SaddleObjective& obj, const ProductDomain& pd,
                      const SolveOptions& opts) {
  return run_core(Algorithm::SpAfw, obj, pd, opts);
}

SolverTrace run_sppfw(const SaddleObjective& obj, const ProductDomain& pd,
                      const SolveOptions& opts) {
  return run_core(Algorithm::SpPfw, obj, pd, opts);
}

}  // namespace spfw
