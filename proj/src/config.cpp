#include "spfw/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "spfw/errors.hpp"
#include "spfw/oracles.hpp"
#include "spfw/trace.hpp"

namespace spfw {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void usage_error(const std::string& msg) {
  throw std::invalid_argument("config: " + msg);
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "problem", "dimension", "rows",        "cols",   "mu",        "matrix-scale",
      "matrix",  "saddle-mode", "radius",    "algorithm", "rule",   "nu",
      "c",       "c-delta",   "c-tilde",     "start",  "eps",       "max-iters",
      "seed",    "out",       "check"};
  return keys;
}

double to_double(const KeyValueMap& kv, const std::string& key, double fallback) {
  const auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  std::size_t pos = 0;
  double v;
  try {
    v = std::stod(it->second, &pos);
  } catch (const std::exception&) {
    usage_error("key '" + key + "' is not a number: " + it->second);
  }
  if (pos != it->second.size()) usage_error("trailing junk in key '" + key + "'");
  return v;
}

long to_long(const KeyValueMap& kv, const std::string& key, long fallback) {
  const auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  try {
    return std::stol(it->second);
  } catch (const std::exception&) {
    usage_error("key '" + key + "' is not an integer: " + it->second);
  }
}

std::string to_string_key(const KeyValueMap& kv, const std::string& key,
                          const std::string& fallback) {
  const auto it = kv.find(key);
  return it == kv.end() ? fallback : it->second;
}

}  // namespace

KeyValueMap parse_key_values(std::istream& in) {
  KeyValueMap kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      usage_error("line " + std::to_string(lineno) + " has no '='");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) usage_error("line " + std::to_string(lineno) + " has an empty key");
    if (kv.count(key)) usage_error("duplicate key '" + key + "'");
    kv[key] = value;
  }
  return kv;
}

KeyValueMap parse_key_values_text(const std::string& text) {
  std::istringstream in(text);
  return parse_key_values(in);
}

KeyValueMap parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) usage_error("cannot open config file: " + path);
  return parse_key_values(in);
}

RunConfig RunConfig::from(const KeyValueMap& kv) {
  for (const auto& [key, value] : kv) {
    (void)value;
    if (!known_keys().count(key)) usage_error("unknown key '" + key + "'");
  }
  RunConfig cfg;

  const std::string problem = to_string_key(kv, "problem", "");
  if (problem == "quad-bilinear")
    cfg.problem = ProblemKind::QuadBilinear;
  else if (problem == "matrix-game")
    cfg.problem = ProblemKind::MatrixGame;
  else if (problem == "ball-game")
    cfg.problem = ProblemKind::BallGame;
  else
    usage_error("problem must be quad-bilinear, matrix-game or ball-game");

  cfg.dimension = static_cast<std::size_t>(to_long(kv, "dimension", 2));
  if (cfg.dimension == 0) usage_error("dimension must be positive");
  cfg.rows = static_cast<std::size_t>(to_long(kv, "rows", 2));
  cfg.cols = static_cast<std::size_t>(to_long(kv, "cols", 2));
  cfg.mu = to_double(kv, "mu", 1.0);
  cfg.matrix_scale = to_double(kv, "matrix-scale",
                               cfg.problem == ProblemKind::MatrixGame ? 1.0
                               : cfg.problem == ProblemKind::BallGame ? 0.1
                                                                      : 0.0);
  cfg.radius = to_double(kv, "radius", 1.0);

  if (const auto it = kv.find("matrix"); it != kv.end()) {
    // Inline payoff: rows separated by ';', entries by whitespace.
    std::istringstream rows_in(it->second);
    std::string row;
    std::vector<std::vector<double>> rows;
    while (std::getline(rows_in, row, ';')) {
      std::istringstream entries(row);
      std::vector<double> r;
      double v;
      while (entries >> v) r.push_back(v);
      if (!r.empty()) rows.push_back(std::move(r));
    }
    if (rows.empty()) usage_error("matrix key holds no entries");
    cfg.explicit_rows = rows.size();
    cfg.explicit_cols = rows[0].size();
    for (const auto& r : rows) {
      if (r.size() != cfg.explicit_cols) usage_error("matrix rows have unequal lengths");
      cfg.explicit_matrix.insert(cfg.explicit_matrix.end(), r.begin(), r.end());
    }
  }

  const std::string mode = to_string_key(kv, "saddle-mode", "interior");
  if (mode == "interior")
    cfg.saddle_mode = SaddleMode::Interior;
  else if (mode == "vertex")
    cfg.saddle_mode = SaddleMode::Vertex;
  else
    usage_error("saddle-mode must be interior or vertex");

  const std::string algorithm = to_string_key(kv, "algorithm", "");
  if (algorithm == "spfw")
    cfg.algorithm = AlgorithmKind::SpFw;
  else if (algorithm == "spafw")
    cfg.algorithm = AlgorithmKind::SpAfw;
  else if (algorithm == "sppfw")
    cfg.algorithm = AlgorithmKind::SpPfw;
  else if (algorithm == "fp")
    cfg.algorithm = AlgorithmKind::FictitiousPlay;
  else
    usage_error("algorithm must be spfw, spafw, sppfw or fp");

  const std::string rule = to_string_key(
      kv, "rule", cfg.algorithm == AlgorithmKind::FictitiousPlay ? "harmonic" : "universal");
  if (rule == "adaptive")
    cfg.rule = StepRule::Kind::Adaptive;
  else if (rule == "universal")
    cfg.rule = StepRule::Kind::Universal;
  else if (rule == "harmonic")
    cfg.rule = StepRule::Kind::Harmonic;
  else if (rule == "strongly-convex-set")
    cfg.rule = StepRule::Kind::StronglyConvexSet;
  else if (rule == "heuristic")
    cfg.rule = StepRule::Kind::Heuristic;
  else
    usage_error("rule must be adaptive, universal, harmonic, strongly-convex-set or heuristic");

  if (kv.count("nu")) cfg.nu_override = to_double(kv, "nu", 0.0);
  if (kv.count("c")) cfg.c_override = to_double(kv, "c", 0.0);
  if (kv.count("c-delta")) cfg.c_delta_override = to_double(kv, "c-delta", 0.0);
  if (kv.count("c-tilde")) cfg.c_tilde_override = to_double(kv, "c-tilde", 0.0);

  const std::string start = to_string_key(kv, "start", "");
  if (!start.empty()) {
    cfg.start_given = true;
    if (start == "origin")
      cfg.start = StartMode::Origin;
    else if (start == "complement")
      cfg.start = StartMode::Complement;
    else
      usage_error("start must be origin or complement");
  }

  cfg.eps = to_double(kv, "eps", 1e-10);
  if (!(cfg.eps > 0)) usage_error("eps must be positive");
  cfg.max_iters = to_long(kv, "max-iters", 1000);
  if (cfg.max_iters < 1) usage_error("max-iters must be >= 1");
  const long seed = to_long(kv, "seed", 0);
  if (seed < 0) usage_error("seed must be nonnegative");
  cfg.seed = static_cast<std::uint64_t>(seed);
  cfg.out = to_string_key(kv, "out", "");

  // Compatibility checks that do not need the generated problem.
  if (cfg.algorithm == AlgorithmKind::FictitiousPlay && cfg.problem != ProblemKind::MatrixGame)
    usage_error("fp runs on matrix-game only");
  if (cfg.algorithm == AlgorithmKind::FictitiousPlay && cfg.rule != StepRule::Kind::Harmonic)
    usage_error("fp implies the harmonic rule");
  if ((cfg.algorithm == AlgorithmKind::SpAfw || cfg.algorithm == AlgorithmKind::SpPfw) &&
      cfg.problem == ProblemKind::BallGame)
    usage_error("active-set algorithms need polytopal blocks; ball-game has none");
  if (cfg.rule == StepRule::Kind::StronglyConvexSet && cfg.problem != ProblemKind::BallGame &&
      !cfg.c_delta_override)
    usage_error("strongly-convex-set rule needs ball-game blocks or an explicit c-delta");
  if (cfg.rule == StepRule::Kind::Adaptive && cfg.problem != ProblemKind::QuadBilinear &&
      !(cfg.nu_override && cfg.c_override))
    usage_error("adaptive rule needs computable nu and C (quad-bilinear) or explicit overrides");
  if (cfg.rule == StepRule::Kind::Heuristic && cfg.problem != ProblemKind::QuadBilinear &&
      !cfg.c_tilde_override)
    usage_error("heuristic rule needs a computable C-tilde (quad-bilinear) or an override");
  if (cfg.start_given && cfg.start == StartMode::Complement &&
      !(cfg.problem == ProblemKind::QuadBilinear && cfg.saddle_mode == SaddleMode::Vertex))
    usage_error("start=complement is defined for vertex-saddle quad-bilinear runs only");
  return cfg;
}

namespace {

Matrix explicit_or_empty(const RunConfig& cfg) {
  Matrix m(cfg.explicit_rows, cfg.explicit_cols);
  for (std::size_t i = 0; i < cfg.explicit_rows; ++i)
    for (std::size_t j = 0; j < cfg.explicit_cols; ++j)
      m(i, j) = cfg.explicit_matrix[i * cfg.explicit_cols + j];
  return m;
}

PointPair quad_start(const RunConfig& cfg, const QuadBilinearProblem& problem) {
  const std::size_t d = problem.dim();
  const StartMode mode = cfg.start_given
                             ? cfg.start
                             : (cfg.saddle_mode == SaddleMode::Vertex ? StartMode::Complement
                                                                      : StartMode::Origin);
  if (mode == StartMode::Origin) return PointPair{Vec(d, 0.0), Vec(d, 0.0)};
  const PointPair star = *problem.known_saddle();
  PointPair start{Vec(d), Vec(d)};
  for (std::size_t i = 0; i < d; ++i) {
    start.x[i] = 1.0 - star.x[i];
    start.y[i] = 1.0 - star.y[i];
  }
  return start;
}

}  // namespace

BuiltProblem build_problem(const RunConfig& cfg) {
  BuiltProblem built;
  switch (cfg.problem) {
    case ProblemKind::QuadBilinear: {
      auto problem = cfg.explicit_matrix.empty()
                         ? std::make_shared<QuadBilinearProblem>(make_random_quad_bilinear(
                               cfg.seed, cfg.dimension, cfg.mu, cfg.matrix_scale, cfg.saddle_mode))
                         : nullptr;
      if (!problem) {
        if (cfg.explicit_rows != cfg.dimension || cfg.explicit_cols != cfg.dimension)
          usage_error("explicit matrix must be dimension x dimension");
        // Saddle still comes from the seeded draw so the run stays reproducible.
        auto seeded = make_random_quad_bilinear(cfg.seed, cfg.dimension, cfg.mu, 0.0,
                                                cfg.saddle_mode);
        problem = std::make_shared<QuadBilinearProblem>(
            cfg.mu, explicit_or_empty(cfg), seeded.known_saddle()->x, seeded.known_saddle()->y);
      }
      built.domain = problem->product_domain();
      built.constants = quad_bilinear_constants(
          *problem, cfg.algorithm == AlgorithmKind::SpFw ? RateCase::Interior : RateCase::Polytope);
      built.start = quad_start(cfg, *problem);
      built.objective = std::move(problem);
      break;
    }
    case ProblemKind::MatrixGame: {
      auto problem = cfg.explicit_matrix.empty()
                         ? std::make_shared<MatrixGameProblem>(make_random_matrix_game(
                               cfg.seed, cfg.rows, cfg.cols, cfg.matrix_scale))
                         : std::make_shared<MatrixGameProblem>(explicit_or_empty(cfg));
      built.domain = problem->product_domain();
      built.constants = matrix_game_constants(*problem);
      PointPair start{Vec(problem->rows(), 0.0), Vec(problem->cols(), 0.0)};
      start.x[0] = 1.0;
      start.y[0] = 1.0;
      built.start = std::move(start);
      built.objective = std::move(problem);
      break;
    }
    case ProblemKind::BallGame: {
      auto problem = std::make_shared<BallGameProblem>(
          make_random_ball_game(cfg.seed, cfg.dimension, cfg.radius, cfg.matrix_scale));
      built.domain = problem->product_domain();
      built.constants = ball_game_constants(*problem);
      PointPair start{Vec(cfg.dimension, 0.0), Vec(cfg.dimension, 0.0)};
      start.x[0] = cfg.radius;
      start.y[0] = cfg.radius;
      built.start = std::move(start);
      built.objective = std::move(problem);
      break;
    }
  }

  // Step rule, refusing the adaptive rule when nu is unknown or nonpositive.
  switch (cfg.rule) {
    case StepRule::Kind::Adaptive: {
      const double nu = cfg.nu_override ? *cfg.nu_override : built.constants.nu.value_or(0.0);
      const double C = cfg.c_override ? *cfg.c_override : built.constants.C;
      if (!cfg.nu_override && !built.constants.nu)
        usage_error("adaptive rule: nu is not computable for this configuration");
      built.rule = StepRule::adaptive(nu, C);  // throws with the nu value when nu <= 0
      break;
    }
    case StepRule::Kind::Universal:
      built.rule = StepRule::universal();
      break;
    case StepRule::Kind::Harmonic:
      built.rule = StepRule::harmonic();
      break;
    case StepRule::Kind::StronglyConvexSet: {
      const double cd = cfg.c_delta_override ? *cfg.c_delta_override
                                             : built.constants.C_delta.value_or(0.0);
      built.rule = StepRule::strongly_convex_set(cd);
      break;
    }
    case StepRule::Kind::Heuristic: {
      const double ct = cfg.c_tilde_override ? *cfg.c_tilde_override
                                             : built.constants.C_tilde.value_or(0.0);
      built.rule = StepRule::heuristic(ct);
      break;
    }
  }
  return built;
}

SolverTrace run_built(const BuiltProblem& built, const RunConfig& cfg,
                      IterationObserver observer, bool keep_records) {
  SolveOptions opts;
  opts.rule = built.rule;
  opts.eps = cfg.eps;
  opts.max_iters = cfg.max_iters;
  opts.start = built.start;
  opts.observer = std::move(observer);
  opts.keep_records = keep_records;

  switch (cfg.algorithm) {
    case AlgorithmKind::SpFw:
      return run_spfw(*built.objective, built.domain, opts);
    case AlgorithmKind::SpAfw:
      return run_spafw(*built.objective, built.domain, opts);
    case AlgorithmKind::SpPfw:
      return run_sppfw(*built.objective, built.domain, opts);
    case AlgorithmKind::FictitiousPlay:
      break;
  }

  // Fictitious play: replay the count-based reference and certify its
  // averages with the same gap machinery the solvers use.
  const auto* game = dynamic_cast<const MatrixGameProblem*>(built.objective.get());
  if (!game) throw std::logic_error("fp runs need a matrix game");
  const auto averages =
      oracles::fictitious_play(game->payoff(), opts.max_iters, opts.start);
  SolverTrace trace;
  trace.reason = StopReason::IterationBudget;
  PointPair z = opts.start;
  for (long t = 0; t < opts.max_iters; ++t) {
    const GapComputation gc = compute_gaps(*built.objective, built.domain, z);
    IterationRecord rec;
    rec.t = t;
    rec.k_t = t;
    rec.kind = StepKind::FW;
    rec.gamma_max = 1.0;
    rec.gaps = gc.report;
    rec.gaps.h = suboptimality_h(*built.objective, z);
    if (built.objective->known_saddle()) rec.gaps.w = merit_w(*built.objective, z);
    rec.dist_sq_fw = gc.dist_sq_fw;
    rec.dist_l1_fw = gc.dist_l1_fw;
    const bool converged = rec.gaps.g_fw <= opts.eps;
    rec.gamma = converged ? 0.0 : 1.0 / (1.0 + static_cast<double>(t));
    ++trace.iterations;
    if (opts.observer) opts.observer(rec, z);
    if (opts.keep_records) trace.records.push_back(rec);
    if (converged) {
      trace.reason = StopReason::Converged;
      break;
    }
    z = averages[static_cast<std::size_t>(t)];
  }
  trace.final_point = std::move(z);
  return trace;
}

namespace {

void push(std::vector<std::pair<std::string, std::string>>& kv, const std::string& key,
          const std::string& value) {
  kv.emplace_back(key, value);
}

void push_num(std::vector<std::pair<std::string, std::string>>& kv, const std::string& key,
              double value) {
  kv.emplace_back(key, format_g17(value));
}

void push_opt(std::vector<std::pair<std::string, std::string>>& kv, const std::string& key,
              const std::optional<double>& value) {
  if (value) push_num(kv, key, *value);
}

}  // namespace

std::vector<std::pair<std::string, std::string>> header_entries(const RunConfig& cfg,
                                                                const BuiltProblem& built) {
  std::vector<std::pair<std::string, std::string>> kv;
  switch (cfg.problem) {
    case ProblemKind::QuadBilinear: push(kv, "problem", "quad-bilinear"); break;
    case ProblemKind::MatrixGame: push(kv, "problem", "matrix-game"); break;
    case ProblemKind::BallGame: push(kv, "problem", "ball-game"); break;
  }
  switch (cfg.algorithm) {
    case AlgorithmKind::SpFw: push(kv, "algorithm", "spfw"); break;
    case AlgorithmKind::SpAfw: push(kv, "algorithm", "spafw"); break;
    case AlgorithmKind::SpPfw: push(kv, "algorithm", "sppfw"); break;
    case AlgorithmKind::FictitiousPlay: push(kv, "algorithm", "fp"); break;
  }
  push(kv, "rule", built.rule.name());
  if (cfg.problem == ProblemKind::MatrixGame) {
    push(kv, "rows", std::to_string(cfg.explicit_rows ? cfg.explicit_rows : cfg.rows));
    push(kv, "cols", std::to_string(cfg.explicit_cols ? cfg.explicit_cols : cfg.cols));
  } else {
    push(kv, "dimension", std::to_string(cfg.dimension));
  }
  if (cfg.problem == ProblemKind::QuadBilinear) {
    push_num(kv, "mu", cfg.mu);
    push(kv, "saddle-mode", cfg.saddle_mode == SaddleMode::Interior ? "interior" : "vertex");
  }
  if (cfg.problem == ProblemKind::BallGame) push_num(kv, "radius", cfg.radius);
  push_num(kv, "matrix-scale", cfg.matrix_scale);
  push(kv, "seed", std::to_string(cfg.seed));
  push_num(kv, "eps", cfg.eps);
  push(kv, "max-iters", std::to_string(cfg.max_iters));

  const ProblemConstants& c = built.constants;
  push_num(kv, "L", c.lip.L);
  push_num(kv, "L_XX", c.lip.L_XX);
  push_num(kv, "L_XY", c.lip.L_XY);
  push_num(kv, "L_YX", c.lip.L_YX);
  push_num(kv, "L_YY", c.lip.L_YY);
  push_num(kv, "D_X", c.D_X);
  push_num(kv, "D_Y", c.D_Y);
  if (c.mu_X > 0) push_num(kv, "mu_X", c.mu_X);
  if (c.mu_Y > 0) push_num(kv, "mu_Y", c.mu_Y);
  if (c.C > 0) push_num(kv, "C", c.C);
  if (c.C_partial > 0) push_num(kv, "C_partial", c.C_partial);
  push_opt(kv, "delta_X", c.delta_X);
  push_opt(kv, "delta_Y", c.delta_Y);
  push_opt(kv, "delta_A", c.delta_A);
  push_opt(kv, "delta_B", c.delta_B);
  push_opt(kv, "delta_mu", c.delta_mu);
  push_opt(kv, "nu", c.nu);
  push_opt(kv, "rho", c.rho);
  push_opt(kv, "P_L_bound", c.P_L_bound);
  push_opt(kv, "M_XY_bound", c.M_XY_bound);
  push_opt(kv, "M_YX_bound", c.M_YX_bound);
  push_opt(kv, "C_tilde", c.C_tilde);
  push_opt(kv, "beta", c.beta);
  push_opt(kv, "delta", c.delta);
  push_opt(kv, "C_delta", c.C_delta);
  push_opt(kv, "rho_ball", c.rho_ball);

  if (built.objective->known_saddle()) {
    const double w0 = merit_w(*built.objective, built.start);
    push_num(kv, "w0", w0);
    if (c.nu && c.C > 0) {
      if (const auto cs = sublinear_constant(*c.nu, w0, c.C)) push_num(kv, "C_sub", *cs);
    }
  }
  if (built.objective->has_best_responses())
    push_num(kv, "h0", suboptimality_h(*built.objective, built.start));
  return kv;
}

RunOutcome execute_run(const RunConfig& cfg, std::ostream& out) {
  const BuiltProblem built = build_problem(cfg);
  write_trace_header(out, header_entries(cfg, built));
  RunOutcome outcome;
  double last_gap = std::numeric_limits<double>::quiet_NaN();
  const SolverTrace trace = run_built(
      built, cfg,
      [&](const IterationRecord& rec, const PointPair&) {
        write_trace_row(out, rec);
        last_gap = rec.gaps.g_fw;
      },
      /*keep_records=*/false);
  outcome.reason = trace.reason;
  outcome.iterations = trace.iterations;
  outcome.final_gap = last_gap;
  return outcome;
}

int run_exit_code(const RunOutcome& outcome) {
  switch (outcome.reason) {
    case StopReason::Converged: return 0;
    case StopReason::IterationBudget: return 2;
    case StopReason::NumericalFailure: return 1;
  }
  return 1;
}

}  // namespace spfw
