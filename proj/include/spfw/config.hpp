#ifndef SPFW_CONFIG_HPP
#define SPFW_CONFIG_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "spfw/constants.hpp"
#include "spfw/objectives.hpp"
#include "spfw/solver.hpp"

namespace spfw {

// Flat `key = value` text with `#` comments, one run per file.
using KeyValueMap = std::map<std::string, std::string>;
KeyValueMap parse_key_values(std::istream& in);
KeyValueMap parse_key_values_text(const std::string& text);
KeyValueMap parse_config_file(const std::string& path);

enum class ProblemKind { QuadBilinear, MatrixGame, BallGame };
enum class AlgorithmKind { SpFw, SpAfw, SpPfw, FictitiousPlay };
enum class StartMode { Origin, Complement };

// A fully validated run description. The seed determines the generated
// problem completely; incompatible combinations are rejected here.
struct RunConfig {
  ProblemKind problem = ProblemKind::QuadBilinear;
  std::size_t dimension = 2;
  std::size_t rows = 2, cols = 2;  // matrix game
  double mu = 1.0;
  double matrix_scale = 0.0;
  std::vector<double> explicit_matrix;  // row-major; overrides the seeded draw
  std::size_t explicit_rows = 0, explicit_cols = 0;
  SaddleMode saddle_mode = SaddleMode::Interior;
  double radius = 1.0;  // ball game
  AlgorithmKind algorithm = AlgorithmKind::SpFw;
  StepRule::Kind rule = StepRule::Kind::Universal;
  std::optional<double> nu_override, c_override, c_delta_override, c_tilde_override;
  StartMode start = StartMode::Origin;
  bool start_given = false;
  double eps = 1e-10;
  long max_iters = 1000;
  std::uint64_t seed = 0;
  std::string out;

  static RunConfig from(const KeyValueMap& kv);
};

// Problem, domain, rate constants, start point and step rule assembled from
// a run config. The objective is shared so checks can keep it alive.
struct BuiltProblem {
  std::shared_ptr<SaddleObjective> objective;
  ProductDomain domain;
  ProblemConstants constants;
  PointPair start;
  StepRule rule;
};

BuiltProblem build_problem(const RunConfig& cfg);

// Executes the configured run with the shared solver path. Streams rows to
// the observer when given; records are kept only when requested.
SolverTrace run_built(const BuiltProblem& built, const RunConfig& cfg,
                      IterationObserver observer = {}, bool keep_records = true);

struct RunOutcome {
  StopReason reason = StopReason::IterationBudget;
  long iterations = 0;
  double final_gap = 0.0;
};

// Full harness run: `# key=value` header (config echo plus every computed
// constant) followed by the CSV trace. Byte-deterministic for a fixed config.
RunOutcome execute_run(const RunConfig& cfg, std::ostream& out);

// Exit code contract: 0 converged, 2 iteration budget exhausted.
int run_exit_code(const RunOutcome& outcome);

// Header key=value pairs exactly as execute_run emits them.
std::vector<std::pair<std::string, std::string>> header_entries(const RunConfig& cfg,
                                                                const BuiltProblem& built);

}  // namespace spfw

#endif  // SPFW_CONFIG_HPP
