#ifndef SPFW_TRACE_HPP
#define SPFW_TRACE_HPP

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spfw/solver.hpp"

namespace spfw {

inline constexpr const char* kTraceColumns =
    "t,k_t,step_kind,gamma,gamma_max,gap_fw,gap_away,gap_pfw,w,h,active_x,active_y";

// 17 significant digits; round-trips through strtod bit-exactly and is
// locale-independent.
std::string format_g17(double v);

// One `# key=value` line per entry, then the column header.
void write_trace_header(std::ostream& out,
                        const std::vector<std::pair<std::string, std::string>>& kv);
void write_trace_row(std::ostream& out, const IterationRecord& rec);
void write_trace(std::ostream& out, const SolverTrace& trace,
                 const std::vector<std::pair<std::string, std::string>>& kv);

struct ParsedTrace {
  std::map<std::string, std::string> header;
  struct Row {
    long t = 0;
    long k_t = 0;
    std::string step_kind;
    double gamma = 0.0, gamma_max = 0.0;
    double gap_fw = 0.0;
    std::optional<double> gap_away, gap_pfw, w, h;
    std::optional<long> active_x, active_y;
  };
  std::vector<Row> rows;
};

ParsedTrace read_trace(std::istream& in);

// Least-squares decay fits over the tail half of a trace: the slope of
// log w against k(t), compared with log(1 - rho) when the header carries a
// rate, and the log-log exponent of h against t.
struct RateFitReport {
  std::size_t rows_w = 0, rows_h = 0;
  std::optional<double> slope_log_w_per_k;
  std::optional<double> theory_log_one_minus_rho;
  std::optional<bool> geometric_bound_met;  // fitted decay at least as fast
  std::optional<double> exponent_h_vs_t;
};

RateFitReport ratefit(const ParsedTrace& trace);

}  // namespace spfw

#endif  // SPFW_TRACE_HPP
