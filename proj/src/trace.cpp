#include "spfw/trace.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace spfw {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string opt_field(const std::optional<double>& v) {
  return v ? format_g17(*v) : std::string();
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::optional<double> parse_opt(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::strtod(s.c_str(), nullptr);
}

// Slope of the least-squares line through (x_i, y_i).
std::optional<double> ls_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  if (n < 2) return std::nullopt;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0) return std::nullopt;
  return sxy / sxx;
}

}  // namespace

void write_trace_header(std::ostream& out,
                        const std::vector<std::pair<std::string, std::string>>& kv) {
  for (const auto& [k, v] : kv) out << "# " << k << "=" << v << "\n";
  out << kTraceColumns << "\n";
}

void write_trace_row(std::ostream& out, const IterationRecord& rec) {
  out << rec.t << ',' << rec.k_t << ',' << step_kind_name(rec.kind) << ','
      << format_g17(rec.gamma) << ',' << format_g17(rec.gamma_max) << ','
      << format_g17(rec.gaps.g_fw) << ',' << opt_field(rec.gaps.g_away) << ','
      << opt_field(rec.gaps.g_pfw) << ',' << opt_field(rec.gaps.w) << ','
      << opt_field(rec.gaps.h) << ',';
  if (rec.active_x) out << *rec.active_x;
  out << ',';
  if (rec.active_y) out << *rec.active_y;
  out << '\n';
}

void write_trace(std::ostream& out, const SolverTrace& trace,
                 const std::vector<std::pair<std::string, std::string>>& kv) {
  write_trace_header(out, kv);
  for (const auto& rec : trace.records) write_trace_row(out, rec);
}

ParsedTrace read_trace(std::istream& in) {
  ParsedTrace trace;
  std::string line;
  bool saw_columns = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = line.substr(1);
      const std::size_t start = body.find_first_not_of(' ');
      if (start == std::string::npos) continue;
      body = body.substr(start);
      const std::size_t eq = body.find('=');
      if (eq != std::string::npos) trace.header[body.substr(0, eq)] = body.substr(eq + 1);
      continue;
    }
    if (!saw_columns) {
      if (line != kTraceColumns)
        throw std::invalid_argument("read_trace: unexpected column header: " + line);
      saw_columns = true;
      continue;
    }
    const auto f = split_csv(line);
    if (f.size() != 12) throw std::invalid_argument("read_trace: malformed row: " + line);
    ParsedTrace::Row row;
    row.t = std::strtol(f[0].c_str(), nullptr, 10);
    row.k_t = std::strtol(f[1].c_str(), nullptr, 10);
    row.step_kind = f[2];
    row.gamma = std::strtod(f[3].c_str(), nullptr);
    row.gamma_max = std::strtod(f[4].c_str(), nullptr);
    row.gap_fw = std::strtod(f[5].c_str(), nullptr);
    row.gap_away = parse_opt(f[6]);
    row.gap_pfw = parse_opt(f[7]);
    row.w = parse_opt(f[8]);
    row.h = parse_opt(f[9]);
    if (!f[10].empty()) row.active_x = std::strtol(f[10].c_str(), nullptr, 10);
    if (!f[11].empty()) row.active_y = std::strtol(f[11].c_str(), nullptr, 10);
    trace.rows.push_back(row);
  }
  return trace;
}

RateFitReport ratefit(const ParsedTrace& trace) {
  const std::size_t n = trace.rows.size();
  if (n < 10) throw std::invalid_argument("ratefit: need at least 10 trace rows");
  const std::size_t tail_begin = n / 2;

  RateFitReport report;
  std::vector<double> ks, logw, logt, logh;
  for (std::size_t i = tail_begin; i < n; ++i) {
    const auto& row = trace.rows[i];
    if (row.w && *row.w > 0) {
      ks.push_back(static_cast<double>(row.k_t));
      logw.push_back(std::log(*row.w));
    }
    if (row.h && *row.h > 0 && row.t >= 1) {
      logt.push_back(std::log(static_cast<double>(row.t)));
      logh.push_back(std::log(*row.h));
    }
  }
  report.rows_w = ks.size();
  report.rows_h = logt.size();
  report.slope_log_w_per_k = ls_slope(ks, logw);
  report.exponent_h_vs_t = ls_slope(logt, logh);

  const auto it = trace.header.find("rho");
  if (it != trace.header.end()) {
    const double rho = std::strtod(it->second.c_str(), nullptr);
    if (rho > 0 && rho < 1) {
      report.theory_log_one_minus_rho = std::log1p(-rho);
      if (report.slope_log_w_per_k)
        report.geometric_bound_met =
            *report.slope_log_w_per_k <= *report.theory_log_one_minus_rho + 1e-12;
    }
  }
  return report;
}

}  // namespace spfw
