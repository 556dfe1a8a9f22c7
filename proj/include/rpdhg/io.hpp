// Copyright 2026 The rpdhg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Text formats.
//
// Instance file:
//   m1 m2 nnz
//   row col value        (nnz lines, 1-based indices)
//   b_1 ... b_m1         (any line layout)
//   c_1 ... c_m2
// Integer-valued entries written without a decimal point select exact-integer
// mode for A.
//
// Flow generator file (nodes are 1-based):
//   n_nodes n_arcs
//   tail head cost       (n_arcs lines)
//   supply_1 ... supply_n
//   [drop_last_row 0|1]
//   [cost_bound H]
// Lines starting with '#' are ignored in both formats.

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <regex>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rpdhg/errors.hpp"
#include "rpdhg/lp_model.hpp"
#include "rpdhg/pdhg_solver.hpp"
#include "rpdhg/sparse_matrix.hpp"
#include "rpdhg/tu_toolkit.hpp"

namespace rpdhg::io {

struct Token {
  std::string text;
  int line = 0;
};

namespace internal {

inline std::vector<std::vector<Token>> tokenize_lines(std::istream& in) {
  std::vector<std::vector<Token>> lines;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::vector<Token> tokens;
    std::string word;
    while (ss >> word) tokens.push_back({word, number});
    if (!tokens.empty()) lines.push_back(std::move(tokens));
  }
  return lines;
}

inline bool is_integer_literal(const std::string& s) {
  static const std::regex pattern(R"([+-]?[0-9]+)");
  return std::regex_match(s, pattern);
}

inline double parse_double(const Token& t) {
  const char* begin = t.text.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  require(end != begin && *end == '\0' && errno == 0 && std::isfinite(v), ErrorCode::kParse,
          "line " + std::to_string(t.line) + ": invalid number '" + t.text + "'");
  return v;
}

inline long long parse_integer(const Token& t, const char* what) {
  require(is_integer_literal(t.text), ErrorCode::kParse,
          "line " + std::to_string(t.line) + ": expected integer " + what + ", got '" + t.text + "'");
  return std::stoll(t.text);
}

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Formats a value so that it reads back identically and keeps its integer or
// float flavour.
inline std::string format_value(double v, bool as_integer) {
  if (as_integer && is_integral_value(v)) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.0f", v);
    return buf;
  }
  std::string s = format_double(v);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

}  // namespace internal

inline StandardFormLP parse_instance(std::istream& in) {
  const auto lines = internal::tokenize_lines(in);
  require(!lines.empty(), ErrorCode::kParse, "empty instance file");
  const auto& header = lines.front();
  require(header.size() == 3, ErrorCode::kParse,
          "line " + std::to_string(header.front().line) + ": header must be 'm1 m2 nnz'");
  const long long m1 = internal::parse_integer(header[0], "m1");
  const long long m2 = internal::parse_integer(header[1], "m2");
  const long long nnz = internal::parse_integer(header[2], "nnz");
  require(m1 >= 1 && m2 >= 1 && nnz >= 0, ErrorCode::kParse, "header dimensions must be positive");

  std::size_t total_tokens = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) total_tokens += lines[i].size();
  const auto expected = static_cast<std::size_t>(3 * nnz + m1 + m2);
  if (total_tokens != expected) {
    const long long rest = static_cast<long long>(total_tokens) - m1 - m2;
    if (rest >= 0 && rest % 3 == 0 && rest / 3 != nnz) {
      fail(ErrorCode::kParse, "nnz mismatch: header declares " + std::to_string(nnz) + " entries but found " +
                                  std::to_string(rest / 3));
    }
    fail(ErrorCode::kParse, "dimension inconsistency: expected " + std::to_string(expected) +
                                " values after the header, found " + std::to_string(total_tokens));
  }
  require(static_cast<long long>(lines.size()) - 1 >= nnz, ErrorCode::kParse,
          "nnz mismatch: header declares " + std::to_string(nnz) + " entries but found " +
              std::to_string(lines.size() - 1) + " lines");

  std::vector<Triplet> entries;
  bool float_literal = false;
  for (long long k = 0; k < nnz; ++k) {
    const auto& line = lines[static_cast<std::size_t>(1 + k)];
    require(line.size() == 3, ErrorCode::kParse,
            "line " + std::to_string(line.front().line) + ": matrix entry must be 'row col value'");
    const long long row = internal::parse_integer(line[0], "row index");
    const long long col = internal::parse_integer(line[1], "column index");
    require(row >= 1 && row <= m1 && col >= 1 && col <= m2, ErrorCode::kParse,
            "line " + std::to_string(line.front().line) + ": index out of range");
    const double value = internal::parse_double(line[2]);
    float_literal = float_literal || !internal::is_integer_literal(line[2].text);
    entries.push_back({static_cast<int>(row - 1), static_cast<int>(col - 1), value});
  }
  std::vector<Token> rest;
  for (std::size_t i = static_cast<std::size_t>(1 + nnz); i < lines.size(); ++i) {
    rest.insert(rest.end(), lines[i].begin(), lines[i].end());
  }
  Eigen::VectorXd b(m1);
  Eigen::VectorXd c(m2);
  for (long long i = 0; i < m1; ++i) b[i] = internal::parse_double(rest[static_cast<std::size_t>(i)]);
  for (long long j = 0; j < m2; ++j) c[j] = internal::parse_double(rest[static_cast<std::size_t>(m1 + j)]);

  SparseMatrix a;
  try {
    a = SparseMatrix::from_triplets(static_cast<int>(m1), static_cast<int>(m2), std::move(entries), float_literal);
  } catch (const Error& e) {
    fail(ErrorCode::kParse, e.what());
  }
  return StandardFormLP(std::move(a), std::move(b), std::move(c));
}

inline StandardFormLP parse_instance(const std::string& text) {
  std::istringstream in(text);
  return parse_instance(in);
}

inline StandardFormLP load_instance(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::kIo, "cannot open instance file '" + path + "'");
  return parse_instance(in);
}

inline void write_instance(std::ostream& out, const StandardFormLP& lp) {
  const auto triplets = lp.A().triplets();
  out << lp.num_constraints() << ' ' << lp.num_variables() << ' ' << triplets.size() << '\n';
  const bool int_a = lp.A().is_exact_integer();
  for (const Triplet& t : triplets) {
    out << t.row + 1 << ' ' << t.col + 1 << ' ' << internal::format_value(t.value, int_a) << '\n';
  }
  for (Eigen::Index i = 0; i < lp.b().size(); ++i) {
    out << (i ? " " : "") << internal::format_value(lp.b()[i], true);
  }
  out << '\n';
  for (Eigen::Index j = 0; j < lp.c().size(); ++j) {
    out << (j ? " " : "") << internal::format_value(lp.c()[j], true);
  }
  out << '\n';
}

inline std::string format_instance(const StandardFormLP& lp) {
  std::ostringstream out;
  write_instance(out, lp);
  return out.str();
}

inline tu::FlowInstanceSpec parse_flow_spec(std::istream& in) {
  const auto lines = internal::tokenize_lines(in);
  require(!lines.empty(), ErrorCode::kParse, "empty generator spec");
  require(lines[0].size() == 2, ErrorCode::kParse, "line " + std::to_string(lines[0][0].line) +
                                                       ": header must be 'n_nodes n_arcs'");
  tu::FlowInstanceSpec spec;
  spec.num_nodes = static_cast<int>(internal::parse_integer(lines[0][0], "node count"));
  const long long n_arcs = internal::parse_integer(lines[0][1], "arc count");
  require(spec.num_nodes >= 2 && n_arcs >= 1, ErrorCode::kParse, "generator spec needs >= 2 nodes and >= 1 arc");
  require(static_cast<long long>(lines.size()) > n_arcs, ErrorCode::kParse, "generator spec is missing arc lines");
  for (long long a = 0; a < n_arcs; ++a) {
    const auto& line = lines[static_cast<std::size_t>(1 + a)];
    require(line.size() == 3, ErrorCode::kParse,
            "line " + std::to_string(line.front().line) + ": arc must be 'tail head cost'");
    const auto tail = internal::parse_integer(line[0], "tail");
    const auto head = internal::parse_integer(line[1], "head");
    require(tail >= 1 && tail <= spec.num_nodes && head >= 1 && head <= spec.num_nodes, ErrorCode::kParse,
            "line " + std::to_string(line.front().line) + ": node index out of range");
    spec.arcs.push_back({static_cast<int>(tail - 1), static_cast<int>(head - 1)});
    spec.costs.push_back(static_cast<double>(internal::parse_integer(line[2], "cost")));
  }
  std::size_t li = static_cast<std::size_t>(1 + n_arcs);
  std::vector<Token> values;
  for (; li < lines.size(); ++li) {
    if (!internal::is_integer_literal(lines[li][0].text)) break;
    values.insert(values.end(), lines[li].begin(), lines[li].end());
  }
  require(static_cast<int>(values.size()) == spec.num_nodes, ErrorCode::kParse,
          "expected " + std::to_string(spec.num_nodes) + " supplies, found " + std::to_string(values.size()));
  for (const Token& t : values) spec.supplies.push_back(static_cast<double>(internal::parse_integer(t, "supply")));
  for (; li < lines.size(); ++li) {
    const auto& line = lines[li];
    require(line.size() == 2, ErrorCode::kParse,
            "line " + std::to_string(line.front().line) + ": expected 'key value'");
    if (line[0].text == "drop_last_row") {
      spec.drop_last_row = internal::parse_integer(line[1], "flag") != 0;
    } else if (line[0].text == "cost_bound") {
      spec.cost_bound = static_cast<int>(internal::parse_integer(line[1], "cost bound"));
    } else {
      fail(ErrorCode::kParse, "line " + std::to_string(line.front().line) + ": unknown key '" + line[0].text + "'");
    }
  }
  try {
    spec.validate();
  } catch (const Error& e) {
    fail(ErrorCode::kParse, e.what());
  }
  return spec;
}

inline tu::FlowInstanceSpec parse_flow_spec(const std::string& text) {
  std::istringstream in(text);
  return parse_flow_spec(in);
}

// ---------------------------------------------------------------------------
// Convergence CSV.

inline const std::vector<std::string>& convergence_csv_header() {
  static const std::vector<std::string> header = {
      "epoch",    "inner_iter_total", "tau_n",         "rho_ref",        "rho_at_restart",
      "kkt_norm", "dist_to_opt",      "theta_ball_ok", "tstar_bound_ok"};
  return header;
}

// Per-epoch verdicts filled in by the harness when an oracle is available.
struct EpochChecks {
  std::optional<bool> theta_ball_ok;
  std::optional<bool> tstar_bound_ok;
};

inline std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

inline std::vector<std::vector<std::string>> convergence_rows(const ConvergenceLog& log,
                                                              const std::vector<EpochChecks>& checks = {}) {
  const auto num = [](double v) { return std::isnan(v) ? std::string() : internal::format_double(v); };
  const auto flag = [](const std::optional<bool>& b) { return b ? std::string(*b ? "true" : "false") : std::string(); };
  std::vector<std::vector<std::string>> rows;
  for (std::size_t k = 0; k < log.epochs.size(); ++k) {
    const EpochRecord& e = log.epochs[k];
    const EpochChecks verdicts = k < checks.size() ? checks[k] : EpochChecks{};
    rows.push_back({std::to_string(e.epoch), std::to_string(e.inner_iter_total), std::to_string(e.tau),
                    num(e.rho_ref), num(e.rho_at_restart), num(e.kkt_norm),
                    e.distance_to_optimal ? internal::format_double(*e.distance_to_optimal) : std::string(),
                    flag(verdicts.theta_ball_ok), flag(verdicts.tstar_bound_ok)});
  }
  return rows;
}

inline void emit_convergence_csv(const ConvergenceLog& log, std::ostream& out,
                                 const std::vector<EpochChecks>& checks = {}) {
  require(!log.epochs.empty(), ErrorCode::kInvalidArgument, "convergence log has no epochs");
  const auto write_row = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_quote(row[i]);
    out << '\n';
  };
  write_row(convergence_csv_header());
  for (const auto& row : convergence_rows(log, checks)) write_row(row);
}

inline void emit_convergence_csv(const ConvergenceLog& log, const std::string& path,
                                 const std::vector<EpochChecks>& checks = {}) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), ErrorCode::kIo, "cannot write '" + path + "'");
  emit_convergence_csv(log, out, checks);
  out.flush();
  require(out.good(), ErrorCode::kIo, "write to '" + path + "' failed");
}

// RFC 4180 reader (quoted fields, doubled quotes, CRLF or LF).
inline std::vector<std::vector<std::string>> parse_csv(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  char ch = 0;
  while (in.get(ch)) {
    any = true;
    if (quoted) {
      if (ch == '"') {
        if (in.peek() == '"') {
          in.get(ch);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
      continue;
    }
    if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (ch == '\r') {
      continue;
    } else if (ch == '\n') {
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
      any = false;
    } else {
      field += ch;
    }
  }
  require(!quoted, ErrorCode::kParse, "unterminated quoted CSV field");
  if (any) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace rpdhg::io
