// SPDX-License-Identifier: Apache-2.0
#pragma once

// CSV and JSON serialization of traces, suite results and profile curves.
//
// Results CSV columns, in this order:
//   instance,solver,n,m,d_ofv,EB,NB,NB_status,it,time,status,error
// d_ofv, EB and NB are θ⁺ values (upper bounds on α(G)); empty cells mark
// values that were not produced.

#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dnn/bench.hpp"

namespace dnn::io {

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string fmt_opt(const std::optional<double>& v) { return v ? fmt_double(*v) : std::string(); }

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

/// Splits one CSV record; handles quoted fields with doubled quotes.
inline std::vector<std::string> split_csv_line(std::string_view line, std::size_t lineno) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          fields.back() += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c != '\r') {
      fields.back() += c;
    }
  }
  if (quoted) throw ParseError(lineno, "unterminated quoted field");
  return fields;
}

// ---------------------------------------------------------------------------
// Trace

inline constexpr std::string_view kTraceHeader = "iter,dual_ofv,r_P,r_D,r_PP,r_CS,r_PD,r_CZ,sigma";

inline void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows) {
  out << kTraceHeader << '\n';
  for (const auto& t : rows) {
    const Residuals& r = t.residuals;
    out << t.iter << ',' << fmt_double(t.dual_ofv) << ',' << fmt_double(r.r_p) << ',' << fmt_double(r.r_d)
        << ',' << fmt_double(r.r_pp) << ',' << fmt_double(r.r_cs) << ',' << fmt_opt(r.r_pd) << ','
        << fmt_opt(r.r_cz) << ',' << fmt_double(t.sigma) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Suite results

inline constexpr std::string_view kResultsHeader = "instance,solver,n,m,d_ofv,EB,NB,NB_status,it,time,status,error";

inline void write_results_csv(std::ostream& out, const std::vector<SuiteRow>& rows) {
  out << kResultsHeader << '\n';
  for (const auto& r : rows) {
    out << csv_field(r.instance) << ',' << method_name(r.solver) << ',' << r.n << ',' << r.m << ','
        << fmt_opt(r.theta) << ',' << fmt_opt(r.eb) << ',' << fmt_opt(r.nb) << ',' << r.nb_status << ','
        << r.iterations << ',' << fmt_double(r.elapsed_s) << ',' << r.status << ',' << csv_field(r.error)
        << '\n';
  }
}

namespace detail {

inline double to_double(const std::string& s, std::size_t lineno) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw ParseError(lineno, "bad number '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw ParseError(lineno, "bad number '" + s + "'");
  }
}

inline std::optional<double> to_opt(const std::string& s, std::size_t lineno) {
  if (s.empty()) return std::nullopt;
  return to_double(s, lineno);
}

}  // namespace detail

inline std::vector<SuiteRow> read_results_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line)) throw ParseError(lineno, "empty results file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kResultsHeader) throw ParseError(lineno, "unexpected results header");
  std::vector<SuiteRow> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line, lineno);
    if (f.size() != 12) throw ParseError(lineno, "expected 12 fields");
    SuiteRow r;
    r.instance = f[0];
    const auto m = parse_method(f[1]);
    if (!m) throw ParseError(lineno, "unknown solver '" + f[1] + "'");
    r.solver = *m;
    r.n = static_cast<int>(dnn::detail::parse_int(f[2], lineno));
    r.m = static_cast<std::size_t>(dnn::detail::parse_int(f[3], lineno));
    r.theta = detail::to_opt(f[4], lineno);
    r.eb = detail::to_opt(f[5], lineno);
    r.nb = detail::to_opt(f[6], lineno);
    r.nb_status = f[7];
    r.iterations = static_cast<std::size_t>(dnn::detail::parse_int(f[8], lineno));
    r.elapsed_s = detail::to_double(f[9], lineno);
    r.status = f[10];
    r.error = f[11];
    rows.push_back(std::move(r));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Profiles

inline void write_profile_csv(std::ostream& out, const std::vector<ProfileCurve>& curves) {
  out << "solver,tau,rho\n";
  for (const auto& c : curves)
    for (const auto& [tau, rho] : c.steps)
      out << csv_field(c.solver) << ',' << fmt_double(tau) << ',' << fmt_double(rho) << '\n';
}

// ---------------------------------------------------------------------------
// JSON

using nlohmann::json;

inline json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

inline json to_json(const Residuals& r) {
  return json{{"r_P", r.r_p}, {"r_D", r.r_d},           {"r_PP", r.r_pp},        {"r_CS", r.r_cs},
              {"r_PD", opt_json(r.r_pd)}, {"r_CZ", opt_json(r.r_cz)}, {"delta", r.delta}};
}

inline json to_json(const SolveReport& rep, bool with_trace) {
  json j{{"solver", method_name(rep.method)},
         {"dual_ofv", rep.dual_ofv},
         {"residuals", to_json(rep.residuals)},
         {"iterations", rep.iterations},
         {"elapsed_s", rep.elapsed_s},
         {"status", status_name(rep.status)},
         {"sigma", rep.state.sigma},
         {"loop_decompositions", rep.loop_spectral.decompositions},
         {"loop_eigenvalue_only", rep.loop_spectral.eigenvalue_only}};
  if (rep.state.V) j["factor_rank"] = rep.state.V->rank();
  if (with_trace) {
    json t = json::array();
    for (const auto& row : rep.trace)
      t.push_back({{"iter", row.iter}, {"dual_ofv", row.dual_ofv}, {"residuals", to_json(row.residuals)},
                   {"sigma", row.sigma}});
    j["trace"] = std::move(t);
  }
  return j;
}

inline json to_json(const BoundResult& b) {
  json j{{"kind", bound_kind_name(b.kind)}, {"value", opt_json(b.value)}};
  j["failure"] = b.failure ? json(failure_name(*b.failure)) : json(nullptr);
  j["feasible_triple"] = b.feasible_triple.has_value();
  return j;
}

inline json to_json(const SuiteRow& r) {
  return json{{"instance", r.instance}, {"solver", method_name(r.solver)}, {"n", r.n},
              {"m", r.m},               {"d_ofv", opt_json(r.theta)},     {"EB", opt_json(r.eb)},
              {"NB", opt_json(r.nb)},   {"NB_status", r.nb_status},       {"it", r.iterations},
              {"time", r.elapsed_s},    {"status", r.status},             {"error", r.error}};
}

inline json to_json(const std::vector<ProfileCurve>& curves) {
  json j = json::array();
  for (const auto& c : curves) {
    json steps = json::array();
    for (const auto& [tau, rho] : c.steps) steps.push_back({{"tau", tau}, {"rho", rho}});
    j.push_back({{"solver", c.solver}, {"steps", std::move(steps)}});
  }
  return j;
}

}  // namespace dnn::io
