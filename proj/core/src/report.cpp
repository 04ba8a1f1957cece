#include "lew/report.hpp"

#include <chrono>
#include <cstdio>

namespace lew::report {

json envelope(const std::string& command, json config, bool with_timestamp) {
  json rep;
  rep["schema"] = kSchemaId;
  rep["command"] = command;
  rep["config"] = std::move(config);
  if (with_timestamp) {
    const auto now = std::chrono::system_clock::now();
    rep["timestamp"] =
        std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
  }
  rep["results"] = json::array();
  rep["pass"] = false;
  return rep;
}

void finish(json& report, bool pass) { report["pass"] = pass; }

json vertex_json(const VertexId& v) { return json::array({v.col, v.row}); }

json vertices_json(std::span<const VertexId> vs) {
  json arr = json::array();
  for (const VertexId& v : vs) arr.push_back(vertex_json(v));
  return arr;
}

namespace {

const char* method_name(HitMethod m) {
  switch (m) {
    case HitMethod::DirectSolve:
      return "direct_solve";
    case HitMethod::TwistedCylinder:
      return "twisted_cylinder";
    case HitMethod::WindowedStrip:
      return "windowed_strip";
  }
  return "unknown";
}

}  // namespace

json determinant_json(const DeterminantReport& rep, const std::string& graph_name) {
  json j;
  j["graph"] = graph_name;
  j["sources"] = vertices_json(rep.matrix.sources);
  j["targets"] = vertices_json(rep.matrix.targets);
  j["n"] = rep.matrix.sources.size();
  j["zeta"] = rep.matrix.twist ? rep.matrix.twist->zeta : 1;
  j["determinant"] = rep.value;
  j["condition_estimate"] = rep.condition_estimate;
  j["method"] = method_name(rep.matrix.method);
  return j;
}

json z_report_json(const std::string& name, const mc::ZReport& z) {
  json j;
  j["name"] = name;
  j["p_hat"] = z.p_hat;
  j["std_err"] = z.std_err;
  j["exact"] = z.exact;
  j["z"] = z.z;
  j["samples_used"] = z.samples_used;
  j["aborts"] = z.aborts;
  j["pass"] = z.pass;
  return j;
}

json identity_json(const ident::IdentityCase& c) {
  json j;
  j["name"] = c.name;
  j["lhs"] = json::array({c.lhs.real(), c.lhs.imag()});
  j["rhs"] = json::array({c.rhs.real(), c.rhs.imag()});
  j["rel_err"] = c.rel_err;
  j["tol"] = c.tol;
  j["pass"] = c.pass;
  if (c.skipped) j["skipped"] = true;
  return j;
}

json density_json(const rmt::DensityReport& rep) {
  json j;
  j["name"] = rep.name;
  j["n"] = rep.n;
  j["spreads"] = rep.spreads;
  j["sup_rel_errors"] = rep.sup_rel_errors;
  j["normalization"] = rep.normalization;
  j["monotone"] = rep.monotone;
  j["final_error"] = rep.final_error;
  j["pass"] = rep.pass;
  return j;
}

std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::vector<RowWeights> rows_from_json(const json& spec, int N) {
  std::vector<RowWeights> rows;
  if (spec.contains("rows")) {
    for (const auto& r : spec.at("rows")) {
      RowWeights w;
      w.up = r.value("up", 0.0);
      w.down = r.value("down", 0.0);
      w.left = r.value("left", 0.0);
      w.right = r.value("right", 0.0);
      rows.push_back(w);
    }
  } else {
    rows.assign(static_cast<size_t>(N), RowWeights{0.25, 0.25, 0.25, 0.25});
  }
  return rows;
}

BottomRule bottom_from_json(const json& spec) {
  const std::string b = spec.value("bottom", "reflect");
  if (b == "reflect") return BottomRule::Reflect;
  if (b == "redistribute") return BottomRule::Redistribute;
  if (b == "absorb") return BottomRule::Absorb;
  throw DomainError("unknown bottom rule: " + b);
}

}  // namespace

WeightedDigraph graph_from_json(const json& spec) {
  const std::string kind = spec.at("kind").get<std::string>();
  const int M = spec.value("M", 0);
  const int N = spec.value("N", 0);
  auto rows = rows_from_json(spec, N);
  const BottomRule bottom = bottom_from_json(spec);
  const std::string boundary = spec.value("boundary", "top");
  if (boundary == "custom") {
    if (kind != "grid") throw DomainError("custom boundary requires kind == grid");
    // materialise the table edges, then re-anchor the absorbing set
    WeightedDigraph base = WeightedDigraph::grid(M, N + 1, rows, bottom);
    std::vector<VertexId> absorbing;
    for (const auto& cv : spec.at("custom_absorbing")) {
      absorbing.push_back(VertexId{cv.at(0).get<int>(), cv.at(1).get<int>()});
    }
    return WeightedDigraph::finite(M, N + 1, base.edges(), absorbing);
  }
  if (boundary != "top") throw DomainError("boundary must be \"top\" or \"custom\"");
  if (kind == "strip") return WeightedDigraph::strip(M, N, rows, bottom);
  if (kind == "cylinder") return WeightedDigraph::cylinder(M, N, rows, bottom);
  if (kind == "grid") return WeightedDigraph::grid(M, N + 1, rows, bottom);
  throw DomainError("unknown graph kind: " + kind);
}

WeightedDigraph graph_from_preset(const std::string& name, int M, int N) {
  std::vector<RowWeights> rows(static_cast<size_t>(N), RowWeights{0.25, 0.25, 0.25, 0.25});
  if (name == "uniform-strip") return WeightedDigraph::strip(M, N, rows);
  if (name == "uniform-cylinder") return WeightedDigraph::cylinder(M, N, rows);
  if (name == "uniform-grid") return WeightedDigraph::grid(M, N + 1, rows);
  throw DomainError("unknown preset: " + name);
}

json graph_to_json(const std::string& kind, int M, int N,
                   const std::vector<RowWeights>& rows) {
  json j;
  j["kind"] = kind;
  j["M"] = M;
  j["N"] = N;
  json arr = json::array();
  for (const RowWeights& r : rows) {
    arr.push_back(json{{"up", r.up}, {"down", r.down}, {"left", r.left}, {"right", r.right}});
  }
  j["rows"] = arr;
  j["boundary"] = "top";
  return j;
}

}  // namespace lew::report
