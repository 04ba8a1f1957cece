#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "lew/hitting.hpp"
#include "lew/identities.hpp"
#include "lew/lattice.hpp"
#include "lew/monte_carlo.hpp"
#include "lew/rmt.hpp"

// Machine-readable report envelope shared by the CLI and the test suites.
// Schema id "lew/1"; see schema/lew-report.schema.json.

namespace lew::report {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchemaId = "lew/1";

json envelope(const std::string& command, json config, bool with_timestamp);
void finish(json& report, bool pass);

json vertex_json(const VertexId& v);
json vertices_json(std::span<const VertexId> vs);

// {graph, sources, targets, n, zeta, determinant, condition_estimate, method}
json determinant_json(const DeterminantReport& rep, const std::string& graph_name);
json z_report_json(const std::string& name, const mc::ZReport& z);
json identity_json(const ident::IdentityCase& c);
json density_json(const rmt::DensityReport& rep);

// CSV cell with 17 significant digits.
std::string csv_number(double v);

// Graph spec file: {kind, M, N, rows: [{up,down,left,right}], boundary,
// custom_absorbing}; presets "uniform-strip", "uniform-cylinder".
WeightedDigraph graph_from_json(const json& spec);
WeightedDigraph graph_from_preset(const std::string& name, int M, int N);
json graph_to_json(const std::string& kind, int M, int N,
                   const std::vector<RowWeights>& rows);

}  // namespace lew::report
