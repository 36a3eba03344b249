#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "jmbell/hypergraph.hpp"
#include "jmbell/stacking.hpp"
#include "jmbell/types.hpp"

namespace jmbell {

// ---------------------------------------------------------------------------
// Structure files.
//
//   {
//     "vertices": ["1", "2", "3"],
//     "maximal_compatible_sets": [["1", "2"], ["2", "3"], ["1", "3"]],
//     "q0_squared": 0.8333,            (optional)
//     "epsilon": "auto" | 0.2,         (optional)
//     "povms": [effect0, ...]          (optional, one per vertex)
//   }
//
// Vertex names may be strings or integers. An effect0 matrix is a list of
// rows; each entry is a real number or a [re, im] pair.

struct StructureInput {
    JmStructure structure;
    std::optional<double> q0_squared;
    std::optional<double> epsilon;
    std::optional<std::vector<HermitianOperator>> povms;
};

StructureInput parse_structure(const nlohmann::json &doc);
StructureInput parse_structure_text(const std::string &text);
StructureInput load_structure(const std::string &path);

// ---------------------------------------------------------------------------
// Realize reports.

struct MaterializeCheck {
    bool performed = false;
    std::string reason;          // why it was skipped
    double total_value = 0.0;
    double delta = 0.0;           // materialized minus weighted-sum total
    double max_table_delta = 0.0; // entry-wise, over pA, pB, p00
    bool operator==(const MaterializeCheck &) const = default;
};

/// Closed forms vs. direct trace for one N >= 3 block.
struct DiscrepancyNote {
    std::size_t block_id = 0;
    int N = 0;
    std::string worst_formula;
    double max_formula_delta = 0.0;
    bool at_cancelling_epsilon = true;
    double closed_form_value = 0.0;   // eta eps^2 (N q0^2 - (N-1))
    double unscaled_closed_form = 0.0; // eps^2 (N q0^2 - (N-1))
    double trace_value = 0.0;
    bool operator==(const DiscrepancyNote &) const = default;
};

struct SamplingSummary {
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
    double value = 0.0;
    bool operator==(const SamplingSummary &) const = default;
};

struct RealizeReport {
    std::vector<std::string> vertices;
    GlobalReport global;
    MaterializeCheck materialize;
    std::vector<DiscrepancyNote> discrepancies;
    std::optional<SamplingSummary> sampling;
    bool operator==(const RealizeReport &) const = default;
};

void to_json(nlohmann::json &j, const BlockContribution &c);
void from_json(const nlohmann::json &j, BlockContribution &c);
void to_json(nlohmann::json &j, const GlobalReport &r);
void from_json(const nlohmann::json &j, GlobalReport &r);
void to_json(nlohmann::json &j, const MaterializeCheck &m);
void from_json(const nlohmann::json &j, MaterializeCheck &m);
void to_json(nlohmann::json &j, const DiscrepancyNote &n);
void from_json(const nlohmann::json &j, DiscrepancyNote &n);
void to_json(nlohmann::json &j, const SamplingSummary &s);
void from_json(const nlohmann::json &j, SamplingSummary &s);
void to_json(nlohmann::json &j, const RealizeReport &r);
void from_json(const nlohmann::json &j, RealizeReport &r);

std::string emit_json(const RealizeReport &report);
RealizeReport parse_report(const std::string &text);
std::string emit_text(const RealizeReport &report);

} // namespace jmbell
