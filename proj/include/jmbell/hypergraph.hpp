#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace jmbell {

/// Bitmask over vertex indices; bit i is vertex i (0-based).
using VertexSet = std::uint32_t;

inline constexpr std::size_t kDefaultEnumerationLimit = 16;
inline constexpr std::size_t kMaxVertices = 32;

/// A joint measurability structure, encoded by its maximal compatible sets.
///
/// Vertices are 0..vertex_count-1 internally and 1-based in every report.
/// Downward closure is implicit: a set is compatible iff it is contained in
/// some edge. A vertex covered by no edge is compatible only with itself.
///
/// `labels` may extend past vertex_count; such entries name vertices that an
/// input edge referenced but that are not declared, so validation can report
/// them.
struct JmStructure {
    std::size_t vertex_count = 0;
    std::vector<std::string> labels;
    std::vector<std::vector<std::size_t>> edges;

    std::string label(std::size_t vertex) const;

    static JmStructure with_vertices(std::size_t count,
                                     std::vector<std::vector<std::size_t>> edges);
};

enum class IssueKind { DuplicateEdge, NonAntichain, UnknownVertex };

std::string to_string(IssueKind kind);

struct ValidationIssue {
    IssueKind kind;
    std::size_t edge;                      // index into JmStructure::edges
    std::optional<std::size_t> other_edge; // the containing / duplicated edge
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool valid() const { return issues.empty(); }
};

ValidationReport validate(const JmStructure &structure);

/// Throws InvalidStructure naming the first issue when `structure` is invalid.
void require_valid(const JmStructure &structure);

VertexSet to_mask(const std::vector<std::size_t> &members);
std::vector<std::size_t> to_members(VertexSet set);

/// Formats members 1-based as "{1,2,3}".
std::string format_set(const std::vector<std::size_t> &members);

bool is_compatible_set(const JmStructure &structure, VertexSet set);
bool is_compatible_set(const JmStructure &structure, const std::vector<std::size_t> &members);

bool is_nontrivial(const JmStructure &structure);

struct MinimalIncompatibleSet {
    std::vector<std::size_t> members; // ascending, 0-based

    std::size_t size() const { return members.size(); }
    VertexSet mask() const { return to_mask(members); }
    bool operator==(const MinimalIncompatibleSet &) const = default;
};

/// Every incompatible set whose (N-1)-subsets are all compatible, ordered by
/// size and then lexicographically by member indices.
std::vector<MinimalIncompatibleSet>
minimal_incompatible_sets(const JmStructure &structure,
                          std::size_t enumeration_limit = kDefaultEnumerationLimit);

} // namespace jmbell
