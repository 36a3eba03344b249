#include "jmbell/hypergraph.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "jmbell/errors.hpp"

namespace jmbell {

std::string JmStructure::label(std::size_t vertex) const {
    if (vertex < labels.size() && !labels[vertex].empty())
        return labels[vertex];
    return std::to_string(vertex + 1);
}

JmStructure JmStructure::with_vertices(std::size_t count,
                                       std::vector<std::vector<std::size_t>> edges) {
    JmStructure s;
    s.vertex_count = count;
    s.edges = std::move(edges);
    return s;
}

std::string to_string(IssueKind kind) {
    switch (kind) {
    case IssueKind::DuplicateEdge:
        return "DuplicateEdge";
    case IssueKind::NonAntichain:
        return "NonAntichain";
    case IssueKind::UnknownVertex:
        return "UnknownVertex";
    }
    return "?";
}

namespace {

std::vector<std::size_t> normalized(std::vector<std::size_t> edge) {
    std::sort(edge.begin(), edge.end());
    edge.erase(std::unique(edge.begin(), edge.end()), edge.end());
    return edge;
}

std::string format_edge(const JmStructure &s, const std::vector<std::size_t> &edge) {
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < edge.size(); ++i) {
        if (i)
            os << ',';
        os << s.label(edge[i]);
    }
    os << '}';
    return os.str();
}

bool subset_of(const std::vector<std::size_t> &a, const std::vector<std::size_t> &b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::vector<VertexSet> edge_masks(const JmStructure &s) {
    std::vector<VertexSet> masks;
    masks.reserve(s.edges.size());
    for (const auto &e : s.edges)
        masks.push_back(to_mask(e));
    return masks;
}

bool compatible_in(const std::vector<VertexSet> &masks, VertexSet set) {
    if (std::popcount(set) <= 1)
        return true;
    return std::any_of(masks.begin(), masks.end(),
                       [set](VertexSet e) { return (set & ~e) == 0; });
}

} // namespace

ValidationReport validate(const JmStructure &s) {
    ValidationReport report;
    std::vector<std::vector<std::size_t>> edges;
    edges.reserve(s.edges.size());
    for (const auto &e : s.edges)
        edges.push_back(normalized(e));

    for (std::size_t i = 0; i < edges.size(); ++i) {
        for (std::size_t v : edges[i]) {
            if (v >= s.vertex_count || v >= kMaxVertices) {
                report.issues.push_back({IssueKind::UnknownVertex, i, std::nullopt,
                                         "edge " + format_edge(s, edges[i]) +
                                             " references unknown vertex " + s.label(v)});
                break;
            }
        }
    }
    for (std::size_t i = 0; i < edges.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (edges[i] == edges[j]) {
                report.issues.push_back({IssueKind::DuplicateEdge, i, j,
                                         "edge " + format_edge(s, edges[i]) +
                                             " is listed more than once"});
                break;
            }
        }
    }
    for (std::size_t i = 0; i < edges.size(); ++i) {
        for (std::size_t j = 0; j < edges.size(); ++j) {
            if (i == j || edges[i] == edges[j])
                continue;
            if (subset_of(edges[i], edges[j])) {
                report.issues.push_back({IssueKind::NonAntichain, i, j,
                                         "edge " + format_edge(s, edges[i]) + " is contained in " +
                                             format_edge(s, edges[j])});
                break;
            }
        }
    }
    return report;
}

void require_valid(const JmStructure &s) {
    const auto report = validate(s);
    if (!report.valid())
        throw InvalidStructure(to_string(report.issues.front().kind) + ": " +
                               report.issues.front().message);
}

VertexSet to_mask(const std::vector<std::size_t> &members) {
    VertexSet m = 0;
    for (std::size_t v : members) {
        if (v >= kMaxVertices)
            throw UnknownVertex("vertex index " + std::to_string(v + 1) + " exceeds mask width");
        m |= VertexSet{1} << v;
    }
    return m;
}

std::vector<std::size_t> to_members(VertexSet set) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; set; ++i, set >>= 1)
        if (set & 1u)
            out.push_back(i);
    return out;
}

std::string format_set(const std::vector<std::size_t> &members) {
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (i)
            os << ',';
        os << members[i] + 1;
    }
    os << '}';
    return os.str();
}

bool is_compatible_set(const JmStructure &s, VertexSet set) {
    if (s.vertex_count < kMaxVertices && (set >> s.vertex_count) != 0)
        throw UnknownVertex("set " + format_set(to_members(set)) + " is not within the " +
                            std::to_string(s.vertex_count) + " vertices");
    return compatible_in(edge_masks(s), set);
}

bool is_compatible_set(const JmStructure &s, const std::vector<std::size_t> &members) {
    return is_compatible_set(s, to_mask(members));
}

bool is_nontrivial(const JmStructure &s) {
    // Some subset is incompatible iff the full vertex set is.
    if (s.vertex_count < 2)
        return false;
    const VertexSet all = s.vertex_count >= kMaxVertices ? ~VertexSet{0}
                                                          : (VertexSet{1} << s.vertex_count) - 1;
    return !compatible_in(edge_masks(s), all);
}

std::vector<MinimalIncompatibleSet> minimal_incompatible_sets(const JmStructure &s,
                                                              std::size_t enumeration_limit) {
    if (s.vertex_count > std::min(enumeration_limit, kMaxVertices - 1))
        throw TooManyVertices(std::to_string(s.vertex_count) +
                              " vertices exceed the enumeration limit of " +
                              std::to_string(enumeration_limit));
    const auto masks = edge_masks(s);
    const VertexSet end = VertexSet{1} << s.vertex_count;

    std::vector<MinimalIncompatibleSet> found;
    for (VertexSet set = 0; set < end; ++set) {
        if (std::popcount(set) < 2 || compatible_in(masks, set))
            continue;
        bool minimal = true;
        for (VertexSet rest = set; rest && minimal; rest &= rest - 1) {
            const VertexSet low = rest & (~rest + 1);
            minimal = compatible_in(masks, set & ~low);
        }
        if (minimal)
            found.push_back({to_members(set)});
    }
    std::sort(found.begin(), found.end(), [](const auto &a, const auto &b) {
        if (a.size() != b.size())
            return a.size() < b.size();
        return a.members < b.members;
    });
    return found;
}

} // namespace jmbell
