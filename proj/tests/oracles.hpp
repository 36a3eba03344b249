#pragma once

// Test-only helpers: random structures and brute-force oracles that do not
// share code paths with the library routines they check.

#include <algorithm>
#include <cstddef>
#include <random>
#include <vector>

#include "jmbell/hypergraph.hpp"

namespace testing {

/// Random valid structure: random subsets reduced to a duplicate-free antichain.
inline jmbell::JmStructure random_structure(std::mt19937 &rng, std::size_t v) {
    std::uniform_int_distribution<unsigned> mask_dist(1u, (1u << v) - 1u);
    std::uniform_int_distribution<int> count_dist(0, int(v) + 1);
    std::vector<unsigned> raw;
    for (int i = count_dist(rng); i > 0; --i)
        raw.push_back(mask_dist(rng));
    std::sort(raw.begin(), raw.end());
    raw.erase(std::unique(raw.begin(), raw.end()), raw.end());

    std::vector<std::vector<std::size_t>> edges;
    for (unsigned e : raw) {
        const bool dominated = std::any_of(raw.begin(), raw.end(), [e](unsigned f) {
            return f != e && (e & ~f) == 0;
        });
        if (dominated)
            continue;
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < v; ++i)
            if (e >> i & 1u)
                members.push_back(i);
        edges.push_back(members);
    }
    std::shuffle(edges.begin(), edges.end(), rng);
    return jmbell::JmStructure::with_vertices(v, edges);
}

/// Compatibility straight from the edge lists: empty and singletons are
/// compatible, otherwise some edge must contain every member.
inline bool oracle_compatible(const jmbell::JmStructure &j, const std::vector<std::size_t> &set) {
    if (set.size() <= 1)
        return true;
    for (const auto &e : j.edges) {
        const bool covers = std::all_of(set.begin(), set.end(), [&](std::size_t x) {
            return std::find(e.begin(), e.end(), x) != e.end();
        });
        if (covers)
            return true;
    }
    return false;
}

/// Definition of a minimal incompatible set, checked over ALL proper subsets.
inline std::vector<std::vector<std::size_t>> oracle_minimal_sets(const jmbell::JmStructure &j) {
    const std::size_t v = j.vertex_count;
    std::vector<std::vector<std::size_t>> out;
    for (unsigned s = 1; s < (1u << v); ++s) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < v; ++i)
            if (s >> i & 1u)
                members.push_back(i);
        if (members.size() < 2 || oracle_compatible(j, members))
            continue;
        bool minimal = true;
        for (unsigned sub = (s - 1) & s; minimal && sub != s; sub = (sub - 1) & s) {
            std::vector<std::size_t> part;
            for (std::size_t i = 0; i < v; ++i)
                if (sub >> i & 1u)
                    part.push_back(i);
            minimal = oracle_compatible(j, part);
            if (sub == 0)
                break;
        }
        if (minimal)
            out.push_back(members);
    }
    std::sort(out.begin(), out.end(), [](const auto &a, const auto &b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    return out;
}

} // namespace testing
