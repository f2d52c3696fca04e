#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dmvr/rng.hpp"

namespace dmvr {

/// Undirected connected interaction graph in CSR form. Node ids are
/// 0-based contiguous integers; neighbor lists are kept sorted so that
/// uniform index sampling is reproducible given the same random stream.
struct Graph {
    int n = 0;
    std::vector<std::int32_t> offsets;    // size n+1
    std::vector<std::int32_t> neighbors;  // concatenated sorted adjacency

    int degree(int i) const { return offsets[i + 1] - offsets[i]; }

    std::span<const std::int32_t> adjacency(int i) const {
        return {neighbors.data() + offsets[i],
                static_cast<std::size_t>(degree(i))};
    }

    std::size_t edge_count() const { return neighbors.size() / 2; }
};

Graph build_complete(int n);
Graph build_ring(int n);
Graph build_torus(int rows, int cols);

/// Builds from an explicit edge list; duplicate edges are dropped.
/// Throws std::invalid_argument on self-loops, out-of-range ids, or a
/// disconnected result.
Graph from_edge_list(int n, std::span<const std::pair<int, int>> edges);

/// Edge-list text format: first line "n <count>", then one "u v" pair per
/// line; lines starting with '#' are ignored.
Graph load_edge_list(std::istream& in);
Graph load_edge_list_file(const std::string& path);

bool is_connected(const Graph& g);

/// Uniform neighbor choice; consumes exactly one bounded-uniform draw.
inline int sample_neighbor(const Graph& g, int i, RandomStream& rng) {
    const auto adj = g.adjacency(i);
    return adj[rng.below(static_cast<std::uint32_t>(adj.size()))];
}

}  // namespace dmvr
