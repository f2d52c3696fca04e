#include "dmvr/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace dmvr {

namespace {

Graph from_adjacency(int n, std::vector<std::vector<std::int32_t>> adj) {
    Graph g;
    g.n = n;
    g.offsets.resize(n + 1, 0);
    for (int i = 0; i < n; ++i) {
        std::sort(adj[i].begin(), adj[i].end());
        g.offsets[i + 1] = g.offsets[i] + static_cast<std::int32_t>(adj[i].size());
    }
    g.neighbors.reserve(g.offsets[n]);
    for (int i = 0; i < n; ++i)
        g.neighbors.insert(g.neighbors.end(), adj[i].begin(), adj[i].end());
    return g;
}

}  // namespace

Graph build_complete(int n) {
    if (n < 2) throw std::invalid_argument("complete graph requires n >= 2");
    std::vector<std::vector<std::int32_t>> adj(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (j != i) adj[i].push_back(j);
    return from_adjacency(n, std::move(adj));
}

Graph build_ring(int n) {
    if (n < 3) throw std::invalid_argument("ring requires n >= 3");
    std::vector<std::vector<std::int32_t>> adj(n);
    for (int i = 0; i < n; ++i) {
        adj[i].push_back((i + 1) % n);
        adj[i].push_back((i + n - 1) % n);
    }
    return from_adjacency(n, std::move(adj));
}

Graph build_torus(int rows, int cols) {
    if (rows < 3 || cols < 3)
        throw std::invalid_argument("torus requires rows >= 3 and cols >= 3");
    const int n = rows * cols;
    std::vector<std::vector<std::int32_t>> adj(n);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const int id = r * cols + c;
            adj[id].push_back(((r + 1) % rows) * cols + c);
            adj[id].push_back(((r + rows - 1) % rows) * cols + c);
            adj[id].push_back(r * cols + (c + 1) % cols);
            adj[id].push_back(r * cols + (c + cols - 1) % cols);
        }
    }
    return from_adjacency(n, std::move(adj));
}

Graph from_edge_list(int n, std::span<const std::pair<int, int>> edges) {
    if (n < 1) throw std::invalid_argument("node count must be positive");
    std::set<std::pair<int, int>> seen;
    std::vector<std::vector<std::int32_t>> adj(n);
    for (const auto& [u, v] : edges) {
        if (u < 0 || u >= n || v < 0 || v >= n)
            throw std::invalid_argument("edge endpoint out of range");
        if (u == v) throw std::invalid_argument("self-loop edge");
        const auto key = std::minmax(u, v);
        if (!seen.insert(key).second) continue;
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    Graph g = from_adjacency(n, std::move(adj));
    if (!is_connected(g)) throw std::invalid_argument("graph is not connected");
    return g;
}

Graph load_edge_list(std::istream& in) {
    std::string line;
    int n = -1;
    std::vector<std::pair<int, int>> edges;
    while (std::getline(in, line)) {
        const auto pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '#') continue;
        std::istringstream ls(line);
        if (n < 0) {
            std::string tag;
            ls >> tag >> n;
            if (tag != "n" || !ls || n < 1)
                throw std::invalid_argument("edge list must start with 'n <count>'");
        } else {
            int u, v;
            if (!(ls >> u >> v)) throw std::invalid_argument("malformed edge line: " + line);
            edges.emplace_back(u, v);
        }
    }
    if (n < 0) throw std::invalid_argument("empty edge-list input");
    return from_edge_list(n, edges);
}

Graph load_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open edge-list file: " + path);
    return load_edge_list(in);
}

bool is_connected(const Graph& g) {
    if (g.n == 0) return false;
    std::vector<char> seen(g.n, 0);
    std::vector<int> stack = {0};
    seen[0] = 1;
    int visited = 1;
    while (!stack.empty()) {
        const int i = stack.back();
        stack.pop_back();
        for (int j : g.adjacency(i)) {
            if (!seen[j]) {
                seen[j] = 1;
                ++visited;
                stack.push_back(j);
            }
        }
    }
    return visited == g.n;
}

}  // namespace dmvr
