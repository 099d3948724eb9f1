#pragma once

#include <string>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "geometry.hpp"

namespace helsteiner {

// Tree over terminal and junction vertices. Combined vertex indexing: the
// first terminal_count() indices are terminals, the rest are junctions in
// steiner_points order.
struct TreeNetwork {
    std::vector<Vec3> terminals;
    std::vector<Vec3> steiner_points;
    std::vector<std::pair<int, int>> edges;
    long topology_id = -1;

    int terminal_count() const { return static_cast<int>(terminals.size()); }
    int steiner_count() const { return static_cast<int>(steiner_points.size()); }
    int vertex_count() const { return terminal_count() + steiner_count(); }

    bool is_steiner(int v) const { return v >= terminal_count(); }

    const Vec3& vertex(int v) const {
        return is_steiner(v) ? steiner_points[static_cast<size_t>(v - terminal_count())]
                             : terminals[static_cast<size_t>(v)];
    }

    Vec3& vertex(int v) {
        return is_steiner(v) ? steiner_points[static_cast<size_t>(v - terminal_count())]
                             : terminals[static_cast<size_t>(v)];
    }
};

inline double edge_length(const TreeNetwork& net, const std::pair<int, int>& e) {
    return distance(net.vertex(e.first), net.vertex(e.second));
}

inline double total_length(const TreeNetwork& net) {
    double sum = 0.0;
    for (const auto& e : net.edges) sum += edge_length(net, e);
    return sum;
}

inline std::vector<std::vector<int>> adjacency_lists(const TreeNetwork& net) {
    std::vector<std::vector<int>> adj(static_cast<size_t>(net.vertex_count()));
    for (const auto& [u, v] : net.edges) {
        adj[static_cast<size_t>(u)].push_back(v);
        adj[static_cast<size_t>(v)].push_back(u);
    }
    return adj;
}

// Norm of the outgoing unit-vector sum at each junction vertex, in junction
// order. Zero norm is the local optimality condition for the junction.
inline std::vector<double> fermat_residuals(const TreeNetwork& net) {
    const auto adj = adjacency_lists(net);
    const int n = net.terminal_count();
    std::vector<double> out;
    out.reserve(static_cast<size_t>(net.steiner_count()));
    for (int s = 0; s < net.steiner_count(); ++s) {
        const int v = n + s;
        Vec3 sum{};
        for (int w : adj[static_cast<size_t>(v)]) {
            const Vec3 d = net.vertex(w) - net.vertex(v);
            const double len = norm(d);
            if (len == 0.0) {
                throw std::domain_error("fermat_residuals: zero-length edge at junction " +
                                        std::to_string(s));
            }
            sum += d / len;
        }
        out.push_back(norm(sum));
    }
    return out;
}

// Structural check for a full Steiner topology: every junction has degree 3,
// every terminal degree 1, and the edges form a single tree.
inline bool is_full_topology(const TreeNetwork& net) {
    const int nv = net.vertex_count();
    if (net.steiner_count() != net.terminal_count() - 2) return false;
    if (static_cast<int>(net.edges.size()) != nv - 1) return false;
    const auto adj = adjacency_lists(net);
    for (int v = 0; v < nv; ++v) {
        const int want = net.is_steiner(v) ? 3 : 1;
        if (static_cast<int>(adj[static_cast<size_t>(v)].size()) != want) return false;
    }
    std::vector<char> seen(static_cast<size_t>(nv), 0);
    std::vector<int> stack = {0};
    seen[0] = 1;
    int visited = 0;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        ++visited;
        for (int w : adj[static_cast<size_t>(v)]) {
            if (!seen[static_cast<size_t>(w)]) {
                seen[static_cast<size_t>(w)] = 1;
                stack.push_back(w);
            }
        }
    }
    return visited == nv;
}

}  // namespace helsteiner
