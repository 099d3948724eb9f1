#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "network.hpp"

namespace helsteiner {

constexpr int kDefaultOracleCap = 8;

// Euclidean minimum spanning tree length over the complete graph.
inline double mst_length(const std::vector<Vec3>& points) {
    const int n = static_cast<int>(points.size());
    if (n < 2) throw std::invalid_argument("mst_length: need at least 2 points");
    std::vector<char> in_tree(static_cast<size_t>(n), 0);
    std::vector<double> best(static_cast<size_t>(n), std::numeric_limits<double>::infinity());
    in_tree[0] = 1;
    for (int v = 1; v < n; ++v) best[static_cast<size_t>(v)] = distance(points[0], points[static_cast<size_t>(v)]);
    double total = 0.0;
    for (int added = 1; added < n; ++added) {
        int pick = -1;
        for (int v = 0; v < n; ++v) {
            if (in_tree[static_cast<size_t>(v)]) continue;
            if (pick < 0 || best[static_cast<size_t>(v)] < best[static_cast<size_t>(pick)]) pick = v;
        }
        total += best[static_cast<size_t>(pick)];
        in_tree[static_cast<size_t>(pick)] = 1;
        for (int v = 0; v < n; ++v) {
            if (in_tree[static_cast<size_t>(v)]) continue;
            best[static_cast<size_t>(v)] = std::min(
                best[static_cast<size_t>(v)],
                distance(points[static_cast<size_t>(pick)], points[static_cast<size_t>(v)]));
        }
    }
    return total;
}

// (2n-5)!! full topologies on n terminals.
inline long topology_count(int n) {
    if (n < 3) throw std::invalid_argument("topology_count: need n >= 3");
    long count = 1;
    for (int t = 4; t <= n; ++t) count *= 2 * t - 5;
    return count;
}

// Build the edge structure of one full topology by successive edge splitting:
// start from the 3-terminal star, then terminal t joins through a fresh
// junction spliced into the edge selected by t's digit of topology_id. The
// id is read least-significant digit first, radix 2t-3 at step t.
inline TreeNetwork build_topology(int n, long topology_id) {
    if (n < 3) throw std::invalid_argument("build_topology: need n >= 3");
    if (topology_id < 0 || topology_id >= topology_count(n)) {
        throw std::invalid_argument("build_topology: topology_id out of range");
    }
    TreeNetwork net;
    net.topology_id = topology_id;
    net.terminals.resize(static_cast<size_t>(n));
    net.steiner_points.resize(static_cast<size_t>(n - 2));
    net.edges = {{0, n}, {1, n}, {2, n}};
    long id = topology_id;
    for (int t = 3; t < n; ++t) {
        const long radix = 2 * t - 3;
        const long pick = id % radix;
        id /= radix;
        const int s = n + t - 2;
        const auto [u, v] = net.edges[static_cast<size_t>(pick)];
        net.edges[static_cast<size_t>(pick)] = {u, s};
        net.edges.emplace_back(s, v);
        net.edges.emplace_back(s, t);
    }
    return net;
}

inline std::vector<long> enumerate_full_topologies(int n, int n_cap = kDefaultOracleCap) {
    if (n < 3) throw std::invalid_argument("enumerate_full_topologies: need n >= 3");
    if (n > n_cap) {
        throw std::invalid_argument("enumerate_full_topologies: n exceeds cap " +
                                    std::to_string(n_cap));
    }
    std::vector<long> ids(static_cast<size_t>(topology_count(n)));
    for (size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<long>(i);
    return ids;
}

// Point minimizing summed distance to three given points: the vertex itself
// when its angle reaches 120 degrees, otherwise the interior isogonic point.
inline Vec3 fermat_point(const Vec3& a, const Vec3& b, const Vec3& c) {
    const double la = distance(b, c);
    const double lb = distance(a, c);
    const double lc = distance(a, b);
    if (lb == 0.0 || lc == 0.0) return a;
    if (la == 0.0) return b;
    auto angle_cos = [](double opposite, double s1, double s2) {
        return std::clamp((s1 * s1 + s2 * s2 - opposite * opposite) / (2.0 * s1 * s2), -1.0, 1.0);
    };
    const double cos_a = angle_cos(la, lb, lc);
    const double cos_b = angle_cos(lb, la, lc);
    const double cos_c = angle_cos(lc, la, lb);
    if (cos_a <= -0.5) return a;
    if (cos_b <= -0.5) return b;
    if (cos_c <= -0.5) return c;
    constexpr double third_pi = 1.047197551196597746154214461093167628;
    const double wa = la / std::sin(std::acos(cos_a) + third_pi);
    const double wb = lb / std::sin(std::acos(cos_b) + third_pi);
    const double wc = lc / std::sin(std::acos(cos_c) + third_pi);
    return (wa * a + wb * b + wc * c) / (wa + wb + wc);
}

struct RelaxOptions {
    double rel_length_tol = 1e-12;
    // When positive, convergence additionally requires every junction
    // residual below this.
    double residual_tol = 0.0;
    long max_sweeps = 100000;
};

struct RelaxOutcome {
    double length = 0.0;
    long sweeps = 0;
    bool converged = false;
};

namespace detail {

constexpr double kCoincidenceTol = 1e-12;
constexpr double kSeparationNudge = 1e-10;

// Single geometric-median update for one junction against its neighbors:
// closed form for degree 3, one Weiszfeld step otherwise. A junction landing
// on a neighbor is pushed a small step along the bisector of its remaining
// edges so unit vectors stay defined.
inline void update_junction(TreeNetwork& net, int vertex, const std::vector<int>& neighbors) {
    Vec3 target;
    if (neighbors.size() == 3) {
        target = fermat_point(net.vertex(neighbors[0]), net.vertex(neighbors[1]),
                              net.vertex(neighbors[2]));
    } else {
        const Vec3 x = net.vertex(vertex);
        Vec3 weighted{};
        double weight_sum = 0.0;
        for (int w : neighbors) {
            const double d = distance(x, net.vertex(w));
            if (d < kCoincidenceTol) continue;
            weighted += net.vertex(w) / d;
            weight_sum += 1.0 / d;
        }
        if (weight_sum == 0.0) return;
        target = weighted / weight_sum;
    }
    for (int w : neighbors) {
        if (distance(target, net.vertex(w)) < kCoincidenceTol) {
            Vec3 bisector{};
            for (int other : neighbors) {
                if (other == w) continue;
                const Vec3 d = net.vertex(other) - target;
                const double len = norm(d);
                if (len > 0.0) bisector += d / len;
            }
            const double len = norm(bisector);
            if (len > 0.0) target += (kSeparationNudge / len) * bisector;
            break;
        }
    }
    net.vertex(vertex) = target;
}

inline double max_junction_residual(const TreeNetwork& net,
                                    const std::vector<std::vector<int>>& adj) {
    const int n = net.terminal_count();
    double worst = 0.0;
    for (int s = 0; s < net.steiner_count(); ++s) {
        const int v = n + s;
        Vec3 sum{};
        bool defined = true;
        for (int w : adj[static_cast<size_t>(v)]) {
            const Vec3 d = net.vertex(w) - net.vertex(v);
            const double len = norm(d);
            if (len == 0.0) {
                defined = false;
                break;
            }
            sum += d / len;
        }
        worst = std::max(worst, defined ? norm(sum) : std::numeric_limits<double>::infinity());
    }
    return worst;
}

}  // namespace detail

// Iterated geometric-median sweeps over all junction vertices of a fixed
// tree, in place. Pure coordinate descent on total length.
inline RelaxOutcome relax_steiner_positions(TreeNetwork& net, const RelaxOptions& options = {}) {
    const auto adj = adjacency_lists(net);
    const int n = net.terminal_count();
    double length = total_length(net);
    RelaxOutcome outcome;
    for (long sweep = 0; sweep < options.max_sweeps; ++sweep) {
        for (int s = 0; s < net.steiner_count(); ++s) {
            detail::update_junction(net, n + s, adj[static_cast<size_t>(n + s)]);
        }
        const double next = total_length(net);
        outcome.sweeps = sweep + 1;
        const bool length_settled =
            std::abs(length - next) < options.rel_length_tol * std::max(1.0, next);
        length = next;
        if (length_settled) {
            if (options.residual_tol <= 0.0 ||
                detail::max_junction_residual(net, adj) < options.residual_tol) {
                outcome.converged = true;
                break;
            }
        }
    }
    outcome.length = length;
    return outcome;
}

struct OptimizedTopology {
    TreeNetwork network;
    double length = 0.0;
    bool converged = false;
};

// Optimal junction placement for one fixed topology. Junctions start at the
// terminal centroid and take a few plain averaging passes before the median
// sweeps, which keeps the start well inside the hull.
inline OptimizedTopology optimize_topology(const std::vector<Vec3>& points, long topology_id,
                                           const RelaxOptions& options = {}) {
    const int n = static_cast<int>(points.size());
    TreeNetwork net = build_topology(n, topology_id);
    net.terminals = points;
    Vec3 centroid{};
    for (const auto& p : points) centroid += p;
    centroid = centroid / static_cast<double>(n);
    for (auto& s : net.steiner_points) s = centroid;
    const auto adj = adjacency_lists(net);
    for (int pass = 0; pass < 20; ++pass) {
        for (int s = 0; s < net.steiner_count(); ++s) {
            const int v = n + s;
            Vec3 mean{};
            for (int w : adj[static_cast<size_t>(v)]) mean += net.vertex(w);
            net.vertex(v) = mean / static_cast<double>(adj[static_cast<size_t>(v)].size());
        }
    }
    const RelaxOutcome relax = relax_steiner_positions(net, options);
    return {std::move(net), relax.length, relax.converged};
}

struct OracleResult {
    double smt_length = 0.0;
    double mst_length = 0.0;
    double ratio = 0.0;
    TreeNetwork best_topology;
    long topologies_examined = 0;
};

// Exact minimal Steiner tree by exhausting every full topology; degenerate
// optima (collapsed junction edges) cover the non-full trees. Ties go to the
// lowest topology id.
//
// Runs in two phases. A capped low-precision relaxation screens every
// topology first; since each relaxation sweep only ever shortens the tree,
// a screened length is an upper bound for that topology's optimum, and
// topologies screening far above the best bound cannot hide the minimum.
// Only the shortlist near the best bound gets the full-precision treatment.
// Topologies that exhausted the screening sweep budget (slowly collapsing
// junction pairs) get a wider margin since their bound is still descending.
inline OracleResult smt(const std::vector<Vec3>& points, int n_cap = kDefaultOracleCap) {
    const int n = static_cast<int>(points.size());
    if (n < 3) throw std::invalid_argument("smt: need at least 3 points");
    if (n > n_cap) throw std::invalid_argument("smt: point count exceeds cap " + std::to_string(n_cap));
    OracleResult result;
    result.mst_length = mst_length(points);
    const long count = topology_count(n);
    result.topologies_examined = count;

    RelaxOptions screen_options;
    screen_options.rel_length_tol = 1e-6;
    screen_options.residual_tol = 0.0;
    screen_options.max_sweeps = 600;
    std::vector<double> screened(static_cast<size_t>(count));
    std::vector<char> capped(static_cast<size_t>(count));
    double best_bound = std::numeric_limits<double>::infinity();
    for (long id = 0; id < count; ++id) {
        OptimizedTopology probe = optimize_topology(points, id, screen_options);
        screened[static_cast<size_t>(id)] = probe.length;
        capped[static_cast<size_t>(id)] = probe.converged ? 0 : 1;
        best_bound = std::min(best_bound, probe.length);
    }
    const double margin = std::max(3e-3 * best_bound, 1e-6);

    result.smt_length = std::numeric_limits<double>::infinity();
    for (long id = 0; id < count; ++id) {
        const double allowance = capped[static_cast<size_t>(id)] ? 10.0 * margin : margin;
        if (screened[static_cast<size_t>(id)] > best_bound + allowance) continue;
        OptimizedTopology candidate = optimize_topology(points, id);
        if (candidate.length < result.smt_length) {
            result.smt_length = candidate.length;
            result.best_topology = std::move(candidate.network);
        }
    }
    // Length stagnation alone can leave the winner's junctions slightly off
    // the Fermat condition; polish just the winner until the residuals
    // settle. Degenerate winners stop on the sweep budget instead.
    RelaxOptions polish;
    polish.rel_length_tol = 1e-15;
    polish.residual_tol = 1e-9;
    polish.max_sweeps = 20000;
    result.smt_length = relax_steiner_positions(result.best_topology, polish).length;
    result.ratio = result.smt_length / result.mst_length;
    return result;
}

struct JunctionAngleStats {
    double max_residual = 0.0;
    double max_angle_deviation = 0.0;  // radians from 120 degrees
    int degenerate_junctions = 0;
};

// Fermat-condition diagnostics over the non-degenerate junctions of an
// optimized network. Junctions with any incident edge shorter than edge_tol
// are counted but not measured.
inline JunctionAngleStats junction_angle_stats(const TreeNetwork& net, double edge_tol = 1e-8) {
    const auto adj = adjacency_lists(net);
    const int n = net.terminal_count();
    JunctionAngleStats stats;
    constexpr double two_thirds_pi = 2.094395102393195492308428922186335257;
    for (int s = 0; s < net.steiner_count(); ++s) {
        const int v = n + s;
        std::vector<Vec3> units;
        bool degenerate = false;
        for (int w : adj[static_cast<size_t>(v)]) {
            const Vec3 d = net.vertex(w) - net.vertex(v);
            const double len = norm(d);
            if (len < edge_tol) {
                degenerate = true;
                break;
            }
            units.push_back(d / len);
        }
        if (degenerate) {
            ++stats.degenerate_junctions;
            continue;
        }
        Vec3 sum{};
        for (const auto& u : units) sum += u;
        stats.max_residual = std::max(stats.max_residual, norm(sum));
        for (size_t i = 0; i < units.size(); ++i) {
            for (size_t j = i + 1; j < units.size(); ++j) {
                const double angle = std::acos(std::clamp(dot(units[i], units[j]), -1.0, 1.0));
                stats.max_angle_deviation =
                    std::max(stats.max_angle_deviation, std::abs(angle - two_thirds_pi));
            }
        }
    }
    return stats;
}

}  // namespace helsteiner
