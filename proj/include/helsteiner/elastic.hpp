#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "helix.hpp"
#include "network.hpp"
#include "oracle.hpp"

namespace helsteiner {

class infeasible_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Junction count (n-2)/(p-2) when it is a positive integer; a chain exists
// only then.
inline std::optional<int> feasible_q(int n, int p) {
    if (n < 3 || p < 3) throw std::invalid_argument("feasible_q: need n >= 3 and p >= 3");
    const int num = n - 2;
    const int den = p - 2;
    if (num % den != 0) return std::nullopt;
    const int q = num / den;
    if (q < 1) return std::nullopt;
    return q;
}

// Chain of q junctions on an inner helix of the given radius, each junction
// tied to p-2 consecutive terminals (p-1 at the two chain ends).
struct PChainSpec {
    int n = 0;
    int p = 0;
    int q = 0;
    HelixParams params;
    double radius = 0.0;
};

inline PChainSpec make_p_chain_spec(int n, int p, const HelixParams& params, double radius) {
    const auto q = feasible_q(n, p);
    if (!q.has_value()) {
        throw infeasible_error("p-chain infeasible: (n-2)/(p-2) not a positive integer for n=" +
                               std::to_string(n) + ", p=" + std::to_string(p));
    }
    if (!(radius > 0.0)) throw std::invalid_argument("make_p_chain_spec: radius must be positive");
    return {n, p, *q, params, radius};
}

// Inner radius that balances the interior junctions of the p=3 chain; the
// unclamped m=1 inner radius.
inline double chain_equilibrium_radius(const HelixParams& params) {
    return inner_radius_raw(params, 1);
}

// Terminals are 1-based in the chain formulas: r_j sits at helix angle
// (j-1)*omega and maps to network terminal index j-1; junction S_k sits at
// angle k*omega on the inner helix and maps to junction index k-1.
inline TreeNetwork build_p_chain(const PChainSpec& spec) {
    const auto q_check = feasible_q(spec.n, spec.p);
    if (!q_check.has_value() || *q_check != spec.q) {
        throw infeasible_error("build_p_chain: inconsistent chain spec");
    }
    TreeNetwork net;
    net.terminals.reserve(static_cast<size_t>(spec.n));
    for (int j = 1; j <= spec.n; ++j) {
        net.terminals.push_back(terminal_point(j - 1, spec.params));
    }
    net.steiner_points.reserve(static_cast<size_t>(spec.q));
    for (int k = 1; k <= spec.q; ++k) {
        const double t = static_cast<double>(k) * spec.params.omega;
        net.steiner_points.push_back(
            {spec.radius * std::cos(t), spec.radius * std::sin(t), spec.params.alpha * t});
    }
    auto link = [&](int j, int k) {  // 1-based terminal j to 1-based junction k
        net.edges.emplace_back(j - 1, spec.n + k - 1);
    };
    if (spec.q == 1) {
        for (int j = 1; j <= spec.n; ++j) link(j, 1);
    } else {
        for (int j = 1; j <= spec.p - 1; ++j) link(j, 1);
        for (int k = 2; k <= spec.q - 1; ++k) {
            const int first = (k - 1) * spec.p - 2 * k + 4;
            const int last = k * spec.p - 2 * k + 1;
            for (int j = first; j <= last; ++j) link(j, k);
        }
        for (int j = spec.n - spec.p + 2; j <= spec.n; ++j) link(j, spec.q);
        for (int k = 1; k < spec.q; ++k) {
            net.edges.emplace_back(spec.n + k - 1, spec.n + k);
        }
    }
    return net;
}

// Hooke forces along the edges with elastic constant C: terminal pulls
// toward its junction, chain forces point up the junction chain. Only the
// unit directions matter for equilibrium; the moduli carry the lengths.
struct ForceAssignment {
    std::vector<Vec3> terminal_force;       // per terminal, C * (r_j - S_k)
    std::vector<double> terminal_modulus;   // |terminal_force|
    std::vector<std::pair<int, int>> chain_edges;  // junction index pairs, ascending
    std::vector<Vec3> chain_force;          // per chain edge, C * (S_b - S_a)
    std::vector<double> chain_modulus;
    double elastic_constant = 1.0;

    Vec3 terminal_unit(int j) const { return terminal_force[static_cast<size_t>(j)] / terminal_modulus[static_cast<size_t>(j)]; }
    Vec3 chain_unit(int e) const { return chain_force[static_cast<size_t>(e)] / chain_modulus[static_cast<size_t>(e)]; }
};

inline ForceAssignment hooke_forces(const TreeNetwork& net, double elastic_constant) {
    if (!(elastic_constant > 0.0)) {
        throw std::invalid_argument("hooke_forces: elastic constant must be positive");
    }
    const auto adj = adjacency_lists(net);
    const int n = net.terminal_count();
    ForceAssignment forces;
    forces.elastic_constant = elastic_constant;
    forces.terminal_force.reserve(static_cast<size_t>(n));
    forces.terminal_modulus.reserve(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
        if (adj[static_cast<size_t>(j)].size() != 1 || adj[static_cast<size_t>(j)][0] < n) {
            throw std::invalid_argument("hooke_forces: each terminal must attach to one junction");
        }
        const Vec3 pull = net.vertex(j) - net.vertex(adj[static_cast<size_t>(j)][0]);
        const double len = norm(pull);
        if (len == 0.0) throw std::domain_error("hooke_forces: zero-length terminal edge");
        forces.terminal_force.push_back(elastic_constant * pull);
        forces.terminal_modulus.push_back(elastic_constant * len);
    }
    for (const auto& [u, v] : net.edges) {
        if (!net.is_steiner(u) || !net.is_steiner(v)) continue;
        const int a = std::min(u, v) - n;
        const int b = std::max(u, v) - n;
        const Vec3 d = net.vertex(b + n) - net.vertex(a + n);
        const double len = norm(d);
        if (len == 0.0) throw std::domain_error("hooke_forces: zero-length chain edge");
        forces.chain_edges.emplace_back(a, b);
        forces.chain_force.push_back(elastic_constant * d);
        forces.chain_modulus.push_back(elastic_constant * len);
    }
    return forces;
}

// Total length written in terms of force unit vectors: the terminal dot
// products plus, for each junction, its position against the outgoing
// unit-vector sum. The junction terms make this an algebraic identity with
// the geometric length at any configuration; dropping them leaves the
// equilibrium-only truncated form.
inline double length_force_form(const TreeNetwork& net, const ForceAssignment& forces) {
    const auto adj = adjacency_lists(net);
    const int n = net.terminal_count();
    double total = 0.0;
    for (int j = 0; j < n; ++j) total += dot(net.vertex(j), forces.terminal_unit(j));
    std::vector<Vec3> residual(static_cast<size_t>(net.steiner_count()), Vec3{});
    for (int j = 0; j < n; ++j) {
        const int k = adj[static_cast<size_t>(j)][0] - n;
        residual[static_cast<size_t>(k)] += forces.terminal_unit(j);
    }
    for (size_t e = 0; e < forces.chain_edges.size(); ++e) {
        const auto& [a, b] = forces.chain_edges[e];
        const Vec3 unit = forces.chain_unit(static_cast<int>(e));
        residual[static_cast<size_t>(a)] += unit;
        residual[static_cast<size_t>(b)] -= unit;
    }
    for (int k = 0; k < net.steiner_count(); ++k) {
        total -= dot(net.vertex(n + k), residual[static_cast<size_t>(k)]);
    }
    return total;
}

// Equilibrium-only form: terminal dot products alone. Origin dependent and
// equal to the geometric length only when every junction residual vanishes.
inline double length_force_truncated(const TreeNetwork& net, const ForceAssignment& forces) {
    double total = 0.0;
    for (int j = 0; j < net.terminal_count(); ++j) {
        total += dot(net.vertex(j), forces.terminal_unit(j));
    }
    return total;
}

inline double length_geometric(const TreeNetwork& net) { return total_length(net); }

// Scalar stationarity integrand of the helical chain for 1-based terminal j
// against junction k: ((r.S)^2 - r^2 S^2) / |r - S|^3 expanded in the
// helical coordinates.
inline double stationarity_term(int j, int k, const PChainSpec& spec) {
    if (j < 1 || j > spec.n) throw std::out_of_range("stationarity_term: terminal index out of range");
    if (k < 1 || k > spec.q) throw std::out_of_range("stationarity_term: junction index out of range");
    const double omega = spec.params.omega;
    const double alpha = spec.params.alpha;
    const double radius = spec.radius;
    const double jm1 = static_cast<double>(j - 1);
    const double kk = static_cast<double>(k);
    const double gap = jm1 - kk;
    const double cos_gap = std::cos(gap * omega);
    const double aw2 = alpha * alpha * omega * omega;
    const double numerator = (cos_gap * cos_gap - 1.0 - aw2 * jm1 * jm1) * radius * radius +
                             aw2 * (2.0 * radius * jm1 * kk * cos_gap - kk * kk);
    const double base = 1.0 + radius * radius - 2.0 * radius * cos_gap + aw2 * gap * gap;
    if (base <= 1e-300) {
        throw std::domain_error("stationarity_term: coincident terminal and junction");
    }
    return numerator / (base * std::sqrt(base));
}

// Central-difference derivative of total length for every junction
// coordinate, step 1e-5 scaled by coordinate magnitude. Flattened as
// (x, y, z) per junction.
inline std::vector<double> steiner_length_gradient(const TreeNetwork& net) {
    TreeNetwork work = net;
    std::vector<double> grad;
    grad.reserve(static_cast<size_t>(3 * net.steiner_count()));
    const int n = net.terminal_count();
    for (int s = 0; s < net.steiner_count(); ++s) {
        for (int axis = 0; axis < 3; ++axis) {
            Vec3& pos = work.vertex(n + s);
            double* coord = axis == 0 ? &pos.x : axis == 1 ? &pos.y : &pos.z;
            const double saved = *coord;
            const double h = 1e-5 * std::max(1.0, std::abs(saved));
            *coord = saved + h;
            const double up = total_length(work);
            *coord = saved - h;
            const double down = total_length(work);
            *coord = saved;
            grad.push_back((up - down) / (2.0 * h));
        }
    }
    return grad;
}

struct EquilibriumReport {
    std::vector<double> fermat_residuals;
    // Largest length derivative over interior junction coordinates; the two
    // chain-end junctions trade off terminal count against chain pull and
    // sit away from the length minimum even at the balancing radius.
    double gradient_norm = 0.0;
    // Same measure over every junction coordinate.
    double gradient_norm_all = 0.0;
    double length_geometric = 0.0;
    double length_force_form = 0.0;
    std::vector<double> t_sum_residuals;
};

// Stationarity diagnostics of the helical chain configuration itself (no
// relaxation). The t-sums run over adjacent terminals by default; the
// literal all-terminals sum is available for comparison.
inline EquilibriumReport stationarity_report(const PChainSpec& spec, bool adjacency_only = true) {
    const TreeNetwork net = build_p_chain(spec);
    EquilibriumReport report;
    report.fermat_residuals = fermat_residuals(net);
    report.length_geometric = length_geometric(net);
    report.length_force_form = length_force_form(net, hooke_forces(net, 1.0));

    const std::vector<double> grad = steiner_length_gradient(net);
    for (int k = 1; k <= spec.q; ++k) {
        const bool interior = k > 1 && k < spec.q;
        for (int axis = 0; axis < 3; ++axis) {
            const double g = std::abs(grad[static_cast<size_t>(3 * (k - 1) + axis)]);
            report.gradient_norm_all = std::max(report.gradient_norm_all, g);
            if (interior) report.gradient_norm = std::max(report.gradient_norm, g);
        }
    }

    const auto adj = adjacency_lists(net);
    report.t_sum_residuals.reserve(static_cast<size_t>(spec.q));
    for (int k = 1; k <= spec.q; ++k) {
        double sum = 0.0;
        if (adjacency_only) {
            for (int w : adj[static_cast<size_t>(spec.n + k - 1)]) {
                if (w >= spec.n) continue;
                sum += stationarity_term(w + 1, k, spec);
            }
        } else {
            for (int j = 1; j <= spec.n; ++j) sum += stationarity_term(j, k, spec);
        }
        report.t_sum_residuals.push_back(sum);
    }
    return report;
}

// Cosine of the equal-angle condition at a degree-(p-1)+1 junction whose
// edges split space evenly.
inline double regular_angle_cos(int p) {
    if (p < 3) throw std::invalid_argument("regular_angle_cos: need p >= 3");
    return -1.0 / static_cast<double>(p - 1);
}

struct PLengthRow {
    int p = 0;
    bool feasible = false;
    double length = 0.0;
};

// Optimized chain length per p: build the chain topology on the helical
// terminals, then relax the junction positions freely with the geometric
// median sweeps. Infeasible p values get a row with feasible=false.
inline std::vector<PLengthRow> compare_p_lengths(int n, const HelixParams& params,
                                                 const std::vector<int>& p_list) {
    std::vector<PLengthRow> rows;
    rows.reserve(p_list.size());
    for (int p : p_list) {
        PLengthRow row;
        row.p = p;
        const auto q = feasible_q(n, p);
        if (!q.has_value()) {
            rows.push_back(row);
            continue;
        }
        double radius = 0.5;
        try {
            radius = std::min(chain_equilibrium_radius(params), 1.0);
        } catch (const std::domain_error&) {
        }
        TreeNetwork net = build_p_chain(make_p_chain_spec(n, p, params, radius));
        RelaxOptions options;
        options.rel_length_tol = 1e-13;
        options.residual_tol = 1e-10;
        const RelaxOutcome outcome = relax_steiner_positions(net, options);
        row.feasible = true;
        row.length = outcome.length;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace helsteiner
