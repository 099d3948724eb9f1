#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "srf.hpp"

namespace helsteiner {

struct ClosedFormMinimum {
    double omega = 0.0;
    double alpha = 0.0;
    double rho = 0.0;
};

// Reference minimum of the ratio function, in closed form.
inline ClosedFormMinimum closed_form_minimum() {
    const double omega = 3.141592653589793238462643383279502884 - std::acos(2.0 / 3.0);
    const double alpha = std::sqrt(30.0) / (9.0 * omega);
    const double rho = (3.0 * std::sqrt(3.0) + std::sqrt(7.0)) / 10.0;
    return {omega, alpha, rho};
}

struct SearchBox {
    double omega_lo = 0.0;
    double omega_hi = 0.0;
    double alpha_lo = 0.0;
    double alpha_hi = 0.0;
};

// Stays 0.05 inside the omega feasibility boundary at pi/3 and below pi.
inline SearchBox default_search_box() {
    const double pi = 3.141592653589793238462643383279502884;
    return {pi / 3.0 + 0.05, pi - 0.05, 0.05, 1.0};
}

struct LocalMinimum {
    double omega = 0.0;
    double alpha = 0.0;
    double value = 0.0;
    bool converged = false;
    long evaluations = 0;
};

struct MinimizationResult {
    double omega_star = 0.0;
    double alpha_star = 0.0;
    double rho_star = 0.0;
    long evaluations = 0;
    bool converged = false;
    int restarts_used = 0;
    std::vector<LocalMinimum> restart_results;
};

namespace detail {

constexpr double kValueStagnationTol = 1e-12;
constexpr int kGridPointsPerAxis = 96;
constexpr int kMaxSimplexIterations = 4000;

struct SrfObjective {
    const SearchBox& box;
    int m_max;
    long evaluations = 0;

    // Large sentinel keeps infeasible cells out of the minimum without
    // poisoning simplex arithmetic.
    double operator()(double omega, double alpha) {
        ++evaluations;
        if (chord_coefficient(omega, 1) <= 0.0) return 1e9;
        return srf({omega, alpha}, m_max).value;
    }
};

inline std::array<double, 2> clamp_to_box(std::array<double, 2> x, const SearchBox& b) {
    x[0] = std::clamp(x[0], b.omega_lo, b.omega_hi);
    x[1] = std::clamp(x[1], b.alpha_lo, b.alpha_hi);
    return x;
}

struct SimplexOutcome {
    std::array<double, 2> x;
    double value;
    bool converged;
};

// Standard Nelder-Mead on two variables, clamped to the search box, stopping
// on simplex diameter or on value stagnation across several iterations.
inline SimplexOutcome nelder_mead(SrfObjective& f, std::array<double, 2> start,
                                  std::array<double, 2> scale, double tol) {
    std::array<std::array<double, 2>, 3> xs;
    std::array<double, 3> vs;
    xs[0] = clamp_to_box(start, f.box);
    xs[1] = clamp_to_box({start[0] + scale[0], start[1]}, f.box);
    xs[2] = clamp_to_box({start[0], start[1] + scale[1]}, f.box);
    for (int i = 0; i < 3; ++i) vs[i] = f(xs[i][0], xs[i][1]);

    bool converged = false;
    int stagnant = 0;
    for (int it = 0; it < kMaxSimplexIterations; ++it) {
        std::array<int, 3> order = {0, 1, 2};
        std::sort(order.begin(), order.end(), [&](int a, int b) { return vs[a] < vs[b]; });
        const std::array<std::array<double, 2>, 3> sx = {xs[order[0]], xs[order[1]], xs[order[2]]};
        const std::array<double, 3> sv = {vs[order[0]], vs[order[1]], vs[order[2]]};
        xs = sx;
        vs = sv;

        double diameter = 0.0;
        for (int i = 1; i < 3; ++i) {
            diameter = std::max(diameter, std::abs(xs[i][0] - xs[0][0]));
            diameter = std::max(diameter, std::abs(xs[i][1] - xs[0][1]));
        }
        if (diameter < tol) {
            converged = true;
            break;
        }
        if (std::abs(vs[2] - vs[0]) < kValueStagnationTol * std::max(1.0, std::abs(vs[0]))) {
            if (++stagnant > 5) {
                converged = true;
                break;
            }
        } else {
            stagnant = 0;
        }

        const std::array<double, 2> centroid = {(xs[0][0] + xs[1][0]) / 2.0,
                                                (xs[0][1] + xs[1][1]) / 2.0};
        auto probe = [&](double coeff) {
            return clamp_to_box({centroid[0] + coeff * (centroid[0] - xs[2][0]),
                                 centroid[1] + coeff * (centroid[1] - xs[2][1])},
                                f.box);
        };
        const std::array<double, 2> xr = probe(1.0);
        const double vr = f(xr[0], xr[1]);
        if (vr < vs[0]) {
            const std::array<double, 2> xe = probe(2.0);
            const double ve = f(xe[0], xe[1]);
            if (ve < vr) {
                xs[2] = xe;
                vs[2] = ve;
            } else {
                xs[2] = xr;
                vs[2] = vr;
            }
        } else if (vr < vs[1]) {
            xs[2] = xr;
            vs[2] = vr;
        } else {
            const std::array<double, 2> xc = probe(vr >= vs[2] ? -0.5 : 0.5);
            const double vc = f(xc[0], xc[1]);
            if (vc < std::min(vr, vs[2])) {
                xs[2] = xc;
                vs[2] = vc;
            } else {
                for (int i = 1; i < 3; ++i) {
                    xs[i] = {(xs[i][0] + xs[0][0]) / 2.0, (xs[i][1] + xs[0][1]) / 2.0};
                    vs[i] = f(xs[i][0], xs[i][1]);
                }
            }
        }
    }
    std::array<int, 3> order = {0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int a, int b) { return vs[a] < vs[b]; });
    return {xs[order[0]], vs[order[0]], converged};
}

// Axis-aligned pattern polish with halving steps. The objective grows
// linearly away from its corner minimum, so this pins the argmin to far
// below the simplex tolerance.
inline SimplexOutcome compass_polish(SrfObjective& f, std::array<double, 2> x, double value,
                                     double step, double floor_step) {
    while (step > floor_step) {
        bool improved = false;
        for (int axis = 0; axis < 2; ++axis) {
            for (double sign : {1.0, -1.0}) {
                std::array<double, 2> probe = x;
                probe[axis] += sign * step;
                probe = clamp_to_box(probe, f.box);
                const double v = f(probe[0], probe[1]);
                if (v < value) {
                    x = probe;
                    value = v;
                    improved = true;
                }
            }
        }
        if (!improved) step *= 0.5;
    }
    return {x, value, true};
}

}  // namespace detail

// Two-phase search: coarse grid over the box, then simplex refinement with a
// compass polish from the best cell plus deterministic jittered restarts.
// Identical arguments (seed included) give identical results.
inline MinimizationResult minimize_srf(const SearchBox& box, int m_max = 12, double tol = 1e-9,
                                       int restarts = 8, std::uint32_t seed = 0) {
    const double pi = 3.141592653589793238462643383279502884;
    if (!(box.omega_lo > pi / 3.0)) {
        throw std::domain_error("minimize_srf: search box must satisfy omega_lo > pi/3");
    }
    if (box.omega_hi < box.omega_lo || box.alpha_hi < box.alpha_lo) {
        throw std::invalid_argument("minimize_srf: search box bounds out of order");
    }
    if (!(tol > 0.0)) throw std::invalid_argument("minimize_srf: tol must be positive");
    if (restarts < 0) throw std::invalid_argument("minimize_srf: restarts must be >= 0");
    if (m_max < 1) throw std::invalid_argument("minimize_srf: m_max must be >= 1");

    detail::SrfObjective objective{box, m_max};
    const int g = detail::kGridPointsPerAxis;
    const double omega_span = box.omega_hi - box.omega_lo;
    const double alpha_span = box.alpha_hi - box.alpha_lo;

    std::array<double, 2> grid_best = {box.omega_lo, box.alpha_lo};
    double grid_best_value = std::numeric_limits<double>::infinity();
    for (int i = 0; i < g; ++i) {
        const double omega = box.omega_lo + omega_span * i / (g - 1);
        for (int j = 0; j < g; ++j) {
            const double alpha = box.alpha_lo + alpha_span * j / (g - 1);
            const double v = objective(omega, alpha);
            if (v < grid_best_value) {
                grid_best_value = v;
                grid_best = {omega, alpha};
            }
        }
    }

    MinimizationResult result;
    result.omega_star = grid_best[0];
    result.alpha_star = grid_best[1];
    result.rho_star = grid_best_value;
    result.converged = false;
    result.restarts_used = 0;

    const std::array<double, 2> cell = {omega_span / (g - 1), alpha_span / (g - 1)};
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> jitter(-1.0, 1.0);

    std::array<double, 2> best_x = grid_best;
    double best_value = grid_best_value;
    bool any_converged = false;

    for (int r = 0; r < restarts; ++r) {
        std::array<double, 2> start = grid_best;
        if (r > 0) {
            start[0] += jitter(rng) * cell[0];
            start[1] += jitter(rng) * cell[1];
            start = detail::clamp_to_box(start, box);
        }
        const long before = objective.evaluations;
        std::array<double, 2> scale = {cell[0] > 0.0 ? cell[0] : tol, cell[1] > 0.0 ? cell[1] : tol};
        detail::SimplexOutcome nm = detail::nelder_mead(objective, start, scale, tol);
        detail::SimplexOutcome polished =
            detail::compass_polish(objective, nm.x, nm.value, 1e-5, 1e-13);
        LocalMinimum lm;
        lm.omega = polished.x[0];
        lm.alpha = polished.x[1];
        lm.value = polished.value;
        lm.converged = nm.converged;
        lm.evaluations = objective.evaluations - before;
        result.restart_results.push_back(lm);
        ++result.restarts_used;
        any_converged = any_converged || nm.converged;

        const bool better = polished.value < best_value ||
                            (polished.value == best_value &&
                             (polished.x[0] < best_x[0] ||
                              (polished.x[0] == best_x[0] && polished.x[1] < best_x[1])));
        if (better) {
            best_x = polished.x;
            best_value = polished.value;
        }
    }

    if (restarts > 0) {
        result.omega_star = best_x[0];
        result.alpha_star = best_x[1];
        result.rho_star = best_value;
        result.converged = any_converged;
    }
    result.evaluations = objective.evaluations;
    return result;
}

enum class ScanQuantity { srf_value, srf_branch, junction_angle_cos, per_point_lengths };

struct ScanAxis {
    std::string variable;  // "omega" or "alpha"
    double lo = 0.0;
    double hi = 0.0;
    int steps = 1;  // number of points, endpoints inclusive
};

struct ScanRow {
    double omega = 0.0;
    double alpha = 0.0;
    std::vector<std::optional<double>> values;
};

struct ScanTable {
    std::vector<ScanAxis> axes;
    std::vector<std::string> columns;  // value columns, after omega and alpha
    std::vector<ScanRow> rows;
};

namespace detail {

inline double axis_point(const ScanAxis& axis, int i) {
    if (axis.steps == 1) return axis.lo;
    return axis.lo + (axis.hi - axis.lo) * i / (axis.steps - 1);
}

template <typename F>
inline std::optional<double> guard_domain(F&& f) {
    try {
        return f();
    } catch (const std::domain_error&) {
        return std::nullopt;
    }
}

}  // namespace detail

// Dense evaluation over the product of the two axes, first axis outermost.
// Cells whose quantity is undefined at that parameter point are left empty.
inline ScanTable scan_grid(const std::vector<ScanAxis>& axes, ScanQuantity quantity,
                           const std::vector<int>& m_list, int m_max = 12) {
    if (axes.size() != 2) throw std::invalid_argument("scan_grid: exactly two axes required");
    const bool omega_first = axes[0].variable == "omega";
    if ((axes[0].variable != "omega" && axes[0].variable != "alpha") ||
        (axes[1].variable != "omega" && axes[1].variable != "alpha") ||
        axes[0].variable == axes[1].variable) {
        throw std::invalid_argument("scan_grid: axes must name omega and alpha");
    }
    for (const auto& axis : axes) {
        if (axis.steps < 1) throw std::invalid_argument("scan_grid: steps must be >= 1");
        if (axis.steps > 1 && axis.hi < axis.lo) {
            throw std::invalid_argument("scan_grid: axis bounds out of order");
        }
    }
    std::vector<int> ms = m_list;
    if (ms.empty()) ms.push_back(1);
    for (int m : ms) {
        if (m < 1) throw std::invalid_argument("scan_grid: m values must be >= 1");
    }

    ScanTable table;
    table.axes = axes;
    switch (quantity) {
        case ScanQuantity::srf_value:
            table.columns = {"srf", "m_star", "feasible_m1"};
            break;
        case ScanQuantity::srf_branch:
            for (int m : ms) table.columns.push_back("rho_" + std::to_string(m));
            break;
        case ScanQuantity::junction_angle_cos:
            for (int m : ms) table.columns.push_back("cos_theta_" + std::to_string(m));
            break;
        case ScanQuantity::per_point_lengths:
            for (int m : ms) {
                table.columns.push_back("spanning_per_point_" + std::to_string(m));
                table.columns.push_back("steiner_per_point_" + std::to_string(m));
            }
            break;
    }

    table.rows.reserve(static_cast<size_t>(axes[0].steps) * axes[1].steps);
    for (int i = 0; i < axes[0].steps; ++i) {
        const double first = detail::axis_point(axes[0], i);
        for (int j = 0; j < axes[1].steps; ++j) {
            const double second = detail::axis_point(axes[1], j);
            ScanRow row;
            row.omega = omega_first ? first : second;
            row.alpha = omega_first ? second : first;
            const HelixParams p{row.omega, row.alpha};
            switch (quantity) {
                case ScanQuantity::srf_value: {
                    const auto v = detail::guard_domain([&] { return srf(p, m_max).value; });
                    if (v.has_value()) {
                        const SrfValue s = srf(p, m_max);
                        row.values = {s.value, static_cast<double>(s.m_star),
                                      s.feasible_m1 ? 1.0 : 0.0};
                    } else {
                        row.values = {std::nullopt, std::nullopt, std::nullopt};
                    }
                    break;
                }
                case ScanQuantity::srf_branch:
                    for (int m : ms) {
                        row.values.push_back(
                            detail::guard_domain([&] { return srf_branch(m, p); }));
                    }
                    break;
                case ScanQuantity::junction_angle_cos:
                    for (int m : ms) {
                        row.values.push_back(
                            detail::guard_domain([&] { return junction_angle_cos(m, p); }));
                    }
                    break;
                case ScanQuantity::per_point_lengths:
                    for (int m : ms) {
                        row.values.push_back(
                            detail::guard_domain([&] { return spanning_length_per_point(m, p); }));
                        row.values.push_back(
                            detail::guard_domain([&] { return steiner_length_per_point(m, p); }));
                    }
                    break;
            }
            table.rows.push_back(std::move(row));
        }
    }
    return table;
}

}  // namespace helsteiner
