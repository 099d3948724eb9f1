#pragma once

#include <cmath>
#include <stdexcept>

#include "helix.hpp"

namespace helsteiner {

struct LengthBreakdown {
    double total = 0.0;
    double per_point = 0.0;
    int m = 0;
    int n = 0;
};

namespace detail {

// Sum of floor((n-j-1)/m) over terminal subsequence starts j = 0..m-1.
// Collapses to n-m; kept as the literal sum so tests can pin the identity.
inline long terminal_edge_count(int n, int m) {
    long s = 0;
    for (int j = 0; j < m; ++j) s += (n - j - 1) / m;
    return s;
}

// Sum of floor((n-k-2)/m) over junction subsequence starts k = 1..m.
// Collapses to n-m-2.
inline long steiner_chain_count(int n, int m) {
    long s = 0;
    for (int k = 1; k <= m; ++k) s += (n - k - 2) / m;
    return s;
}

inline void check_tree_range(int n, int m, const char* who) {
    if (m < 1 || m >= n - 2) {
        throw std::out_of_range(std::string(who) + ": need 1 <= m < n-2");
    }
}

}  // namespace detail

// Total length of the m-skip path forest over n terminal points: the
// subsequence chords plus the m-1 consecutive edges stitching subsequences
// together.
inline LengthBreakdown spanning_tree_length(int n, int m, const HelixParams& p) {
    detail::check_tree_range(n, m, "spanning_tree_length");
    const double t = p.alpha * p.omega;
    const double chord_m = std::sqrt(static_cast<double>(m) * m * t * t +
                                     chord_coefficient(p.omega, m) + 1.0);
    const double chord_1 = std::sqrt(t * t + chord_coefficient(p.omega, 1) + 1.0);
    const double total = chord_m * static_cast<double>(detail::terminal_edge_count(n, m)) +
                         static_cast<double>(m - 1) * chord_1;
    return {total, total / n, m, n};
}

// Total length of the m-skip junction construction: radial spokes from each
// terminal to the inner helix, chain edges along the inner helix, and two
// closing edges back to the extreme terminals. The chain edge runs between
// inner-helix points, so the squared chord carries r^2 against the planar
// coefficient; the closing edges mix one unit-radius endpoint and keep a
// single factor of r.
inline LengthBreakdown steiner_tree_length(int n, int m, const HelixParams& p) {
    detail::check_tree_range(n, m, "steiner_tree_length");
    const double r = inner_radius(p, m);
    const double a1 = chord_coefficient(p.omega, m) + 1.0;
    const double t = p.alpha * p.omega;
    const double mt2 = static_cast<double>(m) * m * t * t;
    const long chains = detail::steiner_chain_count(n, m);
    const double spokes = (1.0 - r) * static_cast<double>(m + chains);
    const double chain = std::sqrt(mt2 + r * r * a1) * static_cast<double>(chains);
    const double closing = 2.0 * std::sqrt(mt2 + (1.0 - r) * (1.0 - r) + r * a1);
    const double total = spokes + chain + closing;
    return {total, total / n, m, n};
}

// Large-n limit of spanning length per terminal.
inline double spanning_length_per_point(int m, const HelixParams& p) {
    if (m < 1) throw std::out_of_range("spanning_length_per_point: m must be >= 1");
    const double t = p.alpha * p.omega;
    return std::sqrt(static_cast<double>(m) * m * t * t + chord_coefficient(p.omega, m) + 1.0);
}

// Large-n limit of junction-construction length per terminal.
inline double steiner_length_per_point(int m, const HelixParams& p) {
    if (m < 1) throw std::out_of_range("steiner_length_per_point: m must be >= 1");
    const double a = chord_coefficient(p.omega, m);
    if (a <= 0.0) {
        throw std::domain_error("steiner_length_per_point: chord coefficient not positive");
    }
    return 1.0 + static_cast<double>(m) * p.alpha * p.omega * std::sqrt(a / (a + 1.0));
}

// Cosine of the angle between consecutive chain edges at an inner-helix
// junction of the m-skip construction.
inline double junction_angle_cos(int m, const HelixParams& p) {
    if (m < 1) throw std::out_of_range("junction_angle_cos: m must be >= 1");
    const double a1 = chord_coefficient(p.omega, m) + 1.0;
    const double t = p.alpha * p.omega;
    const double den = 2.0 * (static_cast<double>(m) * m * t * t + a1);
    return -1.0 + a1 * a1 / den;
}

// Full trees need every junction angle at or below 120 degrees.
inline bool full_tree_feasible(int m, const HelixParams& p) {
    return junction_angle_cos(m, p) >= -0.5;
}

// One branch of the ratio function: m=1 junction construction against the
// m-skip spanning length.
inline double srf_branch(int m, const HelixParams& p) {
    const double a1 = chord_coefficient(p.omega, 1);
    if (a1 <= 0.0) throw std::domain_error("srf_branch: chord coefficient at m=1 not positive");
    const double numerator = 1.0 + p.alpha * p.omega * std::sqrt(a1 / (a1 + 1.0));
    return numerator / spanning_length_per_point(m, p);
}

struct SrfValue {
    double value = 0.0;
    int m_star = 0;
    bool feasible_m1 = false;
    // True when the spanning-denominator minimum sits at the m_max cutoff,
    // i.e. raising the cutoff might still change the value.
    bool min_at_cap = false;
};

// Ratio function: the m=1 junction construction length over the best m-skip
// spanning length with m up to m_max. Reported rather than restricted to the
// full-tree region so the whole parameter plane can be scanned.
inline SrfValue srf(const HelixParams& p, int m_max = 12) {
    if (m_max < 1) throw std::out_of_range("srf: m_max must be >= 1");
    const double a1 = chord_coefficient(p.omega, 1);
    if (a1 <= 0.0) throw std::domain_error("srf: chord coefficient at m=1 not positive");
    int m_star = 1;
    double best = spanning_length_per_point(1, p);
    for (int m = 2; m <= m_max; ++m) {
        const double d = spanning_length_per_point(m, p);
        if (d < best) {
            best = d;
            m_star = m;
        }
    }
    const double numerator = 1.0 + p.alpha * p.omega * std::sqrt(a1 / (a1 + 1.0));
    SrfValue out;
    out.value = numerator / best;
    out.m_star = m_star;
    out.feasible_m1 = full_tree_feasible(1, p);
    out.min_at_cap = (m_star == m_max) && m_max > 1;
    return out;
}

}  // namespace helsteiner
