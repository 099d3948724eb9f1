#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "geometry.hpp"

namespace helsteiner {

// Angular step (radians) and pitch factor of a unit-radius right circular
// helix; the physical pitch is 2*pi*alpha.
struct HelixParams {
    double omega = 0.0;
    double alpha = 0.0;
};

// 1 - 2cos(m*omega). Positive exactly when the planar chord spanning m steps
// exceeds the helix radius; every feasibility condition below reduces to the
// sign of this quantity.
inline double chord_coefficient(double omega, int m) {
    return 1.0 - 2.0 * std::cos(static_cast<double>(m) * omega);
}

// Radius of the inner junction helix before clamping. Only real when
// a*(a+1) > 0 for a = chord_coefficient(omega, m).
inline double inner_radius_raw(const HelixParams& p, int m) {
    const double a = chord_coefficient(p.omega, m);
    const double disc = a * (a + 1.0);
    if (disc <= 0.0) {
        throw std::domain_error("inner_radius: no real inner radius for m=" + std::to_string(m) +
                                " at omega=" + std::to_string(p.omega));
    }
    return static_cast<double>(m) * p.alpha * p.omega / std::sqrt(disc);
}

// Raw value clamped into (0, 1]; a value above 1 would put the junction helix
// outside the terminal helix, which degenerates the construction.
inline double inner_radius(const HelixParams& p, int m) {
    return std::min(inner_radius_raw(p, m), 1.0);
}

// j-th point of the unit helix, j counted from 0.
inline Vec3 terminal_point(int j, const HelixParams& p) {
    const double t = static_cast<double>(j) * p.omega;
    return {std::cos(t), std::sin(t), p.alpha * t};
}

// k-th junction point on the inner helix for the m-skip construction.
inline Vec3 steiner_point(int k, const HelixParams& p, int m) {
    const double r = inner_radius(p, m);
    const double t = static_cast<double>(k) * p.omega;
    return {r * std::cos(t), r * std::sin(t), p.alpha * t};
}

enum class SequenceKind { terminal, steiner };

// Index progression start, start+m, ... for one m-skip subsequence.
// Terminal subsequences start at 0..m-1 and stay within 0..n-1; junction
// subsequences start at 1..m and stay within 1..n-2.
inline std::vector<int> subsequence_indices(int start, int m, int n, SequenceKind kind) {
    if (m < 1) throw std::out_of_range("subsequence_indices: m must be >= 1");
    int l_max = 0;
    if (kind == SequenceKind::terminal) {
        if (start < 0 || start > m - 1) {
            throw std::out_of_range("subsequence_indices: terminal start must be in [0, m-1]");
        }
        if (n - start - 1 < 0) throw std::out_of_range("subsequence_indices: n too small");
        l_max = (n - start - 1) / m;
    } else {
        if (start < 1 || start > m) {
            throw std::out_of_range("subsequence_indices: steiner start must be in [1, m]");
        }
        if (n - start - 2 < 0) throw std::out_of_range("subsequence_indices: n too small");
        l_max = (n - start - 2) / m;
    }
    std::vector<int> out;
    out.reserve(static_cast<size_t>(l_max) + 1);
    for (int i = 0; i <= l_max; ++i) out.push_back(start + i * m);
    return out;
}

// The m-skip subsequences partition the terminal indices {0..n-1} and the
// junction indices {1..n-2}.
struct SkipPartition {
    std::vector<std::vector<int>> terminal_groups;
    std::vector<std::vector<int>> steiner_groups;
};

inline SkipPartition partition(int m, int n) {
    if (m < 1 || m >= n - 2) throw std::out_of_range("partition: need 1 <= m < n-2");
    SkipPartition out;
    out.terminal_groups.reserve(static_cast<size_t>(m));
    out.steiner_groups.reserve(static_cast<size_t>(m));
    for (int j = 0; j < m; ++j) {
        out.terminal_groups.push_back(subsequence_indices(j, m, n, SequenceKind::terminal));
    }
    for (int k = 1; k <= m; ++k) {
        out.steiner_groups.push_back(subsequence_indices(k, m, n, SequenceKind::steiner));
    }
    return out;
}

}  // namespace helsteiner
