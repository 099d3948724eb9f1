#include <cmath>
#include <numbers>

#include <catch2/catch_amalgamated.hpp>

#include <helsteiner/srf.hpp>

using namespace helsteiner;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
constexpr double kPi = std::numbers::pi;
const double kOmegaRef = kPi - std::acos(2.0 / 3.0);
const double kAlphaRef = std::sqrt(30.0) / (9.0 * kOmegaRef);
const HelixParams kRef{kOmegaRef, kAlphaRef};
}  // namespace

TEST_CASE("spanning tree length on small fixtures", "[srf]") {
    const LengthBreakdown b = spanning_tree_length(4, 1, {kPi / 2.0, 0.4});
    CHECK(b.n == 4);
    CHECK(b.m == 1);
    CHECK_THAT(b.total, WithinAbs(4.6425270687840010808, 1e-12));
    CHECK_THAT(b.per_point, WithinAbs(b.total / 4.0, 1e-15));

    // at the reference point the consecutive chord is sqrt(3), all edges equal
    const LengthBreakdown c = spanning_tree_length(10, 1, kRef);
    CHECK_THAT(c.total, WithinAbs(10.0 * std::sqrt(3.0), 1e-12));
}

TEST_CASE("per-point lengths are the large-n limits", "[srf]") {
    const double span_limit = spanning_length_per_point(1, kRef);
    CHECK_THAT(span_limit, WithinAbs(1.9245008972987525484, 1e-14));  // sqrt(100/27)

    const double stein_limit = steiner_length_per_point(1, kRef);
    CHECK_THAT(stein_limit, WithinAbs(1.5091750772173155563, 1e-14));  // 1 + sqrt(21)/9

    // finite-n averages approach the limits from below
    const double span_avg = spanning_tree_length(10000, 1, kRef).per_point;
    CHECK_THAT(span_avg, WithinRel(span_limit, 1e-3));
    CHECK(span_avg < span_limit);
    const double stein_avg = steiner_tree_length(10000, 1, kRef).per_point;
    CHECK_THAT(stein_avg, WithinAbs(1.5090619562741985, 1e-12));
    CHECK_THAT(stein_avg, WithinRel(stein_limit, 1e-3));
}

TEST_CASE("length formulas agree with direct edge sums", "[srf]") {
    // rebuild the m-skip trees edge by edge from the point constructions and
    // compare against the closed forms
    const HelixParams p{1.9, 0.33};
    for (int m = 1; m <= 3; ++m) {
        const int n = 12;
        double direct = 0.0;
        for (int j = 0; j < m; ++j) {
            const auto idx = subsequence_indices(j, m, n, SequenceKind::terminal);
            for (size_t i = 0; i + 1 < idx.size(); ++i) {
                direct += distance(terminal_point(idx[i], p), terminal_point(idx[i + 1], p));
            }
        }
        // the m subsequence paths are stitched by m-1 consecutive chords
        for (int j = 0; j + 1 < m; ++j) {
            direct += distance(terminal_point(j, p), terminal_point(j + 1, p));
        }
        const double formula = spanning_tree_length(n, m, p).total;
        CHECK_THAT(direct, WithinAbs(formula, 1e-10));
    }
}

TEST_CASE("junction angle cosines at the reference point", "[srf]") {
    CHECK_THAT(junction_angle_cos(1, kRef), WithinAbs(0.5, 1e-12));
    CHECK_THAT(junction_angle_cos(2, kRef), WithinAbs(-1.0 / 3.0, 1e-12));
    CHECK_THAT(junction_angle_cos(3, kRef), WithinAbs(-53.0 / 54.0, 1e-12));
}

TEST_CASE("full-tree feasibility flips between m=2 and m=3", "[srf]") {
    CHECK(full_tree_feasible(1, kRef));
    CHECK(full_tree_feasible(2, kRef));
    CHECK_FALSE(full_tree_feasible(3, kRef));
}

TEST_CASE("ratio branch fixture", "[srf]") {
    CHECK_THAT(srf_branch(1, {kPi / 2.0, 0.4}), WithinAbs(0.93329878690021298901, 1e-14));
}

TEST_CASE("ratio branch never exceeds one for m=1", "[srf]") {
    // numerator^2 <= denominator^2 follows from AM-GM on A_1 and t^2/(A_1+1)
    for (double omega = 1.06; omega < 3.1; omega += 0.07) {
        for (double alpha = 0.05; alpha < 1.0; alpha += 0.09) {
            CHECK(srf_branch(1, {omega, alpha}) <= 1.0 + 1e-15);
            CHECK(srf_branch(1, {omega, alpha}) > 0.0);
        }
    }
}

TEST_CASE("ratio at the closed-form minimum", "[srf]") {
    const SrfValue v = srf(kRef, 12);
    CHECK_THAT(v.value, WithinAbs(0.78419037337712224711, 1e-14));
    CHECK(v.m_star == 1);
    CHECK(v.feasible_m1);
    CHECK_FALSE(v.min_at_cap);

    // the first three spanning denominators all degenerate to sqrt(100/27)
    const double d1 = spanning_length_per_point(1, kRef);
    const double d2 = spanning_length_per_point(2, kRef);
    const double d3 = spanning_length_per_point(3, kRef);
    CHECK_THAT(d1, WithinAbs(d2, 1e-13));
    CHECK_THAT(d2, WithinAbs(d3, 1e-13));
    CHECK_THAT(d1, WithinAbs(std::sqrt(100.0 / 27.0), 1e-13));
    // ties resolve to the smallest skip
    CHECK(v.m_star == 1);
}

TEST_CASE("ratio value can exceed one away from the minimum", "[srf]") {
    // with a small pitch the skip denominators shrink faster than the
    // junction numerator: at omega = 2 pi/3, alpha = 0.1 the reported value
    // is about 1.86 even though the m=1 construction is feasible
    const SrfValue v = srf({2.0 * kPi / 3.0, 0.1}, 12);
    CHECK(v.feasible_m1);
    CHECK(v.m_star > 1);
    CHECK(v.value > 1.0);
    // whenever the best skip is m=1 the value is a genuine ratio bound
    const SrfValue w = srf({2.2, 0.5}, 12);
    if (w.m_star == 1) CHECK(w.value <= 1.0 + 1e-15);
}

TEST_CASE("cap flag reports when larger skips still win", "[srf]") {
    const HelixParams p{2.3, 0.2};
    const SrfValue full = srf(p, 12);
    CHECK(full.m_star == 3);
    CHECK_FALSE(full.min_at_cap);
    const SrfValue capped = srf(p, 3);
    CHECK(capped.m_star == 3);
    CHECK(capped.min_at_cap);
}

TEST_CASE("domain errors surface for infeasible parameters", "[srf]") {
    CHECK_THROWS_AS(srf({0.9, 0.4}, 12), std::domain_error);          // A_1 < 0
    CHECK_THROWS_AS(srf_branch(1, {kPi / 3.0, 0.4}), std::domain_error);
    CHECK_THROWS_AS(steiner_length_per_point(3, kRef), std::domain_error);  // A_3 < 0
    CHECK_THROWS_AS(srf(kRef, 0), std::out_of_range);
    CHECK_THROWS_AS(spanning_tree_length(3, 1, kRef), std::out_of_range);   // needs m < n - 2
}

TEST_CASE("steiner construction beats spanning where feasible", "[srf]") {
    for (double omega = 1.3; omega < 2.9; omega += 0.14) {
        for (double alpha = 0.1; alpha < 0.9; alpha += 0.17) {
            const HelixParams p{omega, alpha};
            const double steiner = steiner_tree_length(40, 1, p).total;
            const double spanning = spanning_tree_length(40, 1, p).total;
            CHECK(steiner < spanning + 1e-12);
        }
    }
}
