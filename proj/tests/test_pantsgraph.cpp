#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "hypent/pantsgraph.hpp"

using namespace hypent;

namespace {

using V3 = std::array<double, 3>;

double mink(const V3& x, const V3& y) { return -x[0] * y[0] + x[1] * y[1] + x[2] * y[2]; }

double hyperboloid_dist(const V3& x, const V3& y) {
    const V3 d{x[0] - y[0], x[1] - y[1], x[2] - y[2]};
    return 2 * std::asinh(std::sqrt(std::max(0.0, mink(d, d))) / 2);
}

// Right-angled hexagon with alternate sides a, built by walking geodesics on
// the hyperboloid with a right turn at every vertex. The other three sides come
// from the hexagon cosh rule. Returns the six side midpoints.
std::array<V3, 6> hexagon_midpoints(double a, double* closure) {
    const double b = std::acosh((std::cosh(a) * std::cosh(a) + std::cosh(a)) / (std::sinh(a) * std::sinh(a)));
    V3 p{1, 0, 0}, v{0, 1, 0};
    const V3 start = p;
    std::array<V3, 6> mids{};
    const double sides[6] = {a, b, a, b, a, b};
    for (int i = 0; i < 6; ++i) {
        auto walk = [&](double t, V3& q, V3& w) {
            for (int j = 0; j < 3; ++j) {
                q[j] = std::cosh(t) * p[j] + std::sinh(t) * v[j];
                w[j] = std::sinh(t) * p[j] + std::cosh(t) * v[j];
            }
        };
        V3 q, w;
        walk(sides[i] / 2, mids[static_cast<std::size_t>(i)], w);
        walk(sides[i], q, w);
        p = q;
        // Turn: the unit tangent orthogonal to p and w (Lorentzian cross product).
        V3 n{-(p[1] * w[2] - p[2] * w[1]), p[2] * w[0] - p[0] * w[2], p[0] * w[1] - p[1] * w[0]};
        const double s = std::sqrt(mink(n, n));
        for (auto& c : n) c /= s;
        v = n;
    }
    *closure = hyperboloid_dist(p, start);
    return mids;
}

std::vector<PantsGraph::Vertex> ball(const PantsGraph& g, PantsGraph::Vertex root, int r) {
    std::set<PantsGraph::Vertex> seen{root};
    std::vector<PantsGraph::Vertex> layer{root}, nb;
    for (int i = 0; i < r; ++i) {
        std::vector<PantsGraph::Vertex> next;
        for (auto v : layer) {
            g.neighbours(v, nb);
            for (auto u : nb)
                if (seen.insert(u).second) next.push_back(u);
        }
        layer = next;
    }
    return {seen.begin(), seen.end()};
}

}  // namespace

TEST_CASE("hexagon distances match the hyperboloid construction") {
    for (double ell : {1.0, 2.0, 4.0, 8.0}) {
        double closure = 1;
        const auto m = hexagon_midpoints(ell / 2, &closure);
        REQUIRE(closure < 1e-9);
        V3 c{};
        for (int i : {0, 2, 4})
            for (int j = 0; j < 3; ++j) c[static_cast<std::size_t>(j)] += m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        const double s = std::sqrt(-mink(c, c));
        for (auto& x : c) x /= s;
        CHECK(std::abs(hexagon_r(ell) - hyperboloid_dist(c, m[0])) < 1e-9);
        CHECK(std::abs(hexagon_r(ell) - hyperboloid_dist(c, m[2])) < 1e-9);
        CHECK(std::abs(hexagon_d(ell) - hyperboloid_dist(m[0], m[2])) < 1e-9);
    }
}

TEST_CASE("hexagon limits and monotonicity") {
    CHECK(std::abs(hexagon_r(60) - std::log(3.0) / 2) < 1e-6);
    CHECK(std::abs(hexagon_d(60) - 2 * std::acosh(std::sqrt(5.0) / 2)) < 1e-6);
    double pr = INFINITY, pd = INFINITY;
    for (int i = 1; i <= 100; ++i) {
        const double ell = 0.5 * i;
        CHECK(hexagon_r(ell) < pr);
        CHECK(hexagon_d(ell) < pd);
        CHECK(hexagon_d(ell) <= 2 * hexagon_r(ell));
        pr = hexagon_r(ell);
        pd = hexagon_d(ell);
    }
    CHECK_THROWS_AS(hexagon_r(0), DomainError);
    CHECK_THROWS_AS(hexagon_d(-1), DomainError);
}

TEST_CASE("tree vertex counts") {
    const auto bt = PantsGraph::binary_tree(10, 1);
    const auto pt = PantsGraph::pruned_tree(10, 1);
    for (int j = 0; j <= 5; ++j) {
        CHECK(bt.count_at_depth(2 * j) == static_cast<std::uint64_t>(std::pow(4, j)));
        CHECK(pt.count_at_depth(2 * j) == static_cast<std::uint64_t>(std::pow(3, j)));
    }
    // Brute count of surviving pruned vertices by walking the window.
    std::uint64_t brute = 0;
    std::vector<std::uint64_t> depth_count(11, 0);
    for (auto v : ball(pt, 1, 10)) {
        ++brute;
        ++depth_count[static_cast<std::size_t>(pt.depth_of(v))];
    }
    CHECK(brute == pt.vertex_count());
    CHECK(depth_count[4] == 9);
    CHECK(bt.funnels(1) == 1);
    CHECK(PantsGraph::free_cayley(2, 3, 1).vertex_count() == 1 + 4 + 12 + 36);
}

TEST_CASE("valency and funnels of the pruned tree") {
    const auto pt = PantsGraph::pruned_tree(12, 1);
    std::vector<PantsGraph::Vertex> nb;
    for (auto v : ball(pt, 1, 11)) {
        pt.neighbours(v, nb);
        // Every pair of pants has three boundary curves.
        CHECK(static_cast<int>(nb.size()) + pt.funnels(v) + pt.stubs(v) == 3);
    }
}

TEST_CASE("grid boundary of the full box is the perimeter") {
    const auto g = PantsGraph::grid(7, 2, 1);
    CHECK(g.vertex_count() == 49);
    std::vector<PantsGraph::Vertex> all(49);
    for (PantsGraph::Vertex v = 0; v < 49; ++v) all[v] = v;
    CHECK(boundary_by_adjacency(g, all).size() == 24);
    CHECK(boundary_edge_count(g, all) == 28);
}

TEST_CASE("boundary by adjacency equals boundary by complement") {
    std::mt19937_64 rng(5);
    for (const auto& g : {PantsGraph::binary_tree(8, 1), PantsGraph::pruned_tree(8, 1), PantsGraph::grid(9, 2, 1),
                          PantsGraph::free_cayley(2, 5, 1)}) {
        for (int trial = 0; trial < 50; ++trial) {
            // Random connected set grown from the root.
            std::vector<PantsGraph::Vertex> K{g.root()}, nb;
            std::set<PantsGraph::Vertex> in{g.root()};
            const int size = 1 + static_cast<int>(rng() % 20);
            while (static_cast<int>(K.size()) < size) {
                g.neighbours(K[rng() % K.size()], nb);
                const auto u = nb[rng() % nb.size()];
                if (in.insert(u).second) K.push_back(u);
            }
            REQUIRE(is_connected_subset(g, K));
            CHECK(boundary_by_adjacency(g, K) == boundary_by_complement(g, K));
        }
    }
}

TEST_CASE("explicit graphs") {
    const auto one = PantsGraph::from_edges(1, {}, {0, 0, 0}, 2.0);
    const auto h = hP_estimate(one, {1, 1});
    CHECK(h.value == doctest::Approx(2 * std::numbers::pi / (3 * 2.0)));
    const auto p = iso_profile(one, 0, {1, 1});
    REQUIRE(p.exact.size() == 1);
    CHECK(p.exact[0] == 0);  // no neighbours outside: the lone vertex is interior

    // Two pants glued along two curves, plus a loop: no free boundary left.
    const auto closed = PantsGraph::from_edges(2, {{0, 1}, {0, 1}, {1, 1}}, {0}, 1.0, 4);
    CHECK(boundary_edge_count(closed, {0, 1}) == 1);
    CHECK(boundary_edge_count(closed, {1}) == 2);

    CHECK_THROWS_AS(PantsGraph::from_edges(3, {{0, 1}}, {}, 1.0), InvalidSpecError);
    CHECK_THROWS_AS(PantsGraph::from_edges(2, {{0, 1}, {0, 1}, {0, 1}, {0, 1}}, {}, 1.0), InvalidSpecError);
    CHECK_THROWS_AS(PantsGraph::from_edges(2, {{0, 5}}, {}, 1.0), InvalidSpecError);
}

TEST_CASE("exact enumeration counts connected sets") {
    // Subtrees of size m containing the root of an infinite binary tree are
    // counted by the Catalan numbers.
    const auto g = PantsGraph::binary_tree(20, 1);
    const auto p = iso_profile(g, 1, {10, 16});
    const std::uint64_t catalan[] = {1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796};
    REQUIRE(p.exact_up_to == 10);
    for (int m = 1; m <= 10; ++m) CHECK(p.enumerated[static_cast<std::size_t>(m - 1)] == catalan[m]);
    // Fixed polyominoes of size m containing a given cell: m A(m).
    const auto grid = PantsGraph::grid(31, 2, 1);
    const auto q = iso_profile(grid, grid.root(), {6, 16});
    const std::uint64_t A[] = {0, 1, 2, 6, 19, 63, 216};
    for (int m = 1; m <= 6; ++m) CHECK(q.enumerated[static_cast<std::size_t>(m - 1)] == m * A[m]);
}

TEST_CASE("single vertex profile") {
    const auto g = PantsGraph::binary_tree(6, 1);
    const auto p = iso_profile(g, 1, {1, 1});
    CHECK(p.exact[0] == 1.0);
}

TEST_CASE("amenability verdicts") {
    const auto tree = PantsGraph::binary_tree(20, 1);
    const auto t = iso_profile(tree, 1, {14, 4096});
    REQUIRE(t.exact_up_to == 14);
    for (double phi : t.exact) CHECK(phi >= 1.0 / 3 - 1e-12);
    CHECK(t.verdict == AmenabilityTrend::Nonamenable);

    const auto grid = PantsGraph::grid(121, 2, 1);
    const auto q = iso_profile(grid, grid.root(), {8, 4096});
    CHECK(q.verdict == AmenabilityTrend::Amenable);
    // Square Folner sets: perimeter over area 4 (s - 1) / s^2.
    CHECK(q.final_ratio <= 4.0 * 63 / (64.0 * 64) + 1e-12);

    for (std::size_t i = 1; i < q.exact.size(); ++i) CHECK(q.exact[i] <= q.exact[i - 1]);
    for (std::size_t i = 1; i < q.heuristic.size(); ++i) CHECK(q.heuristic[i].second <= q.heuristic[i - 1].second);
}

TEST_CASE("budget exhaustion gives a partial profile") {
    const auto tree = PantsGraph::binary_tree(20, 1);
    IsoOptions o{14, 64};
    o.budget = 20000;
    const auto p = iso_profile(tree, 1, o);
    CHECK(p.partial);
    CHECK(p.exact_up_to < 14);
    CHECK(p.exact_up_to >= 5);
}

TEST_CASE("hP of the binary tree is at most 2 pi / ell") {
    for (double ell : {1.0, 12.0, 40.0}) {
        const auto g = PantsGraph::binary_tree(20, ell);
        const auto h = hP_estimate(g, {12, 4096});
        CHECK(h.value <= 2 * std::numbers::pi / ell);
        CHECK(h.value > 0.9 * 2 * std::numbers::pi / ell);
    }
    // Grid: the ratio keeps growing with the searched size.
    const auto grid = PantsGraph::grid(121, 2, 1);
    CHECK(hP_estimate(grid, {6, 4096}).value > 2 * hP_estimate(grid, {6, 256}).value);
}

TEST_CASE("spectral chain") {
    const auto c = spectral_chain(2 * std::numbers::pi, 1, 10);
    // Hand arithmetic: h_high = 2 pi + 1, lambda_low = 1 / (4 (2 pi + 1)^2).
    CHECK(c.h_high == doctest::Approx(7.283185307179586));
    CHECK(c.h_low == doctest::Approx(6.283185307179586));
    CHECK(c.lambda0_low == doctest::Approx(0.004712998362));
    CHECK(c.lambda0_high == doctest::Approx(1.591549431));
    CHECK(c.delta_high == doctest::Approx(0.9952645774).epsilon(1e-9));
    CHECK(c.delta_low == 0.5);

    const auto lim = spectral_chain(0, 2, 10);
    CHECK(lim.h_high == 1);
    CHECK(lim.lambda0_low == 0.25);
    CHECK(lim.delta_high == 0.5);
    CHECK(spectral_chain(1e-9).delta_high == doctest::Approx(0.5).epsilon(1e-3));

    double prev = 0;
    for (int i = 0; i <= 100; ++i) {
        const double d = spectral_chain(0.05 * i).delta_high;
        CHECK(d >= prev);
        CHECK(d <= 1);
        prev = d;
    }
    CHECK_THROWS_AS(spectral_chain(-1), DomainError);
    CHECK_THROWS_AS(spectral_chain(1, 0, 1), DomainError);
}

TEST_CASE("gap bounds") {
    const auto r12 = gap_bounds(GapExample::Panty, 12);
    CHECK(r12.Delta_low == doctest::Approx(std::log(2.0) / (2 * hexagon_r(12))));
    CHECK(r12.Delta_low > 0.5);
    CHECK(std::abs(r12.Delta_low - 0.628) < 0.001);
    CHECK(gap_bounds(GapExample::Pruned, 60).Delta_low ==
          doctest::Approx(std::log(3.0) / (2 * 2 * std::acosh(std::sqrt(5.0) / 2))).epsilon(1e-6));

    std::vector<double> grid;
    for (double l = 4; l <= 40; l += 4) grid.push_back(l);
    const auto scan = gap_scan(GapExample::Panty, grid);
    REQUIRE(scan.rows.size() == grid.size());
    for (std::size_t i = 1; i < scan.rows.size(); ++i) CHECK(scan.rows[i].delta_high < scan.rows[i - 1].delta_high);
    // A gap needs b and B far smaller than the defaults; with b tiny the chain
    // reaches delta_high close to 1/2 and the gap opens.
    GapOptions tiny;
    tiny.b = 0.01;
    const auto open = gap_scan(GapExample::Panty, grid, tiny);
    REQUIRE(open.first_positive.has_value());
}
