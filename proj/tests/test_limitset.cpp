#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hypent/fixtures.hpp"
#include "hypent/limitset.hpp"

using namespace hypent;

namespace {

const double kCantorDim = std::log(2.0) / std::log(3.0);

PointCloud transformed(const PointCloud& c, double scale, double shift) {
    PointCloud out = c;
    for (auto& p : out.points) {
        p[0] = p[0] * scale + shift;
        if (c.n == 2) p[1] = p[1] * scale + shift;
    }
    out.resolution = c.resolution * scale;
    return out;
}

}  // namespace

TEST_CASE("cyclic group limit set is two points") {
    for (int depth : {1, 3, 6}) {
        const auto cloud = sample_limit_set(fixtures::cyclic_schottky(), depth, SampleMode::FixedPoints);
        CHECK(cloud.points.size() == 2);
        CHECK(cloud.elementary);
        const double a = std::min(cloud.points[0][0], cloud.points[1][0]);
        const double b = std::max(cloud.points[0][0], cloud.points[1][0]);
        CHECK(a == doctest::Approx(-std::sqrt(3.0)));
        CHECK(b == doctest::Approx(std::sqrt(3.0)));
    }
}

TEST_CASE("sampled limit points lie in the defining disks") {
    const auto spec = fixtures::symmetric_schottky(0.5);
    for (auto mode : {SampleMode::FixedPoints, SampleMode::Projections}) {
        const auto cloud = sample_limit_set(spec, 10, mode);
        CHECK(cloud.points.size() == 4 * 19683);
        CHECK_FALSE(cloud.elementary);
        for (const auto& p : cloud.points) {
            bool inside = false;
            for (const auto& d : spec.pairs) {
                inside = inside || std::abs(p[0] - d.center.real()) < d.radius;
                inside = inside || std::abs(p[0] - d.center2.real()) < d.radius2;
            }
            CHECK(inside);
        }
    }
    CHECK_THROWS_AS(sample_limit_set(spec, 17, SampleMode::FixedPoints), DomainError);
}

TEST_CASE("fixed-point and projection clouds have comparable box counts") {
    const auto spec = fixtures::symmetric_schottky(0.5);
    const auto a = sample_limit_set(spec, 9, SampleMode::FixedPoints);
    const auto b = sample_limit_set(spec, 9, SampleMode::Projections);
    const int k_res = static_cast<int>(std::floor(-std::log2(a.resolution)));
    REQUIRE(k_res > 4);
    const auto ca = box_counts(a, 0, k_res - 1), cb = box_counts(b, 0, k_res - 1);
    for (std::size_t i = 0; i < ca.counts.size(); ++i) {
        const double r = static_cast<double>(ca.counts[i].second) / static_cast<double>(cb.counts[i].second);
        CHECK(r <= 2.0);
        CHECK(r >= 0.5);
    }
}

TEST_CASE("box counts: trivial clouds") {
    PointCloud single;
    single.points = {{0.3, 0.0}};
    for (const auto& [k, N] : box_counts(single, 0, 20).counts) CHECK(N == 1);
    const auto full = fixtures::interval_cloud(std::ldexp(1.0, -20));
    for (const auto& [k, N] : box_counts(full, 0, 16).counts)
        CHECK(N == (std::uint64_t{1} << k) + 1);  // the right endpoint 1 opens one extra box
    CHECK_THROWS_AS(box_counts(PointCloud{}, 0, 3), DomainError);
}

TEST_CASE("box counts respect monotonicity and the child bound") {
    for (const auto& cloud : {fixtures::cantor_cloud(10), fixtures::cantor_product_cloud(5),
                              sample_limit_set(fixtures::symmetric_schottky(0.5), 8, SampleMode::FixedPoints)}) {
        const auto g = box_counts(cloud, -2, 24);
        for (std::size_t i = 1; i < g.counts.size(); ++i) {
            CHECK(g.counts[i].second >= g.counts[i - 1].second);
            CHECK(g.counts[i].second <= (std::uint64_t{1} << cloud.n) * g.counts[i - 1].second);
        }
    }
}

TEST_CASE("box dimension of the Cantor set") {
    const auto cloud = fixtures::cantor_cloud(12);
    const auto e = upper_box_dim(box_counts(cloud, 0, 24));
    CHECK(std::abs(e.value - kCantorDim) < 0.02);
    CHECK(e.window_hi == 15);
    CHECK(e.method == "upper-box");
    CHECK(e.ratio_min <= e.ratio_max);
}

TEST_CASE("box dimension is invariant under translation and dyadic scaling") {
    const auto cloud = fixtures::cantor_cloud(12);
    const double base = upper_box_dim(box_counts(cloud, 0, 24)).value;
    for (double shift : {0.123, -7.77, 1000.5})
        CHECK(std::abs(upper_box_dim(box_counts(transformed(cloud, 1.0, shift), -2, 24)).value - base) < 0.01);
    for (int j : {-3, 2, 5}) {
        const auto t = transformed(cloud, std::ldexp(1.0, j), 0.0);
        CHECK(std::abs(upper_box_dim(box_counts(t, -j - 2, 24 - j)).value - base) < 0.01);
    }
}

TEST_CASE("box dimension of the product Cantor set") {
    const auto cloud = fixtures::cantor_product_cloud(8);
    const auto e = upper_box_dim(box_counts(cloud, 0, 20));
    CHECK(std::abs(e.value - 2 * kCantorDim) < 0.04);
}

TEST_CASE("saturated counts are a resolution error") {
    PointCloud few;
    few.points = {{0.0, 0.0}, {0.5, 0.0}, {0.75, 0.0}};
    CHECK_THROWS_AS(upper_box_dim(box_counts(few, 0, 10)), ResolutionError);
}

TEST_CASE("porosity") {
    const auto cantor = porosity_estimate(fixtures::cantor_cloud(12));
    CHECK(cantor.c >= 1.0 / 6);
    CHECK(cantor.c <= 1.0);
    CHECK_FALSE(cantor.low_confidence);
    const auto full = porosity_estimate(fixtures::interval_cloud(std::ldexp(1.0, -12)));
    CHECK(full.c < 2 * std::ldexp(1.0, -6));
    const auto prod = porosity_estimate(fixtures::cantor_product_cloud(6));
    CHECK(prod.c > 0.1);
    CHECK(prod.c <= 1.0);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0, 1);
    PointCloud random2;
    random2.n = 2;
    for (int i = 0; i < 3000; ++i) random2.points.push_back({u(rng), u(rng)});
    CHECK(porosity_estimate(random2).c <= 1.0);
}

TEST_CASE("exhaustive hole search on the Cantor gaps") {
    // Oracle: scan every cloud point and dyadic radius with a dense hole grid.
    const auto cloud = fixtures::cantor_cloud(7);
    const NearestIndex idx(cloud);
    double c = 1;
    for (const auto& p : cloud.points)
        for (int j = 0; j <= 6; ++j) {
            const double r = std::ldexp(1.0, -j);
            double h = 0;
            for (int i = -2048; i <= 2048; ++i) h = std::max(h, idx.distance({p[0] + r * i / 2048.0, 0}));
            c = std::min(c, h / r);
        }
    CHECK(c >= 1.0 / 6);
    PorosityOptions o;
    o.min_radius_factor = 1;
    const auto est = porosity_estimate(cloud, o);
    CHECK(est.c == doctest::Approx(c).epsilon(0.01));
}

TEST_CASE("porosity dimension bound") {
    CHECK(porosity_dim_bound(1e-9, 2, 0.125) == doctest::Approx(2.0));
    CHECK(porosity_dim_bound(1.0, 1, 1.0) == 0.0);
    CHECK(porosity_dim_bound(1.0, 2, 2.0) == 0.0);
    CHECK(default_porosity_constant(1) == 0.25);
    CHECK_THROWS_AS(porosity_dim_bound(1.5, 1, 1.0), DomainError);
    const double c = porosity_estimate(fixtures::cantor_cloud(12)).c;
    const double dim = upper_box_dim(box_counts(fixtures::cantor_cloud(12), 0, 24)).value;
    CHECK(porosity_dim_bound(c, 1, default_porosity_constant(1)) > dim);
}

TEST_CASE("nearest index") {
    PointCloud c;
    c.n = 2;
    c.points = {{0, 0}, {1, 0}, {0, 2}};
    const NearestIndex idx(c);
    CHECK(idx.distance({0.4, 0}) == doctest::Approx(0.4));
    CHECK(idx.distance_to_box({2, 0}, {3, 1}) == doctest::Approx(1.0));
    CHECK(idx.distance_to_box({-1, -1}, {0.5, 0.5}) == 0.0);
    PointCloud d;
    d.points = {{0, 0}, {1, 0}};
    const NearestIndex i1(d);
    CHECK(i1.distance_to_box({0.25, 0}, {0.5, 0}) == doctest::Approx(0.25));
    CHECK(i1.distance({3, 0}) == doctest::Approx(2.0));
}

TEST_CASE("Whitney exponent") {
    PointCloud two;
    two.points = {{0.0, 0.0}, {1.0, 0.0}};
    CHECK(whitney_exponent(two, 1, 20).value < 0.05);

    const auto cantor = fixtures::cantor_cloud(12);
    const auto w = whitney_exponent(cantor, 1, 30);
    const auto b = upper_box_dim(box_counts(cantor, 0, 24));
    CHECK(std::abs(w.value - kCantorDim) < 0.03);
    CHECK(std::abs(w.value - b.value) < 0.03);
    CHECK(w.method == "whitney");
}

TEST_CASE("Whitney cubes of a sampled interval") {
    // At its own resolution the sampled interval is dense: nothing to fit.
    CHECK_THROWS_AS(whitney_exponent(fixtures::interval_cloud(std::ldexp(1.0, -12)), 1, 30), ResolutionError);
    // Direct summation: spacing 2^-m leaves 2^m gaps, each holding exactly two
    // maximal cubes three levels below the spacing, so log W / (j log 2) -> 1.
    double prev = 0;
    for (int m : {6, 10, 14}) {
        const auto w = whitney_level_counts(fixtures::interval_cloud(std::ldexp(1.0, -m)), m + 3);
        CHECK(w[m + 3] == 2 * (std::uint64_t{1} << m));
        const double ratio = std::log(static_cast<double>(w[m + 3])) / ((m + 3) * std::log(2.0));
        CHECK(ratio > prev);
        prev = ratio;
    }
    CHECK(prev > 0.85);
}
