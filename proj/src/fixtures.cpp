#include "hypent/fixtures.hpp"

#include <cmath>
#include <numbers>

namespace hypent::fixtures {

namespace {

std::pair<Complex, double> arc_interval(double phi, double theta) {
    const double a = std::tan((phi - theta) / 2), b = std::tan((phi + theta) / 2);
    return {Complex(0.5 * (a + b), 0), 0.5 * (b - a)};
}

std::vector<double> cantor_endpoints(int depth) {
    // Left endpoints are m / 3^depth with ternary digits of m in {0, 2}.
    std::vector<std::int64_t> left{0};
    std::int64_t scale = 1;
    for (int i = 0; i < depth; ++i) {
        std::vector<std::int64_t> next;
        next.reserve(left.size() * 2);
        for (auto m : left) {
            next.push_back(3 * m);
            next.push_back(3 * m + 2);
        }
        left = std::move(next);
        scale *= 3;
    }
    std::vector<double> xs;
    xs.reserve(left.size() * 2);
    for (auto m : left) {
        xs.push_back(static_cast<double>(m) / static_cast<double>(scale));
        xs.push_back(static_cast<double>(m + 1) / static_cast<double>(scale));
    }
    return xs;
}

}  // namespace

SchottkySpec symmetric_schottky(double theta) {
    if (!(theta > 0) || theta >= std::numbers::pi / 4) throw InvalidSpecError("theta must lie in (0, pi/4)");
    const double pi = std::numbers::pi;
    const auto d1 = arc_interval(pi / 4, theta), d1p = arc_interval(-3 * pi / 4, theta);
    const auto d2 = arc_interval(3 * pi / 4, theta), d2p = arc_interval(-pi / 4, theta);
    SchottkySpec s;
    s.n = 1;
    s.pairs = {{d1.first, d1.second, d1p.first, d1p.second}, {d2.first, d2.second, d2p.first, d2p.second}};
    return s;
}

HalfSpacePoint schottky_base() { return HalfSpacePoint(Complex(0, 0), 1.0); }

SchottkySpec cyclic_schottky() {
    SchottkySpec s;
    s.n = 1;
    s.pairs = {{Complex(-2, 0), 1.0, Complex(2, 0), 1.0}};
    return s;
}

PointCloud cantor_cloud(int depth) {
    if (depth < 0 || depth > 24) throw DomainError("Cantor depth must lie in [0, 24]");
    PointCloud c;
    c.n = 1;
    for (double x : cantor_endpoints(depth)) c.points.push_back({x, 0.0});
    c.generator = "cantor:middle-third-endpoints";
    c.depth = depth;
    c.resolution = std::pow(3.0, -depth);
    return c;
}

PointCloud cantor_product_cloud(int depth) {
    if (depth < 0 || depth > 10) throw DomainError("product Cantor depth must lie in [0, 10]");
    const auto xs = cantor_endpoints(depth);
    PointCloud c;
    c.n = 2;
    c.points.reserve(xs.size() * xs.size());
    for (double x : xs)
        for (double y : xs) c.points.push_back({x, y});
    c.generator = "cantor:product";
    c.depth = depth;
    c.resolution = std::pow(3.0, -depth);
    return c;
}

PointCloud interval_cloud(double spacing) {
    if (!(spacing > 0) || spacing > 1) throw DomainError("interval spacing must lie in (0, 1]");
    const auto m = static_cast<std::int64_t>(std::llround(1.0 / spacing));
    PointCloud c;
    c.n = 1;
    for (std::int64_t i = 0; i <= m; ++i) c.points.push_back({static_cast<double>(i) / static_cast<double>(m), 0.0});
    c.generator = "interval:uniform";
    c.resolution = 1.0 / static_cast<double>(m);
    return c;
}

}  // namespace hypent::fixtures

namespace hypent::fixtures {

UDSet cusp_uds(int ray_depth, double lattice_radius) {
    if (ray_depth < 0 || ray_depth > 60) throw DomainError("ray depth must lie in [0, 60]");
    UDSet u;
    u.n = 1;
    for (int k = -ray_depth; k < 30; ++k) {
        if (k == 0) u.origin_index = u.points.size();
        u.points.emplace_back(Complex(0), std::ldexp(1.0, k));
    }
    u.horoball_tag.assign(u.points.size(), 0);
    const double scale = std::ldexp(1.0, 30);
    for (const auto& p : horoball_lattice(1, 24, {lattice_radius}).points) {
        u.points.emplace_back(p.base * scale, p.height * scale);
        u.horoball_tag.push_back(1);
    }
    u.separation_m = std::min(0.5, min_pair_distance(u.points, 0.5));
    u.density_M = 1.0;
    return u;
}

TightFixture horoball_tight_fixture(int width, int k_max) {
    if (width < 2 || k_max < 1) throw DomainError("invalid fixture size");
    TightFixture f;
    f.cloud.n = 1;
    for (int m = -width; m <= width; ++m) f.cloud.points.push_back({static_cast<double>(m), 0.0});
    f.cloud.resolution = 1;
    f.uds = build_dyadic_uds(f.cloud, 1, k_max);
    f.uds.horoball_tag.assign(f.uds.points.size(), 0);
    f.uds.origin_index = 0;
    for (int k = 0; std::ldexp(1.0, k) <= width; ++k) {
        const double t = std::ldexp(1.0, k);
        const auto reach = static_cast<int>(std::floor((width - t) / t));
        for (int m = -reach; m <= reach; ++m) {
            if (k == 0 && m == 0) f.uds.origin_index = f.uds.points.size();
            f.uds.points.emplace_back(Complex(m * t, 0), t);
            f.uds.horoball_tag.push_back(1);
        }
    }
    return f;
}

}  // namespace hypent::fixtures
