#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hypent/hypcore.hpp"

using namespace hypent;

namespace {

BallPoint random_ball(std::mt19937_64& rng, int n, double rmax = 0.95) {
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> u(0, 1);
    Vec3 v{};
    double s = 0;
    for (int i = 0; i <= n; ++i) {
        v[i] = g(rng);
        s += v[i] * v[i];
    }
    const double r = rmax * std::pow(u(rng), 1.0 / (n + 1)) / std::sqrt(s);
    for (int i = 0; i <= n; ++i) v[i] *= r;
    return BallPoint(n, v);
}

Isometry random_isometry(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> g;
    auto e = [&] { return n == 1 ? Complex(g(rng), 0) : Complex(g(rng), g(rng)); };
    for (;;) {
        Complex a = e(), b = e(), c = e(), d = e();
        Complex det = a * d - b * c;
        if (n == 1 && det.real() < 0.1) continue;
        if (std::abs(det) < 0.1) continue;
        return Isometry::normalized(a, b, c, d);
    }
}

// Half-space distance written via arccosh, independent of the library form.
double acosh_half_dist(const HalfSpacePoint& a, const HalfSpacePoint& b) {
    const double num = std::norm(a.base - b.base) + (a.height - b.height) * (a.height - b.height);
    return std::acosh(1.0 + num / (2.0 * a.height * b.height));
}

double ball_dist_acosh(const Vec3& a, const Vec3& b) {
    double na = 0, nb = 0, d = 0;
    for (int i = 0; i < 3; ++i) {
        na += a[i] * a[i];
        nb += b[i] * b[i];
        d += (a[i] - b[i]) * (a[i] - b[i]);
    }
    return std::acosh(1.0 + 2.0 * d / ((1 - na) * (1 - nb)));
}

double paper_n1_volume(double R) {
    const double c = std::cosh(R);
    const double a = std::atan(std::sqrt((c - 1) / 2));
    const double pi2 = std::numbers::pi / 2;
    return 2 * c * (pi2 - a) + 2 * std::sqrt(2 * (c - 1)) - 2 * (pi2 + a);
}

// Trapezoid refinement in v with u = R - v^2, which removes the square-root
// endpoint singularity of the cross-section.
double trapezoid_volume(double R, int n) {
    const double omega = n == 1 ? 2.0 : std::numbers::pi;
    auto f = [&](double v) {
        const double u = R - v * v;
        const double y = std::exp(u);
        const double w = (std::exp(R) - y) * (y - std::exp(-R));
        return omega * std::pow(std::max(w, 0.0), n / 2.0) * std::exp(-n * u) * 2 * v;
    };
    const double b = std::sqrt(R);
    int m = 16;
    double h = b / m, sum = 0.5 * (f(0) + f(b));
    for (int i = 1; i < m; ++i) sum += f(i * h);
    double prev = sum * h;
    for (int iter = 0; iter < 22; ++iter) {
        double add = 0;
        for (int i = 0; i < m; ++i) add += f((i + 0.5) * h);
        sum += add;
        m *= 2;
        h /= 2;
        const double cur = sum * h;
        if (std::abs(cur - prev) < 1e-10 * std::abs(cur)) return cur;
        prev = cur;
    }
    return prev;
}

}  // namespace

TEST_CASE("ball distance closed forms") {
    const auto o = BallPoint::origin(2);
    CHECK(dist(o, o) == 0.0);
    CHECK(dist(o, BallPoint(2, {0.5, 0, 0})) == doctest::Approx(std::log(3.0)).epsilon(1e-14));
    CHECK_THROWS_AS(BallPoint(2, {1.0, 0, 0}), DomainError);
    CHECK_THROWS_AS(BallPoint(1, {0.8, 0.7, 0}), DomainError);
}

TEST_CASE("ball and half-space distances agree") {
    std::mt19937_64 rng(1);
    for (int n : {1, 2}) {
        for (int i = 0; i < 100; ++i) {
            const auto a = random_ball(rng, n), b = random_ball(rng, n);
            const double db = dist(a, b);
            CHECK(db == doctest::Approx(ball_dist_acosh(a.coords, b.coords)).epsilon(1e-10));
            CHECK(std::abs(acosh_half_dist(half_from_ball(a), half_from_ball(b)) - db) < 1e-10);
            CHECK(dist(a, b) == dist(b, a));
        }
    }
}

TEST_CASE("triangle inequality") {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 200; ++i) {
        const auto a = random_ball(rng, 2), b = random_ball(rng, 2), c = random_ball(rng, 2);
        CHECK(dist(a, c) <= dist(a, b) + dist(b, c) + 1e-12);
    }
}

TEST_CASE("model conversions are inverse") {
    std::mt19937_64 rng(3);
    for (int n : {1, 2}) {
        for (int i = 0; i < 200; ++i) {
            const auto a = random_ball(rng, n, 0.9);
            const auto back = ball_from_half(half_from_ball(a), n);
            for (int j = 0; j < 3; ++j) CHECK(std::abs(back.coords[j] - a.coords[j]) < 1e-12);
        }
    }
    const auto o = half_from_ball(BallPoint::origin(2));
    CHECK(std::abs(o.base) < 1e-15);
    CHECK(o.height == doctest::Approx(1.0));
}

TEST_CASE("boundary forms and infinity") {
    const auto inf = BoundaryPoint::infinity();
    CHECK_THROWS_AS(inf.plane(), DomainError);
    const auto s = inf.sphere(2);
    CHECK(s[2] == -1.0);
    const auto zero = BoundaryPoint::on_plane(0.0).sphere(1);
    CHECK(zero[1] == doctest::Approx(1.0));
    const auto p = BoundaryPoint::on_plane(Complex(0.3, -1.2));
    const auto back = BoundaryPoint::on_sphere(2, p.sphere(2)).plane();
    CHECK(std::abs(back - Complex(0.3, -1.2)) < 1e-12);
    CHECK_THROWS_AS(BoundaryPoint::on_sphere(2, {0.5, 0, 0}), DomainError);
}

TEST_CASE("isometry action") {
    const HalfSpacePoint p(Complex(0.2, -0.7), 0.4);
    const auto q = Isometry().apply(p);
    CHECK(q.base == p.base);
    CHECK(q.height == p.height);

    const double lam = 1.7;
    const Isometry g(lam, 0.0, 0.0, 1 / lam);
    const auto r = g.apply(HalfSpacePoint(0.0, 1.0));
    CHECK(std::abs(r.base) < 1e-15);
    CHECK(r.height == doctest::Approx(lam * lam));
    CHECK(dist(HalfSpacePoint(0.0, 1.0), r) == doctest::Approx(2 * std::log(lam)));
    CHECK(g.translation_length() == doctest::Approx(2 * std::log(lam)));
    CHECK_THROWS_AS(Isometry(2.0, 0.0, 0.0, 1.0), DomainError);
}

TEST_CASE("composition law and isometry property") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-2, 2), h(0.1, 3);
    for (int n : {1, 2}) {
        for (int i = 0; i < 100; ++i) {
            const auto g = random_isometry(rng, n), k = random_isometry(rng, n);
            const HalfSpacePoint p(Complex(u(rng), n == 2 ? u(rng) : 0), h(rng));
            const HalfSpacePoint q(Complex(u(rng), n == 2 ? u(rng) : 0), h(rng));
            const auto a = (g * k).apply(p), b = g.apply(k.apply(p));
            CHECK(acosh_half_dist(a, b) < 1e-8);
            CHECK(std::abs(dist(g.apply(p), g.apply(q)) - dist(p, q)) < 1e-10);
            if (n == 1) CHECK(std::abs(g.apply(p).base.imag()) < 1e-14);
        }
    }
}

TEST_CASE("long products stay unimodular") {
    std::mt19937_64 rng(5);
    Isometry g;
    for (int i = 0; i < 1000; ++i) {
        auto k = random_isometry(rng, 2);
        // Keep entries bounded by alternating with the inverse of a rotation-like step.
        g = g * k * k.inverse();
    }
    CHECK(std::abs(g.det() - Complex(1)) < 1e-12);
    CHECK(std::abs(g.trace() - Complex(2)) < 1e-9);
}

TEST_CASE("attracting fixed point") {
    const Isometry g(2.0, 3.0, 1.0, 2.0);
    CHECK(g.attracting_fixed_point().plane().real() == doctest::Approx(std::sqrt(3.0)));
    CHECK(g.inverse().attracting_fixed_point().plane().real() == doctest::Approx(-std::sqrt(3.0)));
    CHECK_THROWS_AS(Isometry().attracting_fixed_point(), DomainError);
}

TEST_CASE("poisson kernel") {
    const auto xi = BoundaryPoint::on_sphere(2, {1, 0, 0});
    CHECK(poisson_kernel(BallPoint::origin(2), xi) == doctest::Approx(1.0));
    CHECK(poisson_kernel(BallPoint::origin(2), BoundaryPoint::on_plane(Complex(3, 1))) == doctest::Approx(1.0));
    CHECK(poisson_kernel(BallPoint(2, {0.5, 0, 0}), xi) == doctest::Approx(3.0));
    for (double t : {5.0, 10.0, 20.0}) {
        const BallPoint z(2, {std::tanh(t / 2), 0, 0});
        CHECK(std::log(poisson_kernel(z, xi)) / t == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("shadow cap matches geodesic ray-marching") {
    // Geodesic from the antipode (-1, 0) to the boundary point at angle phi is
    // the circle orthogonal to the unit circle through both endpoints.
    auto min_distance = [](double phi, const Vec3& x) {
        const double px = -1, py = 0, qx = std::cos(phi), qy = std::sin(phi);
        const double dot = px * qx + py * qy;
        const double cx = (px + qx) / (1 + dot), cy = (py + qy) / (1 + dot);
        const double rad = std::hypot(cx - px, cy - py);
        const double a0 = std::atan2(py - cy, px - cx), a1 = std::atan2(qy - cy, qx - cx);
        double da = a1 - a0;
        if (da > std::numbers::pi) da -= 2 * std::numbers::pi;
        if (da < -std::numbers::pi) da += 2 * std::numbers::pi;
        double best = 1e300;
        const int steps = 200000;
        for (int i = 1; i < steps; ++i) {
            const double a = a0 + da * i / steps;
            const Vec3 y{cx + rad * std::cos(a), cy + rad * std::sin(a), 0};
            if (y[0] * y[0] + y[1] * y[1] >= 1) continue;
            best = std::min(best, ball_dist_acosh(x, y));
        }
        return best;
    };
    for (double r : {0.3, 0.7}) {
        for (double ell : {0.5, 1.0}) {
            const BallPoint x(1, {r, 0, 0});
            const auto s = shadow(x, ell);
            double lo = 0, hi = std::numbers::pi * 0.999;
            for (int it = 0; it < 40; ++it) {
                const double mid = 0.5 * (lo + hi);
                (min_distance(mid, x.coords) <= ell ? lo : hi) = mid;
            }
            CHECK(std::abs(0.5 * (lo + hi) - s.angular_radius) < 1e-4);
        }
    }
}

TEST_CASE("shadow diameter scales like exp(-d)") {
    const double ell = 1.0;
    double lo = 1e300, hi = 0;
    for (double d = 3; d <= 15; d += 1) {
        const BallPoint x(2, {0, std::tanh(d / 2) * 0.6, std::tanh(d / 2) * 0.8});
        const double v = shadow(x, ell).diameter() * std::exp(d);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    CHECK(hi / lo < 1.2);
    CHECK(hi == doctest::Approx(4 * std::sinh(ell)).epsilon(1e-6));
}

TEST_CASE("shadow monotonicity and errors") {
    const BallPoint x(2, {0.5, 0.2, 0});
    const auto a = shadow(x, 0.5), b = shadow(x, 1.5);
    CHECK(a.angular_radius < b.angular_radius);
    const auto edge = BoundaryPoint::on_sphere(2, {std::cos(a.angular_radius * 0.99 + std::atan2(0.2, 0.5)),
                                                 std::sin(a.angular_radius * 0.99 + std::atan2(0.2, 0.5)), 0});
    CHECK(a.contains(edge));
    CHECK(b.contains(edge));
    double prev = 10;
    for (double r = 0.1; r < 0.99; r += 0.05) {
        const double th = shadow(BallPoint(2, {r, 0, 0}), 1.0).angular_radius;
        CHECK(th < prev);
        prev = th;
    }
    CHECK_THROWS_AS(shadow(BallPoint::origin(2), 1.0), DomainError);
}

TEST_CASE("horoball volume") {
    for (double R : {1.0, 5.0, 10.0})
        CHECK(horoball_ball_volume(R, 1) == doctest::Approx(paper_n1_volume(R)).epsilon(1e-8));
    for (int n : {1, 2}) {
        for (double R : {0.5, 3.0, 12.0, 25.0})
            CHECK(horoball_ball_volume(R, n) == doctest::Approx(trapezoid_volume(R, n)).epsilon(1e-6));
        std::vector<double> xs, ys;
        for (double R = 10; R <= 30; R += 0.5) {
            xs.push_back(R);
            ys.push_back(std::log(horoball_ball_volume(R, n)));
        }
        CHECK(std::abs(fit_line(xs, ys).slope - n / 2.0) < 0.02);
    }
    CHECK(horoball_ball_volume(1e-4, 2) < 1e-8);
    CHECK_THROWS_AS(horoball_ball_volume(0.0, 1), DomainError);
    CHECK_THROWS_AS(horoball_ball_volume(1.0, 3), DomainError);
}

TEST_CASE("horoball membership") {
    const Horoball top(BoundaryPoint::infinity(), 2.0);
    CHECK(top.contains(HalfSpacePoint(5.0, 2.5)));
    CHECK_FALSE(top.contains(HalfSpacePoint(0.0, 1.5)));
    const Horoball at0(BoundaryPoint::on_plane(0.0), 1.0);
    CHECK(at0.contains(HalfSpacePoint(0.0, 0.9)));
    CHECK_FALSE(at0.contains(HalfSpacePoint(0.6, 0.1)));
    const Horoball ball(BoundaryPoint::on_sphere(2, {0, 0, 1}), 0.5);
    CHECK(ball.contains(BallPoint(2, {0, 0, 0.9})));
    CHECK_FALSE(ball.contains(BallPoint(2, {0, 0, 0.4})));
}
