#include "hypent/hypcore.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>

namespace hypent {

namespace {

constexpr double kDetTolerance = 1e-12;
constexpr int kRenormaliseEvery = 32;

double norm2(const Vec3& v) { return v[0] * v[0] + v[1] * v[1] + v[2] * v[2]; }

// Cayley involution on R^{n+1}; the last used coordinate is the vertical one.
Vec3 cayley(const Vec3& q, int n) {
    Vec3 s = q;
    s[n] += 1.0;
    const double r2 = norm2(s);
    Vec3 out{};
    for (int i = 0; i <= n; ++i) out[i] = 2.0 * s[i] / r2;
    out[n] -= 1.0;
    return out;
}

Vec3 half_vector(const HalfSpacePoint& p, int n) {
    Vec3 v{};
    v[0] = p.base.real();
    if (n == 2) v[1] = p.base.imag();
    v[n] = p.height;
    return v;
}

}  // namespace

void require_dimension(int n) {
    if (n != 1 && n != 2) throw DomainError("boundary dimension must be 1 or 2");
}

BallPoint::BallPoint(int n_, Vec3 c) : n(n_), coords(c) {
    require_dimension(n);
    for (int i = n + 1; i < 3; ++i) coords[i] = 0;
    for (double v : coords)
        if (!std::isfinite(v)) throw DomainError("ball point has non-finite coordinate");
    if (norm2() >= 1.0) throw DomainError("ball point must have norm < 1");
}

BallPoint BallPoint::origin(int n) { return BallPoint(n, Vec3{}); }

double BallPoint::norm2() const { return hypent::norm2(coords); }

HalfSpacePoint::HalfSpacePoint(Complex b, double h) : base(b), height(h) {
    if (!(h > 0) || !std::isfinite(h) || !std::isfinite(b.real()) || !std::isfinite(b.imag()))
        throw DomainError("half-space point needs finite base and positive height");
}

BoundaryPoint BoundaryPoint::on_sphere(int n, Vec3 u) {
    require_dimension(n);
    for (int i = n + 1; i < 3; ++i) u[i] = 0;
    const double r = std::sqrt(norm2(u));
    if (std::abs(r - 1.0) > 1e-9) throw DomainError("sphere boundary point must have unit norm");
    BoundaryPoint p;
    p.form_ = Form::Sphere;
    p.n_ = n;
    for (auto& v : u) v /= r;
    p.u_ = u;
    return p;
}

BoundaryPoint BoundaryPoint::on_plane(Complex x) {
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
        throw DomainError("use BoundaryPoint::infinity() for the point at infinity");
    BoundaryPoint p;
    p.form_ = Form::Plane;
    p.x_ = x;
    return p;
}

BoundaryPoint BoundaryPoint::infinity() { return BoundaryPoint(); }

Vec3 BoundaryPoint::sphere(int n) const {
    require_dimension(n);
    switch (form_) {
        case Form::Sphere:
            if (n != n_) throw DomainError("boundary point dimension mismatch");
            return u_;
        case Form::Infinity: {
            Vec3 v{};
            v[n] = -1.0;
            return v;
        }
        case Form::Plane:
        default: {
            if (n == 1 && x_.imag() != 0) throw DomainError("planar boundary point is not on the real line");
            Vec3 q{};
            q[0] = x_.real();
            if (n == 2) q[1] = x_.imag();
            return cayley(q, n);
        }
    }
}

Complex BoundaryPoint::plane() const {
    switch (form_) {
        case Form::Plane:
            return x_;
        case Form::Sphere: {
            Vec3 v = u_;
            if (std::abs(v[n_] + 1.0) < 1e-15) throw DomainError("south pole corresponds to infinity");
            const Vec3 q = cayley(v, n_);
            return n_ == 2 ? Complex(q[0], q[1]) : Complex(q[0], 0.0);
        }
        case Form::Infinity:
        default:
            throw DomainError("operation does not accept the point at infinity");
    }
}

Isometry::Isometry(Complex a, Complex b, Complex c, Complex d, std::string label)
    : m_{a, b, c, d}, label_(std::move(label)) {
    for (const auto& e : m_)
        if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) throw DomainError("isometry entry not finite");
    if (std::abs(det() - Complex(1)) > kDetTolerance) throw DomainError("isometry determinant must be 1");
}

Isometry Isometry::normalized(Complex a, Complex b, Complex c, Complex d, std::string label) {
    const Complex det = a * d - b * c;
    if (std::abs(det) == 0) throw DomainError("singular matrix");
    const Complex s = std::sqrt(det);
    return Isometry(a / s, b / s, c / s, d / s, std::move(label));
}

Isometry Isometry::recenter(Complex shift, double scale) {
    if (!(scale > 0)) throw DomainError("recenter scale must be positive");
    const double r = std::sqrt(scale);
    return Isometry(Complex(1 / r), -shift / r, Complex(0), Complex(r));
}

Isometry Isometry::operator*(const Isometry& h) const {
    Isometry g;
    g.m_ = {m_[0] * h.m_[0] + m_[1] * h.m_[2], m_[0] * h.m_[1] + m_[1] * h.m_[3],
            m_[2] * h.m_[0] + m_[3] * h.m_[2], m_[2] * h.m_[1] + m_[3] * h.m_[3]};
    g.products_ = std::max(products_, h.products_) + 1;
    if (g.products_ >= kRenormaliseEvery) {
        const Complex s = std::sqrt(g.det());
        for (auto& e : g.m_) e /= s;
        g.products_ = 0;
    }
    return g;
}

Isometry Isometry::inverse() const {
    Isometry g;
    g.m_ = {m_[3], -m_[1], -m_[2], m_[0]};
    g.products_ = products_;
    return g;
}

HalfSpacePoint Isometry::apply(const HalfSpacePoint& p) const {
    const Complex& a = m_[0];
    const Complex& b = m_[1];
    const Complex& c = m_[2];
    const Complex& d = m_[3];
    const Complex z = p.base;
    const double t = p.height;
    const Complex czd = c * z + d;
    const double den = std::norm(czd) + std::norm(c) * t * t;
    const Complex x = ((a * z + b) * std::conj(czd) + a * std::conj(c) * t * t) / den;
    return HalfSpacePoint(x, t / den);
}

BoundaryPoint Isometry::apply(const BoundaryPoint& xi) const {
    if (xi.is_infinity()) {
        if (m_[2] == Complex(0)) return BoundaryPoint::infinity();
        return BoundaryPoint::on_plane(m_[0] / m_[2]);
    }
    const Complex z = xi.plane();
    const Complex den = m_[2] * z + m_[3];
    if (den == Complex(0)) return BoundaryPoint::infinity();
    return BoundaryPoint::on_plane((m_[0] * z + m_[1]) / den);
}

bool Isometry::is_real(double tol) const {
    for (const auto& e : m_)
        if (std::abs(e.imag()) > tol) return false;
    return true;
}

double Isometry::translation_length() const {
    return 2.0 * std::abs(std::acosh(trace() / 2.0).real());
}

BoundaryPoint Isometry::attracting_fixed_point() const {
    const Complex &a = m_[0], &b = m_[1], &c = m_[2], &d = m_[3];
    if (std::abs(c) == 0) {
        if (std::abs(a) > std::abs(d)) return BoundaryPoint::infinity();
        if (std::abs(a) == std::abs(d)) throw DomainError("element is not loxodromic");
        return BoundaryPoint::on_plane(b / (d - a));
    }
    const Complex disc = std::sqrt((a + d) * (a + d) - Complex(4));
    const Complex z1 = (a - d + disc) / (2.0 * c);
    const Complex z2 = (a - d - disc) / (2.0 * c);
    // g'(z) = (cz + d)^{-2}; the attracting point has |cz + d| > 1.
    const double k1 = std::abs(c * z1 + d), k2 = std::abs(c * z2 + d);
    if (std::abs(k1 - k2) < 1e-14 * std::max(1.0, k1)) throw DomainError("element is not loxodromic");
    return BoundaryPoint::on_plane(k1 > k2 ? z1 : z2);
}

HalfSpacePoint half_from_ball(const BallPoint& b) {
    const Vec3 q = cayley(b.coords, b.n);
    return HalfSpacePoint(b.n == 2 ? Complex(q[0], q[1]) : Complex(q[0], 0.0), q[b.n]);
}

BallPoint ball_from_half(const HalfSpacePoint& p, int n) {
    require_dimension(n);
    if (n == 1 && p.base.imag() != 0) throw DomainError("n = 1 point must have real base");
    Vec3 v = cayley(half_vector(p, n), n);
    // Points extremely deep in the half-space can round onto the sphere.
    const double r2 = norm2(v);
    if (r2 >= 1.0) {
        const double s = std::nextafter(1.0, 0.0) / std::sqrt(r2);
        for (auto& x : v) x *= s;
    }
    return BallPoint(n, v);
}

double dist(const BallPoint& a, const BallPoint& b) {
    if (a.n != b.n) throw DomainError("ball points of different dimension");
    Vec3 d{a.coords[0] - b.coords[0], a.coords[1] - b.coords[1], a.coords[2] - b.coords[2]};
    const double q = std::sqrt(norm2(d) / ((1.0 - a.norm2()) * (1.0 - b.norm2())));
    return 2.0 * std::asinh(q);
}

double dist(const HalfSpacePoint& a, const HalfSpacePoint& b) {
    const double dh = a.height - b.height;
    const double q = std::sqrt(std::norm(a.base - b.base) + dh * dh) / (2.0 * std::sqrt(a.height * b.height));
    return 2.0 * std::asinh(q);
}

double poisson_kernel(const BallPoint& z, const BoundaryPoint& xi) {
    const Vec3 u = xi.sphere(z.n);
    Vec3 d{u[0] - z.coords[0], u[1] - z.coords[1], u[2] - z.coords[2]};
    return (1.0 - z.norm2()) / norm2(d);
}

Horoball::Horoball(BoundaryPoint t, double s) : tangency(t), size(s) {
    if (!(s > 0) || !std::isfinite(s)) throw DomainError("horoball size must be positive");
    if (t.is_sphere_form() && s >= 2.0) throw DomainError("ball-model horoball diameter must be < 2");
}

bool Horoball::contains(const HalfSpacePoint& p) const {
    if (tangency.is_infinity()) return p.height >= size;
    if (tangency.is_sphere_form()) {
        return contains(ball_from_half(p, tangency.sphere_dimension()));
    }
    const double r = size / 2;
    const double dh = p.height - r;
    return std::norm(p.base - tangency.plane()) + dh * dh <= r * r;
}

bool Horoball::contains(const BallPoint& p) const {
    if (!tangency.is_sphere_form()) return contains(half_from_ball(p));
    const Vec3 u = tangency.sphere(p.n);
    const double r = size / 2;
    Vec3 d{};
    for (int i = 0; i <= p.n; ++i) d[i] = p.coords[i] - (1.0 - r) * u[i];
    return norm2(d) <= r * r;
}

bool Shadow::contains_direction(const Vec3& unit) const {
    const double c = unit[0] * axis[0] + unit[1] * axis[1] + unit[2] * axis[2];
    return std::acos(std::clamp(c, -1.0, 1.0)) <= angular_radius;
}

bool Shadow::contains(const BoundaryPoint& xi) const { return contains_direction(xi.sphere(center.n)); }

double Shadow::diameter() const { return std::min(2.0 * angular_radius, std::numbers::pi); }

Vec3 radial_direction(const BallPoint& p) {
    const double r = std::sqrt(p.norm2());
    if (r == 0) throw DomainError("origin has no radial direction");
    return {p.coords[0] / r, p.coords[1] / r, p.coords[2] / r};
}

Shadow shadow(const BallPoint& x, double ell) {
    if (!(ell > 0)) throw DomainError("shadow radius must be positive");
    if (x.norm2() == 0) throw DomainError("shadow of the origin has no antipode");
    // Send the antipode to infinity: x sits at height e^{-d(o,x)} above the
    // image of its direction, and B(x, ell) projects vertically onto a disk of
    // radius e^{-d} sinh(ell); tan(angle / 2) is that radius.
    const double d = dist(BallPoint::origin(x.n), x);
    Shadow s;
    s.center = x;
    s.radius = ell;
    s.axis = radial_direction(x);
    s.angular_radius = 2.0 * std::atan(std::exp(-d) * std::sinh(ell));
    return s;
}

double horoball_ball_volume(double R, int n) {
    require_dimension(n);
    if (!(R > 0) || !std::isfinite(R)) throw DomainError("horoball volume needs R > 0");
    const double unit_ball = std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
    const double eR = std::exp(R), emR = std::exp(-R);
    // Height y = e^u; the cross-section radius^2 factors as (e^R - y)(y - e^{-R}).
    auto f = [&](double u) {
        const double y = std::exp(u);
        const double w = std::max(0.0, (eR - y) * (y - emR));
        return std::pow(w, n / 2.0) * std::exp(-n * u);
    };
    boost::math::quadrature::tanh_sinh<double> integrator;
    return unit_ball * integrator.integrate(f, 0.0, R, 1e-12);
}

}  // namespace hypent
