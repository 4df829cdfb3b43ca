#pragma once

#include <array>
#include <complex>
#include <string>

#include "hypent/common.hpp"

// Hyperbolic geometry in dimension n+1 for n in {1, 2}. Group actions live in
// the upper half-space, measures and shadows in the unit ball; the two are
// related by the fixed Cayley involution Q -> -e + 2(Q+e)/|Q+e|^2, e = (0,..,0,1).
namespace hypent {

using Complex = std::complex<double>;
using Vec3 = std::array<double, 3>;

void require_dimension(int n);

struct BallPoint {
    int n = 2;
    Vec3 coords{};  // coords[0..n] used, the rest zero

    BallPoint() = default;
    BallPoint(int n, Vec3 c);
    static BallPoint origin(int n);
    double norm2() const;
};

struct HalfSpacePoint {
    Complex base{};  // imaginary part is zero when n = 1
    double height = 1;

    HalfSpacePoint() = default;
    HalfSpacePoint(Complex base, double height);
};

class BoundaryPoint {
public:
    static BoundaryPoint on_sphere(int n, Vec3 u);
    static BoundaryPoint on_plane(Complex x);
    static BoundaryPoint infinity();

    bool is_infinity() const { return form_ == Form::Infinity; }
    bool is_sphere_form() const { return form_ == Form::Sphere; }
    int sphere_dimension() const { return n_; }
    // Unit vector in R^{n+1}; infinity maps to -e.
    Vec3 sphere(int n) const;
    // Half-space coordinate; throws DomainError for infinity.
    Complex plane() const;

private:
    enum class Form { Sphere, Plane, Infinity };
    Form form_ = Form::Infinity;
    int n_ = 0;
    Vec3 u_{};
    Complex x_{};
};

class Isometry {
public:
    Isometry() = default;
    // Entries must already have determinant 1 within 1e-12.
    Isometry(Complex a, Complex b, Complex c, Complex d, std::string label = {});
    // Divides by a square root of the determinant first.
    static Isometry normalized(Complex a, Complex b, Complex c, Complex d, std::string label = {});
    // z -> (z - shift) / scale, the similarity sending (shift, scale) to (0, 1).
    static Isometry recenter(Complex shift, double scale);

    Isometry operator*(const Isometry& h) const;
    Isometry inverse() const;

    HalfSpacePoint apply(const HalfSpacePoint& p) const;
    BoundaryPoint apply(const BoundaryPoint& x) const;

    Complex a() const { return m_[0]; }
    Complex b() const { return m_[1]; }
    Complex c() const { return m_[2]; }
    Complex d() const { return m_[3]; }
    Complex det() const { return m_[0] * m_[3] - m_[1] * m_[2]; }
    Complex trace() const { return m_[0] + m_[3]; }
    bool is_real(double tol = 1e-12) const;
    double translation_length() const;
    // Attracting fixed point of a loxodromic element.
    BoundaryPoint attracting_fixed_point() const;
    const std::string& label() const { return label_; }

private:
    std::array<Complex, 4> m_{Complex(1), Complex(0), Complex(0), Complex(1)};
    std::string label_;
    int products_ = 0;  // compositions since the last det renormalisation
};

HalfSpacePoint half_from_ball(const BallPoint& b);
BallPoint ball_from_half(const HalfSpacePoint& p, int n);

double dist(const BallPoint& a, const BallPoint& b);
double dist(const HalfSpacePoint& a, const HalfSpacePoint& b);

// k(z, xi) = (1 - |z|^2) / |xi - z|^2.
double poisson_kernel(const BallPoint& z, const BoundaryPoint& xi);

struct Horoball {
    BoundaryPoint tangency;
    double size = 1;  // Euclidean diameter, or bounding height when tangent at infinity

    Horoball(BoundaryPoint tangency, double size);
    bool contains(const HalfSpacePoint& p) const;
    bool contains(const BallPoint& p) const;
};

struct Shadow {
    BallPoint center;
    double radius = 0;
    Vec3 axis{};
    double angular_radius = 0;

    bool contains_direction(const Vec3& unit) const;
    bool contains(const BoundaryPoint& xi) const;
    // Diameter in the angular metric of the sphere.
    double diameter() const;
};

// Boundary endpoints of geodesics from the antipode -x/|x| that meet B(x, ell).
Shadow shadow(const BallPoint& x, double ell);

// Volume of B_R(z) intersected with a horoball whose horosphere passes through z.
double horoball_ball_volume(double R, int n);

Vec3 radial_direction(const BallPoint& p);

}  // namespace hypent
