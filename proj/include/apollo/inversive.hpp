#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <optional>

namespace apollo {

using Complex = std::complex<double>;

inline constexpr double kGeomTol = 1e-10;

// Curves with radius above this are treated as lines.
inline constexpr double kLineRadius = 1e12;

//---------------------------------------------------------------------------//
// Point of the Riemann sphere: a finite complex number or infinity.
//---------------------------------------------------------------------------//
class ExtendedComplex {
public:
    ExtendedComplex() = default;
    ExtendedComplex(Complex z) : z_(z) {}
    ExtendedComplex(double x) : z_(x, 0.0) {}

    static ExtendedComplex infinity()
    {
        ExtendedComplex p;
        p.infinite_ = true;
        return p;
    }

    bool is_infinite() const { return infinite_; }

    // Finite value; undefined for infinity.
    Complex value() const { return z_; }

    // Chordal distance on the Riemann sphere, in [0, 2].
    friend double chordal_distance(ExtendedComplex const& p, ExtendedComplex const& q);

private:
    Complex z_{};
    bool infinite_ = false;
};

//---------------------------------------------------------------------------//
// Vec3
//---------------------------------------------------------------------------//
struct Vec3 {
    double x = 0, y = 0, z = 0;

    constexpr Vec3 operator+(Vec3 o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(Vec3 o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    constexpr bool operator==(Vec3 const&) const = default;
};

constexpr Vec3 operator*(double s, Vec3 v) { return v * s; }
constexpr double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(Vec3 a, Vec3 b)
{
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(Vec3 v) { return std::sqrt(dot(v, v)); }

//---------------------------------------------------------------------------//
// Orientation of a round element. An inner circle bounds its own disk; an
// outer circle encloses the packing and its "disk" is the exterior.
//---------------------------------------------------------------------------//
enum class Orientation { inner, outer };

//---------------------------------------------------------------------------//
// Circle or line of the extended plane.
//
// A line is stored as a base point and a unit normal pointing into the
// packing; its disk is the open half-plane behind the normal.
//---------------------------------------------------------------------------//
class GeneralizedCircle {
public:
    enum class Kind { circle, line };

    static GeneralizedCircle circle(Complex center, double radius,
                                    Orientation orientation = Orientation::inner);
    static GeneralizedCircle line(Complex base, Complex inward_normal);

    Kind kind() const { return kind_; }
    bool is_line() const { return kind_ == Kind::line; }

    Complex center() const { return center_; }
    double radius() const { return radius_; }
    Orientation orientation() const { return orientation_; }

    // Line data; base() is any point on the line.
    Complex base() const { return center_; }
    Complex normal() const { return normal_; }

    // Signed bend: +1/r (inner), -1/r (outer), 0 (line).
    double curvature() const;

    // Curvature times center for circles; for lines the unit normal pointing
    // away from the packing (the extended Descartes convention).
    Complex curvature_center() const;

    // Strict interior of the generalized disk.
    bool disk_contains(Complex p) const;

    // Point of the curve at parameter t (angle for circles, arc length along
    // normal * -i for lines).
    Complex point_at(double t) const;

    GeneralizedCircle with_orientation(Orientation o) const;

private:
    Kind kind_ = Kind::circle;
    Complex center_{};
    double radius_ = 1.0;
    Orientation orientation_ = Orientation::inner;
    Complex normal_{0.0, 1.0};
};

// Unit tangent of a line such that (tangent, normal) is positively oriented.
inline Complex line_direction(GeneralizedCircle const& line)
{
    return line.normal() * Complex(0.0, -1.0);
}

//---------------------------------------------------------------------------//
// Sphere or plane of extended 3-space.
//---------------------------------------------------------------------------//
class GeneralizedSphere {
public:
    enum class Kind { sphere, plane };

    static GeneralizedSphere sphere(Vec3 center, double radius,
                                    Orientation orientation = Orientation::inner);
    static GeneralizedSphere plane(Vec3 base, Vec3 inward_normal);

    Kind kind() const { return kind_; }
    bool is_plane() const { return kind_ == Kind::plane; }

    Vec3 center() const { return center_; }
    double radius() const { return radius_; }
    Orientation orientation() const { return orientation_; }
    Vec3 base() const { return center_; }
    Vec3 normal() const { return normal_; }

    double curvature() const;
    Vec3 curvature_center() const;
    bool ball_contains(Vec3 p) const;

private:
    Kind kind_ = Kind::sphere;
    Vec3 center_{};
    double radius_ = 1.0;
    Orientation orientation_ = Orientation::inner;
    Vec3 normal_{0, 0, 1};
};

// Orthonormal frame (e1, e2) spanning a plane with the given unit normal;
// for normal +-z this is (x, +-y).
std::array<Vec3, 2> plane_frame(Vec3 normal);

//---------------------------------------------------------------------------//
// z -> (az + b) / (cz + d), determinant normalized to 1.
//---------------------------------------------------------------------------//
class MobiusMap {
public:
    MobiusMap() = default;
    MobiusMap(Complex a, Complex b, Complex c, Complex d);

    static MobiusMap identity() { return {}; }

    Complex a() const { return a_; }
    Complex b() const { return b_; }
    Complex c() const { return c_; }
    Complex d() const { return d_; }
    Complex determinant() const { return a_ * d_ - b_ * c_; }

    ExtendedComplex operator()(ExtendedComplex z) const;
    MobiusMap inverse() const;

    // |f'(z)| at a finite point whose image is finite.
    double derivative_modulus(Complex z) const;

    // (f * g)(z) = f(g(z))
    friend MobiusMap operator*(MobiusMap const& f, MobiusMap const& g);

private:
    Complex a_{1.0}, b_{0.0}, c_{0.0}, d_{1.0};
};

// The map sending z0 -> inf, z1 -> 0, z2 -> i. Throws PreconditionError on a
// degenerate triple.
MobiusMap mobius_from_triple(ExtendedComplex z0, ExtendedComplex z1, ExtendedComplex z2);

// Image of a generalized circle; the disk side is carried along.
GeneralizedCircle apply_mobius(MobiusMap const& m, GeneralizedCircle const& c);

// Generalized circle through three distinct points (line if collinear or if
// one point is infinity). Orientation inner, line normal arbitrary.
GeneralizedCircle circle_through(ExtendedComplex p, ExtendedComplex q, ExtendedComplex r);

//---------------------------------------------------------------------------//
// Intersection measures
//---------------------------------------------------------------------------//

// Length of the part of circle c lying in the open disk of d.
double arc_inside_disk(GeneralizedCircle const& c, GeneralizedCircle const& d);

// Length of the part of the segment {line.base() + t * line_direction(line) :
// t in [t0, t1]} lying in the open disk of d.
double segment_inside_disk(GeneralizedCircle const& line, double t0, double t1,
                           GeneralizedCircle const& d);

// Area of the part of sphere s lying in the open ball of b.
double cap_inside_ball(GeneralizedSphere const& s, GeneralizedSphere const& b);

// Area of the part of the plane rectangle {p.base() + u e1 + v e2 :
// u in [u0,u1], v in [v0,v1]} (frame from plane_frame) lying in the ball b.
double rectangle_inside_ball(GeneralizedSphere const& plane, std::array<double, 2> lo,
                             std::array<double, 2> hi, GeneralizedSphere const& b);

// Area of {|p| < radius} intersected with [x0,x1] x [y0,y1].
double disk_rectangle_area(double radius, double x0, double x1, double y0, double y1);

//---------------------------------------------------------------------------//
// Tangency
//---------------------------------------------------------------------------//

// How far two generalized circles are from being tangent (0 when tangent).
// Parallel lines count as tangent at infinity.
double tangency_defect(GeneralizedCircle const& a, GeneralizedCircle const& b);
double tangency_defect(GeneralizedSphere const& a, GeneralizedSphere const& b);

// Point where two tangent generalized circles touch; infinity for parallel
// lines.
ExtendedComplex tangency_point(GeneralizedCircle const& a, GeneralizedCircle const& b);
std::optional<Vec3> tangency_point(GeneralizedSphere const& a, GeneralizedSphere const& b);

//---------------------------------------------------------------------------//
// Offset curves
//---------------------------------------------------------------------------//

// Circle of radius r0 + eps through w0 containing c0 (r0 - eps, inside c0,
// when c0 is an outer circle). For a line c0 the offset line at distance eps
// into the packing.
GeneralizedCircle tilde_circle(GeneralizedCircle const& c0, Complex w0, double eps);
GeneralizedSphere tilde_sphere(GeneralizedSphere const& s0, Vec3 y0, double eps);

// Concentric offset by eps into the packing (outward for inner circles,
// inward for outer ones, parallel for lines).
GeneralizedCircle offset_circle(GeneralizedCircle const& c0, double eps);
GeneralizedSphere offset_sphere(GeneralizedSphere const& s0, double eps);

}  // namespace apollo
