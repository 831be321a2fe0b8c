#include "apollo/inversive.hpp"

#include <algorithm>
#include <numbers>

#include "apollo/error.hpp"

namespace apollo {

namespace {

constexpr double kPi = std::numbers::pi;

// Hermitian form f(z) = A|z|^2 + B conj(z) + conj(B) z + C whose negative
// set is the disk of a generalized circle.
struct HermitianForm {
    double a;
    Complex b;
    double c;
};

HermitianForm to_form(GeneralizedCircle const& g)
{
    if (g.is_line()) {
        Complex n = g.normal();
        return {0.0, n, -2.0 * (std::conj(n) * g.base()).real()};
    }
    Complex z = g.center();
    double r = g.radius();
    HermitianForm h{1.0, -z, std::norm(z) - r * r};
    if (g.orientation() == Orientation::outer)
        h = {-h.a, -h.b, -h.c};
    return h;
}

GeneralizedCircle from_form(HermitianForm h)
{
    double scale = std::max({std::abs(h.a), std::abs(h.b), std::abs(h.c)});
    if (!(scale > 0.0) || !std::isfinite(scale))
        throw PreconditionError("degenerate circle form");
    h = {h.a / scale, h.b / scale, h.c / scale};

    double bb = std::norm(h.b);
    double disc = bb - h.a * h.c;  // = A^2 r^2
    bool flat = h.a == 0.0;
    if (!flat) {
        double r = std::sqrt(std::max(disc, 0.0)) / std::abs(h.a);
        flat = !(r <= kLineRadius);
    }
    if (flat) {
        if (bb == 0.0)
            throw PreconditionError("degenerate line form");
        Complex n = h.b / std::sqrt(bb);
        Complex base = -h.c * h.b / (2.0 * bb);
        return GeneralizedCircle::line(base, n);
    }
    if (disc <= 0.0)
        throw PreconditionError("imaginary circle in Mobius image");
    Complex center = -h.b / h.a;
    double r = std::sqrt(disc) / std::abs(h.a);
    return GeneralizedCircle::circle(center, r,
                                     h.a > 0.0 ? Orientation::inner : Orientation::outer);
}

// 2 * atan2 form of arccos, accurate near +-1. Returns arccos(x) for
// x = (p - q) / (p + q) given p, q >= 0.
double acos_ratio(double p, double q)
{
    return 2.0 * std::atan2(std::sqrt(q), std::sqrt(p));
}

// Angle at the vertex between sides d and R of a triangle with sides d, R, r,
// via the half-angle formula. Requires the triangle inequality to hold.
double half_angle_opposite(double d, double big_r, double r)
{
    double sd = 0.5 * (big_r + r - d);
    double sr_big = 0.5 * (d + r - big_r);
    double s = 0.5 * (d + big_r + r);
    double sr = 0.5 * (d + big_r - r);
    return 2.0 * std::atan2(std::sqrt(std::max(0.0, sd * sr_big)),
                            std::sqrt(std::max(0.0, s * sr)));
}

// sin^2 of half the same angle: (s-d)(s-R)/(dR).
double half_angle_sin2(double d, double big_r, double r)
{
    double sd = 0.5 * (big_r + r - d);
    double sr_big = 0.5 * (d + r - big_r);
    return std::clamp(sd * sr_big / (d * big_r), 0.0, 1.0);
}

double arc_inside_round_disk(Complex c, double big_r, Complex e, double r)
{
    double d = std::abs(c - e);
    if (d >= big_r + r)
        return 0.0;
    if (d + big_r <= r)
        return 2.0 * kPi * big_r;
    if (d + r <= big_r)
        return 0.0;
    return 2.0 * big_r * half_angle_opposite(d, big_r, r);
}

double cap_inside_round_ball(Vec3 c, double big_r, Vec3 e, double r)
{
    double d = norm(c - e);
    double full = 4.0 * kPi * big_r * big_r;
    if (d >= big_r + r)
        return 0.0;
    if (d + big_r <= r)
        return full;
    if (d + r <= big_r)
        return 0.0;
    return full * half_angle_sin2(d, big_r, r);
}

// Integral of sqrt(r^2 - t^2) from 0 to x, |x| <= r.
double half_disk_primitive(double r, double x)
{
    x = std::clamp(x, -r, r);
    double s = std::sqrt(std::max(0.0, (r - x) * (r + x)));
    return 0.5 * (x * s + r * r * std::asin(x / r));
}

// Area of {|p| < r, p.x < X, p.y < Y}.
double disk_quadrant_area(double r, double big_x, double big_y)
{
    double xe = std::clamp(big_x, -r, r);
    if (big_y <= -r || xe <= -r)
        return 0.0;
    auto chord = [&](double a, double b) {  // integral of 2 sqrt(r^2 - t^2)
        return 2.0 * (half_disk_primitive(r, b) - half_disk_primitive(r, a));
    };
    if (big_y >= r)
        return chord(-r, xe);

    double xs = std::sqrt((r - big_y) * (r + big_y));
    auto clip = [&](double a, double b) { return std::pair{a, std::min(b, xe)}; };
    double total = 0.0;
    // Middle band |x| < xs: vertical extent from -s(x) to Y.
    {
        auto [a, b] = clip(-xs, xs);
        if (b > a)
            total += big_y * (b - a) + 0.5 * chord(a, b);
    }
    if (big_y > 0.0) {
        // Outer bands: the whole chord lies below Y.
        auto [a1, b1] = clip(-r, -xs);
        if (b1 > a1)
            total += chord(a1, b1);
        auto [a2, b2] = clip(xs, r);
        if (b2 > a2)
            total += chord(a2, b2);
    }
    return std::max(total, 0.0);
}

void require_line_normal(Complex n)
{
    if (!(std::abs(n) > 0.0) || !std::isfinite(std::abs(n)))
        throw PreconditionError("line normal must be nonzero and finite");
}

}  // namespace

//---------------------------------------------------------------------------//
// ExtendedComplex
//---------------------------------------------------------------------------//

double chordal_distance(ExtendedComplex const& p, ExtendedComplex const& q)
{
    if (p.is_infinite() && q.is_infinite())
        return 0.0;
    if (p.is_infinite() || q.is_infinite()) {
        Complex z = p.is_infinite() ? q.value() : p.value();
        return 2.0 / std::sqrt(1.0 + std::norm(z));
    }
    Complex a = p.value(), b = q.value();
    return 2.0 * std::abs(a - b) / std::sqrt((1.0 + std::norm(a)) * (1.0 + std::norm(b)));
}

//---------------------------------------------------------------------------//
// GeneralizedCircle
//---------------------------------------------------------------------------//

GeneralizedCircle GeneralizedCircle::circle(Complex center, double radius, Orientation o)
{
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw PreconditionError("circle radius must be positive and finite");
    GeneralizedCircle g;
    g.kind_ = Kind::circle;
    g.center_ = center;
    g.radius_ = radius;
    g.orientation_ = o;
    return g;
}

GeneralizedCircle GeneralizedCircle::line(Complex base, Complex inward_normal)
{
    require_line_normal(inward_normal);
    GeneralizedCircle g;
    g.kind_ = Kind::line;
    g.center_ = base;
    g.radius_ = 0.0;
    g.normal_ = inward_normal / std::abs(inward_normal);
    return g;
}

double GeneralizedCircle::curvature() const
{
    if (is_line())
        return 0.0;
    return orientation_ == Orientation::inner ? 1.0 / radius_ : -1.0 / radius_;
}

Complex GeneralizedCircle::curvature_center() const
{
    if (is_line())
        return -normal_;
    return curvature() * center_;
}

bool GeneralizedCircle::disk_contains(Complex p) const
{
    if (is_line())
        return (std::conj(normal_) * (p - center_)).real() < 0.0;
    bool inside = std::abs(p - center_) < radius_;
    return orientation_ == Orientation::inner ? inside
                                              : std::abs(p - center_) > radius_;
}

Complex GeneralizedCircle::point_at(double t) const
{
    if (is_line())
        return center_ + t * line_direction(*this);
    return center_ + radius_ * Complex(std::cos(t), std::sin(t));
}

GeneralizedCircle GeneralizedCircle::with_orientation(Orientation o) const
{
    GeneralizedCircle g = *this;
    g.orientation_ = o;
    return g;
}

//---------------------------------------------------------------------------//
// GeneralizedSphere
//---------------------------------------------------------------------------//

GeneralizedSphere GeneralizedSphere::sphere(Vec3 center, double radius, Orientation o)
{
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw PreconditionError("sphere radius must be positive and finite");
    GeneralizedSphere s;
    s.kind_ = Kind::sphere;
    s.center_ = center;
    s.radius_ = radius;
    s.orientation_ = o;
    return s;
}

GeneralizedSphere GeneralizedSphere::plane(Vec3 base, Vec3 inward_normal)
{
    double n = norm(inward_normal);
    if (!(n > 0.0) || !std::isfinite(n))
        throw PreconditionError("plane normal must be nonzero and finite");
    GeneralizedSphere s;
    s.kind_ = Kind::plane;
    s.center_ = base;
    s.radius_ = 0.0;
    s.normal_ = inward_normal / n;
    return s;
}

double GeneralizedSphere::curvature() const
{
    if (is_plane())
        return 0.0;
    return orientation_ == Orientation::inner ? 1.0 / radius_ : -1.0 / radius_;
}

Vec3 GeneralizedSphere::curvature_center() const
{
    if (is_plane())
        return -normal_;
    return curvature() * center_;
}

bool GeneralizedSphere::ball_contains(Vec3 p) const
{
    if (is_plane())
        return dot(normal_, p - center_) < 0.0;
    double d = norm(p - center_);
    return orientation_ == Orientation::inner ? d < radius_ : d > radius_;
}

std::array<Vec3, 2> plane_frame(Vec3 normal)
{
    Vec3 axis{1, 0, 0};
    if (std::abs(normal.x) > 0.9)
        axis = {0, 1, 0};
    Vec3 e1 = axis - dot(axis, normal) * normal;
    e1 = e1 / norm(e1);
    return {e1, cross(normal, e1)};
}

//---------------------------------------------------------------------------//
// MobiusMap
//---------------------------------------------------------------------------//

MobiusMap::MobiusMap(Complex a, Complex b, Complex c, Complex d)
{
    Complex det = a * d - b * c;
    if (!(std::abs(det) > 0.0) || !std::isfinite(std::abs(det)))
        throw PreconditionError("singular Mobius map");
    Complex s = std::sqrt(det);
    a_ = a / s;
    b_ = b / s;
    c_ = c / s;
    d_ = d / s;
}

ExtendedComplex MobiusMap::operator()(ExtendedComplex z) const
{
    if (z.is_infinite()) {
        if (c_ == Complex{})
            return ExtendedComplex::infinity();
        return a_ / c_;
    }
    Complex den = c_ * z.value() + d_;
    if (den == Complex{})
        return ExtendedComplex::infinity();
    return (a_ * z.value() + b_) / den;
}

MobiusMap MobiusMap::inverse() const
{
    return {d_, -b_, -c_, a_};
}

double MobiusMap::derivative_modulus(Complex z) const
{
    // det = 1, so f'(z) = 1 / (cz + d)^2.
    return 1.0 / std::norm(c_ * z + d_);
}

MobiusMap operator*(MobiusMap const& f, MobiusMap const& g)
{
    return {f.a_ * g.a_ + f.b_ * g.c_, f.a_ * g.b_ + f.b_ * g.d_,
            f.c_ * g.a_ + f.d_ * g.c_, f.c_ * g.b_ + f.d_ * g.d_};
}

MobiusMap mobius_from_triple(ExtendedComplex z0, ExtendedComplex z1, ExtendedComplex z2)
{
    constexpr double tol = 1e-12;
    if (chordal_distance(z0, z1) < tol || chordal_distance(z0, z2) < tol
        || chordal_distance(z1, z2) < tol)
        throw PreconditionError("degenerate triple: points must be pairwise distinct");

    // Cross-ratio map z0 -> inf, z1 -> 0, z2 -> 1, then times i.
    Complex a, b, c, d;
    if (z0.is_infinite()) {
        a = 1.0;
        b = -z1.value();
        c = 0.0;
        d = z2.value() - z1.value();
    } else if (z1.is_infinite()) {
        a = 0.0;
        b = z2.value() - z0.value();
        c = 1.0;
        d = -z0.value();
    } else if (z2.is_infinite()) {
        a = 1.0;
        b = -z1.value();
        c = 1.0;
        d = -z0.value();
    } else {
        Complex u = z2.value() - z0.value();
        Complex v = z2.value() - z1.value();
        a = u;
        b = -z1.value() * u;
        c = v;
        d = -z0.value() * v;
    }
    Complex i{0.0, 1.0};
    MobiusMap m(i * a, i * b, c, d);

    ExtendedComplex w0 = m(z0), w1 = m(z1), w2 = m(z2);
    if (chordal_distance(w0, ExtendedComplex::infinity()) > 1e-10
        || chordal_distance(w1, Complex{}) > 1e-10 || chordal_distance(w2, i) > 1e-10)
        throw PreconditionError("ill-conditioned triple: images not reproduced to 1e-10");
    return m;
}

GeneralizedCircle apply_mobius(MobiusMap const& m, GeneralizedCircle const& g)
{
    // f(z) <-> v* H v with v = (z, 1); the image form is N* H N with
    // N = m^{-1}. Positive rescaling of v keeps the sign, hence the disk side.
    HermitianForm h = to_form(g);
    MobiusMap n = m.inverse();
    // Columns of N: (na, nc) and (nb, nd).
    Complex na = n.a(), nb = n.b(), nc = n.c(), nd = n.d();
    auto apply_h = [&](Complex x, Complex y) {  // H (x, y)^T
        return std::pair{h.a * x + h.b * y, std::conj(h.b) * x + h.c * y};
    };
    auto [h1a, h1b] = apply_h(na, nc);
    auto [h2a, h2b] = apply_h(nb, nd);
    double a_new = (std::conj(na) * h1a + std::conj(nc) * h1b).real();
    Complex b_new = std::conj(na) * h2a + std::conj(nc) * h2b;
    double c_new = (std::conj(nb) * h2a + std::conj(nd) * h2b).real();
    return from_form({a_new, b_new, c_new});
}

GeneralizedCircle circle_through(ExtendedComplex p, ExtendedComplex q, ExtendedComplex r)
{
    std::array<ExtendedComplex, 3> pts{p, q, r};
    std::stable_partition(pts.begin(), pts.end(),
                          [](ExtendedComplex const& z) { return !z.is_infinite(); });
    if (pts[1].is_infinite())
        throw PreconditionError("circle_through: at most one point may be infinity");
    Complex a = pts[0].value(), b = pts[1].value();
    if (std::abs(b - a) == 0.0)
        throw PreconditionError("circle_through: coincident points");
    if (pts[2].is_infinite())
        return GeneralizedCircle::line(a, (b - a) * Complex(0.0, 1.0));

    Complex c = pts[2].value();
    Complex ab = b - a, ac = c - a;
    double cr = (std::conj(ab) * ac).imag();
    double scale = std::abs(ab) * std::abs(ac);
    if (std::abs(cr) <= 1e-14 * scale)
        return GeneralizedCircle::line(a, ab * Complex(0.0, 1.0));
    // Circumcenter relative to a.
    Complex center = a
        + Complex(0.0, -1.0) * (std::norm(ab) * ac - std::norm(ac) * ab) / (2.0 * cr);
    double radius = std::abs(center - a);
    if (radius > kLineRadius)
        return GeneralizedCircle::line(a, ab * Complex(0.0, 1.0));
    return GeneralizedCircle::circle(center, radius);
}

//---------------------------------------------------------------------------//
// Intersection measures
//---------------------------------------------------------------------------//

double arc_inside_disk(GeneralizedCircle const& c, GeneralizedCircle const& d)
{
    if (c.is_line())
        throw PreconditionError("arc_inside_disk: measured curve must be a circle; "
                                "use segment_inside_disk for lines");
    double big_r = c.radius();
    double full = 2.0 * kPi * big_r;
    if (d.is_line()) {
        // Depth of c's center into the half-plane.
        double s = -(std::conj(d.normal()) * (c.center() - d.base())).real();
        if (s >= big_r)
            return full;
        if (s <= -big_r)
            return 0.0;
        return 2.0 * big_r * acos_ratio(big_r - s, big_r + s);
    }
    double inside = arc_inside_round_disk(c.center(), big_r, d.center(), d.radius());
    return d.orientation() == Orientation::inner ? inside : full - inside;
}

double segment_inside_disk(GeneralizedCircle const& line, double t0, double t1,
                           GeneralizedCircle const& d)
{
    if (!line.is_line())
        throw PreconditionError("segment_inside_disk: measured curve must be a line");
    if (!(t1 >= t0))
        throw PreconditionError("segment_inside_disk: empty window");
    Complex dir = line_direction(line);
    double length = t1 - t0;
    if (d.is_line()) {
        Complex n = d.normal();
        // g(t) = Re(conj(n)(base + t dir - p)); inside where g < 0.
        double g0 = (std::conj(n) * (line.base() - d.base())).real();
        double slope = (std::conj(n) * dir).real();
        if (std::abs(slope) < 1e-15)
            return g0 < 0.0 ? length : 0.0;
        double root = -g0 / slope;
        if (slope > 0.0)
            return std::clamp(root, t0, t1) - t0;
        return t1 - std::clamp(root, t0, t1);
    }
    Complex rel = std::conj(dir) * (d.center() - line.base());
    double h = std::abs(rel.imag());
    double r = d.radius();
    double inside = 0.0;
    if (h < r) {
        double half = std::sqrt((r - h) * (r + h));
        double lo = std::max(t0, rel.real() - half);
        double hi = std::min(t1, rel.real() + half);
        inside = std::max(0.0, hi - lo);
    }
    return d.orientation() == Orientation::inner ? inside : length - inside;
}

double cap_inside_ball(GeneralizedSphere const& s, GeneralizedSphere const& b)
{
    if (s.is_plane())
        throw PreconditionError("cap_inside_ball: measured surface must be a sphere; "
                                "use rectangle_inside_ball for planes");
    double big_r = s.radius();
    double full = 4.0 * kPi * big_r * big_r;
    if (b.is_plane()) {
        double depth = -dot(b.normal(), s.center() - b.base());
        double x = std::clamp(depth / big_r, -1.0, 1.0);
        return 2.0 * kPi * big_r * big_r * (1.0 + x);
    }
    double inside = cap_inside_round_ball(s.center(), big_r, b.center(), b.radius());
    return b.orientation() == Orientation::inner ? inside : full - inside;
}

double disk_rectangle_area(double radius, double x0, double x1, double y0, double y1)
{
    if (!(x1 >= x0) || !(y1 >= y0))
        throw PreconditionError("disk_rectangle_area: empty rectangle");
    if (radius <= 0.0 || x0 >= radius || x1 <= -radius || y0 >= radius || y1 <= -radius)
        return 0.0;
    if (x0 <= -radius && x1 >= radius && y0 <= -radius && y1 >= radius)
        return kPi * radius * radius;
    double area = disk_quadrant_area(radius, x1, y1) - disk_quadrant_area(radius, x0, y1)
        - disk_quadrant_area(radius, x1, y0) + disk_quadrant_area(radius, x0, y0);
    return std::clamp(area, 0.0, kPi * radius * radius);
}

double rectangle_inside_ball(GeneralizedSphere const& plane, std::array<double, 2> lo,
                             std::array<double, 2> hi, GeneralizedSphere const& b)
{
    if (!plane.is_plane())
        throw PreconditionError("rectangle_inside_ball: measured surface must be a plane");
    if (!(hi[0] >= lo[0]) || !(hi[1] >= lo[1]))
        throw PreconditionError("rectangle_inside_ball: empty window");
    double full = (hi[0] - lo[0]) * (hi[1] - lo[1]);
    if (b.is_plane()) {
        if (norm(cross(plane.normal(), b.normal())) > 1e-15)
            throw PreconditionError("rectangle_inside_ball: oblique half-space not supported");
        return b.ball_contains(plane.base()) ? full : 0.0;
    }
    auto [e1, e2] = plane_frame(plane.normal());
    Vec3 rel = b.center() - plane.base();
    double h = std::abs(dot(rel, plane.normal()));
    double r = b.radius();
    double inside = 0.0;
    if (h < r) {
        double rho = std::sqrt((r - h) * (r + h));
        double u = dot(rel, e1), v = dot(rel, e2);
        inside = disk_rectangle_area(rho, lo[0] - u, hi[0] - u, lo[1] - v, hi[1] - v);
    }
    return b.orientation() == Orientation::inner ? inside : full - inside;
}

//---------------------------------------------------------------------------//
// Tangency
//---------------------------------------------------------------------------//

namespace {

// Two inner disks touch from outside; an inner disk touches an outer one
// from inside.
double round_defect(double d, double ra, Orientation oa, double rb, Orientation ob)
{
    double external = std::abs(d - (ra + rb));
    double internal = std::abs(d - std::abs(ra - rb));
    if (oa == Orientation::inner && ob == Orientation::inner)
        return external;
    if (oa != ob)
        return internal;
    return std::min(external, internal);
}

}  // namespace

double tangency_defect(GeneralizedCircle const& a, GeneralizedCircle const& b)
{
    if (a.is_line() && b.is_line())
        return std::abs((std::conj(a.normal()) * b.normal()).imag());
    if (a.is_line() || b.is_line()) {
        auto const& l = a.is_line() ? a : b;
        auto const& c = a.is_line() ? b : a;
        double dist = std::abs((std::conj(l.normal()) * (c.center() - l.base())).real());
        return std::abs(dist - c.radius());
    }
    double d = std::abs(a.center() - b.center());
    return round_defect(d, a.radius(), a.orientation(), b.radius(), b.orientation());
}

double tangency_defect(GeneralizedSphere const& a, GeneralizedSphere const& b)
{
    if (a.is_plane() && b.is_plane())
        return norm(cross(a.normal(), b.normal()));
    if (a.is_plane() || b.is_plane()) {
        auto const& p = a.is_plane() ? a : b;
        auto const& s = a.is_plane() ? b : a;
        double dist = std::abs(dot(p.normal(), s.center() - p.base()));
        return std::abs(dist - s.radius());
    }
    double d = norm(a.center() - b.center());
    return round_defect(d, a.radius(), a.orientation(), b.radius(), b.orientation());
}

ExtendedComplex tangency_point(GeneralizedCircle const& a, GeneralizedCircle const& b)
{
    if (a.is_line() && b.is_line())
        return ExtendedComplex::infinity();
    if (a.is_line() || b.is_line()) {
        auto const& l = a.is_line() ? a : b;
        auto const& c = a.is_line() ? b : a;
        double s = (std::conj(l.normal()) * (c.center() - l.base())).real();
        return c.center() - s * l.normal();
    }
    Complex delta = b.center() - a.center();
    double d = std::abs(delta);
    if (d == 0.0)
        throw PreconditionError("tangency_point: concentric circles");
    double ext = std::abs(d - (a.radius() + b.radius()));
    double in = std::abs(d - std::abs(a.radius() - b.radius()));
    if (ext <= in || a.radius() >= b.radius())
        return a.center() + a.radius() * delta / d;
    return b.center() - b.radius() * delta / d;
}

std::optional<Vec3> tangency_point(GeneralizedSphere const& a, GeneralizedSphere const& b)
{
    if (a.is_plane() && b.is_plane())
        return std::nullopt;
    if (a.is_plane() || b.is_plane()) {
        auto const& p = a.is_plane() ? a : b;
        auto const& s = a.is_plane() ? b : a;
        double h = dot(p.normal(), s.center() - p.base());
        return s.center() - h * p.normal();
    }
    Vec3 delta = b.center() - a.center();
    double d = norm(delta);
    if (d == 0.0)
        throw PreconditionError("tangency_point: concentric spheres");
    double ext = std::abs(d - (a.radius() + b.radius()));
    double in = std::abs(d - std::abs(a.radius() - b.radius()));
    if (ext <= in || a.radius() >= b.radius())
        return a.center() + a.radius() * delta / d;
    return b.center() - b.radius() * delta / d;
}

//---------------------------------------------------------------------------//
// Offset curves
//---------------------------------------------------------------------------//

GeneralizedCircle offset_circle(GeneralizedCircle const& c0, double eps)
{
    if (!(eps > 0.0))
        throw PreconditionError("offset: eps must be positive");
    if (c0.is_line())
        return GeneralizedCircle::line(c0.base() + eps * c0.normal(), c0.normal());
    if (c0.orientation() == Orientation::inner)
        return GeneralizedCircle::circle(c0.center(), c0.radius() + eps);
    if (!(eps < c0.radius()))
        throw PreconditionError("offset: eps must be below the outer radius");
    return GeneralizedCircle::circle(c0.center(), c0.radius() - eps);
}

GeneralizedSphere offset_sphere(GeneralizedSphere const& s0, double eps)
{
    if (!(eps > 0.0))
        throw PreconditionError("offset: eps must be positive");
    if (s0.is_plane())
        return GeneralizedSphere::plane(s0.base() + eps * s0.normal(), s0.normal());
    if (s0.orientation() == Orientation::inner)
        return GeneralizedSphere::sphere(s0.center(), s0.radius() + eps);
    if (!(eps < s0.radius()))
        throw PreconditionError("offset: eps must be below the outer radius");
    return GeneralizedSphere::sphere(s0.center(), s0.radius() - eps);
}

GeneralizedCircle tilde_circle(GeneralizedCircle const& c0, Complex w0, double eps)
{
    if (!(eps > 0.0 && eps < 1.0))
        throw PreconditionError("tilde_circle: eps must lie in (0, 1)");
    if (c0.is_line()) {
        double off = (std::conj(c0.normal()) * (w0 - c0.base())).real();
        if (std::abs(off) > kGeomTol)
            throw PreconditionError("tilde_circle: w0 is not on the base line");
        return offset_circle(c0, eps);
    }
    double r0 = c0.radius();
    if (std::abs(std::abs(w0 - c0.center()) - r0) > kGeomTol * std::max(1.0, r0))
        throw PreconditionError("tilde_circle: w0 is not on the base circle");
    double r = c0.orientation() == Orientation::inner ? r0 + eps : r0 - eps;
    if (!(r > 0.0))
        throw PreconditionError("tilde_circle: eps must be below the outer radius");
    Complex center = w0 + (c0.center() - w0) * (r / r0);
    return GeneralizedCircle::circle(center, r);
}

GeneralizedSphere tilde_sphere(GeneralizedSphere const& s0, Vec3 y0, double eps)
{
    if (!(eps > 0.0 && eps < 1.0))
        throw PreconditionError("tilde_sphere: eps must lie in (0, 1)");
    if (s0.is_plane()) {
        if (std::abs(dot(s0.normal(), y0 - s0.base())) > kGeomTol)
            throw PreconditionError("tilde_sphere: y0 is not on the base plane");
        return offset_sphere(s0, eps);
    }
    double r0 = s0.radius();
    if (std::abs(norm(y0 - s0.center()) - r0) > kGeomTol * std::max(1.0, r0))
        throw PreconditionError("tilde_sphere: y0 is not on the base sphere");
    double r = s0.orientation() == Orientation::inner ? r0 + eps : r0 - eps;
    if (!(r > 0.0))
        throw PreconditionError("tilde_sphere: eps must be below the outer radius");
    return GeneralizedSphere::sphere(y0 + (s0.center() - y0) * (r / r0), r);
}

}  // namespace apollo
