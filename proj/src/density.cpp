#include "apollo/density.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "apollo/error.hpp"
#include "apollo/farey.hpp"
#include "apollo/summation.hpp"

namespace apollo {

namespace {

using std::numbers::pi;

Packing const& packing_of(DensityQuery const& q)
{
    if (!q.packing)
        throw PreconditionError("density query without a packing");
    Packing const& p = *q.packing;
    if (q.base < 0 || q.base >= static_cast<int>(p.size()))
        throw PreconditionError("invalid base element id " + std::to_string(q.base));
    if (!(q.eps > 0.0) || !std::isfinite(q.eps))
        throw PreconditionError("eps must be positive");
    if (p.family_anchor() && *p.family_anchor() != q.base)
        throw PreconditionError("packing holds only the tangent family of element "
                                + std::to_string(*p.family_anchor()));
    return p;
}

void require_cutoff(Packing const& p, double eps)
{
    if (p.min_radius() > 0.5 * eps) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "insufficient resolution: packing cutoff %.6g exceeds eps/2 = %.6g; "
                      "regenerate with min-radius <= %.6g",
                      p.min_radius(), 0.5 * eps, 0.5 * eps);
        throw PreconditionError(buf);
    }
}

// Elements were dropped outside the generation region; everything that can
// touch the measured set must lie in it.
void require_region(Packing const& p, Vec3 lo, Vec3 hi)
{
    if (!p.region())
        return;
    auto const& r = *p.region();
    std::array<double, 3> a{lo.x, lo.y, lo.z}, b{hi.x, hi.y, hi.z};
    for (int d = 0; d < p.dim(); ++d) {
        if (a[d] < r.lo[d] || b[d] > r.hi[d])
            throw PreconditionError("measured set leaves the generation region of the packing");
    }
}

Vec3 lift(Complex z) { return {z.real(), z.imag(), 0.0}; }

void require_region(Packing const& p, GeneralizedCircle const& c)
{
    Vec3 r{c.radius(), c.radius(), 0.0};
    require_region(p, lift(c.center()) - r, lift(c.center()) + r);
}

void require_region(Packing const& p, GeneralizedSphere const& s)
{
    Vec3 r{s.radius(), s.radius(), s.radius()};
    require_region(p, s.center() - r, s.center() + r);
}

Window window_of(DensityQuery const& q)
{
    auto w = q.window ? q.window : default_window(*q.packing, q.base);
    if (!w)
        throw PreconditionError("flat base needs a window");
    int dims = q.packing->dim() - 1;
    for (int d = 0; d < dims; ++d)
        if (!(w->hi[d] > w->lo[d]))
            throw PreconditionError("empty window");
    return *w;
}

// Sums term(i) over the tangent set, canonical order, counting nonzero terms.
template<class Term>
std::pair<double, std::size_t> tangent_sum(std::span<const int> ids, Term&& term)
{
    std::vector<double> values(ids.size());
    double total = deterministic_sum(ids.size(), [&](std::size_t i) {
        values[i] = term(ids[i]);
        return values[i];
    });
    auto n = static_cast<std::size_t>(std::count_if(values.begin(), values.end(), [](double v) { return v > 0.0; }));
    return {total, n};
}

DensityRow finish(DensityQuery const& q, double covered, double total, std::size_t terms)
{
    DensityRow row;
    row.eps = q.eps;
    row.density = std::clamp(covered / total, 0.0, 1.0);
    row.terms = terms;
    row.cutoff = q.packing->min_radius();
    return row;
}

// cos of the half-angle, seen from the tilde centre, of the part of the tilde
// curve lying within 2m of a base of radius r0.
double gap_cos(double r0, double eps, double m, Orientation o)
{
    if (o == Orientation::inner) {
        double big_r = r0 + eps;
        double num = 2.0 * eps * eps + 2.0 * r0 * eps - 4.0 * r0 * m - 4.0 * m * m;
        return std::clamp(num / (2.0 * eps * big_r), -1.0, 1.0);
    }
    double big_r = r0 - eps;
    double num = -4.0 * r0 * m + 4.0 * m * m - 2.0 * eps * eps + 2.0 * r0 * eps;
    return std::clamp(num / (2.0 * eps * big_r), -1.0, 1.0);
}

DensityRow concentric_2d(DensityQuery const& q)
{
    Packing const& p = *q.packing;
    require_cutoff(p, q.eps);
    auto c0 = p.circle(q.base);
    auto ce = offset_circle(c0, q.eps);
    auto ids = p.neighbors(q.base);
    if (ce.is_line()) {
        Window w = window_of(q);
        Complex dir = line_direction(ce);
        require_region(p, lift(ce.base() + w.lo[0] * dir), lift(ce.base() + w.lo[0] * dir));
        require_region(p, lift(ce.base() + w.hi[0] * dir), lift(ce.base() + w.hi[0] * dir));
        auto [s, n] = tangent_sum(ids, [&](int j) { return segment_inside_disk(ce, w.lo[0], w.hi[0], p.circle(j)); });
        return finish(q, s, w.hi[0] - w.lo[0], n);
    }
    require_region(p, ce);
    auto [s, n] = tangent_sum(ids, [&](int j) { return arc_inside_disk(ce, p.circle(j)); });
    return finish(q, s, 2.0 * pi * ce.radius(), n);
}

DensityRow concentric_3d(DensityQuery const& q)
{
    Packing const& p = *q.packing;
    require_cutoff(p, q.eps);
    auto s0 = p.sphere(q.base);
    auto se = offset_sphere(s0, q.eps);
    auto ids = p.neighbors(q.base);
    if (se.is_plane()) {
        Window w = window_of(q);
        auto [e1, e2] = plane_frame(se.normal());
        for (double u : {w.lo[0], w.hi[0]})
            for (double v : {w.lo[1], w.hi[1]}) {
                Vec3 c = se.base() + u * e1 + v * e2;
                require_region(p, c, c);
            }
        auto [s, n] = tangent_sum(ids, [&](int j) { return rectangle_inside_ball(se, w.lo, w.hi, p.sphere(j)); });
        return finish(q, s, (w.hi[0] - w.lo[0]) * (w.hi[1] - w.lo[1]), n);
    }
    require_region(p, se);
    auto [s, n] = tangent_sum(ids, [&](int j) { return cap_inside_ball(se, p.sphere(j)); });
    return finish(q, s, 4.0 * pi * se.radius() * se.radius(), n);
}

int require_neighbor(DensityQuery const& q)
{
    if (!q.neighbor)
        throw PreconditionError("tangent-family density needs the neighbour defining w0");
    auto ids = q.packing->neighbors(q.base);
    if (!std::binary_search(ids.begin(), ids.end(), *q.neighbor))
        throw PreconditionError("element " + std::to_string(*q.neighbor) + " is not tangent to the base");
    return *q.neighbor;
}

bool flat_base(DensityQuery const& q) { return q.packing->element(q.base).flat; }

DensityRow tangent_exact_2d(DensityQuery const& q)
{
    Packing const& p = *q.packing;
    int n1 = require_neighbor(q);
    auto c0 = p.circle(q.base);
    auto c1 = p.circle(n1);
    auto w0 = tangency_point(c0, c1);
    if (w0.is_infinite())
        throw PreconditionError("base and neighbour touch at infinity");

    // A third element tangent to both fixes the map onto the Farey strip.
    auto a0 = p.neighbors(q.base);
    auto a1 = p.neighbors(n1);
    std::optional<MobiusMap> m;
    for (int j : a0) {
        if (j == n1 || !std::binary_search(a1.begin(), a1.end(), j))
            continue;
        auto c2 = p.circle(j);
        auto z1 = tangency_point(c0, c2), z2 = tangency_point(c1, c2);
        if (z1.is_infinite() || z2.is_infinite())
            continue;
        m = mobius_from_triple(w0, z1, z2);
        break;
    }
    if (!m)
        throw PreconditionError("no element tangent to both the base and the neighbour");

    auto ct = tilde_circle(c0, w0.value(), q.eps);
    Complex far = 2.0 * ct.center() - w0.value();
    double height = (*m)(far).value().imag();
    if (!(height > 0.0))
        throw Error("tangent-family reduction produced a non-positive height");
    Complex mc = (*m)(ct.center()).value();
    double b = std::abs(mc.imag() - height);

    DensityRow row;
    row.eps = q.eps;
    row.density = ford_poisson_density(height, mc.real(), b);
    row.terms = height <= 0.5 ? ford_chord_count(height) : 1;
    row.cutoff = p.min_radius();
    return row;
}

}  // namespace

std::optional<Window> default_window(Packing const& p, int base)
{
    Element const& e = p.element(base);
    if (!e.flat)
        return std::nullopt;
    for (std::size_t j = 0; j < p.seed_count(); ++j) {
        Element const& f = p.elements()[j];
        if (static_cast<int>(j) == base || !f.flat || dot(f.normal, e.normal) > -1.0 + 1e-12)
            continue;
        double h = std::abs(dot(f.center - e.center, e.normal));
        Window w;
        w.hi[0] = h;
        w.hi[1] = p.dim() == 3 ? std::sqrt(3.0) * h : 0.0;
        return w;
    }
    return std::nullopt;
}

DensityRow tangent_family_direct(DensityQuery const& q)
{
    Packing const& p = packing_of(q);
    if (flat_base(q)) {
        DensityQuery c = q;
        c.mode = DensityMode::concentric;
        return p.dim() == 2 ? concentric_2d(c) : concentric_3d(c);
    }
    int n1 = require_neighbor(q);
    auto ids = p.neighbors(q.base);
    double m = p.min_radius();
    if (p.dim() == 2) {
        auto c0 = p.circle(q.base);
        auto w0 = tangency_point(c0, p.circle(n1));
        if (w0.is_infinite())
            throw PreconditionError("base and neighbour touch at infinity");
        auto ct = tilde_circle(c0, w0.value(), q.eps);
        require_region(p, ct);
        auto [s, n] = tangent_sum(ids, [&](int j) { return arc_inside_disk(ct, p.circle(j)); });
        auto row = finish(q, s, 2.0 * pi * ct.radius(), n);
        row.tail_bound = std::acos(gap_cos(c0.radius(), q.eps, m, c0.orientation())) / pi;
        return row;
    }
    auto s0 = p.sphere(q.base);
    auto y0 = tangency_point(s0, p.sphere(n1));
    if (!y0)
        throw PreconditionError("base and neighbour touch at infinity");
    auto st = tilde_sphere(s0, *y0, q.eps);
    require_region(p, st);
    auto [s, n] = tangent_sum(ids, [&](int j) { return cap_inside_ball(st, p.sphere(j)); });
    auto row = finish(q, s, 4.0 * pi * st.radius() * st.radius(), n);
    row.tail_bound = 0.5 * (1.0 - gap_cos(s0.radius(), q.eps, m, s0.orientation()));
    return row;
}

DensityRow evaluate_density(DensityQuery const& q)
{
    Packing const& p = packing_of(q);
    if (q.mode == DensityMode::concentric)
        return p.dim() == 2 ? concentric_2d(q) : concentric_3d(q);
    if (p.dim() == 2 && !flat_base(q))
        return tangent_exact_2d(q);
    return tangent_family_direct(q);
}

double radial_density(DensityQuery const& q)
{
    Packing const& p = packing_of(q);
    if (p.dim() != 2 || q.mode != DensityMode::concentric)
        throw PreconditionError("radial_density expects a concentric query on a circle packing");
    return concentric_2d(q).density;
}

double radial_density_tangent_family(DensityQuery const& q)
{
    Packing const& p = packing_of(q);
    if (p.dim() != 2 || q.mode != DensityMode::tangent_family)
        throw PreconditionError("radial_density_tangent_family expects a tangent-family query on a circle packing");
    return evaluate_density(q).density;
}

double sphere_radial_density(DensityQuery const& q)
{
    Packing const& p = packing_of(q);
    if (p.dim() != 3)
        throw PreconditionError("sphere_radial_density expects a sphere packing");
    return evaluate_density(q).density;
}

DensityProfile density_profile(DensityQuery const& tmpl, std::span<const double> eps)
{
    DensityProfile out;
    out.query = tmpl;
    out.rows.reserve(eps.size());
    for (double e : eps) {
        DensityQuery q = tmpl;
        q.eps = e;
        out.rows.push_back(evaluate_density(q));
    }
    return out;
}

}  // namespace apollo
