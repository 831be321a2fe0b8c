#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "apollo/density.hpp"
#include "apollo/error.hpp"
#include "apollo/farey.hpp"
#include "apollo/summation.hpp"
#include "oracles.hpp"

using namespace apollo;
using std::numbers::pi;

namespace {

Packing farey(double cutoff, bool family = false)
{
    GenerationOptions o;
    o.min_radius = cutoff;
    o.region = Box{{-0.1, -0.1, 0}, {1.1, 1.1, 0}};
    if (family)
        o.family_of = 0;
    return generate_packing(farey_strip_seed(), o);
}

Packing circles(std::array<double, 4> b, double cutoff)
{
    GenerationOptions o;
    o.min_radius = cutoff;
    return generate_packing(circle_seed(b), o);
}

DensityQuery concentric(Packing const& p, int base, double eps)
{
    DensityQuery q;
    q.packing = &p;
    q.base = base;
    q.eps = eps;
    return q;
}

DensityQuery tangent(Packing const& p, int base, int neighbor, double eps)
{
    auto q = concentric(p, base, eps);
    q.mode = DensityMode::tangent_family;
    q.neighbor = neighbor;
    return q;
}

// Elements geometrically tangent to `base` (no use of the adjacency lists).
template<class View>
oracle::Cover cover_of(Packing const& p, int base, Vec3 lo, Vec3 hi, double cell, View view)
{
    oracle::Cover c(lo, hi, cell);
    auto b = view(base);
    for (std::size_t j = 0; j < p.size(); ++j) {
        if ((int)j == base)
            continue;
        if (tangency_defect(b, view((int)j)) < 1e-9)
            c.add_element(p.element((int)j));
    }
    return c;
}

oracle::Cover circle_cover(Packing const& p, int base, Vec3 lo, Vec3 hi, double cell)
{
    return cover_of(p, base, lo, hi, cell, [&](int id) { return p.circle(id); });
}

oracle::Cover sphere_cover(Packing const& p, int base, Vec3 lo, Vec3 hi, double cell)
{
    return cover_of(p, base, lo, hi, cell, [&](int id) { return p.sphere(id); });
}

// Monte Carlo estimate of the covered fraction of a circle.
oracle::Estimate mc_circle(oracle::Cover const& cover, GeneralizedCircle const& c, long long n, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 2.0 * pi);
    long long hits = 0;
    for (long long k = 0; k < n; ++k) {
        double t = u(rng);
        Complex z = c.center() + c.radius() * Complex(std::cos(t), std::sin(t));
        hits += cover.covered({z.real(), z.imag(), 0.0});
    }
    return oracle::estimate(hits, n);
}

Vec3 lo2(GeneralizedCircle const& c, double m = 0.01)
{
    return {c.center().real() - c.radius() - m, c.center().imag() - c.radius() - m, -1.0};
}
Vec3 hi2(GeneralizedCircle const& c, double m = 0.01)
{
    return {c.center().real() + c.radius() + m, c.center().imag() + c.radius() + m, 1.0};
}

}  // namespace

TEST_CASE("Farey strip density equals L")
{
    auto p = farey(0.0025);
    Window w{{0, 0}, {1, 0}};
    for (double eps : {0.5, 0.3, 0.25, 0.2, 0.1, 0.01}) {
        auto q = concentric(p, 0, eps);
        q.window = w;
        CHECK(std::abs(radial_density(q) - ford_L(eps)) < 1e-9);
    }
    auto q = concentric(p, 0, 0.2);
    q.window = w;
    CHECK(std::abs(radial_density(q) - 1.0) < 1e-12);
    q.eps = 0.25;
    CHECK(std::abs(radial_density(q) - 0.8660254) < 1e-6);
    // default window is one period
    q.window.reset();
    CHECK(std::abs(radial_density(q) - std::sqrt(3.0) / 2.0) < 1e-12);
    // sub-windows agree with the interval version
    q.eps = 0.01;
    q.window = Window{{0.2, 0}, {0.7, 0}};
    CHECK(std::abs(radial_density(q) - L_interval({0.2, 0.7}, 0.01)) < 1e-12);
}

TEST_CASE("Farey strip at small eps from the tangent family")
{
    auto p = farey(5e-7, true);
    for (double eps : {1e-6, 1.3e-6}) {
        auto row = evaluate_density(concentric(p, 0, eps));
        CHECK(std::abs(row.density - ford_L(eps)) < 1e-9);
        // the chords at 0 and 1 are halves of two separate disks
        if (eps != 1e-6)
            CHECK(row.terms == ford_chord_count(eps) + 1);
    }
}

TEST_CASE("truncation is exact at eps / 2")
{
    auto coarse = circles({-9, 14, 26, 27}, 5e-4);
    auto fine = circles({-9, 14, 26, 27}, 2.5e-4);
    for (int base : {0, 1, 2, 3}) {
        double a = radial_density(concentric(coarse, base, 1e-3));
        double b = radial_density(concentric(fine, base, 1e-3));
        CHECK(std::abs(a - b) < 1e-12);
    }
    auto f1 = farey(0.005), f2 = farey(0.0025);
    for (double eps : {0.3, 0.1, 0.01}) {
        double a = radial_density(concentric(f1, 0, eps));
        double b = radial_density(concentric(f2, 0, eps));
        CHECK(std::abs(a - b) < 1e-12);
    }
}

TEST_CASE("term counts")
{
    auto p = circles({-9, 14, 26, 27}, 5e-4);
    for (double eps : {0.1, 0.01, 1e-3}) {
        auto row = evaluate_density(concentric(p, 0, eps));
        std::size_t want = 0;
        for (int j : p.neighbors(0))
            want += 2.0 * p.element(j).radius() > eps;
        CHECK(row.terms == want);
        CHECK(row.cutoff == 5e-4);
        CHECK(row.density >= 0.0);
        CHECK(row.density <= 1.0);
    }
}

TEST_CASE("concentric density against Monte Carlo")
{
    auto p = circles({-9, 14, 26, 27}, 5e-4);
    for (int base : {0, 1, 3}) {
        for (double eps : {0.02, 1e-3}) {
            auto q = concentric(p, base, eps);
            double d = radial_density(q);
            auto ce = offset_circle(p.circle(base), eps);
            auto cover = circle_cover(p, base, lo2(ce), hi2(ce), 0.005);
            auto mc = mc_circle(cover, ce, 1'000'000, 11 + base);
            CHECK(std::abs(d - mc.p) < 4 * mc.sigma);
        }
    }
}

TEST_CASE("errors")
{
    auto p = circles({-1, 2, 2, 3}, 0.05);
    CHECK_THROWS_AS(radial_density(concentric(p, 0, 0.05)), PreconditionError);
    CHECK_NOTHROW(radial_density(concentric(p, 0, 0.1)));
    // outer base guard
    CHECK_THROWS_AS(radial_density(concentric(p, 0, 1.0)), PreconditionError);
    CHECK_THROWS_AS(radial_density(concentric(p, 99999, 0.2)), PreconditionError);
    CHECK_THROWS_AS(radial_density(concentric(p, 0, 0.0)), PreconditionError);
    CHECK_THROWS_AS(radial_density(tangent(p, 0, 1, 0.1)), PreconditionError);
    CHECK_THROWS_AS(sphere_radial_density(concentric(p, 0, 0.1)), PreconditionError);
    // tangent family needs a tangent neighbour
    DensityQuery q = tangent(p, 0, 1, 0.1);
    q.neighbor.reset();
    CHECK_THROWS_AS(evaluate_density(q), PreconditionError);

    auto f = farey(0.01);
    auto w = concentric(f, 0, 0.1);
    w.window = Window{{0.5, 0}, {0.5, 0}};
    CHECK_THROWS_AS(radial_density(w), PreconditionError);
    w.window = Window{{-0.5, 0}, {0.5, 0}};
    CHECK_THROWS_AS(radial_density(w), PreconditionError);

    auto fam = farey(0.01, true);
    CHECK_THROWS_AS(radial_density(concentric(fam, 2, 0.1)), PreconditionError);
}

TEST_CASE("tangent family: exact value between direct sum and tail")
{
    auto p = circles({-9, 14, 26, 27}, 5e-5);
    for (auto [base, nb] : {std::pair{0, 1}, {0, 3}, {1, 0}, {2, 3}}) {
        for (double eps : {0.1, 0.01, 1e-3, 1e-4}) {
            auto q = tangent(p, base, nb, eps);
            double exact = radial_density_tangent_family(q);
            auto direct = tangent_family_direct(q);
            CHECK(exact >= 0.0);
            CHECK(exact <= 1.0);
            CHECK(exact >= direct.density - 1e-12);
            CHECK(exact <= direct.density + direct.tail_bound + 1e-12);
        }
    }
    // large eps: the tilde circle is well covered by the generated disks
    auto q = tangent(p, 1, 0, 0.05);
    auto direct = tangent_family_direct(q);
    CHECK(direct.tail_bound < 0.03);
}

TEST_CASE("tangent family against Monte Carlo through the Farey picture")
{
    // Points on the tilde circle are classified after mapping to the strip,
    // by checking the Ford disks by hand.
    auto p = circles({-9, 14, 26, 27}, 1e-3);
    auto c0 = p.circle(0), c1 = p.circle(1);
    int c2 = -1;
    for (int j : p.neighbors(0))
        if (j != 1 && std::binary_search(p.neighbors(1).begin(), p.neighbors(1).end(), j)) {
            c2 = j;
            break;
        }
    REQUIRE(c2 >= 0);
    auto w0 = tangency_point(c0, c1).value();
    auto m = mobius_from_triple(w0, tangency_point(c0, p.circle(c2)), tangency_point(c1, p.circle(c2)));
    for (double eps : {0.01, 1e-3}) {
        auto ct = tilde_circle(c0, w0, eps);
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(0.0, 2.0 * pi);
        long long hits = 0, n = 400'000;
        for (long long k = 0; k < n; ++k) {
            double t = u(rng);
            auto z = m(ct.center() + ct.radius() * Complex(std::cos(t), std::sin(t)));
            if (z.is_infinite())
                continue;
            double x = z.value().real(), y = z.value().imag();
            bool in = y > 1.0;
            for (long long qd = 1; !in && (double)qd * qd * y < 1.0; ++qd) {
                double r = 0.5 / ((double)qd * qd);
                long long pn = std::llround(x * qd);
                if (std::gcd(std::llabs(pn), qd) != 1)
                    continue;
                double dx = x - (double)pn / qd, dy = y - r;
                in = dx * dx + dy * dy < r * r;
            }
            hits += in;
        }
        auto mc = oracle::estimate(hits, n);
        double exact = radial_density_tangent_family(tangent(p, 0, 1, eps));
        CHECK(std::abs(exact - mc.p) < 4 * mc.sigma);
    }
}

TEST_CASE("tangent family is conformally invariant")
{
    // The reduction on M(P) must agree with the Cauchy-weighted Ford
    // coverage obtained by pulling the measured circle back to P.
    auto p = circles({-1, 2, 2, 3}, 0.05);
    auto c0 = p.circle(0), c1 = p.circle(1);
    auto nb0 = p.neighbors(0), nb1 = p.neighbors(1);
    int c2 = -1;
    for (int j : nb0)
        if (j != 1 && std::binary_search(nb1.begin(), nb1.end(), j)) {
            c2 = j;
            break;
        }
    REQUIRE(c2 >= 0);
    auto w0 = tangency_point(c0, c1);
    auto r1 = mobius_from_triple(w0, tangency_point(c0, p.circle(c2)), tangency_point(c1, p.circle(c2)));

    std::mt19937_64 rng(21);
    std::normal_distribution<double> g;
    int done = 0;
    while (done < 20) {
        MobiusMap m(Complex(g(rng), g(rng)), Complex(g(rng), g(rng)), Complex(g(rng), g(rng)),
                    Complex(g(rng), g(rng)));
        std::vector<Element> els;
        bool ok = true;
        for (std::size_t j = 0; j < p.size() && ok; ++j) {
            auto c = apply_mobius(m, p.circle((int)j));
            if (c.is_line() || c.radius() > 1e4 || c.radius() < 1e-4) {
                ok = false;
                break;
            }
            Element e;
            e.curvature = c.curvature();
            e.center = {c.center().real(), c.center().imag(), 0.0};
            els.push_back(e);
        }
        if (!ok)
            continue;
        std::vector<std::vector<int>> adj;
        for (std::size_t j = 0; j < p.size(); ++j) {
            auto nb = p.neighbors((int)j);
            adj.emplace_back(nb.begin(), nb.end());
        }
        Packing mp(2, els, adj, 0.0, std::nullopt, std::nullopt);
        auto b0 = mp.circle(0);
        auto mw0 = tangency_point(b0, mp.circle(1));
        if (mw0.is_infinite())
            continue;
        double eps = std::min(0.05 * b0.radius(), 0.5);
        if (b0.orientation() == Orientation::outer && !(eps < b0.radius()))
            continue;
        auto ct = tilde_circle(b0, mw0.value(), eps);
        auto back = r1 * m.inverse();
        double height = back(2.0 * ct.center() - mw0.value()).value().imag();
        Complex cc = back(ct.center()).value();
        double a = cc.real(), b = std::abs(cc.imag() - height);
        REQUIRE(height > 0.0);
        // keep the quadrature oracle cheap
        if (height < 1e-3 || b < 1e-3)
            continue;
        double got = radial_density_tangent_family(tangent(mp, 0, 1, eps));
        double want;
        if (height >= 1.0) {
            want = 1.0;
        } else {
            auto kernel = [&](double x) {
                double sh = std::sinh(2 * pi * b), ch = std::cosh(2 * pi * b);
                return sh / (ch - std::cos(2 * pi * (x - a)));
            };
            want = 0.0;
            for (long long qd = 1; (double)qd * qd * height < 1.0; ++qd) {
                double h = std::sqrt(height * (1.0 / ((double)qd * qd) - height));
                for (long long pn = 0; pn < qd; ++pn) {
                    if (std::gcd(pn, qd) != 1)
                        continue;
                    double x = (double)pn / qd;
                    want += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(kernel, x - h, x + h, 8,
                                                                                          1e-12);
                }
            }
        }
        CHECK(std::abs(got - want) < 1e-8);
        ++done;
    }
}

TEST_CASE("profiles")
{
    auto p = circles({-9, 14, 26, 27}, 5e-4);
    std::vector<double> grid{0.1, 0.01, 1e-3, 0.05};
    auto prof = density_profile(concentric(p, 0, 0.0), grid);
    REQUIRE(prof.rows.size() == grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        CHECK(prof.rows[k].eps == grid[k]);
        CHECK(prof.rows[k].density == radial_density(concentric(p, 0, grid[k])));
    }
    std::vector<double> one{0.01};
    auto single = density_profile(tangent(p, 0, 1, 0.0), one);
    REQUIRE(single.rows.size() == 1);
    CHECK(single.rows[0].density == radial_density_tangent_family(tangent(p, 0, 1, 0.01)));

    auto f = farey(0.01);
    std::vector<double> anchors{0.5, 0.25, 0.2};
    auto fp = density_profile(concentric(f, 0, 0.0), anchors);
    CHECK(std::abs(fp.rows[0].density - 1.0) < 1e-12);
    CHECK(std::abs(fp.rows[1].density - 0.8660254) < 1e-6);
    CHECK(std::abs(fp.rows[2].density - 1.0) < 1e-12);

    // thread count does not change a bit
    auto big = circles({-9, 14, 26, 27}, 5e-5);
    set_thread_cap(1);
    auto r1 = density_profile(concentric(big, 0, 0.0), std::vector<double>{1e-4, 1e-3});
    set_thread_cap(4);
    auto r4 = density_profile(concentric(big, 0, 0.0), std::vector<double>{1e-4, 1e-3});
    set_thread_cap(0);
    for (std::size_t k = 0; k < 2; ++k)
        CHECK(r1.rows[k].density == r4.rows[k].density);
}

TEST_CASE("sphere densities")
{
    SUBCASE("base packing against the plane-window oracle")
    {
        GenerationOptions o;
        o.min_radius = 0.005;
        o.family_of = 0;
        o.region = Box{{-0.1, -0.1, -0.1}, {1.1, std::sqrt(3.0) + 0.1, 1.1}};
        auto p = generate_packing(soddy_base_seed(), o);
        // the mid-plane cuts the unit-diameter layer in a hexagonal disk packing
        auto q = concentric(p, 0, 0.5);
        CHECK(std::abs(sphere_radial_density(q) - pi / (2.0 * std::sqrt(3.0))) < 1e-12);

        for (double eps : {0.1, 0.01}) {
            q.eps = eps;
            double d = sphere_radial_density(q);
            auto cover = sphere_cover(p, 0, {-0.1, -0.1, -0.1}, {1.1, 1.9, 1.1}, 0.01);
            std::mt19937_64 rng(3);
            std::uniform_real_distribution<double> ux(0.0, 1.0), uy(0.0, std::sqrt(3.0));
            long long hits = 0, n = 1'000'000;
            for (long long k = 0; k < n; ++k)
                hits += cover.covered({ux(rng), uy(rng), eps});
            auto mc = oracle::estimate(hits, n);
            CHECK(std::abs(d - mc.p) < 4 * mc.sigma);
        }
        CHECK_THROWS_AS(sphere_radial_density(concentric(p, 0, 0.005)), PreconditionError);
    }
    SUBCASE("bounded packing")
    {
        GenerationOptions o;
        o.min_radius = 0.01;
        auto p = generate_packing(sphere_seed({-1, 2, 2, 3, 3}), o);
        for (auto [base, eps] : {std::pair{0, 0.05}, {0, 0.02}, {3, 0.05}}) {
            auto q = concentric(p, base, eps);
            double d = sphere_radial_density(q);
            auto s = offset_sphere(p.sphere(base), eps);
            Vec3 c = s.center(), r{s.radius() + 0.01, s.radius() + 0.01, s.radius() + 0.01};
            auto cover = sphere_cover(p, base, c - r, c + r, 0.02);
            std::mt19937_64 rng(5);
            std::normal_distribution<double> g;
            long long hits = 0, n = 1'000'000;
            for (long long k = 0; k < n; ++k) {
                Vec3 v{g(rng), g(rng), g(rng)};
                hits += cover.covered(c + v * (s.radius() / norm(v)));
            }
            auto mc = oracle::estimate(hits, n);
            CHECK(std::abs(d - mc.p) < 4 * mc.sigma);
        }
        // tangent family: the finite cap sum is what the generated balls cover
        auto q = tangent(p, 0, 1, 0.05);
        auto direct = tangent_family_direct(q);
        CHECK(direct.tail_bound > 0.0);
        CHECK(sphere_radial_density(q) == direct.density);
        auto y0 = *tangency_point(p.sphere(0), p.sphere(1));
        auto st = tilde_sphere(p.sphere(0), y0, 0.05);
        Vec3 c = st.center(), r{st.radius() + 0.01, st.radius() + 0.01, st.radius() + 0.01};
        auto cover = sphere_cover(p, 0, c - r, c + r, 0.02);
        std::mt19937_64 rng(9);
        std::normal_distribution<double> g;
        long long hits = 0, n = 1'000'000;
        for (long long k = 0; k < n; ++k) {
            Vec3 v{g(rng), g(rng), g(rng)};
            hits += cover.covered(c + v * (st.radius() / norm(v)));
        }
        auto mc = oracle::estimate(hits, n);
        CHECK(std::abs(direct.density - mc.p) < 4 * mc.sigma);
    }
}
