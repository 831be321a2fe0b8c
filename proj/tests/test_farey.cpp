#include <doctest.h>

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "apollo/error.hpp"
#include "apollo/farey.hpp"

using namespace apollo;
using std::numbers::pi;

namespace {

// Measure of the union of Ford chords at height eps inside [a, b], by
// sorting and merging intervals (no disjointness assumed).
long double union_measure(double a, double b, double eps)
{
    std::vector<std::pair<long double, long double>> chords;
    long double e = eps;
    for (long long q = 1; (long double)q * q * e < 1.0L; ++q) {
        long double r = 0.5L / ((long double)q * q);
        long double h = std::sqrt(r * r - (e - r) * (e - r));
        for (long long p = 0; p <= q; ++p) {
            if (std::gcd(p, q) != 1)
                continue;
            long double x = (long double)p / q;
            long double lo = std::max<long double>(a, x - h), hi = std::min<long double>(b, x + h);
            if (hi > lo)
                chords.push_back({lo, hi});
        }
    }
    std::sort(chords.begin(), chords.end());
    long double total = 0, cur_lo = 0, cur_hi = -1;
    for (auto [lo, hi] : chords) {
        if (lo > cur_hi) {
            if (cur_hi > cur_lo)
                total += cur_hi - cur_lo;
            cur_lo = lo;
            cur_hi = hi;
        } else {
            cur_hi = std::max(cur_hi, hi);
        }
    }
    if (cur_hi > cur_lo)
        total += cur_hi - cur_lo;
    return total;
}

double envelope(double eps) { return 10.0 * std::sqrt(eps) * (1.0 + std::abs(std::log(eps))); }

}  // namespace

TEST_CASE("totient sieve")
{
    TotientSieve s(100000);
    CHECK(s(1) == 1);
    for (std::size_t p : {2u, 3u, 5u, 7u, 97u, 7919u, 99991u})
        CHECK(s(p) == p - 1);
    CHECK(s(12) == 4);
    CHECK(s(36) == 12);
    CHECK(s(100000) == 40000);

    std::mt19937_64 rng(1);
    std::uniform_int_distribution<std::size_t> u(1, 100000);
    for (int k = 0; k < 1000; ++k) {
        std::size_t q = u(rng);
        std::uint64_t sum = 0;
        for (std::size_t d = 1; d * d <= q; ++d) {
            if (q % d)
                continue;
            sum += s(d);
            if (d * d != q)
                sum += s(q / d);
        }
        CHECK(sum == q);
    }
    CHECK_THROWS_AS(s(100001), PreconditionError);
    CHECK_THROWS_AS(s(0), PreconditionError);

    auto a = shared_sieve(10);
    auto b = shared_sieve(50000);
    CHECK(b->limit() >= 50000);
    CHECK((*a)(10) == 4);
}

TEST_CASE("ford_height_limit")
{
    CHECK(ford_height_limit(0.25) == 2);
    CHECK(ford_height_limit(0.2) == 2);
    CHECK(ford_height_limit(1.0 / 9.0) == 3);
    // the doubles nearest 1e-10 and 1e-8 are slightly above them
    CHECK(ford_height_limit(1e-10) == 99999);
    CHECK(ford_height_limit(1e-8) == 9999);
    CHECK(ford_height_limit(0.0625) == 4);
}

TEST_CASE("L anchors")
{
    CHECK(std::abs(ford_L(0.5) - 1.0) < 1e-12);
    CHECK(std::abs(ford_L(0.2) - 1.0) < 1e-12);
    CHECK(std::abs(ford_L(0.25) - std::sqrt(3.0) / 2.0) < 1e-12);
    CHECK(std::abs(ford_L(0.25) - 0.8660254) < 1e-6);
}

TEST_CASE("L stays in [0, 1]")
{
    for (int k = 1; k <= 2000; ++k) {
        double eps = 0.5 * k / 2000.0;
        double v = ford_L(eps);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
    CHECK_THROWS_AS(ford_L(0.0), PreconditionError);
    CHECK_THROWS_AS(ford_L(0.6), PreconditionError);
    TotientSieve small(10);
    CHECK_THROWS_AS(ford_L(1e-4, small), PreconditionError);
    CHECK(ford_L(0.01, small) == ford_L(0.01));
}

TEST_CASE("chord counts")
{
    for (double eps : {0.3, 0.25, 0.1, 0.01, 1.0 / 49.0, 1e-4}) {
        std::uint64_t brute = 0;
        for (long long q = 1; (double)q * q * eps < 1.0; ++q)
            for (long long p = 0; p < q; ++p)
                brute += std::gcd(p, q) == 1;
        CHECK(ford_chord_count(eps) == brute);
    }
}

TEST_CASE("L_interval on the full interval equals L")
{
    for (double eps : {0.5, 0.3, 0.25, 0.2, 0.1, 0.01, 1e-3, 1e-4, 1e-6})
        CHECK(L_interval({0.0, 1.0}, eps) == ford_L(eps));
}

TEST_CASE("L_interval is additive")
{
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.01, 0.99);
    for (double eps : {0.3, 0.1, 0.01, 1e-4}) {
        for (int k = 0; k < 10; ++k) {
            double x = u(rng);
            double lhs = L_interval({0.0, x}, eps) * x + L_interval({x, 1.0}, eps) * (1.0 - x);
            CHECK(std::abs(lhs - ford_L(eps)) < 1e-12);
        }
    }
}

TEST_CASE("L_interval against the interval-union oracle")
{
    CHECK(std::abs(L_interval({0.0, 0.5}, 0.2) - (double)(union_measure(0.0, 0.5, 0.2) / 0.5L)) < 1e-13);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (double eps : {0.3, 0.05, 1e-3, 1e-5}) {
        for (int k = 0; k < 5; ++k) {
            double a = u(rng), b = u(rng);
            if (a > b)
                std::swap(a, b);
            if (b - a < 1e-3)
                continue;
            double want = (double)(union_measure(a, b, eps) / (long double)(b - a));
            CHECK(std::abs(L_interval({a, b}, eps) - want) < 1e-11);
        }
    }
}

TEST_CASE("shrinking windows")
{
    double eps = 1e-3;
    double w = std::pow(eps, 0.4);
    // window inside the chord of the Ford disk at 0
    CHECK(shrinking_window_density(eps, 0.0, 0.01) == 1.0);
    // endpoint window
    double v = shrinking_window_density(eps, 1.0 - w, 1.0);
    CHECK(std::abs(v - (double)(union_measure(1.0 - w, 1.0, eps) / (long double)w)) < 1e-11);
    // generic window
    double x0 = 0.3141;
    double g = shrinking_window_density(eps, x0, x0 + w);
    CHECK(std::abs(g - (double)(union_measure(x0, x0 + w, eps) / (long double)w)) < 1e-11);
    // full window
    CHECK(std::abs(shrinking_window_density(eps, 0.0, 1.0) - ford_L(eps)) < 1e-12);
    CHECK_THROWS_AS(shrinking_window_density(eps, 0.5, 0.5), PreconditionError);
    CHECK_THROWS_AS(shrinking_window_density(eps, -0.1, 0.5), PreconditionError);
}

TEST_CASE("ford circles")
{
    auto c = ford_circle(0, 1);
    CHECK(std::abs(c.center() - Complex(0.0, 0.5)) < 1e-15);
    CHECK(c.radius() == 0.5);
    auto d = ford_circle(1, 2);
    CHECK(std::abs(d.center() - Complex(0.5, 0.125)) < 1e-15);
    CHECK(d.radius() == 0.125);
    CHECK(tangency_defect(c, d) < 1e-15);
    CHECK_THROWS_AS(ford_circle(2, 4), PreconditionError);
    CHECK_THROWS_AS(ford_circle(1, 0), PreconditionError);

    // tangent iff |ps - qr| = 1, disjoint otherwise
    for (long long q = 1; q <= 12; ++q)
        for (long long p = 0; p <= q; ++p)
            for (long long s = 1; s <= 12; ++s)
                for (long long r = 0; r <= s; ++r) {
                    if (std::gcd(p, q) != 1 || std::gcd(r, s) != 1 || (p == r && q == s))
                        continue;
                    auto a = ford_circle(p, q), b = ford_circle(r, s);
                    double gap = std::abs(a.center() - b.center()) - a.radius() - b.radius();
                    if (std::llabs(p * s - q * r) == 1)
                        CHECK(std::abs(gap) < 1e-14);
                    else
                        CHECK(gap > 1e-6);
                }
}

TEST_CASE("deviation profile and envelope")
{
    std::vector<double> eps{0.5};
    for (int k = 2; k <= 10; ++k)
        eps.push_back(std::pow(10.0, -k));
    auto dev = deviation_profile(eps);
    REQUIRE(dev.size() == eps.size());
    CHECK(std::abs(dev[0].second - (1.0 - 3.0 / pi)) < 1e-12);
    CHECK(std::abs(dev[0].second - 0.0450703414) < 1e-9);
    for (std::size_t k = 1; k < dev.size(); ++k) {
        CHECK(dev[k].first == eps[k]);
        CHECK(std::abs(dev[k].second) <= envelope(eps[k]));
    }
    // dense log grid
    for (int k = 0; k <= 160; ++k) {
        double e = std::pow(10.0, -2.0 - 8.0 * k / 160.0);
        CHECK(std::abs(ford_L(e) - 3.0 / pi) <= envelope(e));
    }
    CHECK(std::abs(ford_L(1e-8) - 3.0 / pi) < 5e-3);
}

TEST_CASE("minimum search")
{
    // 1e-4 + (0.5 - 1e-4) rounds above 1/2; the grid must stay inside
    CHECK_NOTHROW(ford_minimum(1e-4, 0.5, 20000));
    auto m = ford_minimum(1e-3, 0.5, 2000);
    CHECK(std::abs(m.eps - 0.25) < 1e-12);
    CHECK(std::abs(m.value - std::sqrt(3.0) / 2.0) < 1e-12);

    // below the second maximum at 1/5 the smallest value sits at the cusp 1/9
    auto n = ford_minimum(1e-3, 0.2, 2000);
    CHECK(std::abs(n.eps - 1.0 / 9.0) < 1e-15);
    CHECK(std::abs(n.value - 0.876991358554) < 1e-11);
    double at_min[] = {m.eps};
    CHECK(std::abs(deviation_profile(at_min)[0].second - (std::sqrt(3.0) / 2.0 - 3.0 / pi)) < 1e-12);
    CHECK(std::abs(deviation_profile(at_min)[0].second + 0.0889043) < 1e-7);
    CHECK(std::abs(n.value - 2.0 / 3.0 * (std::sqrt(8.0 / 9.0) + std::sqrt(1.0 / 4.0 - 1.0 / 9.0))) < 1e-14);
}

TEST_CASE("Poisson-weighted chords")
{
    // wide kernels reduce to Lebesgue measure
    for (double eps : {0.3, 0.1, 0.01, 1e-4})
        CHECK(std::abs(ford_poisson_density(eps, 0.37, 40.0) - ford_L(eps)) < 1e-12);
    CHECK(ford_poisson_density(1.5, 0.0, 0.1) == 1.0);

    // direct quadrature of the periodized kernel over each chord
    for (auto [eps, a, b] : {std::tuple{0.05, 0.17, 0.3}, {0.2, 0.5, 0.05}, {0.01, -0.3, 1.0}}) {
        double sh = std::sinh(2 * pi * b), ch = std::cosh(2 * pi * b);
        auto kernel = [&](double x) { return sh / (ch - std::cos(2 * pi * (x - a))); };
        double total = 0.0;
        for (long long q = 1; (double)q * q * eps < 1.0; ++q) {
            double h = std::sqrt(eps * (1.0 / (q * q) - eps));
            for (long long p = 0; p < q; ++p) {
                if (std::gcd(p, q) != 1)
                    continue;
                double x = (double)p / q;
                total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(kernel, x - h, x + h, 15, 1e-14);
            }
        }
        CHECK(std::abs(ford_poisson_density(eps, a, b) - total) < 1e-10);
    }
    CHECK_THROWS_AS(ford_poisson_density(0.1, 0.0, 0.0), PreconditionError);
}
