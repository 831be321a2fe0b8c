#include "apollo/farey.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <numeric>

#include "apollo/error.hpp"
#include "apollo/summation.hpp"

namespace apollo {

namespace {

void require_eps(double eps)
{
    if (!(eps > 0.0 && eps <= 0.5))
        throw PreconditionError("eps must lie in (0, 1/2]");
}

// sqrt(1/q^2 - eps) without cancellation near q^2 eps = 1.
double root_term(std::size_t q, double eps)
{
    double qq = static_cast<double>(q) * static_cast<double>(q);
    double s = std::fma(-qq, eps, 1.0);
    return s > 0.0 ? std::sqrt(s) / static_cast<double>(q) : 0.0;
}

// Half-length of the chord cut from the Ford disk of denominator q by
// Im z = eps.
double half_chord(std::size_t q, double eps)
{
    return std::sqrt(eps) * root_term(q, eps);
}

}  // namespace

//---------------------------------------------------------------------------//
// TotientSieve
//---------------------------------------------------------------------------//

TotientSieve::TotientSieve(std::size_t limit) : phi_(limit + 1, 0)
{
    if (limit >= 0xffffffffu)
        throw PreconditionError("sieve limit too large");
    std::vector<std::uint32_t> primes;
    if (limit >= 1)
        phi_[1] = 1;
    for (std::size_t i = 2; i <= limit; ++i) {
        if (phi_[i] == 0) {
            phi_[i] = static_cast<std::uint32_t>(i - 1);
            primes.push_back(static_cast<std::uint32_t>(i));
        }
        for (std::uint32_t p : primes) {
            std::size_t m = i * p;
            if (m > limit)
                break;
            if (i % p == 0) {
                phi_[m] = phi_[i] * p;
                break;
            }
            phi_[m] = phi_[i] * (p - 1);
        }
    }
}

std::uint32_t TotientSieve::operator()(std::size_t q) const
{
    if (q == 0 || q > limit())
        throw PreconditionError("totient index outside the sieve");
    return phi_[q];
}

std::shared_ptr<const TotientSieve> shared_sieve(std::size_t limit)
{
    static std::mutex mutex;
    static std::shared_ptr<const TotientSieve> sieve;
    std::lock_guard lock(mutex);
    if (!sieve || sieve->limit() < limit) {
        std::size_t grow = sieve ? std::max(limit, 2 * sieve->limit()) : std::max<std::size_t>(limit, 1024);
        sieve = std::make_shared<const TotientSieve>(grow);
    }
    return sieve;
}

//---------------------------------------------------------------------------//
// L(eps)
//---------------------------------------------------------------------------//

std::size_t ford_height_limit(double eps)
{
    if (!(eps > 0.0))
        throw PreconditionError("eps must be positive");
    auto q = static_cast<std::size_t>(std::floor(1.0 / std::sqrt(eps)));
    auto fits = [&](std::size_t k) {
        double kk = static_cast<double>(k) * static_cast<double>(k);
        return std::fma(-kk, eps, 1.0) >= 0.0;
    };
    while (q > 0 && !fits(q))
        --q;
    while (fits(q + 1))
        ++q;
    return q;
}

double ford_L(double eps, TotientSieve const& sieve)
{
    require_eps(eps);
    std::size_t qmax = ford_height_limit(eps);
    if (sieve.limit() < qmax)
        throw PreconditionError("sieve too small: need " + std::to_string(qmax) + ", have "
                                + std::to_string(sieve.limit()));
    auto phi = sieve.values();
    CompensatedSum s;
    for (std::size_t q = 1; q <= qmax; ++q)
        s.add(phi[q] * root_term(q, eps));
    return std::min(1.0, 2.0 * std::sqrt(eps) * s.value());
}

double ford_L(double eps)
{
    require_eps(eps);
    return ford_L(eps, *shared_sieve(ford_height_limit(eps)));
}

std::uint64_t ford_chord_count(double eps)
{
    require_eps(eps);
    std::size_t qmax = ford_height_limit(eps);
    auto sieve = shared_sieve(qmax);
    std::uint64_t n = 0;
    for (std::size_t q = 1; q <= qmax; ++q) {
        if (root_term(q, eps) > 0.0)
            n += (*sieve)(q);
    }
    return n;
}

//---------------------------------------------------------------------------//
// Intervals
//---------------------------------------------------------------------------//

double L_interval(Interval I, double eps)
{
    require_eps(eps);
    if (!(0.0 <= I.a && I.a < I.b && I.b <= 1.0))
        throw PreconditionError("interval must satisfy 0 <= a < b <= 1");
    // full period: the chord sum collapses to the totient sum
    if (I.a == 0.0 && I.b == 1.0)
        return ford_L(eps);
    std::size_t qmax = ford_height_limit(eps);
    CompensatedSum s;
    for (std::size_t q = 1; q <= qmax; ++q) {
        double h = half_chord(q, eps);
        if (h == 0.0)
            continue;
        double dq = static_cast<double>(q);
        auto lo = static_cast<std::int64_t>(std::max(0.0, std::ceil((I.a - h) * dq)));
        auto hi = static_cast<std::int64_t>(std::min(dq, std::floor((I.b + h) * dq)));
        for (std::int64_t p = lo; p <= hi; ++p) {
            if (std::gcd(p, static_cast<std::int64_t>(q)) != 1)
                continue;
            double x = static_cast<double>(p) / dq;
            double len = std::min(I.b, x + h) - std::max(I.a, x - h);
            if (len > 0.0)
                s.add(len);
        }
    }
    return std::min(1.0, s.value() / I.length());
}

double shrinking_window_density(double eps, double alpha, double beta)
{
    return L_interval(Interval{alpha, beta}, eps);
}

GeneralizedCircle ford_circle(std::int64_t p, std::int64_t q)
{
    if (q <= 0)
        throw PreconditionError("ford_circle: q must be positive");
    if (std::gcd(p, q) != 1)
        throw PreconditionError("ford_circle: p and q must be coprime");
    double dq = static_cast<double>(q);
    double r = 0.5 / (dq * dq);
    return GeneralizedCircle::circle(Complex(static_cast<double>(p) / dq, r), r);
}

std::vector<std::pair<double, double>> deviation_profile(std::span<const double> eps)
{
    std::vector<std::pair<double, double>> out;
    out.reserve(eps.size());
    for (double e : eps)
        out.emplace_back(e, ford_L(e) - 3.0 / std::numbers::pi);
    return out;
}

//---------------------------------------------------------------------------//
// Minimum search
//---------------------------------------------------------------------------//

FordMinimum ford_minimum(double lo, double hi, std::size_t grid)
{
    require_eps(hi);
    if (!(lo > 0.0 && lo < hi) || grid < 3)
        throw PreconditionError("ford_minimum: need 0 < lo < hi and at least 3 grid points");

    std::vector<double> xs(grid), ys(grid);
    for (std::size_t k = 0; k < grid; ++k) {
        xs[k] = std::min(hi, lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(grid - 1));
        ys[k] = ford_L(xs[k]);
    }
    FordMinimum best{xs[0], ys[0]};
    auto consider = [&](double x) {
        double y = ford_L(x);
        if (y < best.value)
            best = {x, y};
    };

    // Cusps: a new denominator enters at eps = 1/q^2.
    for (std::size_t q = ford_height_limit(hi); ; ++q) {
        double x = 1.0 / (static_cast<double>(q) * static_cast<double>(q));
        if (x < lo)
            break;
        if (x <= hi) {
            // L jumps up by a sqrt term just left of the cusp; the double
            // nearest 1/q^2 may sit on either side.
            consider(x);
            if (std::nextafter(x, 1.0) <= hi)
                consider(std::nextafter(x, 1.0));
        }
    }

    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    for (std::size_t k = 0; k < grid; ++k) {
        bool local = (k == 0 || ys[k] <= ys[k - 1]) && (k + 1 == grid || ys[k] <= ys[k + 1]);
        if (!local)
            continue;
        double a = xs[k == 0 ? 0 : k - 1], b = xs[k + 1 == grid ? k : k + 1];
        double c = b - g * (b - a), d = a + g * (b - a);
        double fc = ford_L(c), fd = ford_L(d);
        for (int it = 0; it < 100 && b - a > 1e-15 * b; ++it) {
            if (fc < fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = ford_L(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = ford_L(d);
            }
        }
        consider(xs[k]);
        consider(0.5 * (a + b));
    }
    return best;
}

//---------------------------------------------------------------------------//
// Poisson-weighted chords
//---------------------------------------------------------------------------//

double ford_poisson_density(double eps, double a, double b)
{
    if (!(eps > 0.0))
        throw PreconditionError("eps must be positive");
    if (!(b > 0.0))
        throw PreconditionError("Cauchy scale must be positive");
    if (eps >= 1.0)
        return 1.0;

    const double pi = std::numbers::pi;
    const double coth = 1.0 / std::tanh(pi * b);
    // Antiderivative of the periodized density, continuous and Phi(x + 1) = Phi(x) + 1.
    auto Phi = [&](double x) {
        double t = x - a;
        double k = std::floor(t + 0.5);
        double y = t - k;
        return k + std::atan2(coth * std::sin(pi * y), std::cos(pi * y)) / pi;
    };

    std::size_t qmax = ford_height_limit(eps);
    CompensatedSum s;
    // Farey sequence of order qmax on [0, 1), by the next-term recurrence.
    std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = static_cast<std::int64_t>(qmax);
    auto chord = [&](std::int64_t p, std::int64_t q) {
        double h = half_chord(static_cast<std::size_t>(q), eps);
        if (h == 0.0)
            return;
        double x = static_cast<double>(p) / static_cast<double>(q);
        s.add(Phi(x + h) - Phi(x - h));
    };
    chord(p0, q0);
    while (p1 < q1) {
        chord(p1, q1);
        auto n = (static_cast<std::int64_t>(qmax) + q0) / q1;
        std::int64_t p2 = n * p1 - p0, q2 = n * q1 - q0;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
    }
    return std::clamp(s.value(), 0.0, 1.0);
}

}  // namespace apollo
