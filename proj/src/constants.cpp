#include "apollo/constants.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "apollo/error.hpp"

namespace apollo {

namespace {

using std::numbers::pi;

constexpr int kTerms = 40;

// c_k = zeta(2k) / (k (2k + 1) (2 pi)^{2k}), k = 1..kTerms.
std::array<double, kTerms + 1> clausen_coefficients()
{
    std::array<double, kTerms + 1> c{};
    const double pi2 = pi * pi;
    const std::array<double, 5> closed{0.0, pi2 / 6.0, pi2 * pi2 / 90.0, pi2 * pi2 * pi2 / 945.0,
                                       pi2 * pi2 * pi2 * pi2 / 9450.0};
    double scale = 1.0;
    for (int k = 1; k <= kTerms; ++k) {
        scale /= 4.0 * pi2;
        double zeta;
        if (k < 5) {
            zeta = closed[k];
        } else {
            // tail beyond n = 100 is below 100^(1-2k) < 1e-18
            zeta = 0.0;
            for (int n = 100; n >= 1; --n)
                zeta += std::pow(static_cast<double>(n), -2.0 * k);
        }
        c[k] = zeta / (k * (2.0 * k + 1.0)) * scale;
    }
    return c;
}

// Cl2(phi) = sum sin(n phi) / n^2 for phi in [0, pi], by the power series
//   phi - phi log phi + sum_k c_k phi^{2k+1}.
double clausen_reduced(double phi)
{
    static const auto c = clausen_coefficients();
    if (phi == 0.0)
        return 0.0;
    double phi2 = phi * phi;
    // Horner in phi^2, highest term first
    double s = 0.0;
    for (int k = kTerms; k >= 1; --k)
        s = (s + c[k]) * phi2;
    return phi - phi * std::log(phi) + phi * s;
}

// Cl2 on the whole line: odd and 2 pi periodic.
double clausen(double phi)
{
    double t = std::remainder(phi, 2.0 * pi);  // in [-pi, pi]
    return t < 0.0 ? -clausen_reduced(-t) : clausen_reduced(t);
}

}  // namespace

double lobachevsky(double theta)
{
    if (!(std::abs(theta) <= pi))
        throw PreconditionError("lobachevsky: theta must lie in [-pi, pi]");
    return 0.5 * clausen(2.0 * theta);
}

CuspDensityConstants const& cusp_densities()
{
    static const CuspDensityConstants k = [] {
        CuspDensityConstants c;
        c.two_d = 3.0 / pi;
        c.lobachevsky_pi_over_3 = lobachevsky(pi / 3.0);
        c.v_t = 3.0 * c.lobachevsky_pi_over_3;
        c.three_d = std::sqrt(3.0) / (2.0 * c.v_t);
        return c;
    }();
    return k;
}

}  // namespace apollo
