#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "apollo/inversive.hpp"

namespace apollo {

// Euler phi for 1..limit by a linear sieve.
class TotientSieve {
public:
    explicit TotientSieve(std::size_t limit);

    std::size_t limit() const { return phi_.size() - 1; }
    std::uint32_t operator()(std::size_t q) const;
    std::span<const std::uint32_t> values() const { return phi_; }

private:
    std::vector<std::uint32_t> phi_;
};

// Process-wide sieve covering at least `limit`, grown on demand. The
// returned sieve is immutable and may be shared freely.
std::shared_ptr<const TotientSieve> shared_sieve(std::size_t limit);

struct Interval {
    double a = 0.0;
    double b = 1.0;

    double length() const { return b - a; }
};

// Largest q with q^2 eps <= 1.
std::size_t ford_height_limit(double eps);

// Fraction of the segment [0,1] + i eps covered by Ford disks:
//   L(eps) = 2 sqrt(eps) sum_{q <= 1/sqrt(eps)} phi(q) sqrt(1/q^2 - eps).
// eps in (0, 1/2]. The first overload grows the shared sieve; the second
// throws PreconditionError when `sieve` is too small.
double ford_L(double eps);
double ford_L(double eps, TotientSieve const& sieve);

// Number of Ford chords on [0,1] + i eps with nonzero length, counting the
// two halves at 0 and 1 as one chord.
std::uint64_t ford_chord_count(double eps);

// Measure of {x in I : x + i eps lies in a Ford disk} over |I|.
double L_interval(Interval I, double eps);

// L_interval over [alpha, beta].
double shrinking_window_density(double eps, double alpha, double beta);

// Ford circle at p/q: center p/q + i/(2q^2), radius 1/(2q^2).
GeneralizedCircle ford_circle(std::int64_t p, std::int64_t q);

// (eps, L(eps) - 3/pi) for each eps.
std::vector<std::pair<double, double>> deviation_profile(std::span<const double> eps);

struct FordMinimum {
    double eps;
    double value;
};

// Smallest L on [lo, hi]: a uniform grid of `grid` points plus every cusp
// eps = 1/q^2 in range, each local grid minimum refined by golden-section
// search on the neighboring cells.
FordMinimum ford_minimum(double lo, double hi, std::size_t grid);

// Same Ford chords weighted by the periodized Cauchy density with center a
// and scale b > 0 instead of Lebesgue measure:
//   sum_{p/q in [0,1)} int_chord sinh(2 pi b) / (cosh(2 pi b) - cos(2 pi (x - a))) dx.
// This is the image of the uniform measure on a circle under a Mobius map
// sending the circle to Im z = eps. Tends to L(eps) as b -> infinity.
double ford_poisson_density(double eps, double a, double b);

}  // namespace apollo
