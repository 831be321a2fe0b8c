#pragma once

namespace apollo {

// Lobachevsky function -int_0^theta log|2 sin t| dt for theta in [-pi, pi].
double lobachevsky(double theta);

struct CuspDensityConstants {
    double two_d;                  // 3/pi
    double lobachevsky_pi_over_3;  // Lambda(pi/3)
    double v_t;                    // 3 Lambda(pi/3), regular ideal tetrahedron volume
    double three_d;                // sqrt(3) / (2 v_t)
};

// Computed once, then served from a read-only cache.
CuspDensityConstants const& cusp_densities();

}  // namespace apollo
