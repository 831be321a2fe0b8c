#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "apollo/descartes.hpp"

namespace apollo {

enum class DensityMode { concentric, tangent_family };

// Measuring window on a flat base, in coordinates of the offset line (t along
// line_direction from the base point) or plane (plane_frame of the normal,
// from the base point). Only index 0 is used in the plane.
struct Window {
    std::array<double, 2> lo{};
    std::array<double, 2> hi{};
};

struct DensityQuery {
    Packing const* packing = nullptr;
    int base = 0;
    DensityMode mode = DensityMode::concentric;
    // Tangent family: the neighbour whose tangency point with the base is w0.
    std::optional<int> neighbor;
    double eps = 0.0;
    // Flat bases; defaults to one translation period when a parallel flat
    // exists.
    std::optional<Window> window;
};

struct DensityRow {
    double eps = 0.0;
    double density = 0.0;
    std::size_t terms = 0;    // tangent elements with nonzero contribution
    double cutoff = 0.0;      // min_radius of the packing used
    double tail_bound = 0.0;  // bound on coverage missing from the finite sum
};

struct DensityProfile {
    DensityQuery query;  // eps unused
    std::vector<DensityRow> rows;
};

// Fraction of the concentric offset curve covered by disks tangent to the
// base (2D). Exact: a tangent disk of radius r meets the offset curve only if
// 2r > eps, so the packing cutoff must be <= eps / 2.
double radial_density(DensityQuery const& q);

// Fraction of the circle of radius r0 +- eps tangent to the base at w0 that
// is covered by disks tangent to the base (2D). Evaluated exactly by mapping
// the packing to the Farey strip; needs the base, the neighbour and one
// common neighbour of both, not a fine cutoff.
double radial_density_tangent_family(DensityQuery const& q);

// Same as the two above on a sphere packing; both modes. The tangent family
// is a finite cap sum with tail_bound > 0.
double sphere_radial_density(DensityQuery const& q);

// Dispatch on dimension and mode, with term counts and tail bound.
DensityRow evaluate_density(DensityQuery const& q);

// Direct arc/cap sum over the generated tangent set on the tilde curve, and a
// bound on what elements below the cutoff could add.
DensityRow tangent_family_direct(DensityQuery const& q);

// Evaluates the template query at every eps, keeping the request order.
DensityProfile density_profile(DensityQuery const& tmpl, std::span<const double> eps);

// Default window for a flat base: one translation period when another flat
// parallel to it exists.
std::optional<Window> default_window(Packing const& p, int base);

}  // namespace apollo
