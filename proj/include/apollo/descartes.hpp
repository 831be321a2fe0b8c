#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "apollo/error.hpp"
#include "apollo/inversive.hpp"

namespace apollo {

//---------------------------------------------------------------------------//
// Curvature algebra
//---------------------------------------------------------------------------//

// Four mutually tangent circles: signed curvatures b and curvature-center
// products w = b z (unit normal pointing out of the packing for lines).
struct Quadruple {
    std::array<double, 4> b{};
    std::array<Complex, 4> w{};
};

// Five mutually tangent spheres.
struct Quintuple {
    std::array<double, 5> b{};
    std::array<Vec3, 5> w{};
};

// Relative defect of (sum b)^2 = n sum b^2 (n = 2 for circles, 3 for
// spheres), normalized by sum b^2.
double descartes_residual(Quadruple const& q);
double descartes_residual(Quintuple const& q);

// Relative defect of the curvature-center relations
//   sum w_j^2 - (sum w_j)^2 / n = 2,   sum b w_j - (sum b)(sum w_j) / n = 0
// taken over every coordinate j.
double center_residual(Quadruple const& q);
double center_residual(Quintuple const& q);

// Both curvatures completing a tangent triple, larger first. Throws
// PreconditionError when b1 b2 + b2 b3 + b3 b1 < 0.
std::pair<double, double> fourth_curvature(double b1, double b2, double b3);

// Both curvatures completing four mutually tangent spheres, larger first.
std::pair<double, double> fifth_curvature(double b1, double b2, double b3, double b4);

// Replace element `index` by the other solution tangent to the rest:
// b' = 2 (sum of others) - b in the plane, (sum of others) - b in space.
Quadruple reflect(Quadruple const& q, int index);
Quintuple reflect(Quintuple const& q, int index);

//---------------------------------------------------------------------------//
// Seeds
//---------------------------------------------------------------------------//

// Geometry for four mutually tangent circles with the given bends (at most
// one negative; zeros allowed as a single line or as (0, 0, b, b)). The
// result is in the same order as the input. Throws PreconditionError when
// the bends violate the Descartes relation.
std::vector<GeneralizedCircle> circle_seed(std::array<double, 4> bends);

// Five mutually tangent spheres; zeros allowed as a single plane or as
// (0, 0, b, b, b).
std::vector<GeneralizedSphere> sphere_seed(std::array<double, 5> bends);

// Lines Im z = 0 and Im z = 1 with the unit circles based at 0 and 1.
std::vector<GeneralizedCircle> farey_strip_seed();

// Planes z = 0 and z = 1 with three unit-diameter spheres touching both.
std::vector<GeneralizedSphere> soddy_base_seed();

//---------------------------------------------------------------------------//
// Packing
//---------------------------------------------------------------------------//

// Axis-aligned box. Only the first `dim` coordinates are meaningful.
struct Box {
    std::array<double, 3> lo{};
    std::array<double, 3> hi{};

    bool operator==(Box const&) const = default;
};

struct Element {
    bool flat = false;                  // line or plane
    double curvature = 0.0;             // signed; 0 for flats
    Vec3 center{};                      // base point for flats
    Vec3 normal{};                      // flats: unit normal into the packing
    int depth = 0;                      // length of word
    int parent = -1;                    // element replaced by the birth reflection
    std::string word;                   // reflected tuple slots, '0'..'4'
    std::optional<std::int64_t> exact;  // exact curvature for integral packings

    double radius() const { return flat ? 0.0 : 1.0 / std::abs(curvature); }
    bool operator==(Element const&) const = default;
};

class Packing {
public:
    Packing() = default;
    Packing(int dim, std::vector<Element> elements, std::vector<std::vector<int>> adjacency,
            double min_radius, std::optional<Box> region, std::optional<int> family_anchor);

    int dim() const { return dim_; }
    std::size_t size() const { return elements_.size(); }
    std::vector<Element> const& elements() const { return elements_; }
    Element const& element(int id) const;

    // Sorted ids of the elements tangent to `id`.
    std::span<const int> neighbors(int id) const;

    // Geometry views; dim must match.
    GeneralizedCircle circle(int id) const;
    GeneralizedSphere sphere(int id) const;

    double min_radius() const { return min_radius_; }

    // Elements were kept only when their bounding box met this region.
    std::optional<Box> const& region() const { return region_; }

    // When set, only the seed and the elements tangent to this seed element
    // were generated.
    std::optional<int> family_anchor() const { return family_anchor_; }

    // Seed elements (empty reflection word) come first.
    std::size_t seed_count() const;

    bool partial() const { return partial_; }
    void mark_partial() { partial_ = true; }

    bool operator==(Packing const&) const = default;

private:
    int dim_ = 2;
    std::vector<Element> elements_;
    std::vector<std::vector<int>> adjacency_;
    double min_radius_ = 0.0;
    std::optional<Box> region_;
    std::optional<int> family_anchor_;
    bool partial_ = false;
};

// Thrown when generation exceeds its element cap; carries what was built.
class CapExceeded : public ResourceError {
public:
    CapExceeded(std::size_t cap, Packing partial);
    Packing const& partial() const { return partial_; }

private:
    Packing partial_;
};

// One tuple visited during generation (ids into the packing being built).
struct TupleView {
    std::span<const int> ids;
    std::span<const double> curvatures;
    std::span<const Vec3> curvature_centers;
};

struct GenerationOptions {
    double min_radius = 0.0;
    std::size_t max_elements = 100'000'000;

    // Drop elements whose bounding box misses this box (required for
    // periodic packings, which are otherwise infinite).
    std::optional<Box> region;

    // Restrict to tuples that contain this seed slot: generates only the
    // elements tangent to it.
    std::optional<int> family_of;

    // Called for every tuple the generator visits, including the seed.
    std::function<void(TupleView const&)> on_tuple;
};

// Breadth-first closure of the seed under reflections, descending into a new
// element only when its radius is >= min_radius. Throws PreconditionError
// if the seed violates its curvature identity, CapExceeded past the cap.
Packing generate_packing(std::span<const GeneralizedCircle> seed, GenerationOptions const& opts);
Packing generate_packing(std::span<const GeneralizedSphere> seed, GenerationOptions const& opts);

// Elements tangent to `id`.
std::vector<int> tangent_set(Packing const& p, int id);

// Largest tangency defect over all recorded adjacencies, relative to the
// larger radius of the pair (absolute for flat-flat pairs).
double max_tangency_defect(Packing const& p);

}  // namespace apollo
