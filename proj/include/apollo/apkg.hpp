#pragma once

#include <filesystem>
#include <iosfwd>

#include "apollo/descartes.hpp"

namespace apollo {

// APKG v1, a line-oriented text format:
//
//   APKG 1 <dim> <min_radius>
//   REGION <lo...> <hi...>        optional, dim values each
//   FAMILY <seed slot>            optional
//   PARTIAL                       optional
//   <id> <kind> <curvature> <coords...> <depth> <parent|-1> <word|->
//   ...
//   TANGENCY
//   <id>: <id> <id> ...
//
// kind is circle (x y), line (bx by nx ny), sphere (x y z) or plane
// (bx by bz nx ny nz). Floats carry 17 significant digits, so a round trip
// is bit-exact.
void save_packing(Packing const& p, std::ostream& out);
void save_packing(Packing const& p, std::filesystem::path const& path);

// Throws ParseError (with the 1-based line) on malformed input and
// VersionError on a header with another version.
Packing load_packing(std::istream& in);
Packing load_packing(std::filesystem::path const& path);

}  // namespace apollo
