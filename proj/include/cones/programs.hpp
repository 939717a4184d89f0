#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cones/ppcf.hpp"

namespace cones::ppcf::programs {

// Canonical sources, mirrored in the programs/ directory.
extern const char* const boxmuller;
extern const char* const geometric;
extern const char* const square_let;
extern const char* const square_independent;

std::vector<std::pair<std::string, std::string>> all();
const std::string& source(const std::string& name);

// Grids the examples are calibrated for: the wide grid gives exactly 512
// uniform bins inside [0,1]; the integer grid has unit bins centered on
// 0..63; the unit grid is 512 bins on [0,1].
GridConfig wide_grid();
GridConfig unit_grid();
GridConfig integer_grid();
GridConfig default_grid(const std::string& name);

}  // namespace cones::ppcf::programs
