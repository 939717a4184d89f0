#pragma once

#include <string>

#include "json.hpp"

#include "cones/cantor.hpp"
#include "cones/measure.hpp"
#include "cones/pcs.hpp"
#include "cones/series.hpp"

namespace cones {

using Json = nlohmann::ordered_json;

Json space_to_json(const Space& s);
Space space_from_json(const Json& j);

// {"space":…, "mass":[[pointIndexOrLabel, mass],…], "lost_mass":…} with
// atoms in ascending point order; grids index, discrete spaces label.
Json measure_to_json(const FiniteMeasure& mu);
FiniteMeasure measure_from_json(const Json& j);

// {"dim":…, "maxDegree":…, "coeffs":[[sortedMultiset, value],…]}
Json series_to_json(const AnalyticSeries& f);
AnalyticSeries series_from_json(const Json& j);

// {"web":[…], "tests":[[…]], "gens":[[…]], "exact":bool}
Json pcs_to_json(const Pcs& p);
Pcs pcs_from_json(const Json& j, const std::string& name = "loaded");

// {"depth":d, "coeffs":[["0110", v],…]}
Json tree_to_json(const TreeVector& x);
TreeVector tree_from_json(const Json& j);

// bin_lo,bin_hi,mass rows over every bin of a grid measure.
std::string histogram_csv(const FiniteMeasure& mu);

std::string format_double(double v);

}  // namespace cones
