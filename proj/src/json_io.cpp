#include "cones/json_io.hpp"

#include <cstdio>
#include <sstream>

namespace cones {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json space_to_json(const Space& s) {
  Json j;
  if (s.kind() == Space::Kind::grid) {
    j["kind"] = "grid";
    j["lo"] = s.lo();
    j["hi"] = s.hi();
    j["bins"] = s.bins();
  } else {
    // Discrete and product spaces both serialize as labelled points.
    j["kind"] = "discrete";
    Json labels = Json::array();
    for (int i = 0; i < s.size(); ++i) labels.push_back(s.point_name(i));
    j["labels"] = std::move(labels);
  }
  return j;
}

Space space_from_json(const Json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "grid")
    return Space::grid(j.at("lo").get<double>(), j.at("hi").get<double>(),
                       j.at("bins").get<int>());
  if (kind == "discrete")
    return Space::discrete(j.at("labels").get<std::vector<std::string>>());
  throw structural_error("space JSON: unknown kind " + kind);
}

Json measure_to_json(const FiniteMeasure& mu) {
  Json j;
  j["space"] = space_to_json(mu.space());
  Json mass = Json::array();
  const bool labelled = mu.space().kind() != Space::Kind::grid;
  for (const auto& [point, m] : mu.atoms()) {
    Json row = Json::array();
    if (labelled)
      row.push_back(mu.space().point_name(point));
    else
      row.push_back(point);
    row.push_back(m);
    mass.push_back(std::move(row));
  }
  j["mass"] = std::move(mass);
  j["lost_mass"] = mu.lost();
  return j;
}

FiniteMeasure measure_from_json(const Json& j) {
  Space s = space_from_json(j.at("space"));
  FiniteMeasure mu = FiniteMeasure::zero(s);
  for (const auto& row : j.at("mass")) {
    if (!row.is_array() || row.size() != 2)
      throw structural_error("measure JSON: mass rows must be [point, mass]");
    int point;
    if (row[0].is_string()) {
      const auto& labels = s.labels();
      std::string label = row[0].get<std::string>();
      auto it = std::find(labels.begin(), labels.end(), label);
      if (it == labels.end())
        throw structural_error("measure JSON: unknown label " + label);
      point = static_cast<int>(it - labels.begin());
    } else {
      point = row[0].get<int>();
      if (point < 0 || point >= s.size())
        throw structural_error("measure JSON: point index outside space");
    }
    double m = row[1].get<double>();
    if (m < 0.0) throw structural_error("measure JSON: negative mass");
    mu.accumulate(point, m);
  }
  mu.prune();
  if (j.contains("lost_mass")) mu.set_lost(j.at("lost_mass").get<double>());
  return mu;
}

Json series_to_json(const AnalyticSeries& f) {
  Json j;
  j["dim"] = f.dim();
  j["maxDegree"] = f.max_degree();
  Json coeffs = Json::array();
  for (const auto& [m, c] : f.coeffs()) {
    Json row = Json::array();
    row.push_back(m);
    row.push_back(c);
    coeffs.push_back(std::move(row));
  }
  j["coeffs"] = std::move(coeffs);
  return j;
}

AnalyticSeries series_from_json(const Json& j) {
  std::map<Multiset, double> cs;
  for (const auto& row : j.at("coeffs")) {
    if (!row.is_array() || row.size() != 2)
      throw structural_error("series JSON: coeff rows must be [multiset, value]");
    Multiset m = row[0].get<Multiset>();
    cs[m] += row[1].get<double>();
  }
  return AnalyticSeries(j.at("dim").get<int>(), j.at("maxDegree").get<int>(),
                        std::move(cs));
}

Json pcs_to_json(const Pcs& p) {
  Json j;
  j["web"] = p.web();
  j["tests"] = p.tests();
  j["gens"] = p.gens();
  j["exact"] = p.exact();
  return j;
}

Pcs pcs_from_json(const Json& j, const std::string& name) {
  return Pcs::atomic(name, j.at("web").get<std::vector<std::string>>(),
                     j.at("tests").get<std::vector<std::vector<double>>>(),
                     j.at("gens").get<std::vector<std::vector<double>>>(),
                     j.at("exact").get<bool>());
}

Json tree_to_json(const TreeVector& x) {
  Json j;
  j["depth"] = x.depth();
  Json coeffs = Json::array();
  for (const auto& [s, v] : x.coeffs()) {
    Json row = Json::array();
    row.push_back(s);
    row.push_back(v);
    coeffs.push_back(std::move(row));
  }
  j["coeffs"] = std::move(coeffs);
  return j;
}

TreeVector tree_from_json(const Json& j) {
  std::map<std::string, double> cs;
  for (const auto& row : j.at("coeffs")) {
    if (!row.is_array() || row.size() != 2)
      throw structural_error("tree JSON: coeff rows must be [string, value]");
    cs[row[0].get<std::string>()] += row[1].get<double>();
  }
  return TreeVector(j.at("depth").get<int>(), std::move(cs));
}

std::string histogram_csv(const FiniteMeasure& mu) {
  if (mu.space().kind() != Space::Kind::grid)
    throw structural_error("histogram_csv: needs a grid measure");
  std::ostringstream os;
  os << "bin_lo,bin_hi,mass\n";
  const Space& s = mu.space();
  double w = s.width();
  for (int i = 0; i < s.size(); ++i) {
    double lo = s.lo() + i * w;
    os << format_double(lo) << "," << format_double(lo + w) << ","
       << format_double(mu.mass(i)) << "\n";
  }
  return os.str();
}

}  // namespace cones
