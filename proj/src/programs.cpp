#include "cones/programs.hpp"

namespace cones::ppcf::programs {

const char* const boxmuller =
    "let x = unif in\n"
    "let y = unif in\n"
    "mult(sqrt(mult(-2.0, log(x))), cos(mult(6.283185307179586, y)))\n";

const char* const geometric =
    "(fix (lam f: real => real. lam x: real. choice 0.5 x (f (plus(x, "
    "1.0))))) 0.0\n";

const char* const square_let = "let x = unif in mult(x, x)\n";

const char* const square_independent = "mult(unif, unif)\n";

std::vector<std::pair<std::string, std::string>> all() {
  return {
      {"boxmuller", boxmuller},
      {"geometric", geometric},
      {"square-let", square_let},
      {"square-independent", square_independent},
  };
}

const std::string& source(const std::string& name) {
  static const auto table = [] {
    std::map<std::string, std::string> m;
    for (auto& [n, s] : all()) m.emplace(n, s);
    return m;
  }();
  auto it = table.find(name);
  if (it == table.end())
    throw structural_error("unknown example program: " + name);
  return it->second;
}

GridConfig wide_grid() {
  GridConfig cfg;
  cfg.lo = -16.0;
  cfg.hi = 16.0;
  cfg.bins = 16384;
  return cfg;
}

GridConfig unit_grid() {
  GridConfig cfg;
  cfg.lo = 0.0;
  cfg.hi = 1.0;
  cfg.bins = 512;
  return cfg;
}

GridConfig integer_grid() {
  GridConfig cfg;
  cfg.lo = -0.5;
  cfg.hi = 63.5;
  cfg.bins = 64;
  return cfg;
}

GridConfig default_grid(const std::string& name) {
  if (name == "boxmuller") return wide_grid();
  if (name == "geometric") return integer_grid();
  if (name == "square-let" || name == "square-independent") return unit_grid();
  return GridConfig{};
}

}  // namespace cones::ppcf::programs

namespace cones::ppcf {

GeometricResult run_geometric(long fixUnfoldBound) {
  GridConfig cfg = programs::integer_grid();
  cfg.fixUnfoldBound = fixUnfoldBound;
  auto diag = std::make_shared<EvalDiag>();
  GeometricResult out{eval_program(programs::geometric, cfg, diag), 0.0, 0,
                      false};
  out.residual = diag->fixResidual;
  out.iterations = diag->fixIterationsMax;
  out.converged = diag->fixConverged;
  return out;
}

}  // namespace cones::ppcf
