#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cones/measure.hpp"

namespace cones::ppcf {

// ---- types ----------------------------------------------------------

struct Type;
using TypePtr = std::shared_ptr<const Type>;

struct Type {
  enum class K { real, unit, arrow };
  K k = K::real;
  TypePtr from, to;  // arrow children

  static TypePtr real();
  static TypePtr unit();
  static TypePtr arrow(TypePtr from, TypePtr to);

  bool is_real() const { return k == K::real; }
  bool is_unit() const { return k == K::unit; }
  bool is_arrow() const { return k == K::arrow; }
  std::string show() const;
};

bool type_equal(const TypePtr& a, const TypePtr& b);

// ---- terms ----------------------------------------------------------

enum class Unop { log, sqrt, cos, exp, neg };
enum class Binop { plus, mult };

std::string unop_name(Unop u);
std::string binop_name(Binop b);

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class K { var, lam, app, letSample, fix, num, unif, choice, unop, binop };
  K k;
  std::string name;   // var / binder name
  TypePtr type;       // lam annotation
  TermPtr t1, t2;     // children (lam body in t1; app fun/arg; let bound/body)
  double value = 0.0; // num literal or choice probability
  Unop uop = Unop::log;
  Binop bop = Binop::plus;
  int line = 0, col = 0;
};

TermPtr mk_var(std::string name);
TermPtr mk_lam(std::string name, TypePtr type, TermPtr body);
TermPtr mk_app(TermPtr fun, TermPtr arg);
TermPtr mk_let(std::string name, TermPtr bound, TermPtr body);
TermPtr mk_fix(TermPtr body);
TermPtr mk_num(double v);
TermPtr mk_unif();
TermPtr mk_choice(double p, TermPtr a, TermPtr b);
TermPtr mk_unop(Unop u, TermPtr a);
TermPtr mk_binop(Binop b, TermPtr a, TermPtr c);

// ---- parsing and printing ------------------------------------------

class parse_error : public structural_error {
 public:
  parse_error(int line, int col, const std::string& what);
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_, col_;
};

TermPtr parse(const std::string& text);
// Canonical rendering; parse(print_term(t)) reproduces t.
std::string print_term(const TermPtr& t);
std::string print_type(const TypePtr& t);

// ---- typechecking ---------------------------------------------------

class type_error : public structural_error {
 public:
  using structural_error::structural_error;
};

using TypeEnv = std::map<std::string, TypePtr>;
TypePtr typecheck(const TermPtr& t, const TypeEnv& env = {});

// ---- evaluation -----------------------------------------------------

struct GridConfig {
  double lo = -16.0;
  double hi = 16.0;
  int bins = 16384;
  double pruneFloor = 1e-15;
  long fixUnfoldBound = 64;
  double fixTol = 1e-12;

  Space space() const { return Space::grid(lo, hi, bins); }
};

struct Value;
using ValuePtr = std::shared_ptr<const Value>;

struct Value {
  TypePtr type;
  std::optional<FiniteMeasure> measure;                // real
  double scalar = 0.0;                                 // unit
  std::function<ValuePtr(const ValuePtr&)> fn;         // arrow

  static ValuePtr of_measure(FiniteMeasure mu);
  static ValuePtr of_scalar(double s);
  static ValuePtr of_fn(TypePtr type,
                        std::function<ValuePtr(const ValuePtr&)> fn);
};

// Aggregated evaluation diagnostics (fixpoint unfolding, lost mass).
struct EvalDiag {
  long fixObservations = 0;   // ground observations unfolded
  long fixIterationsMax = 0;  // deepest unfolding used
  bool fixConverged = true;   // all observations reached fixTol
  double fixResidual = 0.0;   // largest final increment norm
};

using Env = std::map<std::string, ValuePtr>;

ValuePtr bottom_value(const TypePtr& type, const GridConfig& cfg);
ValuePtr value_add(const ValuePtr& a, const ValuePtr& b);
ValuePtr value_scale(const ValuePtr& a, double s);

ValuePtr eval(const TermPtr& t, const Env& env, const GridConfig& cfg,
              const std::shared_ptr<EvalDiag>& diag = nullptr);

// Convenience: typecheck against the empty environment, evaluate, and
// require a ground (measure) result.
FiniteMeasure eval_program(const std::string& text, const GridConfig& cfg,
                           const std::shared_ptr<EvalDiag>& diag = nullptr);

struct GeometricResult {
  FiniteMeasure measure;
  double residual = 0.0;
  long iterations = 0;
  bool converged = false;
};

// The fix/choice/letSample regression program on the integer grid.
GeometricResult run_geometric(long fixUnfoldBound = 64);

}  // namespace cones::ppcf
