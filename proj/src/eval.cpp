#include <algorithm>
#include <cmath>

#include "cones/ppcf.hpp"

namespace cones::ppcf {

ValuePtr Value::of_measure(FiniteMeasure mu) {
  auto v = std::make_shared<Value>();
  v->type = Type::real();
  v->measure = std::move(mu);
  return v;
}

ValuePtr Value::of_scalar(double s) {
  auto v = std::make_shared<Value>();
  v->type = Type::unit();
  v->scalar = s;
  return v;
}

ValuePtr Value::of_fn(TypePtr type,
                      std::function<ValuePtr(const ValuePtr&)> fn) {
  auto v = std::make_shared<Value>();
  v->type = std::move(type);
  v->fn = std::move(fn);
  return v;
}

ValuePtr bottom_value(const TypePtr& type, const GridConfig& cfg) {
  switch (type->k) {
    case Type::K::real:
      return Value::of_measure(FiniteMeasure::zero(cfg.space()));
    case Type::K::unit:
      return Value::of_scalar(0.0);
    case Type::K::arrow:
      return Value::of_fn(type, [to = type->to, cfg](const ValuePtr&) {
        return bottom_value(to, cfg);
      });
  }
  throw structural_error("bottom_value: unknown type");
}

ValuePtr value_add(const ValuePtr& a, const ValuePtr& b) {
  if (!type_equal(a->type, b->type))
    throw structural_error("value_add: type mismatch");
  switch (a->type->k) {
    case Type::K::real:
      return Value::of_measure(add(*a->measure, *b->measure));
    case Type::K::unit:
      return Value::of_scalar(a->scalar + b->scalar);
    case Type::K::arrow:
      return Value::of_fn(a->type, [a, b](const ValuePtr& arg) {
        return value_add(a->fn(arg), b->fn(arg));
      });
  }
  throw structural_error("value_add: unknown type");
}

ValuePtr value_scale(const ValuePtr& a, double s) {
  switch (a->type->k) {
    case Type::K::real:
      return Value::of_measure(scale(s, *a->measure));
    case Type::K::unit:
      return Value::of_scalar(s * a->scalar);
    case Type::K::arrow:
      return Value::of_fn(a->type, [a, s](const ValuePtr& arg) {
        return value_scale(a->fn(arg), s);
      });
  }
  throw structural_error("value_scale: unknown type");
}

namespace {

struct PruneGuard {
  double saved;
  explicit PruneGuard(double floor) : saved(prune_floor()) {
    set_prune_floor(floor);
  }
  ~PruneGuard() { set_prune_floor(saved); }
};

void validate(const GridConfig& cfg) {
  if (!(cfg.lo < cfg.hi) || cfg.bins < 1)
    throw structural_error("GridConfig: need lo < hi and bins >= 1");
  if (cfg.fixUnfoldBound < 1 || cfg.fixTol < 0.0 || cfg.pruneFloor < 0.0)
    throw structural_error("GridConfig: bad fixpoint or prune settings");
}

FiniteMeasure uniform_unit(const GridConfig& cfg) {
  // Equal mass on every grid bin whose overlap with [0,1] has positive
  // length; a grid not meeting [0,1] at all loses the whole sample.
  Space g = cfg.space();
  double w = g.width();
  std::vector<int> hit;
  for (int i = 0; i < g.size(); ++i) {
    double binLo = g.lo() + i * w, binHi = binLo + w;
    if (binLo < 1.0 && binHi > 0.0) hit.push_back(i);
  }
  FiniteMeasure out = FiniteMeasure::zero(g);
  if (hit.empty()) {
    out.set_lost(1.0);
    return out;
  }
  double m = 1.0 / static_cast<double>(hit.size());
  for (int i : hit) out.accumulate(i, m);
  out.prune();
  return out;
}

std::optional<double> apply_unop(Unop u, double r) {
  switch (u) {
    case Unop::log:
      if (r <= 0.0) return std::nullopt;
      return std::log(r);
    case Unop::sqrt:
      if (r < 0.0) return std::nullopt;
      return std::sqrt(r);
    case Unop::cos:
      return std::cos(r);
    case Unop::exp:
      return std::exp(r);
    case Unop::neg:
      return -r;
  }
  return std::nullopt;
}

double apply_binop(Binop b, double x, double y) {
  return b == Binop::plus ? x + y : x * y;
}

const FiniteMeasure& as_measure(const ValuePtr& v, const char* who) {
  if (!v->measure)
    throw structural_error(std::string(who) + ": expected a ground value");
  return *v->measure;
}

TypeEnv env_types(const Env& env) {
  TypeEnv out;
  for (const auto& [name, v] : env) out[name] = v->type;
  return out;
}

ValuePtr eval_rec(const TermPtr& t, const Env& env, const GridConfig& cfg,
                  const std::shared_ptr<EvalDiag>& diag);

ValuePtr apply_spine(ValuePtr v, const std::vector<ValuePtr>& args) {
  for (const auto& a : args) {
    if (!v->fn) throw structural_error("fix: observation spine too long");
    v = v->fn(a);
  }
  return v;
}

// Ground-observation Kleene loop shared by measure- and scalar-typed
// observations of a fixpoint.
ValuePtr fix_ground(const std::function<ValuePtr(long)>& iterate,
                    const GridConfig& cfg,
                    const std::shared_ptr<EvalDiag>& diag) {
  ValuePtr prev = iterate(0);
  bool converged = false;
  double residual = 0.0;
  long used = 0;
  for (long k = 1; k <= cfg.fixUnfoldBound; ++k) {
    ValuePtr cur = iterate(k);
    used = k;
    double delta;
    if (cur->measure) {
      if (!leq(*prev->measure, *cur->measure, 1e-12))
        throw contract_error(
            "fix: iterate " + std::to_string(k) +
            " is not above its predecessor at a ground observation");
      delta = sub(*cur->measure, *prev->measure).total();
    } else {
      if (cur->scalar < prev->scalar - 1e-12)
        throw contract_error("fix: scalar iterate decreased at step " +
                             std::to_string(k));
      delta = cur->scalar - prev->scalar;
    }
    prev = cur;
    residual = delta;
    if (delta <= cfg.fixTol) {
      converged = true;
      break;
    }
  }
  if (diag) {
    diag->fixObservations += 1;
    diag->fixIterationsMax = std::max(diag->fixIterationsMax, used);
    diag->fixConverged = diag->fixConverged && converged;
    diag->fixResidual = std::max(diag->fixResidual, residual);
  }
  return prev;
}

ValuePtr fix_observe(const TypePtr& sigma,
                     const std::function<ValuePtr(long)>& chainAt,
                     std::vector<ValuePtr> args, const GridConfig& cfg,
                     const std::shared_ptr<EvalDiag>& diag) {
  if (sigma->is_arrow()) {
    return Value::of_fn(
        sigma, [=](const ValuePtr& a) {
          std::vector<ValuePtr> more = args;
          more.push_back(a);
          return fix_observe(sigma->to, chainAt, std::move(more), cfg, diag);
        });
  }
  return fix_ground(
      [&chainAt, &args](long k) { return apply_spine(chainAt(k), args); }, cfg,
      diag);
}

ValuePtr eval_fix(const TermPtr& t, const Env& env, const GridConfig& cfg,
                  const std::shared_ptr<EvalDiag>& diag) {
  ValuePtr F = eval_rec(t->t1, env, cfg, diag);
  if (!F->fn) throw structural_error("fix: body is not a function value");
  TypePtr sigma = F->type->to;
  // Memoized Kleene chain v_0 = bottom, v_{k+1} = F(v_k), shared between
  // all ground observations of the fixpoint value.
  auto chain = std::make_shared<std::vector<ValuePtr>>();
  chain->push_back(bottom_value(sigma, cfg));
  auto chainAt = [F, chain](long k) {
    while (static_cast<long>(chain->size()) <= k)
      chain->push_back(F->fn(chain->back()));
    return (*chain)[static_cast<std::size_t>(k)];
  };
  return fix_observe(sigma, chainAt, {}, cfg, diag);
}

ValuePtr eval_let(const TermPtr& t, const Env& env, const GridConfig& cfg,
                  const std::shared_ptr<EvalDiag>& diag) {
  ValuePtr nv = eval_rec(t->t1, env, cfg, diag);
  const FiniteMeasure& nu = as_measure(nv, "let sampling");
  if (nu.atoms().empty()) {
    TypeEnv te = env_types(env);
    te[t->name] = Type::real();
    TypePtr bodyType = typecheck(t->t2, te);
    ValuePtr bot = bottom_value(bodyType, cfg);
    if (bot->measure && nu.lost() > 0.0) {
      FiniteMeasure m = *bot->measure;
      m.set_lost(nu.lost());
      return Value::of_measure(std::move(m));
    }
    return bot;
  }
  // One body evaluation per sample atom, combined by the same pairwise
  // tree the integral contract fixes (ascending atom order).
  std::vector<ValuePtr> weighted;
  weighted.reserve(nu.atoms().size());
  for (const auto& [point, mass] : nu.atoms()) {
    Env inner = env;
    inner[t->name] =
        Value::of_measure(FiniteMeasure::dirac(nu.space(), point));
    weighted.push_back(value_scale(eval_rec(t->t2, inner, cfg, diag), mass));
  }
  ValuePtr out = pairwise_reduce<ValuePtr>(
      weighted, nullptr,
      [](const ValuePtr& a, const ValuePtr& b) {
        if (!a) return b;
        if (!b) return a;
        return value_add(a, b);
      });
  if (out->measure && nu.lost() > 0.0) {
    // A lost sample forfeits its whole (subprobability) continuation.
    FiniteMeasure m = *out->measure;
    m.set_lost(m.lost() + nu.lost());
    return Value::of_measure(std::move(m));
  }
  return out;
}

ValuePtr eval_rec(const TermPtr& t, const Env& env, const GridConfig& cfg,
                  const std::shared_ptr<EvalDiag>& diag) {
  switch (t->k) {
    case Term::K::var: {
      auto it = env.find(t->name);
      if (it == env.end())
        throw structural_error("eval: unbound variable " + t->name);
      return it->second;
    }
    case Term::K::lam: {
      TypePtr lamType = Type::arrow(t->type, typecheck(t, env_types(env))->to);
      Env captured = env;
      TermPtr body = t->t1;
      std::string name = t->name;
      return Value::of_fn(lamType,
                          [captured, body, name, cfg, diag](const ValuePtr& a) {
                            Env inner = captured;
                            inner[name] = a;
                            return eval_rec(body, inner, cfg, diag);
                          });
    }
    case Term::K::app: {
      ValuePtr fun = eval_rec(t->t1, env, cfg, diag);
      if (!fun->fn) throw structural_error("eval: applying a non-function");
      return fun->fn(eval_rec(t->t2, env, cfg, diag));
    }
    case Term::K::letSample:
      return eval_let(t, env, cfg, diag);
    case Term::K::fix:
      return eval_fix(t, env, cfg, diag);
    case Term::K::num:
      return Value::of_measure(FiniteMeasure::dirac_real(cfg.space(), t->value));
    case Term::K::unif:
      return Value::of_measure(uniform_unit(cfg));
    case Term::K::choice: {
      ValuePtr a = eval_rec(t->t1, env, cfg, diag);
      ValuePtr b = eval_rec(t->t2, env, cfg, diag);
      return value_add(value_scale(a, t->value),
                       value_scale(b, 1.0 - t->value));
    }
    case Term::K::unop: {
      ValuePtr av = eval_rec(t->t1, env, cfg, diag);
      const FiniteMeasure& mu = as_measure(av, "unop");
      Unop u = t->uop;
      return Value::of_measure(pushforward_real(
          [u](double r) { return apply_unop(u, r); }, mu, cfg.space()));
    }
    case Term::K::binop: {
      ValuePtr av = eval_rec(t->t1, env, cfg, diag);
      ValuePtr bv = eval_rec(t->t2, env, cfg, diag);
      const FiniteMeasure& mu = as_measure(av, "binop");
      const FiniteMeasure& nu = as_measure(bv, "binop");
      Binop b = t->bop;
      return Value::of_measure(binop_pushforward(
          [b](double x, double y) -> std::optional<double> {
            return apply_binop(b, x, y);
          },
          mu, nu, cfg.space()));
    }
  }
  throw structural_error("eval: unknown term kind");
}

}  // namespace

ValuePtr eval(const TermPtr& t, const Env& env, const GridConfig& cfg,
              const std::shared_ptr<EvalDiag>& diag) {
  validate(cfg);
  PruneGuard guard(cfg.pruneFloor);
  return eval_rec(t, env, cfg, diag);
}

FiniteMeasure eval_program(const std::string& text, const GridConfig& cfg,
                           const std::shared_ptr<EvalDiag>& diag) {
  TermPtr t = parse(text);
  TypePtr ty = typecheck(t);
  if (!ty->is_real())
    throw type_error("program has type " + ty->show() +
                     ", expected a ground real program");
  ValuePtr v = eval(t, {}, cfg, diag);
  return *v->measure;
}

}  // namespace cones::ppcf
