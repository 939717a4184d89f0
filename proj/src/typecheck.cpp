#include "cones/ppcf.hpp"

namespace cones::ppcf {

namespace {

[[noreturn]] void bad(const TermPtr& t, const std::string& msg) {
  throw type_error(msg + " in subterm '" + print_term(t) + "' at " +
                   std::to_string(t->line) + ":" + std::to_string(t->col));
}

TypePtr check(const TermPtr& t, const TypeEnv& env) {
  switch (t->k) {
    case Term::K::var: {
      auto it = env.find(t->name);
      if (it == env.end()) bad(t, "unbound variable " + t->name);
      return it->second;
    }
    case Term::K::lam: {
      TypeEnv inner = env;
      inner[t->name] = t->type;
      return Type::arrow(t->type, check(t->t1, inner));
    }
    case Term::K::app: {
      TypePtr fun = check(t->t1, env);
      TypePtr arg = check(t->t2, env);
      if (!fun->is_arrow())
        bad(t, "applied term has non-function type " + fun->show());
      if (!type_equal(fun->from, arg))
        bad(t, "argument type " + arg->show() + " does not match " +
                   fun->from->show());
      return fun->to;
    }
    case Term::K::letSample: {
      TypePtr bound = check(t->t1, env);
      if (!bound->is_real())
        bad(t, "sampled term has type " + bound->show() +
                   ", but sampling requires real");
      TypeEnv inner = env;
      inner[t->name] = Type::real();
      return check(t->t2, inner);
    }
    case Term::K::fix: {
      TypePtr body = check(t->t1, env);
      if (!body->is_arrow() || !type_equal(body->from, body->to))
        bad(t, "fix needs a term of type s => s, got " + body->show());
      return body->to;
    }
    case Term::K::num:
    case Term::K::unif:
      return Type::real();
    case Term::K::choice: {
      TypePtr a = check(t->t1, env);
      TypePtr b = check(t->t2, env);
      if (!type_equal(a, b))
        bad(t, "choice branches have different types " + a->show() + " and " +
                   b->show());
      return a;
    }
    case Term::K::unop: {
      TypePtr a = check(t->t1, env);
      if (!a->is_real())
        bad(t, unop_name(t->uop) + " needs a real argument, got " + a->show());
      return Type::real();
    }
    case Term::K::binop: {
      TypePtr a = check(t->t1, env);
      TypePtr b = check(t->t2, env);
      if (!a->is_real() || !b->is_real())
        bad(t, binop_name(t->bop) + " needs real arguments, got " + a->show() +
                   " and " + b->show());
      return Type::real();
    }
  }
  bad(t, "unreachable term kind");
}

}  // namespace

TypePtr typecheck(const TermPtr& t, const TypeEnv& env) {
  return check(t, env);
}

}  // namespace cones::ppcf
