#include "dps/unify.hpp"

#include <map>
#include <stdexcept>
#include <utility>

#include "dps/error.hpp"

namespace dps {

namespace {

Subst reference_step(const Subst& env, const Expr& e1, const Expr& e2, long& fuel) {
  auto recurse = [&fuel](const Subst& th, const Expr& a, const Expr& b) {
    if (--fuel < 0) throw Error(ErrorKind::FuelExhausted, "unify ran out of fuel");
    return reference_step(th, a, b, fuel);
  };
  if (!env.is_proper()) return Subst::failure();
  if (occurs_in(e1, e2, Occurrence::Proper)) return Subst::failure();
  if (e1 == e2) return env;
  if (e1.is_const()) {
    if (e2.is_const()) return Subst::failure();
    if (e2.is_var()) return recurse(env, e2, e1);
    return Subst::failure();
  }
  if (e1.is_var()) {
    if (misses(env, e2) && misses(env, e1)) return compose(env, replacement(e1.name(), e2));
    return recurse(env, apply(e1, env), apply(e2, env));
  }
  if (e2.is_const()) return Subst::failure();
  if (e2.is_var()) return recurse(env, e2, e1);
  Subst inner = recurse(env, e1.left(), e2.left());
  return recurse(inner, e1.right(), e2.right());
}

// Triangular solved form: each variable is bound at most once and bindings
// may mention other bound variables.
class Triangular {
 public:
  Expr walk(Expr e) const {
    while (e.is_var()) {
      auto it = bound_.find(e.name());
      if (it == bound_.end()) break;
      e = it->second;
    }
    return e;
  }

  bool occurs(const std::string& var, const Expr& e) const {
    Expr w = walk(e);
    if (w.is_var()) return w.name() == var;
    if (w.is_const()) return false;
    return occurs(var, w.left()) || occurs(var, w.right());
  }

  Expr resolve(const Expr& e) const {
    Expr w = walk(e);
    if (!w.is_cons()) return w;
    return Expr::cons(resolve(w.left()), resolve(w.right()));
  }

  bool unify(const Expr& a, const Expr& b) {
    std::vector<std::pair<Expr, Expr>> work{{a, b}};
    while (!work.empty()) {
      auto [x, y] = work.back();
      work.pop_back();
      x = walk(x);
      y = walk(y);
      if (x == y) continue;
      if (x.is_var()) {
        if (occurs(x.name(), y)) return false;
        bound_.emplace(x.name(), y);
      } else if (y.is_var()) {
        if (occurs(y.name(), x)) return false;
        bound_.emplace(y.name(), x);
      } else if (x.is_cons() && y.is_cons()) {
        work.emplace_back(x.right(), y.right());
        work.emplace_back(x.left(), y.left());
      } else {
        return false;
      }
    }
    return true;
  }

  Subst solved() const {
    Subst::Bindings out;
    for (const auto& entry : bound_) out.emplace(entry.first, resolve(entry.second));
    return Subst::from_map(std::move(out));
  }

 private:
  std::map<std::string, Expr> bound_;
};

}  // namespace

Subst reference_unify(const Subst& env, const Expr& e1, const Expr& e2, long fuel) {
  return reference_step(env, e1, e2, fuel);
}

Subst oracle_unify(const Subst& env, const Expr& e1, const Expr& e2) {
  if (env.is_failure()) return Subst::failure();
  Triangular solver;
  if (!solver.unify(apply(e1, env), apply(e2, env))) return Subst::failure();
  Subst out = compose(env, solver.solved());
  if (is_idempotent(env) && !is_idempotent(out)) throw std::logic_error("oracle produced a non-idempotent unifier");
  return out;
}

bool is_unifier(const Subst& s, const Expr& e1, const Expr& e2) { return apply(e1, s) == apply(e2, s); }

bool reduce_holds(const Subst& env, const VarSet& v, const Subst& s) {
  if (s.is_failure()) return true;
  return is_subset(range_of(s), set_union(range_of(env), v));
}

VarSet reduce_vars(const Subst& env, const Expr& e1, const Expr& e2) {
  return vars_of(apply(encode_tuple({e1, e2}), env));
}

bool mgi_decide(const Subst& env, const Expr& e1, const Expr& e2, const Subst& s) {
  Subst best = oracle_unify(env, e1, e2);
  if (best.is_failure()) return true;
  return more_general(s, best);
}

MgiuReport mgiu_check(const Subst& env, const Expr& e1, const Expr& e2, const Subst& s) {
  MgiuReport report;
  report.oracle_used = oracle_unify(env, e1, e2);
  report.unifier_ok = is_unifier(s, e1, e2);
  report.extension_ok = more_general(env, s);
  report.most_general_ok = report.oracle_used.is_failure() || more_general(s, report.oracle_used);
  report.reduce_ok = reduce_holds(env, reduce_vars(env, e1, e2), s);
  return report;
}

std::optional<Subst> mgi_refute_witness(const Subst& env, const Expr& e1, const Expr& e2, const Subst& s,
                                        const std::vector<Subst>& witnesses) {
  for (const auto& w : witnesses) {
    if (is_unifier(w, e1, e2) && more_general(env, w) && !more_general(s, w)) return w;
  }
  return std::nullopt;
}

}  // namespace dps
