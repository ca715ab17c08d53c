// Positive Boolean transition formulas of one-clock alternating timed
// automata: locations, clock comparisons and clock resets, with the
// dualization table and the model relation.

#pragma once

#include <algorithm>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tlkit/rational.hpp"

namespace tlkit {

enum class CmpOp { Le, Lt, Ge, Gt };

inline CmpOp negate_cmp(CmpOp op) {
  switch (op) {
    case CmpOp::Le: return CmpOp::Gt;
    case CmpOp::Lt: return CmpOp::Ge;
    case CmpOp::Ge: return CmpOp::Lt;
    case CmpOp::Gt: return CmpOp::Le;
  }
  return CmpOp::Le;
}

inline bool cmp_holds(const Rational& v, CmpOp op, std::int64_t c) {
  switch (op) {
    case CmpOp::Le: return v <= Rational(c);
    case CmpOp::Lt: return v < Rational(c);
    case CmpOp::Ge: return v >= Rational(c);
    case CmpOp::Gt: return v > Rational(c);
  }
  return false;
}

inline std::string cmp_str(CmpOp op) {
  switch (op) {
    case CmpOp::Le: return "<=";
    case CmpOp::Lt: return "<";
    case CmpOp::Ge: return ">=";
    case CmpOp::Gt: return ">";
  }
  return "?";
}

class Gamma;
using GammaPtr = std::shared_ptr<const Gamma>;

class Gamma {
 public:
  enum class Kind { True, False, Or, And, Loc, Cmp, Reset };

  Kind kind;
  int loc = -1;          // Loc
  CmpOp op = CmpOp::Le;  // Cmp
  std::int64_t c = 0;    // Cmp
  GammaPtr a, b;         // Or/And children, Reset body in a

  static GammaPtr verum() { return leaf(Kind::True); }
  static GammaPtr falsum() { return leaf(Kind::False); }
  static GammaPtr location(int s) {
    auto n = std::make_shared<Gamma>();
    n->kind = Kind::Loc;
    n->loc = s;
    return n;
  }
  static GammaPtr cmp(CmpOp op, std::int64_t c) {
    auto n = std::make_shared<Gamma>();
    n->kind = Kind::Cmp;
    n->op = op;
    n->c = c;
    return n;
  }
  static GammaPtr disj(GammaPtr x, GammaPtr y) {
    if (x->kind == Kind::True || y->kind == Kind::True) return verum();
    if (x->kind == Kind::False) return y;
    if (y->kind == Kind::False) return x;
    return branch(Kind::Or, std::move(x), std::move(y));
  }
  static GammaPtr conj(GammaPtr x, GammaPtr y) {
    if (x->kind == Kind::False || y->kind == Kind::False) return falsum();
    if (x->kind == Kind::True) return y;
    if (y->kind == Kind::True) return x;
    return branch(Kind::And, std::move(x), std::move(y));
  }
  static GammaPtr reset(GammaPtr body) {
    auto n = std::make_shared<Gamma>();
    n->kind = Kind::Reset;
    n->a = std::move(body);
    return n;
  }

  std::string str() const {
    switch (kind) {
      case Kind::True: return "true";
      case Kind::False: return "false";
      case Kind::Loc: return "s" + std::to_string(loc);
      case Kind::Cmp: return "x" + cmp_str(op) + std::to_string(c);
      case Kind::Or: return "(" + a->str() + " | " + b->str() + ")";
      case Kind::And: return "(" + a->str() + " & " + b->str() + ")";
      case Kind::Reset: return "x.(" + str_of(a) + ")";
    }
    return "?";
  }

 private:
  static std::string str_of(const GammaPtr& g) { return g->str(); }
  static GammaPtr leaf(Kind k) {
    auto n = std::make_shared<Gamma>();
    n->kind = k;
    return n;
  }
  static GammaPtr branch(Kind k, GammaPtr x, GammaPtr y) {
    auto n = std::make_shared<Gamma>();
    n->kind = k;
    n->a = std::move(x);
    n->b = std::move(y);
    return n;
  }
};

// The dualization table; an involution.
inline GammaPtr dual(const GammaPtr& g) {
  switch (g->kind) {
    case Gamma::Kind::True: return Gamma::falsum();
    case Gamma::Kind::False: return Gamma::verum();
    case Gamma::Kind::Loc: return g;
    case Gamma::Kind::Cmp: return Gamma::cmp(negate_cmp(g->op), g->c);
    case Gamma::Kind::Or: return Gamma::conj(dual(g->a), dual(g->b));
    case Gamma::Kind::And: return Gamma::disj(dual(g->a), dual(g->b));
    case Gamma::Kind::Reset: return Gamma::reset(dual(g->a));
  }
  return g;
}

// One OCATA state: a location together with its clock value.
using OcataState = std::pair<int, Rational>;
using StateSet = std::set<OcataState>;

// M |=_v gamma, per the inductive model relation; Reset re-binds v to 0.
inline bool models(const StateSet& m, const Rational& v, const GammaPtr& g) {
  switch (g->kind) {
    case Gamma::Kind::True: return true;
    case Gamma::Kind::False: return false;
    case Gamma::Kind::Loc: return m.count({g->loc, v}) != 0;
    case Gamma::Kind::Cmp: return cmp_holds(v, g->op, g->c);
    case Gamma::Kind::Or: return models(m, v, g->a) || models(m, v, g->b);
    case Gamma::Kind::And: return models(m, v, g->a) && models(m, v, g->b);
    case Gamma::Kind::Reset: return models(m, Rational(0), g->a);
  }
  return false;
}

// All minimal models of gamma with respect to v.  Or branches, And joins,
// Loc contributes a singleton, satisfied comparisons contribute the empty
// model, Reset re-evaluates at clock 0.
inline std::vector<StateSet> minimal_models(const GammaPtr& g,
                                            const Rational& v) {
  switch (g->kind) {
    case Gamma::Kind::True: return {StateSet{}};
    case Gamma::Kind::False: return {};
    case Gamma::Kind::Loc: return {StateSet{{g->loc, v}}};
    case Gamma::Kind::Cmp:
      return cmp_holds(v, g->op, g->c) ? std::vector<StateSet>{StateSet{}}
                                       : std::vector<StateSet>{};
    case Gamma::Kind::Reset: return minimal_models(g->a, Rational(0));
    case Gamma::Kind::Or: {
      auto ms = minimal_models(g->a, v);
      for (auto& m : minimal_models(g->b, v)) ms.push_back(std::move(m));
      // prune non-minimal
      std::vector<StateSet> out;
      for (const auto& m : ms) {
        bool dominated = false;
        for (const auto& u : ms)
          if (u != m && std::includes(m.begin(), m.end(), u.begin(), u.end()))
            dominated = true;
        if (!dominated &&
            std::find(out.begin(), out.end(), m) == out.end())
          out.push_back(m);
      }
      return out;
    }
    case Gamma::Kind::And: {
      auto ma = minimal_models(g->a, v);
      auto mb = minimal_models(g->b, v);
      std::vector<StateSet> out;
      for (const auto& x : ma)
        for (const auto& y : mb) {
          StateSet u = x;
          u.insert(y.begin(), y.end());
          if (std::find(out.begin(), out.end(), u) == out.end())
            out.push_back(std::move(u));
        }
      // prune non-minimal joins
      std::vector<StateSet> pruned;
      for (const auto& m : out) {
        bool dominated = false;
        for (const auto& u : out)
          if (u != m && std::includes(m.begin(), m.end(), u.begin(), u.end()))
            dominated = true;
        if (!dominated) pruned.push_back(m);
      }
      return pruned;
    }
  }
  return {};
}

}  // namespace tlkit
