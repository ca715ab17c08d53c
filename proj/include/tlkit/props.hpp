// Atomic propositions, letters, alphabets and positive Boolean letter
// predicates.  Trigger propositions (introduced by the compiler for
// temporal subformulae) live in the same namespace but are tagged so they
// can never collide with user atoms.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace tlkit {

struct PropId {
  std::string name;
  bool trigger = false;

  friend auto operator<=>(const PropId& a, const PropId& b) = default;

  std::string str() const { return trigger ? "$" + name : name; }

  static PropId user(std::string n) { return PropId{std::move(n), false}; }
  static PropId make_trigger(int index) {
    return PropId{std::to_string(index), true};
  }
};

// A letter is a bitmask over the props of a fixed AlphabetSpec.
using Letter = std::uint32_t;

struct AlphabetSpec {
  std::vector<PropId> props;

  int index_of(const PropId& p) const {
    for (std::size_t i = 0; i < props.size(); ++i)
      if (props[i] == p) return static_cast<int>(i);
    return -1;
  }
  std::size_t size() const { return props.size(); }

  Letter mask_of(const std::set<PropId>& letter) const {
    Letter m = 0;
    for (const auto& p : letter) {
      int i = index_of(p);
      if (i >= 0) m |= Letter(1) << i;
    }
    return m;
  }
  std::set<PropId> set_of(Letter m) const {
    std::set<PropId> s;
    for (std::size_t i = 0; i < props.size(); ++i)
      if (m & (Letter(1) << i)) s.insert(props[i]);
    return s;
  }
  std::string letter_str(Letter m) const {
    std::string s = "{";
    bool first = true;
    for (std::size_t i = 0; i < props.size(); ++i)
      if (m & (Letter(1) << i)) {
        if (!first) s += ",";
        s += props[i].str();
        first = false;
      }
    return s + "}";
  }

  friend bool operator==(const AlphabetSpec& a, const AlphabetSpec& b) {
    return a.props == b.props;
  }
};

using AlphabetPtr = std::shared_ptr<const AlphabetSpec>;

inline AlphabetPtr make_alphabet(std::vector<PropId> props) {
  auto spec = std::make_shared<AlphabetSpec>();
  spec->props = std::move(props);
  return spec;
}

// Union of two alphabets, preserving the order of `a` and appending the
// new props of `b`.
inline AlphabetPtr alphabet_union(const AlphabetSpec& a,
                                  const AlphabetSpec& b) {
  std::vector<PropId> props = a.props;
  for (const auto& p : b.props)
    if (std::find(props.begin(), props.end(), p) == props.end())
      props.push_back(p);
  return make_alphabet(std::move(props));
}

// ---------------------------------------------------------------------------
// BoolExpr: Boolean combinations of prop literals, used as TA letter
// predicates and as trigger-level argument formulas.
// ---------------------------------------------------------------------------

class BoolExpr;
using BoolExprPtr = std::shared_ptr<const BoolExpr>;

class BoolExpr {
 public:
  enum class Kind { True, False, Lit, And, Or, Not };

  Kind kind;
  PropId prop;        // Lit
  bool negated = false;  // Lit
  std::vector<BoolExprPtr> kids;

  static BoolExprPtr verum() { return node(Kind::True); }
  static BoolExprPtr falsum() { return node(Kind::False); }
  static BoolExprPtr lit(PropId p, bool neg = false) {
    auto n = std::make_shared<BoolExpr>();
    n->kind = Kind::Lit;
    n->prop = std::move(p);
    n->negated = neg;
    return n;
  }
  static BoolExprPtr conj(std::vector<BoolExprPtr> kids) {
    return combine(Kind::And, std::move(kids));
  }
  static BoolExprPtr disj(std::vector<BoolExprPtr> kids) {
    return combine(Kind::Or, std::move(kids));
  }
  static BoolExprPtr negate(BoolExprPtr e) {
    auto n = std::make_shared<BoolExpr>();
    n->kind = Kind::Not;
    n->kids = {std::move(e)};
    return n;
  }

  bool eval(const AlphabetSpec& spec, Letter sigma) const {
    switch (kind) {
      case Kind::True: return true;
      case Kind::False: return false;
      case Kind::Lit: {
        int i = spec.index_of(prop);
        bool present = i >= 0 && (sigma & (Letter(1) << i));
        return negated ? !present : present;
      }
      case Kind::And:
        for (const auto& k : kids)
          if (!k->eval(spec, sigma)) return false;
        return true;
      case Kind::Or:
        for (const auto& k : kids)
          if (k->eval(spec, sigma)) return true;
        return false;
      case Kind::Not: return !kids[0]->eval(spec, sigma);
    }
    return false;
  }

  // Mask-compiled form: prop lookups resolved once against a fixed
  // alphabet, evaluation is pure bit tests.
  struct Compiled {
    Kind kind = Kind::False;
    Letter bit = 0;
    bool negated = false;
    std::vector<Compiled> kids;

    bool eval(Letter sigma) const {
      switch (kind) {
        case Kind::True: return true;
        case Kind::False: return false;
        case Kind::Lit: return ((sigma & bit) != 0) != negated;
        case Kind::And:
          for (const auto& k : kids)
            if (!k.eval(sigma)) return false;
          return true;
        case Kind::Or:
          for (const auto& k : kids)
            if (k.eval(sigma)) return true;
          return false;
        case Kind::Not: return !kids[0].eval(sigma);
      }
      return false;
    }
  };

  Compiled compile(const AlphabetSpec& spec) const {
    Compiled c;
    c.kind = kind;
    if (kind == Kind::Lit) {
      int i = spec.index_of(prop);
      if (i < 0) {
        // absent prop: literal is false, negated literal is true
        c.kind = negated ? Kind::True : Kind::False;
        return c;
      }
      c.bit = Letter(1) << i;
      c.negated = negated;
      return c;
    }
    for (const auto& k : kids) c.kids.push_back(k->compile(spec));
    return c;
  }

  void collect_props(std::set<PropId>& out) const {
    if (kind == Kind::Lit) out.insert(prop);
    for (const auto& k : kids) k->collect_props(out);
  }

  std::string str() const {
    switch (kind) {
      case Kind::True: return "true";
      case Kind::False: return "false";
      case Kind::Lit: return (negated ? "!" : "") + prop.str();
      case Kind::Not: return "!(" + kids[0]->str() + ")";
      case Kind::And:
      case Kind::Or: {
        std::string op = kind == Kind::And ? " & " : " | ";
        std::string s = "(";
        for (std::size_t i = 0; i < kids.size(); ++i) {
          if (i) s += op;
          s += kids[i]->str();
        }
        return s + ")";
      }
    }
    return "?";
  }

 private:
  static BoolExprPtr node(Kind k) {
    auto n = std::make_shared<BoolExpr>();
    n->kind = k;
    return n;
  }
  static BoolExprPtr combine(Kind k, std::vector<BoolExprPtr> kids) {
    if (kids.empty()) return k == Kind::And ? verum() : falsum();
    if (kids.size() == 1) return kids[0];
    auto n = std::make_shared<BoolExpr>();
    n->kind = k;
    n->kids = std::move(kids);
    return n;
  }
};

}  // namespace tlkit
