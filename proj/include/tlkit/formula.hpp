// Formula AST: automata modalities, their duals, event-clock and counting
// modalities, plus the usual derived operators kept as sugar until
// desugaring.  Nodes are immutable and shared; structural hashing gives a
// deterministic identity for subformula bookkeeping.

#pragma once

#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tlkit/interval.hpp"
#include "tlkit/nfa.hpp"
#include "tlkit/props.hpp"

namespace tlkit {

enum class FKind {
  True,
  False,
  Atom,
  NegAtom,
  Not,
  And,
  Or,
  Aut,       // A_I(args)
  DualAut,   // Ã_I(args)
  EventAut,  // ◁A_I(args)
  CountGe,   // A^{≥k}_I(args)
  Until,
  Release,
  Finally,
  Globally,
  Next,
};

class FormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;

class FormulaNode {
 public:
  FKind kind;
  PropId prop;                 // Atom / NegAtom
  Interval intv;               // temporal operators
  NfaPtr nfa;                  // Aut / DualAut / EventAut / CountGe
  int count_k = 0;             // CountGe
  std::vector<Formula> args;   // children (modality arguments in order)

  bool is_modality() const {
    return kind == FKind::Aut || kind == FKind::DualAut ||
           kind == FKind::EventAut || kind == FKind::CountGe;
  }
  bool is_sugar() const {
    return kind == FKind::Until || kind == FKind::Release ||
           kind == FKind::Finally || kind == FKind::Globally ||
           kind == FKind::Next;
  }
  bool has_interval() const { return is_modality() || is_sugar(); }
};

// --- constructors -----------------------------------------------------------

namespace f {

inline Formula node(FKind k, std::vector<Formula> args = {}) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = k;
  n->args = std::move(args);
  return n;
}

inline Formula verum() { return node(FKind::True); }
inline Formula falsum() { return node(FKind::False); }
inline Formula atom(const std::string& name) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = FKind::Atom;
  n->prop = PropId::user(name);
  return n;
}
inline Formula atom(PropId p) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = FKind::Atom;
  n->prop = std::move(p);
  return n;
}
inline Formula neg_atom(PropId p) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = FKind::NegAtom;
  n->prop = std::move(p);
  return n;
}
inline Formula lnot(Formula a) { return node(FKind::Not, {std::move(a)}); }
inline Formula land(Formula a, Formula b) {
  return node(FKind::And, {std::move(a), std::move(b)});
}
inline Formula lor(Formula a, Formula b) {
  return node(FKind::Or, {std::move(a), std::move(b)});
}
inline Formula implies(Formula a, Formula b) {
  return lor(lnot(std::move(a)), std::move(b));
}

inline Formula modality(FKind k, NfaPtr nfa, Interval iv,
                        std::vector<Formula> args, int count_k = 0) {
  if (!nfa) throw std::invalid_argument("modality: null automaton");
  if (static_cast<int>(args.size()) != nfa->arity)
    throw std::invalid_argument("modality: arity mismatch");
  iv.check();
  auto n = std::make_shared<FormulaNode>();
  n->kind = k;
  n->nfa = std::move(nfa);
  n->intv = iv;
  n->args = std::move(args);
  n->count_k = count_k;
  return n;
}
inline Formula aut(NfaPtr nfa, Interval iv, std::vector<Formula> args) {
  return modality(FKind::Aut, std::move(nfa), iv, std::move(args));
}
inline Formula dual_aut(NfaPtr nfa, Interval iv, std::vector<Formula> args) {
  return modality(FKind::DualAut, std::move(nfa), iv, std::move(args));
}
inline Formula event_aut(NfaPtr nfa, Interval iv, std::vector<Formula> args) {
  return modality(FKind::EventAut, std::move(nfa), iv, std::move(args));
}
inline Formula count_ge(NfaPtr nfa, int k, Interval iv,
                        std::vector<Formula> args) {
  if (k < 1) throw std::invalid_argument("count_ge: k must be positive");
  return modality(FKind::CountGe, std::move(nfa), iv, std::move(args), k);
}

inline Formula temporal(FKind k, Interval iv, std::vector<Formula> args) {
  iv.check();
  auto n = std::make_shared<FormulaNode>();
  n->kind = k;
  n->intv = iv;
  n->args = std::move(args);
  return n;
}
inline Formula until(Formula a, Interval iv, Formula b) {
  return temporal(FKind::Until, iv, {std::move(a), std::move(b)});
}
inline Formula release(Formula a, Interval iv, Formula b) {
  return temporal(FKind::Release, iv, {std::move(a), std::move(b)});
}
inline Formula finally_(Interval iv, Formula a) {
  return temporal(FKind::Finally, iv, {std::move(a)});
}
inline Formula globally(Interval iv, Formula a) {
  return temporal(FKind::Globally, iv, {std::move(a)});
}
inline Formula next(Interval iv, Formula a) {
  return temporal(FKind::Next, iv, {std::move(a)});
}

}  // namespace f

// --- structural identity ----------------------------------------------------

inline std::size_t formula_hash(const Formula& phi);

inline bool formula_equal(const Formula& a, const Formula& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind) return false;
  if (a->prop != b->prop) return false;
  if (a->has_interval() && !(a->intv == b->intv)) return false;
  if (a->count_k != b->count_k) return false;
  bool an = static_cast<bool>(a->nfa), bn = static_cast<bool>(b->nfa);
  if (an != bn) return false;
  if (an && !(a->nfa.get() == b->nfa.get() || *a->nfa == *b->nfa)) return false;
  if (a->args.size() != b->args.size()) return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!formula_equal(a->args[i], b->args[i])) return false;
  return true;
}

inline std::size_t formula_hash(const Formula& phi) {
  std::size_t h = static_cast<std::size_t>(phi->kind) * 1000003u;
  h = h * 31 + std::hash<std::string>()(phi->prop.name) + (phi->prop.trigger ? 7 : 0);
  if (phi->has_interval()) {
    h = h * 31 + static_cast<std::size_t>(phi->intv.lo) * 2 + phi->intv.lo_strict;
    h = h * 31 + static_cast<std::size_t>(phi->intv.hi) * 2 + phi->intv.hi_strict;
  }
  h = h * 31 + static_cast<std::size_t>(phi->count_k);
  if (phi->nfa) h = h * 31 + phi->nfa->structure_hash();
  for (const auto& a : phi->args) h = h * 1000003u + formula_hash(a);
  return h;
}

// --- printing ----------------------------------------------------------------

inline std::string format_formula(const Formula& phi);

namespace detail {

inline int precedence(FKind k) {
  switch (k) {
    case FKind::Not: return 5;
    case FKind::Until:
    case FKind::Release:
    case FKind::Finally:
    case FKind::Globally:
    case FKind::Next: return 4;
    case FKind::And: return 3;
    case FKind::Or: return 2;
    default: return 6;
  }
}

inline std::string intv_suffix(const Interval& iv) {
  return iv.is_all() ? "" : iv.str();
}

inline void print_formula(std::ostream& os, const Formula& phi, int parent_prec) {
  int prec = precedence(phi->kind);
  bool paren = prec < parent_prec;
  if (paren) os << "(";
  switch (phi->kind) {
    case FKind::True: os << "true"; break;
    case FKind::False: os << "false"; break;
    case FKind::Atom: os << phi->prop.str(); break;
    case FKind::NegAtom: os << "!" << phi->prop.str(); break;
    case FKind::Not:
      os << "!";
      print_formula(os, phi->args[0], 5);
      break;
    case FKind::And:
      print_formula(os, phi->args[0], 3);
      os << " & ";
      print_formula(os, phi->args[1], 4);
      break;
    case FKind::Or:
      print_formula(os, phi->args[0], 2);
      os << " | ";
      print_formula(os, phi->args[1], 3);
      break;
    case FKind::Until:
    case FKind::Release:
      print_formula(os, phi->args[0], 5);
      os << (phi->kind == FKind::Until ? " U" : " R") << intv_suffix(phi->intv)
         << " ";
      print_formula(os, phi->args[1], 4);
      break;
    case FKind::Finally:
    case FKind::Globally:
    case FKind::Next:
      os << (phi->kind == FKind::Finally ? "F" : phi->kind == FKind::Globally ? "G" : "X")
         << intv_suffix(phi->intv);
      os << " ";
      print_formula(os, phi->args[0], 4);
      break;
    case FKind::Aut:
    case FKind::DualAut:
    case FKind::EventAut:
    case FKind::CountGe: {
      if (phi->kind == FKind::CountGe)
        os << "C>=" << phi->count_k << phi->intv.str();
      else
        os << (phi->kind == FKind::Aut ? "A" : phi->kind == FKind::DualAut ? "~A" : "EA")
           << "<" << (phi->nfa->name.empty() ? "_" : phi->nfa->name) << ">"
           << intv_suffix(phi->intv);
      os << "(";
      for (std::size_t i = 0; i < phi->args.size(); ++i) {
        if (i) os << ", ";
        print_formula(os, phi->args[i], 0);
      }
      os << ")";
      break;
    }
  }
  if (paren) os << ")";
}

}  // namespace detail

inline std::string format_formula(const Formula& phi) {
  std::ostringstream os;
  detail::print_formula(os, phi, 0);
  return os.str();
}

// Collects the distinct automata referenced by a formula, in first-use order.
inline void collect_nfas(const Formula& phi, std::vector<NfaPtr>& out) {
  if (phi->nfa) {
    bool seen = false;
    for (const auto& n : out)
      if (n.get() == phi->nfa.get() || *n == *phi->nfa) seen = true;
    if (!seen) out.push_back(phi->nfa);
  }
  for (const auto& a : phi->args) collect_nfas(a, out);
}

inline void collect_atoms(const Formula& phi, std::set<PropId>& out) {
  if (phi->kind == FKind::Atom || phi->kind == FKind::NegAtom) out.insert(phi->prop);
  for (const auto& a : phi->args) collect_atoms(a, out);
}

}  // namespace tlkit
