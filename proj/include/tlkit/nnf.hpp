// Negative normal form and the EMITL-0oo core check.  Negation is pushed
// through Boolean connectives, dual modalities and the sugar dual pairs;
// negated event-clock and counting modalities are first expressed through
// their plain-modality translations and then normalized.

#pragma once

#include <string>
#include <vector>

#include "tlkit/rewrite.hpp"

namespace tlkit {

namespace detail {

inline Formula nnf_pos(const Formula& phi);
inline Formula nnf_neg(const Formula& phi);

inline Formula nnf_pos(const Formula& phi) {
  switch (phi->kind) {
    case FKind::True:
    case FKind::False:
    case FKind::Atom:
    case FKind::NegAtom:
      return phi;
    case FKind::Not:
      return nnf_neg(phi->args[0]);
    default: {
      std::vector<Formula> args;
      args.reserve(phi->args.size());
      for (const auto& a : phi->args) args.push_back(nnf_pos(a));
      auto n = std::make_shared<FormulaNode>(*phi);
      n->args = std::move(args);
      return n;
    }
  }
}

inline Formula nnf_neg(const Formula& phi) {
  switch (phi->kind) {
    case FKind::True: return f::falsum();
    case FKind::False: return f::verum();
    case FKind::Atom: return f::neg_atom(phi->prop);
    case FKind::NegAtom: return f::atom(phi->prop);
    case FKind::Not: return nnf_pos(phi->args[0]);
    case FKind::And:
      return f::lor(nnf_neg(phi->args[0]), nnf_neg(phi->args[1]));
    case FKind::Or:
      return f::land(nnf_neg(phi->args[0]), nnf_neg(phi->args[1]));
    case FKind::Aut:
    case FKind::DualAut: {
      std::vector<Formula> args;
      for (const auto& a : phi->args) args.push_back(nnf_neg(a));
      return f::modality(
          phi->kind == FKind::Aut ? FKind::DualAut : FKind::Aut, phi->nfa,
          phi->intv, std::move(args));
    }
    case FKind::Until:
      return f::release(nnf_neg(phi->args[0]), phi->intv,
                        nnf_neg(phi->args[1]));
    case FKind::Release:
      return f::until(nnf_neg(phi->args[0]), phi->intv, nnf_neg(phi->args[1]));
    case FKind::Finally:
      return f::globally(phi->intv, nnf_neg(phi->args[0]));
    case FKind::Globally:
      return f::finally_(phi->intv, nnf_neg(phi->args[0]));
    case FKind::Next:
      // ¬X_I a  ==  dual of the next automaton with arguments (⊥, ¬a)
      return f::dual_aut(next_nfa(), phi->intv,
                         {f::falsum(), nnf_neg(phi->args[0])});
    case FKind::EventAut:
      return nnf_neg(eecl_to_core(phi));
    case FKind::CountGe:
      return nnf_neg(eliminate_counting(phi));
  }
  return phi;
}

}  // namespace detail

inline Formula to_nnf(const Formula& phi) { return detail::nnf_pos(phi); }

// ---------------------------------------------------------------------------
// Core check
// ---------------------------------------------------------------------------

struct CoreCheck {
  bool ok = true;
  std::vector<std::string> problems;
};

// True iff, after normalization and desugaring, the formula uses only
// Aut/DualAut modalities with one-sided constraining intervals.
inline CoreCheck check_core(const Formula& phi) {
  Formula d = desugar(to_nnf(phi));
  CoreCheck r;
  auto rec = [&](auto&& self, const Formula& g) -> void {
    switch (g->kind) {
      case FKind::EventAut:
        r.ok = false;
        r.problems.push_back("event-clock modality: " + format_formula(g));
        break;
      case FKind::CountGe:
        r.ok = false;
        r.problems.push_back("counting modality: " + format_formula(g));
        break;
      case FKind::Aut:
      case FKind::DualAut:
        if (!g->intv.one_sided()) {
          r.ok = false;
          r.problems.push_back("interval " + g->intv.str() +
                               " is neither a lower nor an upper bound in " +
                               format_formula(g));
        }
        break;
      default:
        break;
    }
    for (const auto& a : g->args) self(self, a);
  };
  rec(rec, d);
  return r;
}

// Full front-end pipeline: rewrites, normal form, desugaring.  The result
// is what the compiler consumes; callers check_core when they need the
// diagnostic list.
inline Formula to_core(const Formula& phi,
                       RewritePass pass = RewritePass::All) {
  return desugar(to_nnf(apply_rewrites(phi, pass)));
}

}  // namespace tlkit
