// Desugaring of derived operators into automata modalities, the minterm
// expansion that makes modality arguments mutually exclusive, and the
// bottom-up collection of temporal subformulae.

#pragma once

#include <iostream>
#include <map>
#include <vector>

#include "tlkit/formula.hpp"

namespace tlkit {

// The two-location "until" automaton: self-loop on argument 1, edge on
// argument 2 into the final location.
inline NfaPtr until_nfa() {
  static NfaPtr cached = [] {
    Nfa a = Nfa::make(2, 2, 0);
    a.add_transition(0, 1, 0);
    a.add_transition(0, 2, 1);
    a.finals = {1};
    a.name = "until";
    return share(std::move(a));
  }();
  return cached;
}

// The "next" automaton: one unconstrained step, then the argument.  A chain
// of three locations accepts exactly the two-letter words realizing X.
inline NfaPtr next_nfa() {
  static NfaPtr cached = [] {
    Nfa a = Nfa::make(2, 3, 0);
    a.add_transition(0, 1, 1);
    a.add_transition(1, 2, 2);
    a.finals = {2};
    a.name = "next";
    return share(std::move(a));
  }();
  return cached;
}

// Rewrites sugar into Aut/DualAut.  Expects NNF input (no Not nodes);
// EventAut and CountGe pass through untouched (the rewrite module
// eliminates them).
inline Formula desugar(const Formula& phi) {
  std::vector<Formula> args;
  args.reserve(phi->args.size());
  for (const auto& a : phi->args) args.push_back(desugar(a));
  switch (phi->kind) {
    case FKind::Until:
      return f::aut(until_nfa(), phi->intv, {args[0], args[1]});
    case FKind::Release:
      return f::dual_aut(until_nfa(), phi->intv, {args[0], args[1]});
    case FKind::Finally:
      return f::aut(until_nfa(), phi->intv, {f::verum(), args[0]});
    case FKind::Globally:
      return f::dual_aut(until_nfa(), phi->intv, {f::falsum(), args[0]});
    case FKind::Next:
      return f::aut(next_nfa(), phi->intv, {f::verum(), args[0]});
    default: {
      if (args.empty()) return phi;
      auto n = std::make_shared<FormulaNode>(*phi);
      n->args = std::move(args);
      return n;
    }
  }
}

// ---------------------------------------------------------------------------
// Argument exclusivity (minterm expansion)
// ---------------------------------------------------------------------------

namespace detail {

// Conjunction of selected argument polarities, with cheap syntactic
// contradiction pruning.  Returns nullptr when the minterm is surely
// unsatisfiable.
inline Formula minterm_formula(const std::vector<Formula>& args,
                               unsigned bits) {
  struct Lit {
    Formula node;
    std::size_t hash;
    bool positive;
  };
  std::vector<Lit> lits;
  std::vector<Formula> conjuncts;
  for (std::size_t a = 0; a < args.size(); ++a) {
    bool positive = (bits >> a) & 1;
    Formula base = args[a];
    // Normalize literal polarity so p / !p clashes are visible.
    while (base->kind == FKind::Not) {
      base = base->args[0];
      positive = !positive;
    }
    if (base->kind == FKind::NegAtom) {
      base = f::atom(base->prop);
      positive = !positive;
    }
    if (base->kind == FKind::True) {
      if (!positive) return nullptr;
      continue;
    }
    if (base->kind == FKind::False) {
      if (positive) return nullptr;
      continue;
    }
    std::size_t h = formula_hash(base);
    for (const auto& l : lits)
      if (l.hash == h && l.positive != positive && formula_equal(base, l.node))
        return nullptr;
    lits.push_back({base, h, positive});
    conjuncts.push_back(positive ? base : f::lnot(base));
  }
  if (conjuncts.empty()) return f::verum();
  Formula out = conjuncts[0];
  for (std::size_t i = 1; i < conjuncts.size(); ++i)
    out = f::land(out, conjuncts[i]);
  return out;
}

}  // namespace detail

// Replaces the n arguments of a modality by its satisfiable minterms so
// that every letter satisfies exactly one argument; transitions on a are
// duplicated onto every minterm containing a positively.  Truth of the
// modality is preserved.
inline Formula make_args_exclusive(const Formula& phi) {
  if (!phi->is_modality())
    throw std::invalid_argument("make_args_exclusive: not a modality");
  const Nfa& a = *phi->nfa;
  int n = a.arity;
  if (n > 16)
    throw std::invalid_argument("make_args_exclusive: arity too large");

  std::vector<unsigned> kept_bits;
  std::vector<Formula> new_args;
  for (unsigned bits = 0; bits < (1u << n); ++bits) {
    Formula m = detail::minterm_formula(phi->args, bits);
    if (m) {
      kept_bits.push_back(bits);
      new_args.push_back(m);
    }
  }
  int nn = static_cast<int>(new_args.size());
  Nfa b = Nfa::make(nn, a.num_locations, a.initial);
  b.finals = a.finals;
  b.name = a.name.empty() ? "excl" : a.name + ".x";
  for (int s = 0; s < a.num_locations; ++s)
    for (int arg = 0; arg < n; ++arg)
      for (int d : a.transitions[s][arg])
        for (int mi = 0; mi < nn; ++mi)
          if ((kept_bits[mi] >> arg) & 1) b.add_transition(s, mi + 1, d);

  auto out = std::make_shared<FormulaNode>(*phi);
  out->nfa = share(std::move(b));
  out->args = std::move(new_args);
  return out;
}

// ---------------------------------------------------------------------------
// Temporal subformulae
// ---------------------------------------------------------------------------

// Post-order collection of the Aut/DualAut subformulae of a core formula,
// each distinct structure appearing once (structural sharing).
inline std::vector<Formula> temporal_subformulae(const Formula& phi) {
  std::vector<Formula> out;
  std::vector<std::size_t> hashes;
  auto seen = [&](const Formula& g, std::size_t h) {
    for (std::size_t i = 0; i < out.size(); ++i)
      if (hashes[i] == h && formula_equal(out[i], g)) return true;
    return false;
  };
  auto rec = [&](auto&& self, const Formula& g) -> void {
    for (const auto& ar : g->args) self(self, ar);
    if (g->kind == FKind::Aut || g->kind == FKind::DualAut) {
      std::size_t h = formula_hash(g);
      if (!seen(g, h)) {
        out.push_back(g);
        hashes.push_back(h);
      }
    }
  };
  rec(rec, phi);
  return out;
}

}  // namespace tlkit
