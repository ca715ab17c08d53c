// Formula-level translations: elimination of counting modalities via
// modulo-k counter products, and the two directions between event-clock and
// plain one-sided modalities.  The gadget automata these translations splice
// in are exposed for direct testing.

#pragma once

#include <iostream>
#include <string>
#include <vector>

#include "tlkit/logic_ops.hpp"

namespace tlkit {

// ---------------------------------------------------------------------------
// Gadget automata
// ---------------------------------------------------------------------------

// k locations in a cycle, each with a self-loop; every edge is labelled ⊤
// (all argument indices).  No final locations: the counter is only ever
// used inside products that add their own acceptance.
inline Nfa mod_k_counter(int k, int arity) {
  Nfa a = Nfa::make(arity, k, 0);
  for (int i = 0; i < k; ++i) {
    a.add_top_transition(i, i);
    a.add_top_transition(i, (i + 1) % k);
  }
  a.name = "ctr" + std::to_string(k);
  return a;
}

// Initial self-loop, two ⊤ steps into a final location with a self-loop:
// accepts exactly the words of length >= 2.
inline Nfa two_step(int arity) {
  Nfa a = Nfa::make(arity, 3, 0);
  a.add_top_transition(0, 0);
  a.add_top_transition(0, 1);
  a.add_top_transition(1, 2);
  a.add_top_transition(2, 2);
  a.finals = {2};
  a.name = "twostep";
  return a;
}

// B^{s,phi}: adds a fresh sole final location fed by copies of the
// transitions into s, whose labels are the originals strengthened by an
// extra conjunct.  The strengthened labels get fresh argument indices; the
// returned pair maps each new index (1-based) to the original one.
struct BsPhiResult {
  Nfa nfa;
  std::vector<int> strengthened_from;  // new arg index -> original arg index
};

inline BsPhiResult bs_phi(const Nfa& base, int s) {
  if (s < 0 || s >= base.num_locations)
    throw std::invalid_argument("bs_phi: unknown location");
  std::vector<int> incoming_args;  // original args with a transition into s
  for (int src = 0; src < base.num_locations; ++src)
    for (int arg = 0; arg < base.arity; ++arg)
      for (int d : base.transitions[src][arg])
        if (d == s &&
            std::find(incoming_args.begin(), incoming_args.end(), arg + 1) ==
                incoming_args.end())
          incoming_args.push_back(arg + 1);
  std::sort(incoming_args.begin(), incoming_args.end());

  int n = base.arity;
  int nn = n + static_cast<int>(incoming_args.size());
  int s_f = base.num_locations;
  Nfa b = Nfa::make(nn, base.num_locations + 1, base.initial);
  for (int src = 0; src < base.num_locations; ++src)
    for (int arg = 0; arg < n; ++arg)
      for (int d : base.transitions[src][arg]) {
        b.add_transition(src, arg + 1, d);
        if (d == s) {
          auto it = std::find(incoming_args.begin(), incoming_args.end(), arg + 1);
          int strong = n + 1 + static_cast<int>(it - incoming_args.begin());
          b.add_transition(src, strong, s_f);
        }
      }
  b.finals = {s_f};
  b.name = (base.name.empty() ? "b" : base.name + ".b") + std::to_string(s);
  return {std::move(b), incoming_args};
}

// C^s: a fresh two-location entry chain (top edge, then copies of s's
// outgoing transitions), with all outgoing transitions of final locations
// removed so runs stop at the first acceptance.
inline Nfa c_s(const Nfa& base, int s) {
  if (s < 0 || s >= base.num_locations)
    throw std::invalid_argument("c_s: unknown location");
  int s0p = base.num_locations;
  int s1p = base.num_locations + 1;
  Nfa c = Nfa::make(base.arity, base.num_locations + 2, s0p);
  for (int src = 0; src < base.num_locations; ++src) {
    if (base.is_final(src)) continue;  // outgoing transitions removed
    for (int arg = 0; arg < base.arity; ++arg)
      for (int d : base.transitions[src][arg]) c.add_transition(src, arg + 1, d);
  }
  c.add_top_transition(s0p, s1p);
  for (int arg = 0; arg < base.arity; ++arg)
    for (int d : base.transitions[s][arg]) c.add_transition(s1p, arg + 1, d);
  c.finals = base.finals;
  c.name = (base.name.empty() ? "c" : base.name + ".c") + std::to_string(s);
  return c;
}

enum class GadgetKind { ModKCounter, TwoStep, BsPhi, Cs };

// Uniform gadget entry point (BsPhi drops the argument-mapping here; use
// bs_phi directly when the mapping is needed).
inline Nfa build_gadget(GadgetKind kind, const Nfa& base, int k_or_s = 0) {
  switch (kind) {
    case GadgetKind::ModKCounter: return mod_k_counter(k_or_s, base.arity);
    case GadgetKind::TwoStep: return two_step(base.arity);
    case GadgetKind::BsPhi: return bs_phi(base, k_or_s).nfa;
    case GadgetKind::Cs: return c_s(base, k_or_s);
  }
  throw std::logic_error("build_gadget: bad kind");
}

// ---------------------------------------------------------------------------
// WLOG preprocessing: exclusive arguments + determinization
// ---------------------------------------------------------------------------

inline Formula preprocess_exclusive_dfa(const Formula& modality) {
  Formula excl = make_args_exclusive(modality);
  Nfa det = determinize(*excl->nfa);
  if (det.num_locations > 1024)
    std::cerr << "tlkit: warning: subset construction produced "
              << det.num_locations << " locations\n";
  auto out = std::make_shared<FormulaNode>(*excl);
  out->nfa = share(trim(det));
  return out;
}

// ---------------------------------------------------------------------------
// Counting elimination
// ---------------------------------------------------------------------------

// A^{k,l}: product of the (deterministic, exclusive-argument) automaton
// with a modulo-k counter that advances exactly on final entries, plus a
// fresh final location reachable from counter value l-1 on a final entry.
namespace detail {
inline Nfa counting_variant(const Nfa& a, int k, int l) {
  int kk = std::max(k, 1);
  int s_f = a.num_locations * kk;
  Nfa v = Nfa::make(a.arity, s_f + 1, a.initial * kk + 0);
  auto id = [&](int s, int c) { return s * kk + c; };
  int target_c = ((l - 1) % kk + kk) % kk;
  for (int s = 0; s < a.num_locations; ++s)
    for (int arg = 0; arg < a.arity; ++arg)
      for (int d : a.transitions[s][arg]) {
        bool entering_final = a.is_final(d);
        for (int c = 0; c < kk; ++c) {
          int cp = entering_final ? (c + 1) % kk : c;
          v.add_transition(id(s, c), arg + 1, id(d, cp));
          if (entering_final && c == target_c)
            v.add_transition(id(s, c), arg + 1, s_f);
        }
      }
  v.finals = {s_f};
  v.name = a.name + ".k" + std::to_string(k) + "l" + std::to_string(l);
  return trim(v);
}
}  // namespace detail

// Replaces A^{>=k}_I by the conjunction of the k counting variants.
inline Formula eliminate_counting(const Formula& node) {
  if (node->kind != FKind::CountGe)
    throw std::invalid_argument("eliminate_counting: not a counting modality");
  Formula prep = preprocess_exclusive_dfa(node);
  int k = node->count_k;
  Formula out;
  for (int l = 0; l < k; ++l) {
    Formula conj = f::aut(share(detail::counting_variant(*prep->nfa, k, l)),
                          prep->intv, prep->args);
    out = out ? f::land(out, conj) : conj;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Event-clock -> plain modalities
// ---------------------------------------------------------------------------

// A minimal accepting position within I, expressed through one-sided plain
// modalities.  The zero-endpoint open pairings use the punctual [0,0]
// upper bound ("no witness among simultaneous events").
inline Formula eecl_to_core(const Formula& node) {
  if (node->kind != FKind::EventAut)
    throw std::invalid_argument("eecl_to_core: not an event-clock modality");
  const Interval& iv = node->intv;
  auto plain = [&](Interval i2) {
    return f::aut(node->nfa, i2, node->args);
  };
  if (iv.is_all()) return plain(Interval::all());
  bool lower_trivial = iv.lo == 0 && !iv.lo_strict;
  Formula upper_part;
  if (iv.unbounded())
    upper_part = plain(Interval::all());
  else
    upper_part = plain(Interval::upper(iv.hi, iv.hi_strict));
  if (lower_trivial) return upper_part;
  // Exclude witnesses below the lower endpoint: <lo, or <=lo for open
  // bounds ([0,0] when lo == 0).
  Interval below = iv.lo_strict ? (iv.lo == 0 ? Interval{0, 0, false, false}
                                              : Interval::upper(iv.lo, false))
                                : Interval::upper(iv.lo, true);
  return f::land(upper_part, f::lnot(plain(below)));
}

// ---------------------------------------------------------------------------
// Plain one-sided modalities -> event-clock
// ---------------------------------------------------------------------------

inline Formula core_to_eecl(const Formula& node) {
  if (node->kind != FKind::Aut)
    throw std::invalid_argument("core_to_eecl: not a plain modality");
  if (!node->intv.one_sided())
    throw std::invalid_argument("core_to_eecl: interval is not one-sided");
  Formula prep = preprocess_exclusive_dfa(node);
  const Nfa& a = *prep->nfa;
  const Interval& iv = node->intv;

  if (iv.classify() == IntervalClass::UpperBound)
    return f::event_aut(prep->nfa, iv, prep->args);

  // Lower bound [c,oo) or (c,oo).
  std::int64_t c = iv.lo;
  bool strict = iv.lo_strict;
  // "before the bound" interval: <c, or <=c when the bound is strict.
  Interval before = strict ? Interval::upper(c, false)
                           : (c == 0 ? Interval{0, 0, false, false}
                                     : Interval::upper(c, true));

  // Single-letter witnesses exist only when 0 lies in I.
  Formula single;
  if (iv.contains_zero()) {
    for (int arg = 0; arg < a.arity; ++arg)
      for (int d : a.transitions[a.initial][arg])
        if (a.is_final(d)) {
          Formula lit = prep->args[arg];
          single = single ? f::lor(single, lit) : lit;
          break;
        }
  }

  // Case 1: no further event before the bound.
  Nfa a1 = two_step(a.arity);
  Formula next_event_early =
      f::event_aut(share(a1), before, prep->args);
  Nfa a2 = trim(nfa_product(a, a1));
  Formula case1 = f::land(f::lnot(next_event_early),
                          f::event_aut(share(a2), iv, prep->args));

  // Case 2: further events before the bound; split the unique run at the
  // location reached by the last of them.
  Formula bad;
  for (int s = 0; s < a.num_locations; ++s) {
    Formula cs = f::event_aut(share(c_s(a, s)), Interval::all(), prep->args);
    BsPhiResult bres = bs_phi(a, s);
    std::vector<Formula> bargs = prep->args;
    for (int orig : bres.strengthened_from)
      bargs.push_back(f::land(prep->args[orig - 1], f::lnot(cs)));
    Formula b = f::event_aut(share(bres.nfa), before, std::move(bargs));
    bad = bad ? f::lor(bad, b) : b;
  }
  Formula case2 = f::land(
      next_event_early,
      f::land(f::event_aut(prep->nfa, Interval::all(), prep->args),
              bad ? f::lnot(bad) : f::verum()));

  Formula out = f::lor(case1, case2);
  if (single) out = f::lor(single, out);
  return out;
}

// ---------------------------------------------------------------------------
// Whole-formula passes
// ---------------------------------------------------------------------------

enum class RewritePass { Counting, EventClock, All };

inline Formula apply_rewrites(const Formula& phi, RewritePass pass) {
  std::vector<Formula> args;
  args.reserve(phi->args.size());
  for (const auto& a : phi->args) args.push_back(apply_rewrites(a, pass));
  Formula cur = phi;
  if (!args.empty()) {
    auto n = std::make_shared<FormulaNode>(*phi);
    n->args = std::move(args);
    cur = n;
  }
  if (cur->kind == FKind::CountGe &&
      (pass == RewritePass::Counting || pass == RewritePass::All))
    return eliminate_counting(cur);
  if (cur->kind == FKind::EventAut &&
      (pass == RewritePass::EventClock || pass == RewritePass::All))
    return eecl_to_core(cur);
  return cur;
}

}  // namespace tlkit
