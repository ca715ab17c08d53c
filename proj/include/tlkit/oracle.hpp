// Ground-truth evaluator for formulas over ultimately periodic timed words,
// implemented directly from the semantic clauses.  It is deliberately
// independent of the automata pipeline: sugar is evaluated by the standard
// until/next clauses, modalities by subset scans over the modality NFA, and
// negation by complementation of verdicts.  Everything downstream
// (desugaring, rewrites, the compiler) is validated against this module.

#pragma once

#include <functional>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tlkit/formula.hpp"
#include "tlkit/timed_word.hpp"

namespace tlkit {

class Oracle {
 public:
  explicit Oracle(const UPTimedWord& w) : w_(w) { w.validate(); }

  bool satisfies(int i, const Formula& phi) {
    if (i < 1) throw std::invalid_argument("satisfies: positions are 1-based");
    return eval(reduce(i), phi);
  }

  const UPTimedWord& word() const { return w_; }

 private:
  // Positions far beyond the prefix are mapped into the band
  // (P+L, P+2L] — deep enough that periodicity tests on the first
  // P+L positions still exercise two independent evaluations.
  int reduce(int i) const {
    int p = w_.prefix_len(), l = w_.loop_len();
    if (i <= p + 2 * l) return i;
    return p + l + 1 + (i - p - l - 1) % l;
  }

  bool eval(int i, const Formula& phi) {
    auto key = std::make_pair(phi.get(), i);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    bool v = compute(i, phi);
    memo_[key] = v;
    return v;
  }

  bool compute(int i, const Formula& phi) {
    switch (phi->kind) {
      case FKind::True: return true;
      case FKind::False: return false;
      case FKind::Atom: return w_.event_at(i).letter.count(phi->prop) != 0;
      case FKind::NegAtom: return w_.event_at(i).letter.count(phi->prop) == 0;
      case FKind::Not: return !eval(i, phi->args[0]);
      case FKind::And:
        return eval(i, phi->args[0]) && eval(i, phi->args[1]);
      case FKind::Or:
        return eval(i, phi->args[0]) || eval(i, phi->args[1]);
      case FKind::Until:
        return until_scan(
            i, phi->intv, [&](int j) { return eval(reduce(j), phi->args[0]); },
            [&](int j) { return eval(reduce(j), phi->args[1]); });
      case FKind::Release:
        return !until_scan(
            i, phi->intv, [&](int j) { return !eval(reduce(j), phi->args[0]); },
            [&](int j) { return !eval(reduce(j), phi->args[1]); });
      case FKind::Finally:
        return until_scan(
            i, phi->intv, [](int) { return true; },
            [&](int j) { return eval(reduce(j), phi->args[0]); });
      case FKind::Globally:
        return !until_scan(
            i, phi->intv, [](int) { return true; },
            [&](int j) { return !eval(reduce(j), phi->args[0]); });
      case FKind::Next:
        return phi->intv.contains(w_.time_at(i + 1) - w_.time_at(i)) &&
               eval(reduce(i + 1), phi->args[0]);
      case FKind::Aut:
        return modality_scan(i, phi, /*negate_args=*/false, Mode::Exists, 1);
      case FKind::DualAut:
        return !modality_scan(i, phi, /*negate_args=*/true, Mode::Exists, 1);
      case FKind::EventAut:
        return modality_scan(i, phi, false, Mode::MinimalWitness, 1);
      case FKind::CountGe:
        return modality_scan(i, phi, false, Mode::CountAtLeast, phi->count_k);
    }
    return false;
  }

  // --- until -----------------------------------------------------------

  bool until_scan(int i, const Interval& iv, std::function<bool(int)> hold,
                  std::function<bool(int)> target) {
    int p = w_.prefix_len(), l = w_.loop_len();
    int in_region_steps = 0;
    for (int j = i;; ++j) {
      Rational t = w_.time_at(j) - w_.time_at(i);
      if (iv.above(t)) return false;
      bool in = iv.contains(t);
      if (in && target(j)) return true;
      if (!hold(j)) return false;
      if (iv.unbounded() && in && j > p) {
        // Membership is now permanent; one full loop without a target
        // position settles the verdict.
        if (++in_region_steps >= l) return false;
      }
    }
  }

  // --- automata modalities ----------------------------------------------

  enum class Mode { Exists, MinimalWitness, CountAtLeast };

  bool modality_scan(int i, const Formula& phi, bool negate_args, Mode mode,
                     int k) {
    const Nfa& a = *phi->nfa;
    const Interval& iv = phi->intv;
    int p = w_.prefix_len(), l = w_.loop_len();

    LocSet reach = LocSet(1) << a.initial;
    int witnesses = 0;
    int hits = 0;
    // (loop phase, reachable set) -> (hits, witnesses) at first visit;
    // a repeat settles unbounded scans.
    std::map<std::pair<int, LocSet>, std::pair<int, int>> seen;

    for (int j = i;; ++j) {
      Rational t = w_.time_at(j) - w_.time_at(i);
      if (mode != Mode::MinimalWitness && iv.above(t))
        return mode == Mode::CountAtLeast ? witnesses >= k : false;

      // Consume position j.
      std::vector<bool> sat(a.arity);
      for (int arg = 0; arg < a.arity; ++arg) {
        bool v = eval(reduce(j), phi->args[arg]);
        sat[arg] = negate_args ? !v : v;
      }
      LocSet next = 0;
      for (int s : detail::set_bits(reach))
        for (int arg = 0; arg < a.arity; ++arg)
          if (sat[arg])
            for (int d : a.transitions[s][arg]) next |= LocSet(1) << d;
      reach = next;

      bool final_hit = false;
      for (int f : a.finals)
        if (reach & (LocSet(1) << f)) final_hit = true;

      if (mode == Mode::MinimalWitness) {
        if (final_hit) return iv.contains(t);  // j is the minimal position
      } else if (final_hit && iv.contains(t)) {
        if (mode == Mode::Exists) return true;
        if (++witnesses >= k) return true;
      }
      if (final_hit) ++hits;
      if (reach == 0) return mode == Mode::CountAtLeast ? witnesses >= k : false;

      // Cycle detection once the scan is inside the loop.
      if (j >= p + 1) {
        int phase = (j - p - 1) % l;
        auto key = std::make_pair(phase, reach);
        auto it = seen.find(key);
        if (it == seen.end()) {
          seen[key] = {hits, witnesses};
        } else if (mode == Mode::MinimalWitness) {
          return false;  // no accepting position exists at all
        } else if (!iv.unbounded()) {
          // above(t) will eventually fire; keep scanning.
        } else if (hits > it->second.first) {
          // A final hit recurs with ever larger time offsets, so for an
          // unbounded interval witnesses recur forever.
          return true;
        } else {
          return mode == Mode::CountAtLeast ? witnesses >= k : false;
        }
      }
    }
  }

  const UPTimedWord& w_;
  std::map<std::pair<const FormulaNode*, int>, bool> memo_;
};

// One-shot evaluation: (w, i) |= phi.
inline bool satisfies(const UPTimedWord& w, int i, const Formula& phi) {
  Oracle o(w);
  return o.satisfies(i, phi);
}

// Truth table over positions 1..|prefix|+|loop| (all later positions repeat).
inline std::vector<bool> satisfies_periodic(const UPTimedWord& w,
                                            const Formula& phi) {
  Oracle o(w);
  std::vector<bool> table;
  for (int i = 1; i <= w.prefix_len() + w.loop_len(); ++i)
    table.push_back(o.satisfies(i, phi));
  return table;
}

}  // namespace tlkit
