// Translation of core formulas into diagonal-free generalized-Büchi TAs:
// trigger decomposition, the component automata for the four modality
// shapes, their on-the-fly product, and the satisfiability / model-checking
// drivers built on top.
//
// Each component handles one temporal subformula psi with its trigger
// proposition p_psi: the component accepts exactly the words satisfying
// G(p_psi => psi-with-trigger-arguments).  Obligations are sets of NFA
// locations placed into sub-components, one clock each; overlapping
// obligations merge non-deterministically, which is what keeps the clock
// count at m (m+1 for duals) regardless of how many triggers are pending.

#pragma once

#include <bit>
#include <optional>
#include <sstream>

#include "tlkit/nnf.hpp"
#include "tlkit/oracle.hpp"
#include "tlkit/ta_analysis.hpp"

namespace tlkit {

// ---------------------------------------------------------------------------
// Trigger decomposition
// ---------------------------------------------------------------------------

struct TriggerBinding {
  PropId trigger;
  FKind kind;  // Aut or DualAut
  NfaPtr nfa;
  Interval intv;
  std::vector<BoolExprPtr> args;  // positive Boolean combos over AP u AP_Phi
  Formula modality;
};

struct TriggerDecomposition {
  BoolExprPtr top;  // the trigger-level image of the whole formula
  std::vector<TriggerBinding> bindings;

  const TriggerBinding* find(const PropId& p) const {
    for (const auto& b : bindings)
      if (b.trigger == p) return &b;
    return nullptr;
  }
};

namespace detail {

inline BoolExprPtr overline(const Formula& g,
                            const std::vector<Formula>& temporal,
                            const std::vector<PropId>& triggers) {
  switch (g->kind) {
    case FKind::True: return BoolExpr::verum();
    case FKind::False: return BoolExpr::falsum();
    case FKind::Atom: return BoolExpr::lit(g->prop, false);
    case FKind::NegAtom: return BoolExpr::lit(g->prop, true);
    case FKind::And:
      return BoolExpr::conj({overline(g->args[0], temporal, triggers),
                             overline(g->args[1], temporal, triggers)});
    case FKind::Or:
      return BoolExpr::disj({overline(g->args[0], temporal, triggers),
                             overline(g->args[1], temporal, triggers)});
    case FKind::Aut:
    case FKind::DualAut: {
      std::size_t h = formula_hash(g);
      for (std::size_t i = 0; i < temporal.size(); ++i)
        if (formula_hash(temporal[i]) == h && formula_equal(temporal[i], g))
          return BoolExpr::lit(triggers[i], false);
      throw std::logic_error("overline: modality not in subformula set");
    }
    default:
      throw std::invalid_argument("overline: formula is not core/desugared");
  }
}

}  // namespace detail

// Bottom-up replacement of top-level temporal subformulae by triggers;
// shared subformulae share triggers.
inline TriggerDecomposition decompose(const Formula& phi) {
  std::vector<Formula> temporal = temporal_subformulae(phi);
  std::vector<PropId> triggers;
  for (std::size_t i = 0; i < temporal.size(); ++i)
    triggers.push_back(PropId::make_trigger(static_cast<int>(i)));
  TriggerDecomposition d;
  d.top = detail::overline(phi, temporal, triggers);
  for (std::size_t i = 0; i < temporal.size(); ++i) {
    TriggerBinding b;
    b.trigger = triggers[i];
    b.kind = temporal[i]->kind;
    b.nfa = temporal[i]->nfa;
    b.intv = temporal[i]->intv;
    for (const auto& arg : temporal[i]->args)
      b.args.push_back(detail::overline(arg, temporal, triggers));
    b.modality = temporal[i];
    d.bindings.push_back(std::move(b));
  }
  return d;
}

// ---------------------------------------------------------------------------
// Single-letter acceptance guard
// ---------------------------------------------------------------------------

// The plain-modality components assume the NFA accepts only words of
// length >= 2.  Modalities whose automaton has an accepting one-step run
// are rewritten as (immediate-argument disjunct, when 0 lies in I) or the
// same modality over the product with the two-step gadget.
inline Formula guard_single_letter(const Formula& phi) {
  std::vector<Formula> args;
  args.reserve(phi->args.size());
  for (const auto& a : phi->args) args.push_back(guard_single_letter(a));
  Formula cur = phi;
  if (!args.empty()) {
    auto n = std::make_shared<FormulaNode>(*phi);
    n->args = std::move(args);
    cur = n;
  }
  if (cur->kind != FKind::Aut) return cur;
  const Nfa& a = *cur->nfa;
  Formula immediate;
  for (int arg = 0; arg < a.arity; ++arg)
    for (int dst : a.transitions[a.initial][arg])
      if (a.is_final(dst)) {
        immediate = immediate ? f::lor(immediate, cur->args[arg])
                              : cur->args[arg];
        break;
      }
  if (!immediate) return cur;  // already length >= 2 only
  Nfa a2 = bisim_quotient(trim(nfa_product(a, two_step(a.arity))));
  Formula guarded = f::aut(share(std::move(a2)), cur->intv, cur->args);
  if (cur->intv.contains_zero()) return f::lor(immediate, guarded);
  return guarded;
}

// ---------------------------------------------------------------------------
// Component machinery
// ---------------------------------------------------------------------------

namespace detail {

// One sub-component move: target sub-state, optional timing constraint on
// the sub's clock, and whether the clock resets.
struct SubMove {
  std::vector<int> code;
  std::optional<CmpOp> guard_op;
  std::int64_t guard_c = 0;
  bool reset = false;
};

inline bool final_enabled(const Nfa& a, int s, const std::vector<bool>& sat) {
  for (int arg = 0; arg < a.arity; ++arg) {
    if (!sat[arg]) continue;
    for (int d : a.transitions[s][arg])
      if (a.is_final(d)) return true;
  }
  return false;
}

inline LocSet final_mask(const Nfa& a) {
  LocSet m = 0;
  for (int f : a.finals) m |= LocSet(1) << f;
  return m;
}

inline std::string locset_str(const Nfa& a, LocSet s) {
  std::string out = "{";
  bool first = true;
  for (int i = 0; i < a.num_locations; ++i)
    if (s & (LocSet(1) << i)) {
      if (!first) out += ",";
      out += "s" + std::to_string(i);
      first = false;
    }
  return out + "}";
}

// Shared scaffolding: trigger lookup, argument evaluation, synchronized
// product of per-sub moves (exactly one sub takes the trigger role when the
// trigger is present).
class ComponentBase : public TaBase {
 public:
  // subs = |S^A| + extra_subs, unless subs_override forces a count (used by
  // the no-merge variant in tests).
  ComponentBase(AlphabetPtr alphabet, TriggerBinding binding, int extra_subs,
                int code_width, int subs_override = 0)
      : TaBase(std::move(alphabet)),
        binding_(std::move(binding)),
        subs_(subs_override ? subs_override
                            : binding_.nfa->num_locations + extra_subs),
        sub_width_(code_width) {
    trigger_index_ = TaBase::alphabet().index_of(binding_.trigger);
    if (trigger_index_ < 0)
      throw std::logic_error("component: trigger not in alphabet");
    for (const auto& arg : binding_.args)
      compiled_args_.push_back(arg->compile(TaBase::alphabet()));
  }

  int num_clocks() const override { return subs_; }
  int state_code_width() const override { return subs_ * sub_width_; }
  int sub_count() const { return subs_; }
  int sub_width() const { return sub_width_; }
  const TriggerBinding& binding() const { return binding_; }

  std::vector<std::int64_t> clock_max_consts() const override {
    return std::vector<std::int64_t>(subs_, std::max<std::int64_t>(bound_const(), 0));
  }

  void successors(const StateCode& state, Letter sigma,
                  std::vector<TaEdge>& out) const override {
    enumerate(state, sigma, nullptr, out);
  }
  void successors_filtered(const StateCode& state, Letter sigma,
                           const AtomFilter& filter,
                           std::vector<TaEdge>& out) const override {
    enumerate(state, sigma, &filter, out);
  }

  std::string state_label(const StateCode& state) const override {
    std::string s = "<";
    for (int j = 0; j < subs_; ++j) {
      if (j) s += "|";
      s += sub_label(sub_state(state, j));
    }
    return s + ">";
  }

  // An idle sub-component's clock is dead: every rule leaving the idle
  // state resets it before the first read.
  std::uint64_t irrelevant_clocks(const StateCode& state) const override {
    std::uint64_t mask = 0;
    for (int j = 0; j < subs_; ++j) {
      bool idle = true;
      for (int k = 0; k < sub_width_; ++k)
        if (state[j * sub_width_ + k] != 0) idle = false;
      if (idle) mask |= std::uint64_t(1) << j;
    }
    return mask;
  }

 protected:
  virtual std::vector<SubMove> sub_moves(std::vector<int> sub,
                                         const std::vector<bool>& sat,
                                         bool active) const = 0;
  virtual std::string sub_label(std::vector<int> sub) const = 0;
  virtual std::int64_t bound_const() const = 0;

  std::vector<int> sub_state(const StateCode& state, int j) const {
    return {state.begin() + j * sub_width_,
            state.begin() + (j + 1) * sub_width_};
  }

  const TriggerBinding binding_;
  const int subs_;
  const int sub_width_;
  int trigger_index_;
  std::vector<BoolExpr::Compiled> compiled_args_;

 private:
  void enumerate(const StateCode& state, Letter sigma,
                 const AtomFilter* filter, std::vector<TaEdge>& out) const {
    std::vector<bool> sat(compiled_args_.size());
    for (std::size_t i = 0; i < compiled_args_.size(); ++i)
      sat[i] = compiled_args_[i].eval(sigma);
    bool trig = (sigma & (Letter(1) << trigger_index_)) != 0;

    auto is_idle_sub = [&](int j) {
      for (int k = 0; k < sub_width_; ++k)
        if (state[j * sub_width_ + k] != 0) return false;
      return true;
    };

    std::vector<std::vector<SubMove>> idle(subs_);
    for (int j = 0; j < subs_; ++j) {
      idle[j] = sub_moves(sub_state(state, j), sat, false);
      normalize(idle[j], j, filter);
    }
    if (!trig) {
      emit_combos(idle, out);
      return;
    }
    // Exactly one sub-component takes the trigger.  Idle sub-components are
    // interchangeable, so fresh obligations go into the first one only.
    bool fresh_done = false;
    for (int j = 0; j < subs_; ++j) {
      if (is_idle_sub(j)) {
        if (fresh_done) continue;
        fresh_done = true;
      }
      std::vector<std::vector<SubMove>> combo = idle;
      combo[j] = sub_moves(sub_state(state, j), sat, true);
      normalize(combo[j], j, filter);
      emit_combos(combo, out);
    }
  }

  // A sub-component whose target state is all-idle has a dead clock until
  // the next spawn resets it; resetting it here is inert and keeps idle
  // clocks pinned at zero.  Drops duplicate and filtered-out moves.
  void normalize(std::vector<SubMove>& moves, int sub_index,
                 const AtomFilter* filter) const {
    for (auto& m : moves) {
      bool idle = true;
      for (int k : m.code)
        if (k != 0) idle = false;
      if (idle) m.reset = true;
    }
    std::vector<SubMove> uniq;
    for (const auto& m : moves) {
      if (filter && m.guard_op &&
          !(*filter)(GuardAtom{sub_index, *m.guard_op, m.guard_c}))
        continue;
      bool dup = false;
      for (const auto& u : uniq)
        if (u.code == m.code && u.guard_op == m.guard_op &&
            u.guard_c == m.guard_c && u.reset == m.reset)
          dup = true;
      if (!dup) uniq.push_back(m);
    }
    moves = std::move(uniq);
  }

  void emit_combos(const std::vector<std::vector<SubMove>>& options,
                   std::vector<TaEdge>& out) const {
    for (const auto& o : options)
      if (o.empty()) return;
    std::vector<std::size_t> pick(subs_, 0);
    while (true) {
      TaEdge e;
      for (int j = 0; j < subs_; ++j) {
        const SubMove& m = options[j][pick[j]];
        e.dst.insert(e.dst.end(), m.code.begin(), m.code.end());
        if (m.guard_op) e.guard.atoms.push_back({j, *m.guard_op, m.guard_c});
        if (m.reset) e.resets.push_back(j);
      }
      out.push_back(std::move(e));
      int j = subs_ - 1;
      while (j >= 0 && ++pick[j] == options[j].size()) pick[j--] = 0;
      if (j < 0) break;
    }
  }
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Plain-modality components
// ---------------------------------------------------------------------------

// psi = A_{<=c} (or < c, or unbounded): sub-state (l, S) with l in {0,1,2};
// acceptance set j = sub j not stuck at l == 1.
class UpperComponent : public detail::ComponentBase {
 public:
  UpperComponent(AlphabetPtr alphabet, TriggerBinding binding,
                 bool allow_merge = true, int subs_override = 0)
      : ComponentBase(std::move(alphabet), std::move(binding), 0, 2,
                      subs_override),
        allow_merge_(allow_merge) {
    const Interval& iv = binding_.intv;
    infinite_ = iv.unbounded();
    c_ = infinite_ ? 0 : iv.hi;
    strict_ = iv.hi_strict;
  }

  int num_acceptance_sets() const override { return subs_; }
  StateCode initial_state() const override {
    return StateCode(state_code_width(), 0);
  }
  bool accepting(const StateCode& state, int j) const override {
    return state[2 * j] != 1;
  }

 protected:
  std::int64_t bound_const() const override { return infinite_ ? 0 : c_; }

  std::vector<detail::SubMove> sub_moves(std::vector<int> sub,
                                         const std::vector<bool>& sat,
                                         bool active) const override {
    const Nfa& a = *binding_.nfa;
    int l = sub[0];
    LocSet s = static_cast<LocSet>(sub[1]);
    LocSet init = LocSet(1) << a.initial;
    std::vector<detail::SubMove> moves;
    auto in_guard = [&](detail::SubMove& m) {
      if (!infinite_) {
        m.guard_op = strict_ ? CmpOp::Lt : CmpOp::Le;
        m.guard_c = c_;
      }
    };
    bool can_discharge = l != 0 && std::popcount(s) == 1 &&
                         detail::final_enabled(a, std::countr_zero(s), sat);
    if (!active) {
      if (l == 0) moves.push_back({{0, 0}, std::nullopt, 0, false});
      if (l != 0)
        for (LocSet t : step_or(a, s, sat))
          moves.push_back({{1, static_cast<int>(t)}, std::nullopt, 0, false});
      if (can_discharge) {
        detail::SubMove m{{0, 0}, std::nullopt, 0, false};
        in_guard(m);
        moves.push_back(std::move(m));
      }
      return moves;
    }
    if (l == 0) {
      for (LocSet t : step_or(a, init, sat))
        moves.push_back({{1, static_cast<int>(t)}, std::nullopt, 0, true});
      return moves;
    }
    if (allow_merge_)
      for (LocSet t1 : step_or(a, s, sat))
        for (LocSet t2 : step_or(a, init, sat))
          moves.push_back(
              {{1, static_cast<int>(t1 | t2)}, std::nullopt, 0, false});
    if (can_discharge)
      for (LocSet t : step_or(a, init, sat)) {
        detail::SubMove m{{2, static_cast<int>(t)}, std::nullopt, 0, true};
        in_guard(m);
        moves.push_back(std::move(m));
      }
    return moves;
  }

  std::string sub_label(std::vector<int> sub) const override {
    return "l=" + std::to_string(sub[0]) + ",S=" +
           detail::locset_str(*binding_.nfa, static_cast<LocSet>(sub[1]));
  }

 private:
  bool infinite_, strict_ = false;
  std::int64_t c_ = 0;
  bool allow_merge_;
};

// psi = A_{>=c} (or > c): sub-state (l, S, T) with l in {0,1,2,3}; the
// l = 3 mode stops resetting the clock and parks new obligations in T.
class LowerComponent : public detail::ComponentBase {
 public:
  LowerComponent(AlphabetPtr alphabet, TriggerBinding binding)
      : ComponentBase(std::move(alphabet), std::move(binding), 0, 3) {
    c_ = binding_.intv.lo;
    strict_ = binding_.intv.lo_strict;
  }

  int num_acceptance_sets() const override { return subs_; }
  StateCode initial_state() const override {
    return StateCode(state_code_width(), 0);
  }
  bool accepting(const StateCode& state, int j) const override {
    int l = state[3 * j];
    return l == 0 || l == 2;
  }

 protected:
  std::int64_t bound_const() const override { return c_; }

  std::vector<detail::SubMove> sub_moves(std::vector<int> sub,
                                         const std::vector<bool>& sat,
                                         bool active) const override {
    const Nfa& a = *binding_.nfa;
    int l = sub[0];
    LocSet s = static_cast<LocSet>(sub[1]);
    LocSet t = static_cast<LocSet>(sub[2]);
    LocSet init = LocSet(1) << a.initial;
    std::vector<detail::SubMove> moves;
    auto mk = [&](int lp, LocSet sp, LocSet tp, bool ge, bool reset) {
      detail::SubMove m{{lp, static_cast<int>(sp), static_cast<int>(tp)},
                        std::nullopt, 0, reset};
      if (ge && !(c_ == 0 && !strict_)) {
        m.guard_op = strict_ ? CmpOp::Gt : CmpOp::Ge;
        m.guard_c = c_;
      }
      return m;
    };
    bool discharge = (l == 1 || l == 2 || l == 3) && std::popcount(s) == 1 &&
                     detail::final_enabled(a, std::countr_zero(s), sat);
    if (!active) {
      if (l == 0) moves.push_back(mk(0, 0, 0, false, false));
      if (l == 1 || l == 2)
        for (LocSet sp : step_or(a, s, sat))
          moves.push_back(mk(1, sp, 0, false, false));
      if (l == 3)
        for (LocSet sp : step_or(a, s, sat))
          for (LocSet tp : step_or(a, t, sat))
            moves.push_back(mk(3, sp, tp, false, false));
      if ((l == 1 || l == 2) && discharge)
        moves.push_back(mk(0, 0, 0, true, false));
      if (l == 3 && discharge)
        for (LocSet sp : step_or(a, t, sat))
          moves.push_back(mk(2, sp, 0, true, true));
      return moves;
    }
    if (l == 0)
      for (LocSet sp : step_or(a, init, sat))
        moves.push_back(mk(1, sp, 0, false, true));
    if (l == 1 || l == 2)
      for (LocSet s1 : step_or(a, s, sat))
        for (LocSet s2 : step_or(a, init, sat))
          moves.push_back(mk(1, s1 | s2, 0, false, true));
    if (l == 1)
      for (LocSet sp : step_or(a, s, sat))
        for (LocSet tp : step_or(a, init, sat))
          moves.push_back(mk(3, sp, tp, false, false));
    if (l == 3)
      for (LocSet sp : step_or(a, s, sat))
        for (LocSet t1 : step_or(a, t, sat))
          for (LocSet t2 : step_or(a, init, sat))
            moves.push_back(mk(3, sp, t1 | t2, false, false));
    if ((l == 1 || l == 2) && discharge)
      for (LocSet sp : step_or(a, init, sat))
        moves.push_back(mk(2, sp, 0, true, true));
    if (l == 3 && discharge)
      for (LocSet t1 : step_or(a, t, sat))
        for (LocSet s2 : step_or(a, init, sat))
          moves.push_back(mk(2, t1 | s2, 0, true, true));
    return moves;
  }

  std::string sub_label(std::vector<int> sub) const override {
    const Nfa& a = *binding_.nfa;
    return "l=" + std::to_string(sub[0]) + ",S=" +
           detail::locset_str(a, static_cast<LocSet>(sub[1])) + ",T=" +
           detail::locset_str(a, static_cast<LocSet>(sub[2]));
  }

 private:
  std::int64_t c_;
  bool strict_;
};

// ---------------------------------------------------------------------------
// Dual-modality components (safety: no acceptance sets)
// ---------------------------------------------------------------------------

// psi = ~A_{<=c}: m+1 sub-components, each a location subset tracked by
// universal steps; reaching a final location inside the interval blocks.
class DualUpperComponent : public detail::ComponentBase {
 public:
  DualUpperComponent(AlphabetPtr alphabet, TriggerBinding binding)
      : ComponentBase(std::move(alphabet), std::move(binding), 1, 1) {
    const Interval& iv = binding_.intv;
    infinite_ = iv.unbounded();
    c_ = infinite_ ? 0 : iv.hi;
    strict_ = iv.hi_strict;
    zero_in_ = iv.contains_zero();
    finals_ = detail::final_mask(*binding_.nfa);
  }

  int num_acceptance_sets() const override { return 0; }
  StateCode initial_state() const override {
    return StateCode(state_code_width(), 0);
  }
  bool accepting(const StateCode&, int) const override { return false; }

 protected:
  std::int64_t bound_const() const override { return infinite_ ? 0 : c_; }

  std::vector<detail::SubMove> sub_moves(std::vector<int> sub,
                                         const std::vector<bool>& sat,
                                         bool active) const override {
    const Nfa& a = *binding_.nfa;
    LocSet s = static_cast<LocSet>(sub[0]);
    LocSet init = LocSet(1) << a.initial;
    std::vector<detail::SubMove> moves;
    auto mk_in = [&](LocSet sp, bool reset) {
      detail::SubMove m{{static_cast<int>(sp)}, std::nullopt, 0, reset};
      if (!infinite_) {
        m.guard_op = strict_ ? CmpOp::Lt : CmpOp::Le;
        m.guard_c = c_;
      }
      return m;
    };
    auto mk_out = [&](LocSet sp, bool reset) {
      detail::SubMove m{{static_cast<int>(sp)}, std::nullopt, 0, reset};
      m.guard_op = strict_ ? CmpOp::Ge : CmpOp::Gt;
      m.guard_c = c_;
      return m;
    };
    if (!active) {
      if (s == 0) moves.push_back({{0}, std::nullopt, 0, false});
      LocSet sp = step_and(a, s, sat);
      if (s != 0 && (sp & finals_) == 0) moves.push_back(mk_in(sp, false));
      if (s != 0 && !infinite_) moves.push_back(mk_out(0, false));
      return moves;
    }
    LocSet fresh = step_and(a, init, sat);
    bool fresh_ok = !zero_in_ || (fresh & finals_) == 0;
    if (s == 0) {
      if (fresh_ok) moves.push_back({{static_cast<int>(fresh)}, std::nullopt, 0, true});
      return moves;
    }
    LocSet merged = step_and(a, s, sat) | fresh;
    if ((merged & finals_) == 0) moves.push_back(mk_in(merged, true));
    if (!infinite_ && fresh_ok) moves.push_back(mk_out(fresh, true));
    return moves;
  }

  std::string sub_label(std::vector<int> sub) const override {
    return "S=" + detail::locset_str(*binding_.nfa, static_cast<LocSet>(sub[0]));
  }

 private:
  bool infinite_, strict_ = false, zero_in_ = true;
  std::int64_t c_ = 0;
  LocSet finals_ = 0;
};

// psi = ~A_{>=c}: m+1 sub-components with (S, T); S is harmless while the
// clock is below the bound, T carries the obligations past it.
class DualLowerComponent : public detail::ComponentBase {
 public:
  DualLowerComponent(AlphabetPtr alphabet, TriggerBinding binding)
      : ComponentBase(std::move(alphabet), std::move(binding), 1, 2) {
    c_ = binding_.intv.lo;
    strict_ = binding_.intv.lo_strict;
    finals_ = detail::final_mask(*binding_.nfa);
  }

  int num_acceptance_sets() const override { return 0; }
  StateCode initial_state() const override {
    return StateCode(state_code_width(), 0);
  }
  bool accepting(const StateCode&, int) const override { return false; }

 protected:
  std::int64_t bound_const() const override { return c_; }

  std::vector<detail::SubMove> sub_moves(std::vector<int> sub,
                                         const std::vector<bool>& sat,
                                         bool active) const override {
    const Nfa& a = *binding_.nfa;
    LocSet s = static_cast<LocSet>(sub[0]);
    LocSet t = static_cast<LocSet>(sub[1]);
    LocSet init = LocSet(1) << a.initial;
    std::vector<detail::SubMove> moves;
    auto mk = [&](LocSet sp, LocSet tp, int region, bool reset) {
      // region: 0 = no constraint, 1 = below bound, 2 = at-or-past bound
      detail::SubMove m{{static_cast<int>(sp), static_cast<int>(tp)},
                        std::nullopt, 0, reset};
      if (region == 1) {
        m.guard_op = strict_ ? CmpOp::Le : CmpOp::Lt;
        m.guard_c = c_;
      } else if (region == 2 && !(c_ == 0 && !strict_)) {
        m.guard_op = strict_ ? CmpOp::Gt : CmpOp::Ge;
        m.guard_c = c_;
      }
      return m;
    };
    LocSet s_step = step_and(a, s, sat);
    LocSet t_step = step_and(a, t, sat);
    bool t_ok = (t_step & finals_) == 0;
    if (!active) {
      if (s == 0 && t == 0) moves.push_back(mk(0, 0, 0, false));
      if (s == 0 && t != 0 && t_ok) moves.push_back(mk(0, t_step, 0, false));
      if (s != 0 && t == 0) moves.push_back(mk(s_step, 0, 1, false));
      if (s != 0 && t != 0 && t_ok) moves.push_back(mk(s_step, t_step, 1, false));
      if ((s != 0 || t != 0) && ((s_step | t_step) & finals_) == 0)
        moves.push_back(mk(0, s_step | t_step, 2, false));
      return moves;
    }
    LocSet fresh = step_and(a, init, sat);
    if (s == 0 && t == 0) moves.push_back(mk(fresh, 0, 0, true));
    if (s == 0 && t != 0 && t_ok) moves.push_back(mk(fresh, t_step, 0, true));
    if (s != 0 && t == 0) moves.push_back(mk(s_step | fresh, 0, 1, false));
    if (s != 0 && t != 0 && t_ok)
      moves.push_back(mk(s_step | fresh, t_step, 1, false));
    if ((s != 0 || t != 0) && ((s_step | t_step) & finals_) == 0)
      moves.push_back(mk(fresh, s_step | t_step, 2, true));
    return moves;
  }

  std::string sub_label(std::vector<int> sub) const override {
    const Nfa& a = *binding_.nfa;
    return "S=" + detail::locset_str(a, static_cast<LocSet>(sub[0])) + ",T=" +
           detail::locset_str(a, static_cast<LocSet>(sub[1]));
  }

 private:
  std::int64_t c_;
  bool strict_;
  LocSet finals_ = 0;
};

// ---------------------------------------------------------------------------
// C^init and component dispatch
// ---------------------------------------------------------------------------

// Two clockless locations: the first letter must satisfy the trigger-level
// image of the formula, then everything is accepted.
inline TaPtr build_c_init(AlphabetPtr alphabet, BoolExprPtr top) {
  auto ta = std::make_shared<ExplicitTa>(std::move(alphabet), 0);
  int start = ta->add_location("start");
  int run = ta->add_location("run", {0});
  ta->set_initial(start);
  ta->add_transition(start, std::move(top), Guard{}, {}, run);
  ta->add_transition(run, BoolExpr::verum(), Guard{}, {}, run);
  return ta;
}

inline TaPtr build_component(AlphabetPtr alphabet, const TriggerBinding& b) {
  bool upper = b.intv.classify() == IntervalClass::UpperBound;
  if (b.kind == FKind::Aut)
    return upper ? TaPtr(std::make_shared<UpperComponent>(alphabet, b))
                 : TaPtr(std::make_shared<LowerComponent>(alphabet, b));
  return upper ? TaPtr(std::make_shared<DualUpperComponent>(alphabet, b))
               : TaPtr(std::make_shared<DualLowerComponent>(alphabet, b));
}

// ---------------------------------------------------------------------------
// compile
// ---------------------------------------------------------------------------

struct CompiledTa {
  TaPtr ta;
  AlphabetPtr alphabet;
  std::set<PropId> hidden;  // the trigger propositions
  TriggerDecomposition decomp;
  std::vector<int> component_clocks;  // per binding, in order
  std::vector<SymmetryGroup> symmetry;
  int total_clocks = 0;
};

// Expects a core, NNF, desugared formula.  Produces the on-the-fly product
// of C^init with one component per temporal subformula, over the extended
// alphabet AP u AP_Phi (triggers flagged hidden).
inline CompiledTa compile(const Formula& phi) {
  CoreCheck chk = check_core(phi);
  if (!chk.ok)
    throw std::invalid_argument(
        "compile: not an EMITL-0oo core formula (run the rewrite passes "
        "first): " +
        chk.problems.front());
  Formula guarded = guard_single_letter(desugar(to_nnf(phi)));
  TriggerDecomposition d = decompose(guarded);

  std::set<PropId> atoms;
  collect_atoms(guarded, atoms);
  std::vector<PropId> props(atoms.begin(), atoms.end());
  CompiledTa out;
  for (const auto& b : d.bindings) {
    props.push_back(b.trigger);
    out.hidden.insert(b.trigger);
  }
  out.alphabet = make_alphabet(std::move(props));

  TaPtr ta = build_c_init(out.alphabet, d.top);
  int width = ta->state_code_width();
  int clocks = 0;
  int accs = ta->num_acceptance_sets();
  for (const auto& b : d.bindings) {
    TaPtr comp = build_component(out.alphabet, b);
    const auto& cb = dynamic_cast<const detail::ComponentBase&>(*comp);
    SymmetryGroup g;
    g.code_offset = width;
    g.clock_offset = clocks;
    g.acc_offset = comp->num_acceptance_sets() > 0 ? accs : -1;
    g.subs = cb.sub_count();
    g.sub_width = cb.sub_width();
    out.symmetry.push_back(g);
    out.component_clocks.push_back(comp->num_clocks());
    width += comp->state_code_width();
    clocks += comp->num_clocks();
    accs += comp->num_acceptance_sets();
    ta = ta_product(std::move(ta), std::move(comp));
  }
  out.ta = std::move(ta);
  out.total_clocks = out.ta->num_clocks();
  out.decomp = std::move(d);
  return out;
}

// ---------------------------------------------------------------------------
// Satisfiability and model checking
// ---------------------------------------------------------------------------

inline UPTimedWord project_word(const UPTimedWord& w,
                                const std::set<PropId>& hidden) {
  UPTimedWord out = w;
  for (auto& e : out.prefix)
    for (const auto& h : hidden) e.letter.erase(h);
  for (auto& e : out.loop)
    for (const auto& h : hidden) e.letter.erase(h);
  return out;
}

struct SatResult {
  bool satisfiable = false;
  std::optional<UPTimedWord> witness;  // over AP, triggers hidden
  bool witness_validated = false;
  int explored_states = 0;
  int clocks = 0;
};

// Decides satisfiability of an arbitrary formula: rewrites, normalizes,
// compiles, and checks emptiness; a nonempty verdict comes with a
// concretized, oracle-validated witness whenever concretization succeeds.
// Symmetry reduction may hand back a lasso whose word fails validation (the
// tour need not align permuted sub-components); in that case the witness is
// re-extracted from the unreduced zone graph.
inline SatResult sat(const Formula& phi, const Limits& limits = {}) {
  Formula core = to_core(phi);
  CompiledTa c = compile(core);
  EmptinessResult r = is_empty(c.ta, limits, &c.symmetry);
  SatResult out;
  out.satisfiable = !r.empty;
  out.explored_states = r.explored_states;
  out.clocks = r.clocks;
  if (r.empty) return out;
  for (int attempt = 0; attempt < 2; ++attempt) {
    if (attempt == 1) r = is_empty(c.ta, limits);  // unreduced fallback
    if (r.empty || !r.lasso) break;
    auto word =
        concretize(*r.lasso, *r.analyzed, r.analyzed->clock_max_consts());
    if (!word) continue;
    UPTimedWord visible = project_word(*word, c.hidden);
    if (satisfies(visible, 1, phi)) {
      out.witness = visible;
      out.witness_validated = true;
      break;
    }
    out.witness = visible;  // kept, but flagged unvalidated
  }
  return out;
}

struct McResult {
  bool holds = false;
  std::optional<UPTimedWord> counterexample;  // over AP
  bool cex_validated = false;
  int explored_states = 0;
  int clocks = 0;
};

// sys |= phi iff L(sys) ∩ L(¬phi) is empty; a violation comes with a
// counterexample validated against both the system and the oracle.
inline McResult model_check(TaPtr sys, const Formula& phi,
                            const Limits& limits = {}) {
  Formula neg_core = to_core(f::lnot(phi));
  CompiledTa c = compile(neg_core);
  std::vector<SymmetryGroup> shifted = c.symmetry;
  for (auto& g : shifted) {
    g.code_offset += sys->state_code_width();
    g.clock_offset += sys->num_clocks();
    if (g.acc_offset >= 0) g.acc_offset += sys->num_acceptance_sets();
  }
  TaPtr prod = ta_product(sys, c.ta);
  EmptinessResult r = is_empty(prod, limits, &shifted);
  McResult out;
  out.holds = r.empty;
  out.explored_states = r.explored_states;
  out.clocks = r.clocks;
  if (r.empty) return out;
  for (int attempt = 0; attempt < 2; ++attempt) {
    if (attempt == 1) r = is_empty(prod, limits);  // unreduced fallback
    if (r.empty || !r.lasso) break;
    auto word =
        concretize(*r.lasso, *r.analyzed, r.analyzed->clock_max_consts());
    if (!word) continue;
    UPTimedWord visible = project_word(*word, c.hidden);
    bool ok =
        member_up(*sys, visible, {}, limits) && !satisfies(visible, 1, phi);
    out.counterexample = visible;
    if (ok) {
      out.cex_validated = true;
      break;
    }
  }
  return out;
}

}  // namespace tlkit
