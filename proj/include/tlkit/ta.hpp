// Generalized-Büchi timed automata over letters 2^props, with diagonal-free
// guards.  Locations are opaque integer codes behind a successor interface,
// so the compiler's product states never need an explicit location table.
// Explicit (tabular) automata, synchronous products, degeneralization and
// the strongly-non-Zeno transform all share the same interface.

#pragma once

#include <algorithm>
#include <functional>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tlkit/props.hpp"
#include "tlkit/gamma.hpp"

namespace tlkit {

struct GuardAtom {
  int clock;
  CmpOp op;
  std::int64_t c;
};

struct Guard {
  std::vector<GuardAtom> atoms;  // conjunction; empty = true

  bool satisfied(const std::vector<Rational>& valuation) const {
    for (const auto& a : atoms)
      if (!cmp_holds(valuation[a.clock], a.op, a.c)) return false;
    return true;
  }
  Guard shifted(int clock_offset) const {
    Guard g;
    for (auto a : atoms) {
      a.clock += clock_offset;
      g.atoms.push_back(a);
    }
    return g;
  }
  Guard conjoin(const Guard& other) const {
    Guard g = *this;
    g.atoms.insert(g.atoms.end(), other.atoms.begin(), other.atoms.end());
    return g;
  }
  std::string str(const std::vector<std::string>* clock_names = nullptr) const {
    if (atoms.empty()) return "true";
    std::string s;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      if (i) s += " & ";
      if (clock_names && atoms[i].clock < static_cast<int>(clock_names->size()))
        s += (*clock_names)[atoms[i].clock];
      else
        s += "x" + std::to_string(atoms[i].clock);
      s += cmp_str(atoms[i].op) + std::to_string(atoms[i].c);
    }
    return s;
  }
};

using StateCode = std::vector<int>;

struct TaEdge {
  Guard guard;
  std::vector<int> resets;
  StateCode dst;
};

class TaBase {
 public:
  explicit TaBase(AlphabetPtr alphabet) : alphabet_(std::move(alphabet)) {}
  virtual ~TaBase() = default;

  const AlphabetSpec& alphabet() const { return *alphabet_; }
  AlphabetPtr alphabet_ptr() const { return alphabet_; }

  // Tells the successor enumeration whether a single guard atom can hold in
  // the caller's current context (exact valuation, or zone).  Enumeration
  // may drop moves whose atoms fail before building products; the caller
  // still checks full guards afterwards.
  using AtomFilter = std::function<bool(const GuardAtom&)>;

  virtual int num_clocks() const = 0;
  virtual int num_acceptance_sets() const = 0;
  virtual int state_code_width() const = 0;
  virtual StateCode initial_state() const = 0;
  virtual void successors(const StateCode& state, Letter sigma,
                          std::vector<TaEdge>& out) const = 0;
  // Filtered variant; default ignores the filter.
  virtual void successors_filtered(const StateCode& state, Letter sigma,
                                   const AtomFilter&,
                                   std::vector<TaEdge>& out) const {
    successors(state, sigma, out);
  }
  virtual bool accepting(const StateCode& state, int set_index) const = 0;
  virtual std::vector<std::int64_t> clock_max_consts() const = 0;
  virtual std::string state_label(const StateCode& state) const = 0;
  // Bitmask of clocks that are dead in `state`: never read by any guard
  // before they are next reset.  Analyses may forget their values.
  virtual std::uint64_t irrelevant_clocks(const StateCode&) const { return 0; }

  std::vector<TaEdge> edges(const StateCode& state, Letter sigma) const {
    std::vector<TaEdge> out;
    successors(state, sigma, out);
    return out;
  }

 private:
  AlphabetPtr alphabet_;
};

using TaPtr = std::shared_ptr<const TaBase>;

// ---------------------------------------------------------------------------
// Explicit (tabular) automata
// ---------------------------------------------------------------------------

class ExplicitTa : public TaBase {
 public:
  struct Location {
    std::string name;
    std::vector<int> acc_sets;
  };
  struct Transition {
    int src;
    BoolExprPtr pred;
    BoolExpr::Compiled cpred;
    Guard guard;
    std::vector<int> resets;
    int dst;
  };

  ExplicitTa(AlphabetPtr alphabet, int num_clocks)
      : TaBase(std::move(alphabet)), num_clocks_(num_clocks) {}

  int add_location(std::string name, std::vector<int> acc_sets = {}) {
    locations_.push_back({std::move(name), std::move(acc_sets)});
    for (int s : locations_.back().acc_sets)
      num_acc_ = std::max(num_acc_, s + 1);
    return static_cast<int>(locations_.size()) - 1;
  }
  void set_initial(int loc) { initial_ = loc; }
  void add_transition(int src, BoolExprPtr pred, Guard guard,
                      std::vector<int> resets, int dst) {
    BoolExpr::Compiled c = pred->compile(alphabet());
    transitions_.push_back({src, std::move(pred), std::move(c),
                            std::move(guard), std::move(resets), dst});
  }
  void set_num_acceptance_sets(int n) { num_acc_ = std::max(num_acc_, n); }
  void set_clock_names(std::vector<std::string> names) {
    clock_names_ = std::move(names);
  }
  const std::vector<std::string>& clock_names() const { return clock_names_; }
  const std::vector<Location>& locations() const { return locations_; }
  const std::vector<Transition>& transitions() const { return transitions_; }
  int initial_location() const { return initial_; }

  int num_clocks() const override { return num_clocks_; }
  int num_acceptance_sets() const override { return num_acc_; }
  int state_code_width() const override { return 1; }
  StateCode initial_state() const override { return {initial_}; }

  void successors(const StateCode& state, Letter sigma,
                  std::vector<TaEdge>& out) const override {
    for (const auto& t : transitions_) {
      if (t.src != state[0]) continue;
      if (!t.cpred.eval(sigma)) continue;
      out.push_back({t.guard, t.resets, {t.dst}});
    }
  }
  void successors_filtered(const StateCode& state, Letter sigma,
                           const AtomFilter& filter,
                           std::vector<TaEdge>& out) const override {
    for (const auto& t : transitions_) {
      if (t.src != state[0]) continue;
      if (!t.cpred.eval(sigma)) continue;
      bool ok = true;
      for (const auto& a : t.guard.atoms)
        if (!filter(a)) {
          ok = false;
          break;
        }
      if (ok) out.push_back({t.guard, t.resets, {t.dst}});
    }
  }
  bool accepting(const StateCode& state, int set_index) const override {
    const auto& acc = locations_[state[0]].acc_sets;
    return std::find(acc.begin(), acc.end(), set_index) != acc.end();
  }
  std::vector<std::int64_t> clock_max_consts() const override {
    std::vector<std::int64_t> m(num_clocks_, 0);
    for (const auto& t : transitions_)
      for (const auto& a : t.guard.atoms)
        m[a.clock] = std::max(m[a.clock], a.c);
    return m;
  }
  std::string state_label(const StateCode& state) const override {
    return locations_[state[0]].name;
  }

 private:
  int num_clocks_;
  int num_acc_ = 0;
  int initial_ = 0;
  std::vector<Location> locations_;
  std::vector<Transition> transitions_;
  std::vector<std::string> clock_names_;
};

// ---------------------------------------------------------------------------
// Synchronous product
// ---------------------------------------------------------------------------

class ProductTa : public TaBase {
 public:
  ProductTa(TaPtr a, TaPtr b)
      : TaBase(alphabet_union(a->alphabet(), b->alphabet())),
        a_(std::move(a)),
        b_(std::move(b)) {
    map_a_ = build_map(a_->alphabet());
    map_b_ = build_map(b_->alphabet());
  }

  int num_clocks() const override {
    return a_->num_clocks() + b_->num_clocks();
  }
  int num_acceptance_sets() const override {
    return a_->num_acceptance_sets() + b_->num_acceptance_sets();
  }
  int state_code_width() const override {
    return a_->state_code_width() + b_->state_code_width();
  }
  StateCode initial_state() const override {
    StateCode s = a_->initial_state();
    StateCode t = b_->initial_state();
    s.insert(s.end(), t.begin(), t.end());
    return s;
  }

  void successors(const StateCode& state, Letter sigma,
                  std::vector<TaEdge>& out) const override {
    combine(state, sigma, nullptr, out);
  }
  void successors_filtered(const StateCode& state, Letter sigma,
                           const AtomFilter& filter,
                           std::vector<TaEdge>& out) const override {
    combine(state, sigma, &filter, out);
  }

  bool accepting(const StateCode& state, int set_index) const override {
    auto [sa, sb] = split(state);
    int na = a_->num_acceptance_sets();
    if (set_index < na) return a_->accepting(sa, set_index);
    return b_->accepting(sb, set_index - na);
  }

  std::vector<std::int64_t> clock_max_consts() const override {
    auto m = a_->clock_max_consts();
    auto mb = b_->clock_max_consts();
    m.insert(m.end(), mb.begin(), mb.end());
    return m;
  }

  std::uint64_t irrelevant_clocks(const StateCode& state) const override {
    auto [sa, sb] = split(state);
    return a_->irrelevant_clocks(sa) |
           (b_->irrelevant_clocks(sb) << a_->num_clocks());
  }

  std::string state_label(const StateCode& state) const override {
    auto [sa, sb] = split(state);
    return "(" + a_->state_label(sa) + " . " + b_->state_label(sb) + ")";
  }

 private:
  void combine(const StateCode& state, Letter sigma, const AtomFilter* filter,
               std::vector<TaEdge>& out) const {
    auto [sa, sb] = split(state);
    Letter la = project(sigma, map_a_);
    Letter lb = project(sigma, map_b_);
    int off = a_->num_clocks();
    std::vector<TaEdge> ea, eb;
    if (filter) {
      AtomFilter fb = [&](const GuardAtom& g) {
        GuardAtom h = g;
        h.clock += off;
        return (*filter)(h);
      };
      a_->successors_filtered(sa, la, *filter, ea);
      if (ea.empty()) return;
      b_->successors_filtered(sb, lb, fb, eb);
    } else {
      a_->successors(sa, la, ea);
      if (ea.empty()) return;
      b_->successors(sb, lb, eb);
    }
    for (const auto& x : ea)
      for (const auto& y : eb) {
        TaEdge e;
        e.guard = x.guard.conjoin(y.guard.shifted(off));
        e.resets = x.resets;
        for (int r : y.resets) e.resets.push_back(r + off);
        e.dst = x.dst;
        e.dst.insert(e.dst.end(), y.dst.begin(), y.dst.end());
        out.push_back(std::move(e));
      }
  }

  std::pair<StateCode, StateCode> split(const StateCode& s) const {
    int wa = a_->state_code_width();
    return {StateCode(s.begin(), s.begin() + wa),
            StateCode(s.begin() + wa, s.end())};
  }
  std::vector<int> build_map(const AlphabetSpec& child) const {
    std::vector<int> map(child.size());
    for (std::size_t i = 0; i < child.size(); ++i)
      map[i] = alphabet().index_of(child.props[i]);
    return map;
  }
  static Letter project(Letter sigma, const std::vector<int>& map) {
    Letter out = 0;
    for (std::size_t i = 0; i < map.size(); ++i)
      if (map[i] >= 0 && (sigma & (Letter(1) << map[i])))
        out |= Letter(1) << i;
    return out;
  }

  TaPtr a_, b_;
  std::vector<int> map_a_, map_b_;
};

inline TaPtr ta_product(TaPtr a, TaPtr b) {
  return std::make_shared<ProductTa>(std::move(a), std::move(b));
}

// ---------------------------------------------------------------------------
// Degeneralization
// ---------------------------------------------------------------------------

// Counter construction: state carries the index of the acceptance set it is
// waiting for; entering a location of that set advances the counter.  The
// single acceptance set is "about to wrap".  An input without acceptance
// sets becomes all-accepting.
class DegeneralizedTa : public TaBase {
 public:
  explicit DegeneralizedTa(TaPtr child)
      : TaBase(child->alphabet_ptr()), child_(std::move(child)) {
    n_ = std::max(1, child_->num_acceptance_sets());
    trivial_ = child_->num_acceptance_sets() == 0;
  }

  int num_clocks() const override { return child_->num_clocks(); }
  int num_acceptance_sets() const override { return 1; }
  int state_code_width() const override {
    return child_->state_code_width() + 1;
  }
  StateCode initial_state() const override {
    StateCode s = child_->initial_state();
    s.push_back(0);
    return s;
  }
  void successors(const StateCode& state, Letter sigma,
                  std::vector<TaEdge>& out) const override {
    step(state, sigma, nullptr, out);
  }
  void successors_filtered(const StateCode& state, Letter sigma,
                           const AtomFilter& filter,
                           std::vector<TaEdge>& out) const override {
    step(state, sigma, &filter, out);
  }
  bool accepting(const StateCode& state, int) const override {
    if (trivial_) return true;
    StateCode cs(state.begin(), state.end() - 1);
    int k = state.back();
    return k == n_ - 1 && child_->accepting(cs, n_ - 1);
  }
  std::vector<std::int64_t> clock_max_consts() const override {
    return child_->clock_max_consts();
  }
  std::uint64_t irrelevant_clocks(const StateCode& state) const override {
    StateCode cs(state.begin(), state.end() - 1);
    return child_->irrelevant_clocks(cs);
  }
  std::string state_label(const StateCode& state) const override {
    StateCode cs(state.begin(), state.end() - 1);
    return child_->state_label(cs) + "#" + std::to_string(state.back());
  }

 private:
  void step(const StateCode& state, Letter sigma, const AtomFilter* filter,
            std::vector<TaEdge>& out) const {
    StateCode cs(state.begin(), state.end() - 1);
    int k = state.back();
    std::vector<TaEdge> ce;
    if (filter)
      child_->successors_filtered(cs, sigma, *filter, ce);
    else
      child_->successors(cs, sigma, ce);
    for (auto& e : ce) {
      int kp = k;
      if (!trivial_ && child_->accepting(e.dst, k)) kp = (k + 1) % n_;
      e.dst.push_back(kp);
      out.push_back(std::move(e));
    }
  }

  TaPtr child_;
  int n_;
  bool trivial_;
};

inline TaPtr degeneralize(TaPtr a) {
  return std::make_shared<DegeneralizedTa>(std::move(a));
}

// ---------------------------------------------------------------------------
// Strongly non-Zeno transform
// ---------------------------------------------------------------------------

// Adds a fresh clock z and a flag bit: an edge into an accepting location
// may mark the visit provided z >= 1, resetting z.  Accepting states are
// the marked ones, so every accepting cycle spans at least one time unit.
// Expects a single-acceptance-set child (degeneralize first).
class NonZenoTa : public TaBase {
 public:
  explicit NonZenoTa(TaPtr child)
      : TaBase(child->alphabet_ptr()), child_(std::move(child)) {
    if (child_->num_acceptance_sets() != 1)
      throw std::invalid_argument("NonZenoTa: degeneralize first");
  }

  int num_clocks() const override { return child_->num_clocks() + 1; }
  int num_acceptance_sets() const override { return 1; }
  int state_code_width() const override {
    return child_->state_code_width() + 1;
  }
  StateCode initial_state() const override {
    StateCode s = child_->initial_state();
    s.push_back(0);
    return s;
  }
  void successors(const StateCode& state, Letter sigma,
                  std::vector<TaEdge>& out) const override {
    step(state, sigma, nullptr, out);
  }
  void successors_filtered(const StateCode& state, Letter sigma,
                           const AtomFilter& filter,
                           std::vector<TaEdge>& out) const override {
    step(state, sigma, &filter, out);
  }
  bool accepting(const StateCode& state, int) const override {
    return state.back() == 1;
  }
  std::vector<std::int64_t> clock_max_consts() const override {
    auto m = child_->clock_max_consts();
    m.push_back(1);
    return m;
  }
  std::uint64_t irrelevant_clocks(const StateCode& state) const override {
    StateCode cs(state.begin(), state.end() - 1);
    return child_->irrelevant_clocks(cs);
  }
  std::string state_label(const StateCode& state) const override {
    StateCode cs(state.begin(), state.end() - 1);
    return child_->state_label(cs) + (state.back() ? "!" : "");
  }

 private:
  void step(const StateCode& state, Letter sigma, const AtomFilter* filter,
            std::vector<TaEdge>& out) const {
    StateCode cs(state.begin(), state.end() - 1);
    int z = child_->num_clocks();
    std::vector<TaEdge> ce;
    if (filter)
      child_->successors_filtered(cs, sigma, *filter, ce);
    else
      child_->successors(cs, sigma, ce);
    bool z_ok = !filter || (*filter)(GuardAtom{z, CmpOp::Ge, 1});
    for (auto& e : ce) {
      TaEdge plain = e;
      plain.dst.push_back(0);
      bool acc = child_->accepting(e.dst, 0);
      out.push_back(std::move(plain));
      if (acc && z_ok) {
        TaEdge marked = e;
        marked.guard.atoms.push_back({z, CmpOp::Ge, 1});
        marked.resets.push_back(z);
        marked.dst.push_back(1);
        out.push_back(std::move(marked));
      }
    }
  }

  TaPtr child_;
};

inline TaPtr make_non_zeno(TaPtr a) {
  return std::make_shared<NonZenoTa>(std::move(a));
}

// Generalized-acceptance variant of the non-Zeno transform: keeps the
// child's acceptance sets and appends one more, satisfied by states entered
// through a "z >= 1, reset z" edge.  An accepting SCC then necessarily
// spans at least one time unit per cycle.
class TimeDivergenceTa : public TaBase {
 public:
  explicit TimeDivergenceTa(TaPtr child)
      : TaBase(child->alphabet_ptr()), child_(std::move(child)) {}

  int num_clocks() const override { return child_->num_clocks() + 1; }
  int num_acceptance_sets() const override {
    return child_->num_acceptance_sets() + 1;
  }
  int state_code_width() const override {
    return child_->state_code_width() + 1;
  }
  StateCode initial_state() const override {
    StateCode s = child_->initial_state();
    s.push_back(0);
    return s;
  }
  void successors(const StateCode& state, Letter sigma,
                  std::vector<TaEdge>& out) const override {
    step(state, sigma, nullptr, out);
  }
  void successors_filtered(const StateCode& state, Letter sigma,
                           const AtomFilter& filter,
                           std::vector<TaEdge>& out) const override {
    step(state, sigma, &filter, out);
  }
  bool accepting(const StateCode& state, int i) const override {
    if (i == child_->num_acceptance_sets()) return state.back() == 1;
    StateCode cs(state.begin(), state.end() - 1);
    return child_->accepting(cs, i);
  }
  std::vector<std::int64_t> clock_max_consts() const override {
    auto m = child_->clock_max_consts();
    m.push_back(1);
    return m;
  }
  std::uint64_t irrelevant_clocks(const StateCode& state) const override {
    StateCode cs(state.begin(), state.end() - 1);
    return child_->irrelevant_clocks(cs);
  }
  std::string state_label(const StateCode& state) const override {
    StateCode cs(state.begin(), state.end() - 1);
    return child_->state_label(cs) + (state.back() ? "!" : "");
  }

 private:
  void step(const StateCode& state, Letter sigma, const AtomFilter* filter,
            std::vector<TaEdge>& out) const {
    StateCode cs(state.begin(), state.end() - 1);
    int z = child_->num_clocks();
    std::vector<TaEdge> ce;
    if (filter)
      child_->successors_filtered(cs, sigma, *filter, ce);
    else
      child_->successors(cs, sigma, ce);
    bool z_ok = !filter || (*filter)(GuardAtom{z, CmpOp::Ge, 1});
    for (auto& e : ce) {
      TaEdge plain = e;
      plain.dst.push_back(0);
      out.push_back(std::move(plain));
      if (z_ok) {
        TaEdge marked = std::move(e);
        marked.guard.atoms.push_back({z, CmpOp::Ge, 1});
        marked.resets.push_back(z);
        marked.dst.push_back(1);
        out.push_back(std::move(marked));
      }
    }
  }

  TaPtr child_;
};

// ---------------------------------------------------------------------------
// Structural checks
// ---------------------------------------------------------------------------

// Guards are diagonal-free by construction; for explicit automata this
// verifies the transition table, for symbolic ones it checks every edge of
// the reachable letter graph up to a state budget.
inline bool check_diagonal_free(const TaBase& ta, int max_states = 4096) {
  auto guard_ok = [&](const Guard& g) {
    for (const auto& a : g.atoms)
      if (a.clock < 0 || a.clock >= ta.num_clocks() || a.c < 0) return false;
    return true;
  };
  if (const auto* ex = dynamic_cast<const ExplicitTa*>(&ta)) {
    for (const auto& t : ex->transitions())
      if (!guard_ok(t.guard)) return false;
    return true;
  }
  std::vector<StateCode> todo = {ta.initial_state()};
  std::set<StateCode> seen = {todo.back()};
  Letter max_letter = Letter(1) << ta.alphabet().size();
  std::vector<TaEdge> edges;
  while (!todo.empty() && static_cast<int>(seen.size()) < max_states) {
    StateCode s = todo.back();
    todo.pop_back();
    for (Letter sigma = 0; sigma < max_letter; ++sigma) {
      edges.clear();
      ta.successors(s, sigma, edges);
      for (const auto& e : edges) {
        if (!guard_ok(e.guard)) return false;
        if (seen.insert(e.dst).second) todo.push_back(e.dst);
      }
    }
  }
  return true;
}

}  // namespace tlkit
