// Decision procedures over TaBase automata: exact membership of ultimately
// periodic words (with hidden propositions guessed existentially),
// zone-graph Büchi emptiness with lasso extraction, and concretization of
// symbolic lassos into validated UP words.

#pragma once

#include <chrono>
#include <deque>
#include <map>
#include <numeric>
#include <unordered_map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "tlkit/ta.hpp"
#include "tlkit/timed_word.hpp"
#include "tlkit/zone.hpp"

namespace tlkit {

struct ResourceLimit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Limits {
  int max_states = 1 << 20;
  double timeout_s = 0;  // 0 = unlimited
};

namespace detail {

struct Meter {
  const Limits& limits;
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  void check_time() const {
    if (limits.timeout_s <= 0) return;
    auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                            start)
                  .count();
    if (dt > limits.timeout_s) throw ResourceLimit("time budget exceeded");
  }
  void check_states(int n) const {
    if (n > limits.max_states) throw ResourceLimit("state budget exceeded");
    if ((n & 0x3ff) == 0) check_time();
  }
};

// Iterative Tarjan.  Fills the SCC index of every node; SCCs with at least
// one internal edge are flagged nontrivial.
inline void tarjan_scc(int n, const std::vector<std::vector<int>>& adj,
                       std::vector<int>& comp, std::vector<bool>& nontrivial) {
  comp.assign(n, -1);
  std::vector<int> index(n, -1), low(n, 0), stack;
  std::vector<bool> on_stack(n, false);
  int next_index = 0, next_comp = 0;

  struct Frame {
    int v;
    std::size_t child;
  };
  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    std::vector<Frame> frames = {{root, 0}};
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.child < adj[f.v].size()) {
        int w = adj[f.v][f.child++];
        if (index[w] == -1) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
      } else {
        int v = f.v;
        frames.pop_back();
        if (!frames.empty())
          low[frames.back().v] = std::min(low[frames.back().v], low[v]);
        if (low[v] == index[v]) {
          int c = next_comp++;
          while (true) {
            int w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            comp[w] = c;
            if (w == v) break;
          }
        }
      }
    }
  }
  nontrivial.assign(next_comp, false);
  for (int v = 0; v < n; ++v)
    for (int w : adj[v])
      if (comp[v] == comp[w]) nontrivial[comp[v]] = true;
}

// Successor annotated with the acceptance-set permutation its target was
// canonicalized with (index into a permutation table; -1 = identity).
struct PermSucc {
  int to;
  int perm;
  bool operator==(const PermSucc& o) const {
    return to == o.to && perm == o.perm;
  }
  bool operator<(const PermSucc& o) const {
    return to != o.to ? to < o.to : perm < o.perm;
  }
};

// Generalized-Büchi acceptance over a graph whose edges may permute the
// acceptance sets (symmetry reduction).  A nontrivial SCC accepts when, in
// the slot graph (SCC node, set index) with edges following the
// permutations, the slot-SCC of every set index at a base node contains an
// accepting pair.  Fills per-set witness nodes for lasso construction.
struct AcceptingScc {
  std::vector<int> members;
  std::vector<int> witnesses;  // one node per acceptance set (may repeat)
};

template <typename AccFn>
inline std::optional<AcceptingScc> find_accepting_scc(
    int n, const std::vector<std::vector<PermSucc>>& adj,
    const std::vector<std::vector<int>>& perms, int nacc, AccFn&& accepting) {
  std::vector<std::vector<int>> plain(n);
  for (int v = 0; v < n; ++v)
    for (const auto& s : adj[v]) plain[v].push_back(s.to);
  std::vector<int> comp;
  std::vector<bool> nontrivial;
  tarjan_scc(n, plain, comp, nontrivial);

  std::vector<std::vector<int>> members_of(nontrivial.size());
  for (int v = 0; v < n; ++v) members_of[comp[v]].push_back(v);

  for (std::size_t c = 0; c < nontrivial.size(); ++c) {
    if (!nontrivial[c]) continue;
    const auto& members = members_of[c];
    if (nacc == 0) return AcceptingScc{members, {}};
    std::vector<int> local(n, -1);
    for (std::size_t i = 0; i < members.size(); ++i)
      local[members[i]] = static_cast<int>(i);
    int sn = static_cast<int>(members.size()) * nacc;
    std::vector<std::vector<int>> sadj(sn);
    for (int u : members)
      for (const auto& s : adj[u]) {
        if (comp[s.to] != static_cast<int>(c)) continue;
        for (int i = 0; i < nacc; ++i) {
          int j = s.perm < 0 ? i : perms[s.perm][i];
          sadj[local[u] * nacc + i].push_back(local[s.to] * nacc + j);
        }
      }
    std::vector<int> scomp;
    std::vector<bool> strivial;
    tarjan_scc(sn, sadj, scomp, strivial);
    std::vector<int> witness_of(strivial.size(), -1);
    for (int u : members)
      for (int i = 0; i < nacc; ++i)
        if (accepting(u, i)) {
          int cls = scomp[local[u] * nacc + i];
          if (witness_of[cls] < 0) witness_of[cls] = u;
        }
    int base = members[0];
    std::vector<int> witnesses(nacc);
    bool ok = true;
    for (int i = 0; i < nacc && ok; ++i) {
      int w = witness_of[scomp[local[base] * nacc + i]];
      if (w < 0)
        ok = false;
      else
        witnesses[i] = w;
    }
    if (ok) return AcceptingScc{members, std::move(witnesses)};
  }
  return std::nullopt;
}

// A membership-graph node: the class of the event about to be read, the
// location code, and the clock valuation at that event's timestamp, scaled
// to integers by the word's common time denominator.
struct MemNode {
  int cls;
  StateCode state;
  std::vector<std::int64_t> val;
  bool operator==(const MemNode& b) const {
    return cls == b.cls && state == b.state && val == b.val;
  }
};

struct MemNodeHash {
  std::size_t operator()(const MemNode& n) const {
    std::size_t h = static_cast<std::size_t>(n.cls) * 0x9e3779b9u;
    for (int x : n.state) h = h * 1000003u + static_cast<std::size_t>(x + 7);
    for (auto v : n.val) h = h * 1000003u + static_cast<std::size_t>(v + 13);
    return h;
  }
};

inline bool cmp_holds_scaled(std::int64_t v, CmpOp op, std::int64_t c) {
  switch (op) {
    case CmpOp::Le: return v <= c;
    case CmpOp::Lt: return v < c;
    case CmpOp::Ge: return v >= c;
    case CmpOp::Gt: return v > c;
  }
  return false;
}

// A zone-graph node.
struct ZgNode {
  StateCode state;
  Zone zone;
  bool operator<(const ZgNode& b) const {
    if (state != b.state) return state < b.state;
    return zone < b.zone;
  }
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Membership of ultimately periodic words
// ---------------------------------------------------------------------------

// Layout of one block of interchangeable sub-components inside a product
// state: sub-component t occupies code ints [code_offset + t*sub_width, ...),
// clock clock_offset + t and, when acc_offset >= 0, acceptance set
// acc_offset + t.  Sorting the sub-components of a block (together with
// their clock values) is a TA automorphism, which member_up exploits as a
// symmetry reduction.
struct SymmetryGroup {
  int code_offset;
  int clock_offset;
  int acc_offset;  // -1 when the block contributes no acceptance sets
  int subs;
  int sub_width;
};

// Exact membership of `w` in the language of `ta`, with the propositions of
// `hidden` guessed existentially at every position.  Configurations carry
// the clock valuation at the moment the next event is read, saturated one
// above the per-clock maximum constant; positions collapse to prefix
// indices plus loop phases, which keeps the graph finite.  Acceptance is
// generalized-Büchi via SCC analysis; under symmetry reduction the per-sub
// acceptance sets are tracked through the sort permutations with a slot
// graph per SCC (a quotient cycle may rotate sub-components, so a set is
// satisfied when its orbit meets an accepting slot).
inline bool member_up(const TaBase& ta, const UPTimedWord& w,
                      const std::set<PropId>& hidden = {},
                      const Limits& limits = {},
                      const std::vector<SymmetryGroup>* symmetry = nullptr) {
  w.validate();
  detail::Meter meter{limits};
  const AlphabetSpec& spec = ta.alphabet();
  int p = w.prefix_len(), l = w.loop_len();
  int classes = p + l;

  // Common denominator of all timestamps; valuations become integers.
  std::int64_t den = w.period.den();
  for (const auto& e : w.prefix) den = std::lcm(den, e.time.den());
  for (const auto& e : w.loop) den = std::lcm(den, e.time.den());
  auto scaled = [&](const Rational& r) {
    return r.num() * (den / r.den());
  };

  // Per class: base letter, successor class, and the delay between this
  // event and the next one (constant across loop iterations).
  std::vector<Letter> base(classes);
  std::vector<int> next_class(classes);
  std::vector<std::int64_t> delay_out(classes);
  for (int c = 0; c < classes; ++c) {
    base[c] = spec.mask_of(w.event_at(c + 1).letter);
    next_class[c] = c + 1 < classes ? c + 1 : p;
    delay_out[c] = scaled(w.time_at(c + 2)) - scaled(w.time_at(c + 1));
  }
  std::int64_t first_delay = scaled(w.time_at(1));

  std::vector<int> hidden_bits;
  for (std::size_t i = 0; i < spec.size(); ++i)
    if (hidden.count(spec.props[i])) hidden_bits.push_back(static_cast<int>(i));
  Letter hidden_count = Letter(1) << hidden_bits.size();

  auto raw_consts = ta.clock_max_consts();
  std::vector<std::int64_t> max_consts, sat_at;
  for (auto m : raw_consts) {
    max_consts.push_back(m * den);
    sat_at.push_back((m + 1) * den);
  }
  int nacc = ta.num_acceptance_sets();

  // Canonicalize a (state, valuation) pair; returns the acceptance-set
  // permutation applied (empty = identity), mapping old set index to new.
  std::vector<int> order, code_buf;
  std::vector<std::int64_t> clock_buf;
  auto canonicalize = [&](StateCode& state, std::vector<std::int64_t>& val) {
    std::vector<int> acc_perm;
    if (!symmetry) return acc_perm;
    for (const auto& g : *symmetry) {
      order.resize(g.subs);
      for (int t = 0; t < g.subs; ++t) order[t] = t;
      auto key_less = [&](int x, int y) {
        for (int k = 0; k < g.sub_width; ++k) {
          int a = state[g.code_offset + x * g.sub_width + k];
          int b = state[g.code_offset + y * g.sub_width + k];
          if (a != b) return a < b;
        }
        return val[g.clock_offset + x] < val[g.clock_offset + y];
      };
      std::stable_sort(order.begin(), order.end(), key_less);
      bool id = true;
      for (int t = 0; t < g.subs; ++t)
        if (order[t] != t) id = false;
      if (id) continue;
      code_buf.assign(g.subs * g.sub_width, 0);
      clock_buf.assign(g.subs, 0);
      for (int t = 0; t < g.subs; ++t) {
        for (int k = 0; k < g.sub_width; ++k)
          code_buf[t * g.sub_width + k] =
              state[g.code_offset + order[t] * g.sub_width + k];
        clock_buf[t] = val[g.clock_offset + order[t]];
      }
      for (int t = 0; t < g.subs; ++t) {
        for (int k = 0; k < g.sub_width; ++k)
          state[g.code_offset + t * g.sub_width + k] =
              code_buf[t * g.sub_width + k];
        val[g.clock_offset + t] = clock_buf[t];
      }
      if (g.acc_offset >= 0) {
        if (acc_perm.empty()) {
          acc_perm.resize(nacc);
          for (int i = 0; i < nacc; ++i) acc_perm[i] = i;
        }
        for (int t = 0; t < g.subs; ++t)
          acc_perm[g.acc_offset + order[t]] = g.acc_offset + t;
      }
    }
    return acc_perm;
  };

  using Node = detail::MemNode;
  std::unordered_map<Node, int, detail::MemNodeHash> ids;
  std::vector<const Node*> nodes;
  using Succ = detail::PermSucc;
  std::vector<std::vector<Succ>> adj;
  std::vector<std::vector<int>> perms;
  std::map<std::vector<int>, int> perm_ids;
  auto intern_perm = [&](std::vector<int> pm) {
    if (pm.empty()) return -1;
    auto [it, fresh] =
        perm_ids.emplace(std::move(pm), static_cast<int>(perms.size()));
    if (fresh) perms.push_back(it->first);
    return it->second;
  };
  auto intern = [&](Node n) {
    auto [it, fresh] =
        ids.emplace(std::move(n), static_cast<int>(nodes.size()));
    if (fresh) {
      nodes.push_back(&it->first);
      adj.emplace_back();
      meter.check_states(static_cast<int>(nodes.size()));
    }
    return it->second;
  };

  {
    std::vector<std::int64_t> v0(ta.num_clocks(), first_delay);
    for (std::size_t x = 0; x < v0.size(); ++x)
      if (v0[x] > max_consts[x]) v0[x] = sat_at[x];
    StateCode s0 = ta.initial_state();
    canonicalize(s0, v0);
    intern(Node{0, std::move(s0), std::move(v0)});
  }

  std::vector<TaEdge> edges;
  for (int v = 0; v < static_cast<int>(nodes.size()); ++v) {
    const Node cur = *nodes[v];  // copy: nodes may reallocate below
    const std::int64_t dt = delay_out[cur.cls];
    TaBase::AtomFilter filter = [&](const GuardAtom& g) {
      return detail::cmp_holds_scaled(cur.val[g.clock], g.op, g.c * den);
    };
    for (Letter h = 0; h < hidden_count; ++h) {
      Letter sigma = base[cur.cls];
      for (std::size_t bi = 0; bi < hidden_bits.size(); ++bi)
        if (h & (Letter(1) << bi)) sigma |= Letter(1) << hidden_bits[bi];
      edges.clear();
      ta.successors_filtered(cur.state, sigma, filter, edges);
      for (const auto& e : edges) {
        bool ok = true;
        for (const auto& g : e.guard.atoms)
          if (!detail::cmp_holds_scaled(cur.val[g.clock], g.op, g.c * den)) {
            ok = false;
            break;
          }
        if (!ok) continue;
        std::vector<std::int64_t> nv = cur.val;
        for (int r : e.resets) nv[r] = 0;
        for (auto& x : nv) x += dt;
        for (std::size_t x = 0; x < nv.size(); ++x)
          if (nv[x] > max_consts[x]) nv[x] = sat_at[x];
        StateCode ns = e.dst;
        int perm = intern_perm(canonicalize(ns, nv));
        int to = intern(Node{next_class[cur.cls], std::move(ns), std::move(nv)});
        adj[v].push_back({to, perm});  // intern may reallocate adj
      }
    }
    auto& av = adj[v];
    std::sort(av.begin(), av.end());
    av.erase(std::unique(av.begin(), av.end()), av.end());
  }

  auto acc = detail::find_accepting_scc(
      static_cast<int>(nodes.size()), adj, perms, nacc,
      [&](int u, int i) { return ta.accepting(nodes[u]->state, i); });
  return acc.has_value();
}

// ---------------------------------------------------------------------------
// Zone graph and emptiness
// ---------------------------------------------------------------------------

// One symbolic transition with everything needed to replay it concretely.
struct LassoStep {
  Letter letter;
  Guard guard;
  std::vector<int> resets;
  StateCode dst;
};

struct Lasso {
  std::vector<LassoStep> stem;
  std::vector<LassoStep> cycle;  // starts and ends at the same symbolic state
};

struct EmptinessResult {
  bool empty = true;
  std::optional<Lasso> lasso;
  TaPtr analyzed;  // the degeneralized, non-Zeno automaton the lasso lives in
  int explored_states = 0;
  int clocks = 0;
};

// zone_succ: up-closure, guard intersection, reset, then forgetting of
// clocks dead in the target location, and extrapolation.  Returns nullopt
// when the guard cuts the zone to nothing.
inline std::optional<Zone> zone_succ(
    const Zone& z, const Guard& guard, const std::vector<int>& resets,
    const std::vector<std::int64_t>& max_consts, std::uint64_t dead = 0) {
  Zone s = z;
  s.up();
  for (const auto& a : guard.atoms) s.constrain(a.clock, a.op, a.c);
  s.canonicalize();
  if (s.is_empty()) return std::nullopt;
  for (int r : resets) s.reset(r);
  for (int x = 0; dead; ++x, dead >>= 1)
    if (dead & 1) s.free_clock(x);
  s.extrapolate(max_consts);
  if (s.is_empty()) return std::nullopt;
  return s;
}

// Büchi emptiness on the extrapolated zone graph of the time-divergence
// wrapped automaton, with generalized acceptance decided through the
// slot-graph analysis (so symmetry reduction can permute acceptance sets).
// When nonempty, returns a lasso whose cycle visits a witness state for
// every acceptance set.
inline EmptinessResult is_empty(TaPtr ta, const Limits& limits = {},
                                const std::vector<SymmetryGroup>* symmetry =
                                    nullptr) {
  detail::Meter meter{limits};
  TaPtr a = std::make_shared<TimeDivergenceTa>(std::move(ta));
  auto max_consts = a->clock_max_consts();
  int nacc = a->num_acceptance_sets();
  Letter nletters = Letter(1) << a->alphabet().size();

  // Canonical reordering of interchangeable sub-components, with the zone
  // permuted alongside.  Subs are keyed by their state code, ties broken by
  // the per-clock zone bounds; the result is deterministic and automorphic.
  auto canonicalize = [&](StateCode& state, Zone& zone) {
    std::vector<int> acc_perm;
    if (!symmetry) return acc_perm;
    std::vector<int> clock_order(a->num_clocks());
    for (std::size_t i = 0; i < clock_order.size(); ++i)
      clock_order[i] = static_cast<int>(i);
    bool any = false;
    for (const auto& g : *symmetry) {
      std::vector<int> order(g.subs);
      for (int t = 0; t < g.subs; ++t) order[t] = t;
      auto key_less = [&](int x, int y) {
        for (int k = 0; k < g.sub_width; ++k) {
          int ax = state[g.code_offset + x * g.sub_width + k];
          int ay = state[g.code_offset + y * g.sub_width + k];
          if (ax != ay) return ax < ay;
        }
        int cx = g.clock_offset + x + 1, cy = g.clock_offset + y + 1;
        if (!(zone.at(cx, 0) == zone.at(cy, 0)))
          return zone.at(cx, 0) < zone.at(cy, 0);
        return zone.at(0, cx) < zone.at(0, cy);
      };
      std::stable_sort(order.begin(), order.end(), key_less);
      bool id = true;
      for (int t = 0; t < g.subs; ++t)
        if (order[t] != t) id = false;
      if (id) continue;
      any = true;
      std::vector<int> code(g.subs * g.sub_width);
      for (int t = 0; t < g.subs; ++t)
        for (int k = 0; k < g.sub_width; ++k)
          code[t * g.sub_width + k] =
              state[g.code_offset + order[t] * g.sub_width + k];
      for (int t = 0; t < g.subs; ++t)
        for (int k = 0; k < g.sub_width; ++k)
          state[g.code_offset + t * g.sub_width + k] = code[t * g.sub_width + k];
      for (int t = 0; t < g.subs; ++t)
        clock_order[g.clock_offset + t] = g.clock_offset + order[t];
      if (g.acc_offset >= 0) {
        if (acc_perm.empty()) {
          acc_perm.resize(nacc);
          for (int i = 0; i < nacc; ++i) acc_perm[i] = i;
        }
        for (int t = 0; t < g.subs; ++t)
          acc_perm[g.acc_offset + order[t]] = g.acc_offset + t;
      }
    }
    if (any) zone = zone.permuted(clock_order);
    return acc_perm;
  };

  using NodeKey = detail::ZgNode;
  std::map<NodeKey, int> ids;
  std::vector<const NodeKey*> nodes;
  std::vector<std::vector<detail::PermSucc>> adj;
  std::vector<std::vector<int>> perms;
  std::map<std::vector<int>, int> perm_ids;
  struct EdgeInfo {
    int dst;
    LassoStep step;
  };
  std::vector<std::vector<EdgeInfo>> edge_info;

  auto intern_perm = [&](std::vector<int> pm) {
    if (pm.empty()) return -1;
    auto [it, fresh] =
        perm_ids.emplace(std::move(pm), static_cast<int>(perms.size()));
    if (fresh) perms.push_back(it->first);
    return it->second;
  };
  auto intern = [&](NodeKey k) {
    auto [it, fresh] =
        ids.emplace(std::move(k), static_cast<int>(nodes.size()));
    if (fresh) {
      nodes.push_back(&it->first);
      adj.emplace_back();
      edge_info.emplace_back();
      meter.check_states(static_cast<int>(nodes.size()));
    }
    return it->second;
  };

  {
    Zone z0(a->num_clocks());
    StateCode s0 = a->initial_state();
    canonicalize(s0, z0);
    intern(NodeKey{std::move(s0), std::move(z0)});
  }

  std::vector<TaEdge> edges;
  for (int v = 0; v < static_cast<int>(nodes.size()); ++v) {
    const NodeKey cur = *nodes[v];
    // Per-atom feasibility within the time-elapsed zone: upper bounds fail
    // only against the clock's zone lower bound; lower bounds always become
    // satisfiable after elapse.
    TaBase::AtomFilter filter = [&cur](const GuardAtom& g) {
      if (g.op == CmpOp::Ge || g.op == CmpOp::Gt) return true;
      DbmBound atom{g.c, g.op == CmpOp::Lt, false};
      return !(atom + cur.zone.at(0, g.clock + 1) < DbmBound::le(0));
    };
    for (Letter sigma = 0; sigma < nletters; ++sigma) {
      edges.clear();
      a->successors_filtered(cur.state, sigma, filter, edges);
      for (const auto& e : edges) {
        auto z = zone_succ(cur.zone, e.guard, e.resets, max_consts,
                           a->irrelevant_clocks(e.dst));
        if (!z) continue;
        StateCode ns = e.dst;
        int perm = intern_perm(canonicalize(ns, *z));
        int to = intern(NodeKey{ns, std::move(*z)});
        adj[v].push_back({to, perm});
        edge_info[v].push_back({to, {sigma, e.guard, e.resets, e.dst}});
      }
    }
  }

  EmptinessResult res;
  res.analyzed = a;
  res.explored_states = static_cast<int>(nodes.size());
  res.clocks = a->num_clocks();

  auto acc = detail::find_accepting_scc(
      static_cast<int>(nodes.size()), adj, perms, nacc,
      [&](int u, int i) { return a->accepting(nodes[u]->state, i); });
  if (!acc) return res;
  res.empty = false;

  // Lasso assembly: BFS paths between nodes, optionally restricted to the
  // SCC.  The cycle tours one witness per acceptance set and returns to the
  // base; when the reduction permuted sub-components the concrete word is
  // validated downstream (and the caller may fall back to an unreduced run).
  std::vector<int> in_scc(nodes.size(), 0);
  for (int m : acc->members) in_scc[m] = 1;
  auto bfs = [&](int from, int to, bool within, std::vector<LassoStep>& out) {
    out.clear();
    if (from == to) return true;
    std::vector<int> pred(nodes.size(), -1), pred_edge(nodes.size(), -1);
    std::deque<int> queue = {from};
    std::vector<bool> seen(nodes.size(), false);
    seen[from] = true;
    bool found = false;
    while (!queue.empty() && !found) {
      int x = queue.front();
      queue.pop_front();
      for (std::size_t k = 0; k < edge_info[x].size(); ++k) {
        int y = edge_info[x][k].dst;
        if (within && !in_scc[y]) continue;
        if (seen[y]) continue;
        seen[y] = true;
        pred[y] = x;
        pred_edge[y] = static_cast<int>(k);
        if (y == to) {
          found = true;
          break;
        }
        queue.push_back(y);
      }
    }
    if (!found) return false;
    std::vector<LassoStep> rev;
    int x = to;
    while (pred[x] != -1) {
      rev.push_back(edge_info[pred[x]][pred_edge[x]].step);
      x = pred[x];
    }
    out.assign(rev.rbegin(), rev.rend());
    return true;
  };

  int base = acc->members[0];
  Lasso lasso;
  bfs(0, base, false, lasso.stem);
  // Distinct witness stops, preserving order.
  std::vector<int> stops;
  for (int w : acc->witnesses)
    if (std::find(stops.begin(), stops.end(), w) == stops.end())
      stops.push_back(w);
  std::vector<LassoStep> segment;
  int cur_node = base;
  for (int w : stops) {
    if (!bfs(cur_node, w, true, segment)) return res;
    lasso.cycle.insert(lasso.cycle.end(), segment.begin(), segment.end());
    cur_node = w;
  }
  if (!bfs(cur_node, base, true, segment)) return res;
  lasso.cycle.insert(lasso.cycle.end(), segment.begin(), segment.end());
  if (lasso.cycle.empty()) {
    // base == all witnesses: take any internal edge and return.
    for (std::size_t k = 0; k < edge_info[base].size(); ++k) {
      int y = edge_info[base][k].dst;
      if (!in_scc[y]) continue;
      if (!bfs(y, base, true, segment)) continue;
      lasso.cycle.push_back(edge_info[base][k].step);
      lasso.cycle.insert(lasso.cycle.end(), segment.begin(), segment.end());
      break;
    }
  }
  if (lasso.cycle.empty()) {
    res.lasso.reset();
    return res;
  }
  res.lasso = std::move(lasso);
  return res;
}

// ---------------------------------------------------------------------------
// Concretization
// ---------------------------------------------------------------------------

// Replays a symbolic lasso with concrete delays, unrolling the cycle until
// the saturated valuation repeats at the cycle head; the repeating segment
// becomes the loop of a UP word.  Failure (no feasible delay choice, or no
// repeat within the iteration budget) is a legal outcome.
inline std::optional<UPTimedWord> concretize(
    const Lasso& lasso, const TaBase& ta,
    const std::vector<std::int64_t>& max_consts, int max_iterations = 64) {
  const AlphabetSpec& spec = ta.alphabet();
  std::vector<Rational> val(max_consts.size(), Rational(0));
  Rational now(0);
  std::vector<TimedEvent> events;

  auto step = [&](const LassoStep& s) -> bool {
    // Feasible delay interval for the guard at the current valuation.
    Rational lo(0), hi(0);
    bool lo_strict = false, hi_strict = false, hi_inf = true;
    for (const auto& g : s.guard.atoms) {
      Rational bound = Rational(g.c) - val[g.clock];
      switch (g.op) {
        case CmpOp::Ge:
          if (bound > lo) {
            lo = bound;
            lo_strict = false;
          }
          break;
        case CmpOp::Gt:
          if (bound > lo) {
            lo = bound;
            lo_strict = true;
          } else if (bound == lo) {
            lo_strict = true;
          }
          break;
        case CmpOp::Le:
          if (hi_inf || bound < hi) {
            hi = bound;
            hi_strict = false;
            hi_inf = false;
          }
          break;
        case CmpOp::Lt:
          if (hi_inf || bound < hi || bound == hi) {
            hi = bound;
            hi_strict = true;
            hi_inf = false;
          }
          break;
      }
    }
    if (lo < Rational(0)) {
      lo = Rational(0);
      lo_strict = false;
    }
    Rational dt;
    if (hi_inf) {
      dt = lo_strict ? lo + Rational(1, 2) : lo;
    } else {
      if (hi < lo || (hi == lo && (lo_strict || hi_strict))) return false;
      if (!lo_strict)
        dt = lo;
      else
        dt = (lo + hi) / Rational(2);
    }
    for (auto& x : val) x += dt;
    now += dt;
    if (!s.guard.satisfied(val)) return false;
    for (int r : s.resets) val[r] = Rational(0);
    events.push_back({spec.set_of(s.letter), now});
    return true;
  };

  for (const auto& s : lasso.stem)
    if (!step(s)) return std::nullopt;

  auto saturated = [&]() {
    std::vector<Rational> v = val;
    for (std::size_t x = 0; x < v.size(); ++x)
      if (v[x] > Rational(max_consts[x])) v[x] = Rational(max_consts[x] + 1);
    return v;
  };

  std::map<std::vector<Rational>, std::pair<int, Rational>> seen;
  seen[saturated()] = {static_cast<int>(events.size()), now};
  for (int iter = 0; iter < max_iterations; ++iter) {
    for (const auto& s : lasso.cycle)
      if (!step(s)) return std::nullopt;
    auto key = saturated();
    auto it = seen.find(key);
    if (it != seen.end()) {
      int start_idx = it->second.first;
      Rational start_time = it->second.second;
      Rational period = now - start_time;
      if (!(period > Rational(0))) return std::nullopt;
      UPTimedWord w;
      w.prefix.assign(events.begin(), events.begin() + start_idx);
      Rational base = w.prefix.empty() ? Rational(0) : w.prefix.back().time;
      for (int k = start_idx; k < static_cast<int>(events.size()); ++k)
        w.loop.push_back({events[k].letter, events[k].time - base});
      w.period = period;
      try {
        w.validate();
      } catch (const std::exception&) {
        return std::nullopt;
      }
      return w;
    }
    seen[key] = {static_cast<int>(events.size()), now};
  }
  return std::nullopt;
}

}  // namespace tlkit
