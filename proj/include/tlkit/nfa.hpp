// NFAs over argument-index alphabets {1..n}.  These are the payloads of
// automata modalities.  Besides the basic structure this header provides
// the subset-step relations used by the component construction, products,
// subset-construction determinization and finite-word membership (the
// latter mostly for brute-force checks in tests).

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

// Location subsets are bitmasks; modality automata stay well below 32
// locations at the scales this tool targets.
using LocSet = std::uint32_t;

struct Nfa {
  int arity = 0;  // alphabet is {1..arity}
  int num_locations = 0;
  int initial = 0;
  std::set<int> finals;
  // transitions[s][a-1] = successor locations of s on argument index a
  std::vector<std::vector<std::vector<int>>> transitions;
  std::string name;  // used by the text format and printing

  static Nfa make(int arity, int locations, int initial) {
    Nfa a;
    a.arity = arity;
    a.num_locations = locations;
    a.initial = initial;
    a.transitions.assign(locations, std::vector<std::vector<int>>(arity));
    return a;
  }

  void add_transition(int src, int arg, int dst) {
    if (src < 0 || src >= num_locations || dst < 0 || dst >= num_locations)
      throw std::invalid_argument("nfa: transition endpoint out of range");
    if (arg < 1 || arg > arity)
      throw std::invalid_argument("nfa: argument index out of range");
    auto& v = transitions[src][arg - 1];
    if (std::find(v.begin(), v.end(), dst) == v.end()) v.push_back(dst);
  }
  // A transition on every argument index (the ⊤ label of gadget figures).
  void add_top_transition(int src, int dst) {
    for (int a = 1; a <= arity; ++a) add_transition(src, a, dst);
  }

  bool is_final(int s) const { return finals.count(s) != 0; }

  bool deterministic() const {
    for (int s = 0; s < num_locations; ++s)
      for (int a = 0; a < arity; ++a)
        if (transitions[s][a].size() > 1) return false;
    return true;
  }

  friend bool operator==(const Nfa& a, const Nfa& b) {
    return a.arity == b.arity && a.num_locations == b.num_locations &&
           a.initial == b.initial && a.finals == b.finals &&
           a.transitions == b.transitions;
  }

  std::size_t structure_hash() const {
    std::size_t h = std::hash<int>()(arity) * 31 + num_locations;
    h = h * 31 + initial;
    for (int f : finals) h = h * 31 + f;
    for (int s = 0; s < num_locations; ++s)
      for (int a = 0; a < arity; ++a)
        for (int d : transitions[s][a]) h = h * 1000003u + (s * 97 + a) * 131 + d;
    return h;
  }
};

using NfaPtr = std::shared_ptr<const Nfa>;

inline NfaPtr share(Nfa a) { return std::make_shared<const Nfa>(std::move(a)); }

// ---------------------------------------------------------------------------
// Subset steps
// ---------------------------------------------------------------------------

namespace detail {
inline std::vector<int> set_bits(LocSet s) {
  std::vector<int> out;
  for (int i = 0; s; ++i, s >>= 1)
    if (s & 1) out.push_back(i);
  return out;
}
}  // namespace detail

// Existential step: all ⊆-minimal sets T such that every s in `src` has an
// enabled transition (s,a,s') with sat[a-1] and s' in T.  Returns {∅} for
// empty src; returns the empty list when some source location is stuck.
inline std::vector<LocSet> step_or(const Nfa& a, LocSet src,
                                   const std::vector<bool>& sat) {
  std::vector<int> srcs = detail::set_bits(src);
  // Enabled successor sets per source location.
  std::vector<std::vector<int>> options;
  for (int s : srcs) {
    std::vector<int> opts;
    for (int arg = 0; arg < a.arity; ++arg) {
      if (!sat[arg]) continue;
      for (int d : a.transitions[s][arg])
        if (std::find(opts.begin(), opts.end(), d) == opts.end())
          opts.push_back(d);
    }
    if (opts.empty()) return {};  // obligation branch dies
    std::sort(opts.begin(), opts.end());
    options.push_back(std::move(opts));
  }
  // Enumerate choice functions, collect images.
  std::vector<LocSet> images = {0};
  for (const auto& opts : options) {
    std::vector<LocSet> next;
    for (LocSet img : images)
      for (int d : opts) next.push_back(img | (LocSet(1) << d));
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    images = std::move(next);
  }
  // Keep only ⊆-minimal images; order by value for determinism.
  std::vector<LocSet> minimal;
  for (LocSet t : images) {
    bool dominated = false;
    for (LocSet u : images)
      if (u != t && (u & t) == u) {
        dominated = true;
        break;
      }
    if (!dominated) minimal.push_back(t);
  }
  std::sort(minimal.begin(), minimal.end());
  return minimal;
}

// Universal step: the unique minimal T containing the successor of every
// transition from `src` whose argument is not discharged by the letter.
inline LocSet step_and(const Nfa& a, LocSet src, const std::vector<bool>& sat) {
  LocSet t = 0;
  for (int s : detail::set_bits(src))
    for (int arg = 0; arg < a.arity; ++arg) {
      if (sat[arg]) continue;
      for (int d : a.transitions[s][arg]) t |= LocSet(1) << d;
    }
  return t;
}

// ---------------------------------------------------------------------------
// Product, determinization, trimming
// ---------------------------------------------------------------------------

// Synchronous product; locations are reachable pairs, final iff both
// components are final.  Language = intersection on finite words.
inline Nfa nfa_product(const Nfa& a, const Nfa& b) {
  if (a.arity != b.arity)
    throw std::invalid_argument("nfa_product: alphabet mismatch");
  std::map<std::pair<int, int>, int> ids;
  std::vector<std::pair<int, int>> order;
  auto intern = [&](int s, int t) {
    auto key = std::make_pair(s, t);
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    int id = static_cast<int>(order.size());
    ids[key] = id;
    order.push_back(key);
    return id;
  };
  intern(a.initial, b.initial);
  std::vector<std::vector<std::vector<int>>> trans;
  for (std::size_t i = 0; i < order.size(); ++i) {
    auto [s, t] = order[i];
    std::vector<std::vector<int>> row(a.arity);
    for (int arg = 0; arg < a.arity; ++arg)
      for (int sd : a.transitions[s][arg])
        for (int td : b.transitions[t][arg])
          row[arg].push_back(intern(sd, td));
    trans.push_back(std::move(row));
  }
  Nfa p = Nfa::make(a.arity, static_cast<int>(order.size()), 0);
  p.transitions = std::move(trans);
  for (std::size_t i = 0; i < order.size(); ++i) {
    auto [s, t] = order[i];
    if (a.is_final(s) && b.is_final(t)) p.finals.insert(static_cast<int>(i));
  }
  p.name = a.name.empty() ? b.name : a.name + "*" + b.name;
  return p;
}

// Subset construction.  Only reachable subsets are produced, so finals that
// were unreachable in the input never materialize.
inline Nfa determinize(const Nfa& a) {
  std::map<LocSet, int> ids;
  std::vector<LocSet> order;
  auto intern = [&](LocSet s) {
    auto it = ids.find(s);
    if (it != ids.end()) return it->second;
    int id = static_cast<int>(order.size());
    ids[s] = id;
    order.push_back(s);
    return id;
  };
  intern(LocSet(1) << a.initial);
  std::vector<std::vector<std::vector<int>>> trans;
  for (std::size_t i = 0; i < order.size(); ++i) {
    LocSet cur = order[i];
    std::vector<std::vector<int>> row(a.arity);
    for (int arg = 0; arg < a.arity; ++arg) {
      LocSet dst = 0;
      for (int s : detail::set_bits(cur))
        for (int d : a.transitions[s][arg]) dst |= LocSet(1) << d;
      if (dst != 0) row[arg].push_back(intern(dst));
    }
    trans.push_back(std::move(row));
  }
  Nfa d = Nfa::make(a.arity, static_cast<int>(order.size()), 0);
  d.transitions = std::move(trans);
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (int s : detail::set_bits(order[i]))
      if (a.is_final(s)) {
        d.finals.insert(static_cast<int>(i));
        break;
      }
  }
  d.name = a.name.empty() ? "" : a.name + ".det";
  return d;
}

// Removes locations that are unreachable or cannot reach a final location.
// Language-preserving; keeps the initial location even when dead so the
// result stays well-formed.
inline Nfa trim(const Nfa& a) {
  std::vector<bool> reach(a.num_locations, false);
  std::vector<int> stack = {a.initial};
  reach[a.initial] = true;
  while (!stack.empty()) {
    int s = stack.back();
    stack.pop_back();
    for (int arg = 0; arg < a.arity; ++arg)
      for (int d : a.transitions[s][arg])
        if (!reach[d]) {
          reach[d] = true;
          stack.push_back(d);
        }
  }
  std::vector<bool> alive(a.num_locations, false);
  for (int f : a.finals) alive[f] = true;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int s = 0; s < a.num_locations; ++s) {
      if (alive[s]) continue;
      for (int arg = 0; arg < a.arity && !alive[s]; ++arg)
        for (int d : a.transitions[s][arg])
          if (alive[d]) {
            alive[s] = true;
            changed = true;
            break;
          }
    }
  }
  std::vector<int> remap(a.num_locations, -1);
  int next = 0;
  for (int s = 0; s < a.num_locations; ++s)
    if ((reach[s] && alive[s]) || s == a.initial) remap[s] = next++;
  Nfa t = Nfa::make(a.arity, next, remap[a.initial]);
  for (int s = 0; s < a.num_locations; ++s) {
    if (remap[s] < 0) continue;
    for (int arg = 0; arg < a.arity; ++arg)
      for (int d : a.transitions[s][arg])
        if (remap[d] >= 0 && reach[s] && alive[d])
          t.add_transition(remap[s], arg + 1, remap[d]);
    if (a.is_final(s)) t.finals.insert(remap[s]);
  }
  t.name = a.name;
  return t;
}

// Forward-bisimulation quotient: merges locations with equal acceptance
// status and block-equal successor sets on every argument.  Language- and
// step-relation-preserving; used to shrink gadget products.
inline Nfa bisim_quotient(const Nfa& a) {
  std::vector<int> block(a.num_locations);
  for (int s = 0; s < a.num_locations; ++s) block[s] = a.is_final(s) ? 1 : 0;
  bool changed = true;
  while (changed) {
    changed = false;
    std::map<std::vector<int>, int> sig_ids;
    std::vector<int> next_block(a.num_locations);
    for (int s = 0; s < a.num_locations; ++s) {
      std::vector<int> sig = {block[s]};
      for (int arg = 0; arg < a.arity; ++arg) {
        std::set<int> succ;
        for (int d : a.transitions[s][arg]) succ.insert(block[d]);
        sig.push_back(-1);
        for (int b : succ) sig.push_back(b);
      }
      auto [it, fresh] =
          sig_ids.emplace(std::move(sig), static_cast<int>(sig_ids.size()));
      next_block[s] = it->second;
    }
    if (next_block != block) {
      block = std::move(next_block);
      changed = true;
    }
  }
  int nb = 0;
  for (int b : block) nb = std::max(nb, b + 1);
  Nfa q = Nfa::make(a.arity, nb, block[a.initial]);
  for (int s = 0; s < a.num_locations; ++s) {
    for (int arg = 0; arg < a.arity; ++arg)
      for (int d : a.transitions[s][arg])
        q.add_transition(block[s], arg + 1, block[d]);
    if (a.is_final(s)) q.finals.insert(block[s]);
  }
  q.name = a.name;
  return q;
}

// ---------------------------------------------------------------------------
// Finite-word membership (nonempty words only)
// ---------------------------------------------------------------------------

inline bool accepts_word(const Nfa& a, const std::vector<int>& word) {
  if (word.empty()) return false;  // runs are over nonempty words
  LocSet cur = LocSet(1) << a.initial;
  for (int arg : word) {
    LocSet next = 0;
    for (int s : detail::set_bits(cur))
      for (int d : a.transitions[s][arg - 1]) next |= LocSet(1) << d;
    cur = next;
    if (!cur) return false;
  }
  for (int s : detail::set_bits(cur))
    if (a.is_final(s)) return true;
  return false;
}

// Enumerates all words over {1..arity} of length 1..max_len; used by
// brute-force language comparisons in tests and gadget checks.
template <typename F>
inline void for_each_word(int arity, int max_len, F&& fn) {
  std::vector<int> word;
  auto rec = [&](auto&& self) -> void {
    if (!word.empty()) fn(const_cast<const std::vector<int>&>(word));
    if (static_cast<int>(word.size()) == max_len) return;
    for (int a = 1; a <= arity; ++a) {
      word.push_back(a);
      self(self);
      word.pop_back();
    }
  };
  rec(rec);
}

inline bool language_equal_up_to(const Nfa& a, const Nfa& b, int max_len) {
  if (a.arity != b.arity) return false;
  bool equal = true;
  for_each_word(a.arity, max_len, [&](const std::vector<int>& w) {
    if (accepts_word(a, w) != accepts_word(b, w)) equal = false;
  });
  return equal;
}

}  // namespace tlkit
