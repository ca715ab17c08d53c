// One-clock alternating timed automata and the embedding of core formulas
// into them.  The OCATA is the semantic bridge between the logic and the
// component construction: it is never used to decide omega-acceptance, but
// its finite-horizon configuration stepping gives an executable reference
// for run-DAG shapes and prefix-determined verdicts.

#pragma once

#include <map>
#include <sstream>
#include <vector>

#include "tlkit/gamma.hpp"
#include "tlkit/logic_ops.hpp"
#include "tlkit/nnf.hpp"

namespace tlkit {

class Ocata {
 public:
  struct Block {
    Formula modality;  // Aut or DualAut node
    int offset;        // location id of this copy's NFA location 0
  };

  AlphabetPtr alphabet;
  Formula root;
  std::vector<Block> blocks;
  int num_locations = 1;  // location 0 is s_init
  std::set<int> finals;   // all locations of dual-modality copies

  static constexpr int kInit = 0;

  // delta(s, sigma) for a location id.
  GammaPtr delta(int loc, Letter sigma) const {
    if (loc == kInit) return Gamma::reset(delta_formula(root, sigma));
    const Block& b = block_of(loc);
    int s = loc - b.offset;
    const Nfa& a = *b.modality->nfa;
    if (b.modality->kind == FKind::Aut) {
      GammaPtr out = Gamma::falsum();
      for (int arg = 0; arg < a.arity; ++arg) {
        GammaPtr arg_gamma = delta_formula(b.modality->args[arg], sigma);
        if (arg_gamma->kind == Gamma::Kind::False) continue;
        GammaPtr succ = Gamma::falsum();
        for (int d : a.transitions[s][arg]) {
          GammaPtr g = Gamma::location(b.offset + d);
          if (a.is_final(d)) g = Gamma::disj(g, clock_in(b.modality->intv));
          succ = Gamma::disj(succ, g);
        }
        out = Gamma::disj(out, Gamma::conj(arg_gamma, succ));
      }
      return out;
    }
    // Dual modality: conjunction over arguments of (argument holds, or all
    // undischarged successors with finals weakened by x not in I).
    GammaPtr out = Gamma::verum();
    for (int arg = 0; arg < a.arity; ++arg) {
      GammaPtr arg_gamma = delta_formula(b.modality->args[arg], sigma);
      GammaPtr succ = Gamma::verum();
      for (int d : a.transitions[s][arg]) {
        GammaPtr g = Gamma::location(b.offset + d);
        if (a.is_final(d)) g = Gamma::conj(g, clock_not_in(b.modality->intv));
        succ = Gamma::conj(succ, g);
      }
      out = Gamma::conj(out, Gamma::disj(arg_gamma, succ));
    }
    return out;
  }

  // delta(phi, sigma) for a (sub)formula.
  GammaPtr delta_formula(const Formula& phi, Letter sigma) const {
    switch (phi->kind) {
      case FKind::True: return Gamma::verum();
      case FKind::False: return Gamma::falsum();
      case FKind::Atom:
        return has_prop(sigma, phi->prop) ? Gamma::verum() : Gamma::falsum();
      case FKind::NegAtom:
        return has_prop(sigma, phi->prop) ? Gamma::falsum() : Gamma::verum();
      case FKind::And:
        return Gamma::conj(delta_formula(phi->args[0], sigma),
                           delta_formula(phi->args[1], sigma));
      case FKind::Or:
        return Gamma::disj(delta_formula(phi->args[0], sigma),
                           delta_formula(phi->args[1], sigma));
      case FKind::Aut:
      case FKind::DualAut: {
        const Block& b = find_block(phi);
        return Gamma::reset(delta(b.offset + phi->nfa->initial, sigma));
      }
      default:
        throw std::invalid_argument("ocata: formula is not core/desugared");
    }
  }

  bool is_final(int loc) const { return finals.count(loc) != 0; }

  std::string location_name(int loc) const {
    if (loc == kInit) return "init";
    const Block& b = block_of(loc);
    int idx = static_cast<int>(&b - blocks.data());
    return "m" + std::to_string(idx) + "_s" + std::to_string(loc - b.offset);
  }

 private:
  bool has_prop(Letter sigma, const PropId& p) const {
    int i = alphabet->index_of(p);
    return i >= 0 && (sigma & (Letter(1) << i));
  }
  const Block& block_of(int loc) const {
    for (const auto& b : blocks) {
      int size = b.modality->nfa->num_locations;
      if (loc >= b.offset && loc < b.offset + size) return b;
    }
    throw std::out_of_range("ocata: unknown location");
  }
  const Block& find_block(const Formula& phi) const {
    std::size_t h = formula_hash(phi);
    for (const auto& b : blocks)
      if (formula_hash(b.modality) == h && formula_equal(b.modality, phi))
        return b;
    throw std::logic_error("ocata: modality without block");
  }

  static GammaPtr clock_in(const Interval& iv) {
    if (iv.is_all()) return Gamma::verum();
    switch (iv.classify()) {
      case IntervalClass::UpperBound:
        return Gamma::cmp(iv.hi_strict ? CmpOp::Lt : CmpOp::Le, iv.hi);
      case IntervalClass::LowerBound:
        return Gamma::cmp(iv.lo_strict ? CmpOp::Gt : CmpOp::Ge, iv.lo);
      default:
        throw std::invalid_argument("ocata: general interval");
    }
  }
  static GammaPtr clock_not_in(const Interval& iv) {
    GammaPtr in = clock_in(iv);
    if (in->kind == Gamma::Kind::True) return Gamma::falsum();
    return Gamma::cmp(negate_cmp(in->op), in->c);
  }

  friend Ocata embed(const Formula& phi);
};

// Builds the OCATA of a core, NNF, desugared formula: location 0 is the
// initial location, followed by one disjoint copy of each temporal
// subformula's NFA.  Final locations are exactly the dual copies' locations.
inline Ocata embed(const Formula& phi) {
  CoreCheck chk = check_core(phi);
  if (!chk.ok)
    throw std::invalid_argument("embed: formula is not in the core fragment: " +
                                chk.problems.front());
  Ocata a;
  a.root = phi;
  std::set<PropId> atoms;
  collect_atoms(phi, atoms);
  a.alphabet = make_alphabet({atoms.begin(), atoms.end()});
  for (const auto& psi : temporal_subformulae(phi)) {
    Ocata::Block b;
    b.modality = psi;
    b.offset = a.num_locations;
    a.num_locations += psi->nfa->num_locations;
    if (psi->kind == FKind::DualAut)
      for (int s = 0; s < psi->nfa->num_locations; ++s)
        a.finals.insert(b.offset + s);
    a.blocks.push_back(std::move(b));
  }
  return a;
}

// ---------------------------------------------------------------------------
// Configuration stepping
// ---------------------------------------------------------------------------

using Config = StateSet;

// All successor configurations: each state picks a minimal model of its
// transition formula at the elapsed clock value; a successor is the union
// of the picks.
inline std::vector<Config> step_configs(const Ocata& a, const Config& c,
                                        Letter sigma, const Rational& dt) {
  std::vector<Config> acc = {Config{}};
  for (const auto& [loc, v] : c) {
    auto choices = minimal_models(a.delta(loc, sigma), v + dt);
    std::vector<Config> next;
    for (const auto& base : acc)
      for (const auto& m : choices) {
        Config u = base;
        u.insert(m.begin(), m.end());
        if (std::find(next.begin(), next.end(), u) == next.end())
          next.push_back(std::move(u));
      }
    acc = std::move(next);
    if (acc.empty()) break;
  }
  return acc;
}

// Verdict on a finite timed prefix, when it is already determined: an empty
// configuration accepts every continuation; a dead end on every branch
// rejects them all.
enum class PrefixVerdict { Accepts, Rejects, Unknown };

inline PrefixVerdict prefix_verdict(
    const Ocata& a, const std::vector<std::pair<Letter, Rational>>& events) {
  std::vector<Config> frontier = {Config{{Ocata::kInit, Rational(0)}}};
  Rational prev(0);
  for (const auto& [sigma, time] : events) {
    Rational dt = time - prev;
    prev = time;
    std::vector<Config> next;
    for (const auto& c : frontier)
      for (auto& s : step_configs(a, c, sigma, dt)) {
        if (s.empty()) return PrefixVerdict::Accepts;
        if (std::find(next.begin(), next.end(), s) == next.end())
          next.push_back(std::move(s));
      }
    frontier = std::move(next);
    if (frontier.empty()) return PrefixVerdict::Rejects;
  }
  return PrefixVerdict::Unknown;
}

// ---------------------------------------------------------------------------
// Run DAGs
// ---------------------------------------------------------------------------

struct RunDag {
  struct Vertex {
    int loc;
    Rational clock;
    int level;
  };
  std::vector<Vertex> vertices;
  std::vector<std::pair<int, int>> edges;  // vertex indices

  std::string to_dot(const Ocata& a) const {
    std::ostringstream os;
    os << "digraph run {\n  rankdir=LR;\n  node [shape=box];\n";
    for (std::size_t i = 0; i < vertices.size(); ++i)
      os << "  v" << i << " [label=\"(" << a.location_name(vertices[i].loc)
         << ", " << vertices[i].clock << ", " << vertices[i].level << ")\"];\n";
    for (const auto& [u, v] : edges) os << "  v" << u << " -> v" << v << ";\n";
    os << "}\n";
    return os.str();
  }
};

// Follows one run, taking the first minimal model at every vertex.
inline RunDag run_dag(const Ocata& a,
                      const std::vector<std::pair<Letter, Rational>>& events) {
  RunDag dag;
  dag.vertices.push_back({Ocata::kInit, Rational(0), 0});
  std::vector<int> frontier = {0};
  Rational prev(0);
  int level = 0;
  for (const auto& [sigma, time] : events) {
    Rational dt = time - prev;
    prev = time;
    ++level;
    std::map<OcataState, int> next_ids;
    std::vector<int> next;
    for (int vid : frontier) {
      const auto& vert = dag.vertices[vid];
      auto choices = minimal_models(a.delta(vert.loc, sigma), vert.clock + dt);
      if (choices.empty()) continue;  // this branch dies
      for (const auto& st : choices.front()) {
        auto it = next_ids.find(st);
        int id;
        if (it == next_ids.end()) {
          id = static_cast<int>(dag.vertices.size());
          dag.vertices.push_back({st.first, st.second, level});
          next_ids[st] = id;
          next.push_back(id);
        } else {
          id = it->second;
        }
        dag.edges.emplace_back(vid, id);
      }
    }
    frontier = std::move(next);
  }
  return dag;
}

}  // namespace tlkit
