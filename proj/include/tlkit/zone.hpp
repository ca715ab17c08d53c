// Difference bound matrices over the clocks of a TA plus the reference
// clock 0.  Entry (i,j) bounds x_i - x_j.  Zones are kept canonical
// (shortest-path closed); emptiness shows up as a negative cycle on the
// diagonal.  Extrapolation uses the per-clock maximum-constant abstraction,
// sound and complete for diagonal-free automata.

#pragma once

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "tlkit/gamma.hpp"

namespace tlkit {

// A DBM bound: value plus strictness, with +infinity as the absent bound.
struct DbmBound {
  std::int64_t value = 0;
  bool strict = false;
  bool inf = false;

  static DbmBound infinite() { return {0, false, true}; }
  static DbmBound le(std::int64_t v) { return {v, false, false}; }
  static DbmBound lt(std::int64_t v) { return {v, true, false}; }

  friend bool operator==(const DbmBound& a, const DbmBound& b) {
    if (a.inf || b.inf) return a.inf == b.inf;
    return a.value == b.value && a.strict == b.strict;
  }
  friend bool operator<(const DbmBound& a, const DbmBound& b) {
    if (a.inf) return false;
    if (b.inf) return true;
    if (a.value != b.value) return a.value < b.value;
    return a.strict && !b.strict;  // (v,<) is tighter than (v,<=)
  }
  friend DbmBound operator+(const DbmBound& a, const DbmBound& b) {
    if (a.inf || b.inf) return infinite();
    return {a.value + b.value, a.strict || b.strict, false};
  }
  std::string str() const {
    if (inf) return "inf";
    return (strict ? "<" : "<=") + std::to_string(value);
  }
};

class Zone {
 public:
  Zone() = default;
  explicit Zone(int num_clocks) : n_(num_clocks + 1), m_(n_ * n_) {
    // all clocks equal to zero
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) m_[idx(i, j)] = DbmBound::le(0);
  }

  static Zone universal(int num_clocks) {
    Zone z(num_clocks);
    for (int i = 0; i < z.n_; ++i)
      for (int j = 0; j < z.n_; ++j)
        z.m_[z.idx(i, j)] = i == j ? DbmBound::le(0) : DbmBound::infinite();
    // clocks are non-negative: 0 - x_i <= 0
    for (int i = 1; i < z.n_; ++i) z.m_[z.idx(0, i)] = DbmBound::le(0);
    return z;
  }

  int num_clocks() const { return n_ - 1; }

  const DbmBound& at(int i, int j) const { return m_[idx(i, j)]; }

  bool is_empty() const {
    for (int i = 0; i < n_; ++i)
      if (at(i, i) < DbmBound::le(0)) return true;
    return false;
  }

  // Shortest-path closure; idempotent.
  void canonicalize() {
    for (int k = 0; k < n_; ++k)
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
          DbmBound via = at(i, k) + at(k, j);
          if (via < at(i, j)) m_[idx(i, j)] = via;
        }
  }

  // Time elapse: drop upper bounds on all clocks.
  void up() {
    for (int i = 1; i < n_; ++i) m_[idx(i, 0)] = DbmBound::infinite();
  }

  // Intersects with the constraint x (op) c; requires canonicalize() after
  // a batch of constraints.
  void constrain(int clock, CmpOp op, std::int64_t c) {
    int x = clock + 1;
    switch (op) {
      case CmpOp::Le: tighten(x, 0, DbmBound::le(c)); break;
      case CmpOp::Lt: tighten(x, 0, DbmBound::lt(c)); break;
      case CmpOp::Ge: tighten(0, x, DbmBound::le(-c)); break;
      case CmpOp::Gt: tighten(0, x, DbmBound::lt(-c)); break;
    }
  }

  void reset(int clock) {
    int x = clock + 1;
    for (int j = 0; j < n_; ++j) {
      m_[idx(x, j)] = at(0, j);
      m_[idx(j, x)] = at(j, 0);
    }
    m_[idx(x, x)] = DbmBound::le(0);
  }

  // Drops all information about a clock except non-negativity; used for
  // clocks that are dead in the target location (never read before their
  // next reset).
  void free_clock(int clock) {
    int x = clock + 1;
    for (int j = 0; j < n_; ++j) {
      m_[idx(x, j)] = DbmBound::infinite();
      m_[idx(j, x)] = at(j, 0);
    }
    m_[idx(x, x)] = DbmBound::le(0);
    m_[idx(0, x)] = DbmBound::le(0);
  }

  // Per-clock maximum-constant extrapolation.  max_consts[clock] is the
  // largest constant the automaton compares that clock against.
  void extrapolate(const std::vector<std::int64_t>& max_consts) {
    auto m_of = [&](int i) { return i == 0 ? 0 : max_consts[i - 1]; };
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) {
        if (i == j) continue;
        DbmBound& b = m_[idx(i, j)];
        if (!b.inf && i != 0 && b.value > m_of(i)) b = DbmBound::infinite();
        if (!b.inf && j != 0 && b.value < -m_of(j)) b = DbmBound::lt(-m_of(j));
      }
    canonicalize();
  }

  friend bool operator==(const Zone& a, const Zone& b) {
    return a.n_ == b.n_ && a.m_ == b.m_;
  }
  friend bool operator<(const Zone& a, const Zone& b) {
    if (a.n_ != b.n_) return a.n_ < b.n_;
    return std::lexicographical_compare(
        a.m_.begin(), a.m_.end(), b.m_.begin(), b.m_.end(),
        [](const DbmBound& x, const DbmBound& y) { return x < y; });
  }

  std::size_t hash() const {
    std::size_t h = n_;
    for (const auto& b : m_)
      h = h * 1000003u + (b.inf ? 0x9e3779b9u
                                : std::size_t(b.value * 2 + b.strict) + 17);
    return h;
  }

  std::string str() const {
    std::ostringstream os;
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < n_; ++j) os << at(i, j).str() << " ";
      os << "| ";
    }
    return os.str();
  }

  // Reorders clocks: order[t] is the old index of the clock placed at new
  // index t.  Used by symmetry reduction.
  Zone permuted(const std::vector<int>& order) const {
    Zone z = *this;
    auto old_of = [&](int i) { return i == 0 ? 0 : order[i - 1] + 1; };
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        z.m_[z.idx(i, j)] = at(old_of(i), old_of(j));
    return z;
  }

  // Satisfaction of the zone by a concrete valuation (clock index from 0).
  bool contains(const std::vector<Rational>& valuation) const {
    auto val = [&](int i) { return i == 0 ? Rational(0) : valuation[i - 1]; };
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) {
        const DbmBound& b = at(i, j);
        if (b.inf) continue;
        Rational diff = val(i) - val(j);
        if (b.strict ? !(diff < Rational(b.value))
                     : !(diff <= Rational(b.value)))
          return false;
      }
    return true;
  }

 private:
  int idx(int i, int j) const { return i * n_ + j; }
  void tighten(int i, int j, DbmBound b) {
    if (b < at(i, j)) m_[idx(i, j)] = b;
  }

  int n_ = 0;
  std::vector<DbmBound> m_;
};

}  // namespace tlkit
