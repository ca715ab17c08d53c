// Ultimately periodic timed words: a finite prefix followed by a loop of
// fixed duration repeated forever.  Positions are 1-based; loop offsets are
// relative to the loop base (the last prefix timestamp, or 0 without a
// prefix).  An offset may reach up to first_offset + duration so that words
// like "loop {q}@1/2 {}@1 period 1" remain expressible.

#pragma once

#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tlkit/props.hpp"
#include "tlkit/rational.hpp"

namespace tlkit {

struct TimedEvent {
  std::set<PropId> letter;
  Rational time;  // absolute in the prefix, loop-relative in the loop
};

struct UPTimedWord {
  std::vector<TimedEvent> prefix;
  std::vector<TimedEvent> loop;
  Rational period;

  int prefix_len() const { return static_cast<int>(prefix.size()); }
  int loop_len() const { return static_cast<int>(loop.size()); }

  Rational loop_base() const {
    return prefix.empty() ? Rational(0) : prefix.back().time;
  }

  void validate() const {
    if (loop.empty()) throw std::invalid_argument("timed word: empty loop");
    if (!(period > Rational(0)))
      throw std::invalid_argument("timed word: period must be positive");
    Rational prev(0);
    for (const auto& e : prefix) {
      if (e.time < prev)
        throw std::invalid_argument("timed word: decreasing prefix times");
      prev = e.time;
    }
    prev = Rational(0);
    for (const auto& e : loop) {
      if (e.time < Rational(0) || e.time < prev)
        throw std::invalid_argument("timed word: bad loop offsets");
      prev = e.time;
    }
    // Wrap-around monotonicity: the next iteration's first event must not
    // precede this iteration's last one.
    if (loop.back().time > loop.front().time + period)
      throw std::invalid_argument("timed word: loop longer than period");
  }

  // Event at 1-based position i, with its absolute timestamp.
  TimedEvent event_at(int i) const {
    if (i < 1) throw std::invalid_argument("event_at: positions are 1-based");
    if (i <= prefix_len()) return prefix[i - 1];
    int off = i - prefix_len() - 1;
    int iter = off / loop_len();
    int idx = off % loop_len();
    TimedEvent e = loop[idx];
    e.time = loop_base() + Rational(iter) * period + loop[idx].time;
    return e;
  }

  Rational time_at(int i) const { return event_at(i).time; }

  // Canonical position: positions past the prefix repeat with the loop.
  int canonical_pos(int i) const {
    if (i <= prefix_len()) return i;
    return prefix_len() + 1 + (i - prefix_len() - 1) % loop_len();
  }

  std::set<PropId> atoms() const {
    std::set<PropId> out;
    for (const auto& e : prefix) out.insert(e.letter.begin(), e.letter.end());
    for (const auto& e : loop) out.insert(e.letter.begin(), e.letter.end());
    return out;
  }

  std::string str() const {
    std::ostringstream os;
    os << "prefix:";
    for (const auto& e : prefix) os << " " << letter_str(e.letter) << "@" << e.time;
    os << " loop:";
    for (const auto& e : loop) os << " " << letter_str(e.letter) << "@" << e.time;
    os << " period: " << period;
    return os.str();
  }

  static std::string letter_str(const std::set<PropId>& l) {
    std::string s = "{";
    bool first = true;
    for (const auto& p : l) {
      if (!first) s += ",";
      s += p.str();
      first = false;
    }
    return s + "}";
  }
};

}  // namespace tlkit
