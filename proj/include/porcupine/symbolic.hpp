#pragma once

#include <cctype>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>

#include "porcupine/core.hpp"

namespace porcupine {

// Finitely specified bi-infinite sequences over {0,1}: a core window around
// the origin plus eventually-periodic tails on both sides. All-zeros and
// all-ones tails are period-1 specials.
enum class TailKind { zeros, ones, periodic };

struct Tail {
  TailKind kind = TailKind::zeros;
  Word period;  // nonempty iff kind == periodic

  static Tail zeros_tail() { return Tail{TailKind::zeros, {}}; }
  static Tail ones_tail() { return Tail{TailKind::ones, {}}; }
  static Tail periodic_tail(Word w) {
    if (w.empty()) throw std::invalid_argument("periodic tail needs a nonempty period");
    if (w.all_zero()) return zeros_tail();
    if (w.one_count() == w.size()) return ones_tail();
    return Tail{TailKind::periodic, std::move(w)};
  }

  std::size_t period_length() const { return kind == TailKind::periodic ? period.size() : 1; }
  // k-th tail symbol counted away from the core, k = 0, 1, ...
  // Right tails read the period forwards, left tails read it backwards.
  std::uint8_t symbol(std::size_t k, bool leftward) const {
    switch (kind) {
      case TailKind::zeros: return 0;
      case TailKind::ones: return 1;
      default: {
        const std::size_t L = period.size();
        return leftward ? period[L - 1 - (k % L)] : period[k % L];
      }
    }
  }
  friend bool operator==(const Tail& a, const Tail& b) {
    return a.kind == b.kind && a.period == b.period;
  }
};

// Layout:  ...tail | left_core (positions -m..-1) . right_core (0..n) | tail...
// The left tail repeats leftward, so position -m-1 holds the period's last
// symbol.
struct SeqSpec {
  Tail left_tail;
  Word left_core;
  Word right_core;
  Tail right_tail;

  static SeqSpec zero_seq() { return SeqSpec{}; }

  // The two-sided periodic sequence w^Z aligned so that position 0 is w[0].
  static SeqSpec two_sided_periodic(const Word& w) {
    SeqSpec s;
    s.left_tail = Tail::periodic_tail(w);
    s.right_tail = Tail::periodic_tail(w);
    return s;
  }

  std::uint8_t bit_at(long i) const {
    if (i >= 0) {
      if (static_cast<std::size_t>(i) < right_core.size())
        return right_core[static_cast<std::size_t>(i)];
      return right_tail.symbol(static_cast<std::size_t>(i) - right_core.size(), false);
    }
    const std::size_t j = static_cast<std::size_t>(-i);  // 1-based depth into the past
    if (j <= left_core.size()) return left_core[left_core.size() - j];
    return left_tail.symbol(j - left_core.size() - 1, true);
  }

  Word window(long lo, long hi) const {
    if (lo > hi) throw std::invalid_argument("window endpoints out of order");
    Word w;
    w.bits.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (long i = lo; i <= hi; ++i) w.push_back(bit_at(i));
    return w;
  }

  // Left word at depth m: positions -m..-1 as a word, suited to the
  // admissible-domain composition order.
  Word left_word(std::size_t m) const { return window(-static_cast<long>(m), -1); }
};

// The shift sigma: (sigma xi)_i = xi_{i+1}; the bit at 1 moves to 0.
inline SeqSpec shift(const SeqSpec& s) {
  SeqSpec r = s;
  const std::uint8_t b = s.bit_at(0);
  r.left_core.push_back(b);
  if (!r.right_core.empty()) {
    r.right_core.bits.erase(r.right_core.bits.begin());
  } else if (r.right_tail.kind == TailKind::periodic) {
    Word& p = r.right_tail.period;
    std::uint8_t first = p.bits.front();
    p.bits.erase(p.bits.begin());
    p.bits.push_back(first);
  }
  return r;
}

inline SeqSpec shift_back(const SeqSpec& s) {
  SeqSpec r = s;
  const std::uint8_t b = s.bit_at(-1);
  r.right_core.bits.insert(r.right_core.bits.begin(), b);
  if (!r.left_core.empty()) {
    r.left_core.bits.pop_back();
  } else if (r.left_tail.kind == TailKind::periodic) {
    Word& p = r.left_tail.period;
    std::uint8_t last = p.bits.back();
    p.bits.pop_back();
    p.bits.insert(p.bits.begin(), last);
  }
  return r;
}

// Truncation of the sequence to the window [lo, hi].
inline Word truncate(const SeqSpec& s, long lo, long hi) { return s.window(lo, hi); }

namespace detail {

// Exact one-sided metric sum: head symbols at weights 2^-start, 2^-(start+1),
// ... followed by jointly periodic tails summed in closed form.
inline double metric_side(const SeqSpec& a, const SeqSpec& b, bool left) {
  const std::size_t core =
      left ? std::max(a.left_core.size(), b.left_core.size())
           : std::max(a.right_core.size(), b.right_core.size());
  const std::size_t start = left ? 1 : 0;  // |i| of the first summand
  auto bit = [&](const SeqSpec& s, std::size_t k) {  // k counts from the first summand
    return left ? s.bit_at(-static_cast<long>(k + 1)) : s.bit_at(static_cast<long>(k));
  };
  double sum = 0.0;
  for (std::size_t k = 0; k < core; ++k)
    sum += std::abs(static_cast<double>(bit(a, k)) - bit(b, k)) *
           std::exp2(-static_cast<double>(start + k));
  const std::size_t La = left ? a.left_tail.period_length() : a.right_tail.period_length();
  const std::size_t Lb = left ? b.left_tail.period_length() : b.right_tail.period_length();
  const std::size_t L = std::lcm(La, Lb);
  double period_sum = 0.0;
  for (std::size_t j = 0; j < L; ++j)
    period_sum += std::abs(static_cast<double>(bit(a, core + j)) - bit(b, core + j)) *
                  std::exp2(-static_cast<double>(j));
  const double anchor = std::exp2(-static_cast<double>(start + core));
  return sum + anchor * period_sum / (1.0 - std::exp2(-static_cast<double>(L)));
}

}  // namespace detail

// d(xi, eta) = sum over i of 2^-|i| |xi_i - eta_i|, computed exactly for
// finitely specified sequences.
inline double metric(const SeqSpec& a, const SeqSpec& b) {
  return detail::metric_side(a, b, false) + detail::metric_side(a, b, true);
}

// Cylinder through `word` anchored at index `anchor`.
struct Cylinder {
  Word word;
  long anchor = 0;

  bool contains(const SeqSpec& s) const {
    for (std::size_t i = 0; i < word.size(); ++i)
      if (s.bit_at(anchor + static_cast<long>(i)) != word[i]) return false;
    return true;
  }
};

// Textual syntax: "[w*] bits . bits [w*]" — optional periodic tails in
// brackets, core bits around the dot. Missing tails default to all zeros.
// Examples: "[0*] 1 . 0 1 [01*]",  ". 1",  "[1*] . [1*]".
inline SeqSpec parse_seq(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  std::size_t pos = 0;
  auto parse_tail = [&](bool present_ok) -> std::optional<Word> {
    if (pos < s.size() && s[pos] == '[') {
      std::size_t close = s.find("*]", pos);
      if (close == std::string::npos) throw std::invalid_argument("unterminated tail bracket");
      Word w = Word::from_string(s.substr(pos + 1, close - pos - 1));
      if (w.empty()) throw std::invalid_argument("empty tail period");
      pos = close + 2;
      return w;
    }
    if (!present_ok) throw std::invalid_argument("expected a tail bracket");
    return std::nullopt;
  };
  auto parse_bits = [&](char stop1, char stop2) {
    std::string bits;
    while (pos < s.size() && s[pos] != stop1 && s[pos] != stop2) {
      if (s[pos] != '0' && s[pos] != '1')
        throw std::invalid_argument(std::string("unexpected character '") + s[pos] +
                                    "' in sequence");
      bits.push_back(s[pos++]);
    }
    return Word::from_string(bits);
  };

  SeqSpec out;
  auto lt = parse_tail(true);
  out.left_tail = lt ? Tail::periodic_tail(*lt) : Tail::zeros_tail();
  out.left_core = parse_bits('.', '.');
  if (pos >= s.size() || s[pos] != '.')
    throw std::invalid_argument("sequence text needs a '.' origin marker");
  ++pos;
  out.right_core = parse_bits('[', '[');
  auto rt = parse_tail(true);
  out.right_tail = rt ? Tail::periodic_tail(*rt) : Tail::zeros_tail();
  if (pos != s.size()) throw std::invalid_argument("trailing characters in sequence text");
  return out;
}

inline std::string format_tail(const Tail& t) {
  switch (t.kind) {
    case TailKind::zeros: return "[0*]";
    case TailKind::ones: return "[1*]";
    default: return "[" + t.period.str() + "*]";
  }
}

inline std::string format_seq(const SeqSpec& s) {
  std::string out = format_tail(s.left_tail);
  out += " " + s.left_core.str();
  out += " . ";
  out += s.right_core.str() + " ";
  out += format_tail(s.right_tail);
  return out;
}

}  // namespace porcupine
