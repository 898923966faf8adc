#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace porcupine {

// Shared numeric contracts used across the library.
inline constexpr double kRootTol = 1e-12;      // bisection target width
inline constexpr double kResidualTol = 1e-10;  // fixed-point residual guarantee
inline constexpr double kBandTol = 1e-10;      // interval membership slack
inline constexpr double kNeutralBand = 1e-8;   // |multiplier - 1| neutrality band
inline constexpr double kConnectTol = 1e-9;    // f0^N(a0) vs a1 cross-check

class ConstructionError : public std::runtime_error {
 public:
  explicit ConstructionError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a bounded search ends without a certified result; carries the
// closest exponent seen so callers can report it.
class SearchBudgetError : public std::runtime_error {
 public:
  SearchBudgetError(const std::string& what, double best)
      : std::runtime_error(what), best_exponent(best) {}
  double best_exponent;
};

// Finite binary word over {0,1}.
struct Word {
  std::vector<std::uint8_t> bits;

  Word() = default;
  explicit Word(std::vector<std::uint8_t> b) : bits(std::move(b)) { check(); }

  static Word from_string(const std::string& s) {
    Word w;
    w.bits.reserve(s.size());
    for (char c : s) {
      if (c == '0')
        w.bits.push_back(0);
      else if (c == '1')
        w.bits.push_back(1);
      else
        throw std::invalid_argument("word may contain only '0'/'1' characters");
    }
    return w;
  }

  static Word zeros(std::size_t n) { return Word(std::vector<std::uint8_t>(n, 0)); }
  static Word ones(std::size_t n) { return Word(std::vector<std::uint8_t>(n, 1)); }

  std::size_t size() const { return bits.size(); }
  bool empty() const { return bits.empty(); }
  std::uint8_t operator[](std::size_t i) const { return bits[i]; }

  std::size_t one_count() const {
    std::size_t k = 0;
    for (auto b : bits) k += b;
    return k;
  }
  bool all_zero() const { return one_count() == 0; }

  void push_back(std::uint8_t b) { bits.push_back(b); }
  Word& append(const Word& w) {
    bits.insert(bits.end(), w.bits.begin(), w.bits.end());
    return *this;
  }
  Word& append_run(std::uint8_t b, std::size_t n) {
    bits.insert(bits.end(), n, b);
    return *this;
  }

  std::string str() const {
    std::string s;
    s.reserve(bits.size());
    for (auto b : bits) s.push_back(b ? '1' : '0');
    return s;
  }

  friend bool operator==(const Word& a, const Word& b) { return a.bits == b.bits; }
  friend bool operator!=(const Word& a, const Word& b) { return !(a == b); }

 private:
  void check() const {
    for (auto b : bits)
      if (b > 1) throw std::invalid_argument("word bits must be 0 or 1");
  }
};

// Closed subinterval of [0,1].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  Interval() = default;
  Interval(double l, double h) : lo(l), hi(h) {
    if (!(l <= h)) throw std::invalid_argument("interval endpoints out of order");
  }

  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool nontrivial() const { return hi > lo; }

  bool contains(double x, double tol = 0.0) const { return x >= lo - tol && x <= hi + tol; }
  bool contains(const Interval& j, double tol = 0.0) const {
    return j.lo >= lo - tol && j.hi <= hi + tol;
  }
  bool intersects(const Interval& j, double tol = 0.0) const {
    return j.hi >= lo - tol && j.lo <= hi + tol;
  }
  Interval clamped(const Interval& box) const {
    return Interval(std::max(lo, box.lo), std::min(hi, box.hi));
  }
};

enum class Stability { attracting, repelling, neutral };

inline const char* to_string(Stability s) {
  switch (s) {
    case Stability::attracting: return "attracting";
    case Stability::repelling: return "repelling";
    default: return "neutral";
  }
}

inline Stability classify_multiplier(double mult_abs) {
  if (std::abs(mult_abs - 1.0) <= kNeutralBand) return Stability::neutral;
  return mult_abs > 1.0 ? Stability::repelling : Stability::attracting;
}

// A fiber periodic orbit: the word is one period.
struct PeriodicOrbit {
  Word word;
  double fix = 0.0;
  double multiplier = 0.0;  // |f_[word]'(fix)|
  double exponent = 0.0;    // log(multiplier) / |word|
  Stability stability = Stability::neutral;
};

inline PeriodicOrbit make_orbit(Word w, double fix, double mult_abs) {
  PeriodicOrbit o;
  o.word = std::move(w);
  o.fix = fix;
  o.multiplier = mult_abs;
  o.exponent = std::log(mult_abs) / static_cast<double>(o.word.size());
  o.stability = classify_multiplier(mult_abs);
  return o;
}

// Uniform sample grid on [a,b] with n+1 nodes, both endpoints included.
inline std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> xs;
  xs.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    xs.push_back(a + (b - a) * (static_cast<double>(i) / static_cast<double>(n)));
  xs.back() = b;
  return xs;
}

}  // namespace porcupine
