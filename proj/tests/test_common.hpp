#pragma once

#include <random>

#include "porcupine/fiber_maps.hpp"

namespace porcupine::testing {

// The certified reference family used across the suites. validate() is the
// gatekeeper: the dedicated test below asserts an all-pass report before any
// other suite relies on these numbers.
inline FiberMapParams canonical_params() {
  FiberMapParams p;
  p.beta = 1.1;
  p.lambda = 0.35;
  p.c1 = 0.40;
  p.a0 = 0.06;
  p.N = 28;
  p.resolution = 1e-4;
  return p;
}

inline const FiberMapPair& canonical_pair() {
  static const FiberMapPair pair = build_pair(canonical_params());
  return pair;
}

inline std::mt19937& rng(unsigned seed = 20240817u) {
  static std::mt19937 gen(seed);
  return gen;
}

}  // namespace porcupine::testing
