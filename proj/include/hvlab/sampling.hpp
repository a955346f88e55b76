#pragma once

// Random exact objects for demos and property tests. Weights are small
// integers normalised to rationals, so every result is exact.

#include <cstdint>
#include <random>
#include <vector>

#include "hvlab/hvmodel.hpp"

namespace hvlab::sampling {

using Rng = std::mt19937_64;

/// n rational weights, each a multiple of 1/total with numerators drawn from
/// [0, max_numerator]; never all zero.
Distribution random_distribution(Rng& rng, std::size_t n, int max_numerator = 4);

/// The eight PR-type boxes x^y = ab ^ s0 a ^ s1 b ^ s2 on two binary
/// settings and outcomes per side (settings and outcomes by index).
std::vector<Behavior> pr_family(const Spaces& spaces);

/// Random mixture of one to four boxes drawn from the deterministic local
/// boxes and, for 2x2x2x2 spaces, the PR family. Always no-signalling.
Behavior random_ns_behavior(Rng& rng, const Spaces& spaces);

/// Random local model with the given number of hidden pairs; kernels come
/// from random_ns_behavior. Pair labels are ("u<i>", "v<i>").
HiddenVariableModel random_local_model(Rng& rng, const Spaces& spaces, std::size_t pairs);

}  // namespace hvlab::sampling
