#include "hvlab/sampling.hpp"

#include <algorithm>

#include "hvlab/decompose.hpp"

namespace hvlab::sampling {

Distribution random_distribution(Rng& rng, std::size_t n, int max_numerator) {
  if (n == 0) throw Error(ErrorCode::InvalidDistribution, "cannot draw a distribution over nothing");
  if (max_numerator < 1) max_numerator = 1;
  std::uniform_int_distribution<int> draw(0, max_numerator);
  std::vector<long> raw(n);
  long total = 0;
  while (total == 0) {
    total = 0;
    for (auto& r : raw) {
      r = draw(rng);
      total += r;
    }
  }
  Distribution out;
  out.reserve(n);
  for (long r : raw) out.push_back(Scalar::fraction(r, total));
  return out;
}

std::vector<Behavior> pr_family(const Spaces& spaces) {
  if (spaces.settings_a.size() != 2 || spaces.settings_b.size() != 2 || spaces.outcomes_x.size() != 2 ||
      spaces.outcomes_y.size() != 2) {
    throw Error(ErrorCode::SpaceMismatch, "PR boxes need two settings and two outcomes per side");
  }
  std::vector<Behavior> out;
  for (unsigned s = 0; s < 8; ++s) {
    const unsigned s0 = s & 1u, s1 = (s >> 1) & 1u, s2 = (s >> 2) & 1u;
    Behavior box(spaces);
    for (unsigned a = 0; a < 2; ++a) {
      for (unsigned b = 0; b < 2; ++b) {
        for (unsigned x = 0; x < 2; ++x) {
          for (unsigned y = 0; y < 2; ++y) {
            if ((x ^ y) == ((a & b) ^ (s0 & a) ^ (s1 & b) ^ s2)) box(a, b, x, y) = Scalar::fraction(1, 2);
          }
        }
      }
    }
    out.push_back(std::move(box));
  }
  return out;
}

Behavior random_ns_behavior(Rng& rng, const Spaces& spaces) {
  std::vector<Behavior> pool = enumerate_local_vertices(spaces);
  const bool binary = spaces.settings_a.size() == 2 && spaces.settings_b.size() == 2 &&
                      spaces.outcomes_x.size() == 2 && spaces.outcomes_y.size() == 2;
  if (binary) {
    for (auto& pr : pr_family(spaces)) pool.push_back(std::move(pr));
  }
  // a handful of components; mixing the whole pool washes the PR boxes out
  std::shuffle(pool.begin(), pool.end(), rng);
  const std::size_t k = std::uniform_int_distribution<std::size_t>(1, std::min<std::size_t>(4, pool.size()))(rng);
  const Distribution w = random_distribution(rng, k);
  std::vector<MixtureComponent> parts;
  for (std::size_t i = 0; i < k; ++i) parts.emplace_back(w[i], std::move(pool[i]));
  return mix(parts);
}

HiddenVariableModel random_local_model(Rng& rng, const Spaces& spaces, std::size_t pairs) {
  if (pairs == 0) throw Error(ErrorCode::InvalidModel, "a model needs at least one hidden pair");
  HiddenVariableModel model;
  model.weights = random_distribution(rng, pairs);
  for (std::size_t i = 0; i < pairs; ++i) {
    model.pairs.push_back({"u" + std::to_string(i), "v" + std::to_string(i)});
    model.kernels.push_back(random_ns_behavior(rng, spaces));
  }
  return model;
}

}  // namespace hvlab::sampling
