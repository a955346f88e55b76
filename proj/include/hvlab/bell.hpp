#pragma once

// Linear Bell functionals  e(P) = sum_{a,b,x,y} c(a,b,x,y) P(x,y|a,b).

#include <optional>
#include <vector>

#include "hvlab/boxes.hpp"

namespace hvlab {

/// Coefficients share the Behavior table layout (rows (a,b), columns (x,y)).
struct BellExpression {
  Spaces spaces;
  ScalarMatrix coefficients;

  /// All-zero expression over `spaces`.
  static BellExpression zero(Spaces spaces);

  Scalar& operator()(std::size_t a, std::size_t b, std::size_t x, std::size_t y);
  const Scalar& operator()(std::size_t a, std::size_t b, std::size_t x, std::size_t y) const;
};

Scalar evaluate(const BellExpression& expression, const Behavior& behavior);

/// CHSH in correlator form over A in {0,2}, B in {1,3}, X,Y in {+1,-1}:
/// c(a,b,x,y) = s(a,b) x y with s(0,3) = -1 and s = +1 otherwise.
BellExpression chsh();

/// Deterministic local strategy: outcome index per setting on each side.
struct DeterministicStrategy {
  std::vector<std::size_t> alice;
  std::vector<std::size_t> bob;

  friend bool operator==(const DeterministicStrategy&, const DeterministicStrategy&) = default;
};

Behavior deterministic_behavior(const Spaces& spaces, const DeterministicStrategy& strategy);

/// The strategy a behavior is induced by, if it is a deterministic local box.
std::optional<DeterministicStrategy> as_deterministic(const Behavior& behavior);

/// All |X|^|A| |Y|^|B| strategies, Alice's table outer, each table in
/// lexicographic order with the first setting most significant.
std::vector<DeterministicStrategy> enumerate_strategies(const Spaces& spaces);

struct LocalBound {
  Scalar value;
  DeterministicStrategy strategy;
};

/// Exhaustive maximum over deterministic strategies; ties keep the first.
/// Cost grows as |X|^|A| |Y|^|B|.
LocalBound local_bound(const BellExpression& expression);

/// Maximum over all valid no-signalling behaviors, solved exactly by LP.
Scalar ns_bound(const BellExpression& expression);

}  // namespace hvlab
