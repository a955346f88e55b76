#pragma once

// Maximal local content of a no-signalling behavior:
//
//   max sum_i q_i   s.t.   sum_i q_i D_i <= P (entrywise),  q >= 0
//
// over the deterministic local vertices D_i. Whatever is left over,
// normalized, is a valid no-signalling residual, so P splits as
// p L + (1 - p) R with L local. The LP runs exactly over Q(sqrt 2).

#include <string>
#include <vector>

#include "hvlab/bell.hpp"
#include "hvlab/hvmodel.hpp"
#include "hvlab/lp.hpp"

namespace hvlab {

/// One behavior per deterministic strategy, in enumerate_strategies order.
std::vector<Behavior> enumerate_local_vertices(const Spaces& spaces);

struct LocalDecomposition {
  std::vector<Behavior> vertices;
  std::vector<Scalar> weights;
  /// Normalized leftover; a placeholder uniform box when local_content == 1.
  Behavior residual;
  Scalar local_content;
  bool residual_used = true;
  /// The solved LP and its solution, kept for the duality certificate.
  LpProblem<Scalar> lp;
  LpSolution<Scalar> solution;
};

/// Throws InvalidBehavior for invalid boxes and SignallingInput for boxes
/// that signal (no local hidden-variable model can exist for those).
/// Only vertices with positive weight are kept in the result.
LocalDecomposition max_local_content(const Behavior& behavior);

/// Uniform box over `spaces` (every entry 1 / (|X| |Y|)).
Behavior uniform_behavior(const Spaces& spaces);

/// One hidden pair per vertex plus a "(0,0)" pair carrying the residual.
/// Constant strategies are labelled by their outcome, others by the
/// comma-joined outcome table.
HiddenVariableModel decomposition_to_model(const LocalDecomposition& decomposition);

struct DecompositionCheck {
  std::string name;
  bool passed;
  std::string detail;
};

struct DecompositionReport {
  std::vector<DecompositionCheck> checks;

  bool ok() const;
};

/// Independent audit of a decomposition against the original behavior.
DecompositionReport verify_decomposition(const LocalDecomposition& decomposition,
                                         const Behavior& behavior);

}  // namespace hvlab
