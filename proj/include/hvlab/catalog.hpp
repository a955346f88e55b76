#pragma once

// Built-in constants, boxes and models. Everything is constructed exactly.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hvlab/bell.hpp"
#include "hvlab/hvmodel.hpp"

namespace hvlab::catalog {

/// alpha = 1/2 sin^2(pi/8) = 1/4 - sqrt2/8, via sin^2(pi/8) = (2 - sqrt2)/4.
Scalar alpha();

/// Spaces A in {0,2}, B in {1,3}, X,Y in {+1,-1}.
Spaces chsh_spaces();

/// 1/2 - alpha on agreeing outcomes and alpha on disagreeing ones, with the
/// roles swapped on the (0,3) setting pair.
Behavior table1_box();

/// P = 1/2 when x y = s(a,b) (s(0,3) = -1, otherwise +1), else 0.
Behavior pr_box();

/// Every entry 1/4 on the CHSH spaces.
Behavior noise_box();

/// X = B and Y = A on binary settings and outcomes {0,1}. Outcomes range
/// over the counterpart's setting alphabet, hence not the CHSH labels.
Behavior signalling_box();

/// (0,0) with weight 1 - 4 alpha and the PR kernel; (+-1,+-1) with weight
/// alpha each and the deterministic kernel X = u, Y = v.
HiddenVariableModel appendix_a_model();

/// Shared uniform coin U = V = c in {+1,-1}; the kernel outputs X = Y = c.
HiddenVariableModel classical_model();

/// Single hidden pair whose non-local W in {0,1} picks one of two
/// signalling deterministic kernels (X = w, Y = s(a,b) X); their average is
/// the PR box.
ExtendedModel pr_extension_model();

enum class Kind { scalar, behavior, model, extended_model, expression };

std::string to_string(Kind kind);

using Value = std::variant<Scalar, Behavior, HiddenVariableModel, ExtendedModel, BellExpression>;

struct Entry {
  std::string key;
  Kind kind;
  Value value;
  std::string provenance;
};

/// All entries, keys unique, in a fixed order.
const std::vector<Entry>& entries();

std::optional<Entry> find(const std::string& key);

}  // namespace hvlab::catalog
