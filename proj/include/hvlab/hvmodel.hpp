#pragma once

// Hidden-variable models: a distribution over hidden pairs (u,v) and one
// kernel behavior P(x,y|a,b,u,v) per pair.
//
// The hidden label is the joint pair, so P_UV may be arbitrarily correlated;
// nothing here assumes P_UV = P_U x P_V.

#include <optional>
#include <string>
#include <vector>

#include "hvlab/boxes.hpp"

namespace hvlab {

struct HiddenPair {
  std::string u;
  std::string v;

  std::string label() const { return "(" + u + "," + v + ")"; }
  friend bool operator==(const HiddenPair&, const HiddenPair&) = default;
};

struct HiddenVariableModel {
  std::vector<HiddenPair> pairs;
  std::vector<Scalar> weights;
  std::vector<Behavior> kernels;

  const Spaces& spaces() const { return kernels.front().spaces(); }
  std::size_t size() const { return pairs.size(); }

  friend bool operator==(const HiddenVariableModel&, const HiddenVariableModel&) = default;
};

/// Lists every broken model invariant; empty when the model is valid.
std::vector<std::string> validate_model(const HiddenVariableModel& model);

/// Per-pair non-local variable W with distribution P_{W|uv} and one kernel
/// per (u,v,w).
struct NonlocalExtension {
  LabelSet w_values;
  std::vector<Scalar> w_weights;
  std::vector<Behavior> kernels;

  friend bool operator==(const NonlocalExtension&, const NonlocalExtension&) = default;
};

struct ExtendedModel {
  std::vector<HiddenPair> pairs;
  std::vector<Scalar> weights;
  std::vector<NonlocalExtension> extensions;

  friend bool operator==(const ExtendedModel&, const ExtendedModel&) = default;
};

/// Sum over pairs of P_UV(u,v) times the pair's kernel.
Behavior reconstruct(const HiddenVariableModel& model);

struct LocalityWitness {
  std::size_t pair;
  NsWitness kernel_witness;
};

struct LocalityResult {
  bool local = true;
  std::optional<LocalityWitness> witness;

  explicit operator bool() const { return local; }
};

/// Every positive-weight kernel must be no-signalling, i.e.
/// P(x|a,b,u,v) = P(x|a,u,v) and P(y|a,b,u,v) = P(y|b,u,v).
LocalityResult check_locality(const HiddenVariableModel& model);

struct TrivialityWitness {
  std::size_t pair;
  Side side;
  std::size_t a;
  std::size_t b;
  std::size_t outcome;
  Scalar kernel_value;
  Scalar reference_value;
};

struct TrivialityResult {
  bool trivial = true;
  std::optional<TrivialityWitness> witness;
};

/// Trivial iff every positive-weight kernel reproduces the reference
/// marginals P(x|a,b) and P(y|a,b) exactly. The reference is the model's own
/// reconstruction unless one is given.
TrivialityResult check_triviality(const HiddenVariableModel& model,
                                  const std::optional<Behavior>& reference = std::nullopt);

/// Total weight of pairs that fail the per-pair triviality test.
Scalar nontrivial_weight(const HiddenVariableModel& model,
                         const std::optional<Behavior>& reference = std::nullopt);

/// Success probability of the best guess of one side's outcome given (u,v)
/// at a fixed own setting. Throws NotLocal when the model signals, because
/// the quantity then depends on the counterpart's setting.
Scalar guessing_probability(const HiddenVariableModel& model, Side side, std::size_t setting);
Scalar guessing_probability(const HiddenVariableModel& model, Side side,
                            const std::string& setting);

std::vector<std::string> validate_extended_model(const ExtendedModel& model);

/// Folds W away: kernel(u,v) = sum_w P(w|u,v) kernel(u,v,w).
HiddenVariableModel marginalize_nonlocal(const ExtendedModel& model);

/// Probability vector over a label set.
using Distribution = std::vector<Scalar>;

Distribution uniform_distribution(std::size_t n);

/// Joint over (A, B, U, V, X) for Alice measuring first:
/// P(a,b,u,v,x) = pA(a) pB(b) P_UV(u,v) P(x|a,b,u,v).
JointTable first_mover_joint(const HiddenVariableModel& model, const Distribution& pa,
                             const Distribution& pb);

}  // namespace hvlab
