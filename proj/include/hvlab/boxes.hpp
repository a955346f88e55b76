#pragma once

// Bipartite behaviors P(x,y|a,b), their marginals and the no-signalling test,
// plus generic product-independence checks on finite joint tables.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hvlab/scalar.hpp"

namespace hvlab {

/// Ordered list of distinct, non-empty labels. Order defines table indexing.
class LabelSet {
 public:
  LabelSet() = default;
  /// Throws InvalidLabels on duplicates or empty labels.
  explicit LabelSet(std::vector<std::string> labels);
  LabelSet(std::initializer_list<std::string> labels)
      : LabelSet(std::vector<std::string>(labels)) {}

  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  const std::string& operator[](std::size_t i) const { return labels_[i]; }
  const std::vector<std::string>& labels() const { return labels_; }

  std::optional<std::size_t> find(const std::string& label) const;

  auto begin() const { return labels_.begin(); }
  auto end() const { return labels_.end(); }

  friend bool operator==(const LabelSet&, const LabelSet&) = default;

 private:
  std::vector<std::string> labels_;
};

enum class Side { alice, bob };

std::string to_string(Side side);

/// The four label sets of a bipartite scenario.
struct Spaces {
  LabelSet settings_a;
  LabelSet settings_b;
  LabelSet outcomes_x;
  LabelSet outcomes_y;

  std::size_t setting_pairs() const { return settings_a.size() * settings_b.size(); }
  std::size_t outcome_pairs() const { return outcomes_x.size() * outcomes_y.size(); }

  friend bool operator==(const Spaces&, const Spaces&) = default;
};

/// Conditional distribution P(x,y|a,b).
///
/// The table has one row per setting pair (row a * |B| + b) and one column
/// per outcome pair (column x * |Y| + y). A Behavior may hold an invalid
/// table; validate_behavior() reports what is wrong with it and operations
/// that need a valid box throw InvalidBehavior.
class Behavior {
 public:
  Behavior() = default;
  /// Zero-filled table over `spaces`.
  explicit Behavior(Spaces spaces);
  /// Throws SpaceMismatch when `table` has the wrong shape.
  Behavior(Spaces spaces, ScalarMatrix table);

  const Spaces& spaces() const { return spaces_; }
  const ScalarMatrix& table() const { return table_; }
  ScalarMatrix& table() { return table_; }

  Eigen::Index row(std::size_t a, std::size_t b) const {
    return static_cast<Eigen::Index>(a * spaces_.settings_b.size() + b);
  }
  Eigen::Index col(std::size_t x, std::size_t y) const {
    return static_cast<Eigen::Index>(x * spaces_.outcomes_y.size() + y);
  }

  const Scalar& operator()(std::size_t a, std::size_t b, std::size_t x, std::size_t y) const {
    return table_(row(a, b), col(x, y));
  }
  Scalar& operator()(std::size_t a, std::size_t b, std::size_t x, std::size_t y) {
    return table_(row(a, b), col(x, y));
  }

  /// Label-addressed lookup; throws UnknownSetting for unknown labels.
  const Scalar& at(const std::string& a, const std::string& b, const std::string& x,
                   const std::string& y) const;

  friend bool operator==(const Behavior&, const Behavior&);

 private:
  Spaces spaces_;
  ScalarMatrix table_;
};

struct CellRef {
  std::size_t a, b, x, y;
  friend bool operator==(const CellRef&, const CellRef&) = default;
};

struct RowSum {
  std::size_t a, b;
  Scalar sum;
};

struct BehaviorReport {
  std::vector<CellRef> negative_cells;
  std::vector<RowSum> unnormalized_rows;

  bool valid() const { return negative_cells.empty() && unnormalized_rows.empty(); }
};

BehaviorReport validate_behavior(const Behavior& behavior);

/// Outcome distribution of one side at the given setting pair.
ScalarVector marginal(const Behavior& behavior, Side side, std::size_t a, std::size_t b);
ScalarVector marginal(const Behavior& behavior, Side side, const std::string& a,
                      const std::string& b);

/// A place where one side's marginal depends on the other side's setting.
/// For side == alice: own_setting is a, the counterparts are two b settings
/// and outcome is an x; mirrored for bob.
struct NsWitness {
  Side side;
  std::size_t own_setting;
  std::size_t reference_counterpart;
  std::size_t other_counterpart;
  std::size_t outcome;
  Scalar reference_value;
  Scalar other_value;
};

struct NsResult {
  bool no_signalling = true;
  std::optional<NsWitness> witness;

  explicit operator bool() const { return no_signalling; }
};

/// Compares every marginal against the one at the first counterpart setting.
/// Throws InvalidBehavior when the box fails validation.
NsResult is_no_signalling(const Behavior& behavior);

/// Human readable witness, e.g. "alice a=0 x=0: P(x|a,b=0)=1 != P(x|a,b=1)=0".
std::string describe(const NsWitness& witness, const Spaces& spaces);

using MixtureComponent = std::pair<Scalar, Behavior>;

/// Convex combination. Weights must be nonnegative and sum to 1 and all
/// behaviors must share spaces.
Behavior mix(const std::vector<MixtureComponent>& components);

/// Finite joint distribution over named variables; the flat table is
/// row-major with the first variable most significant.
class JointTable {
 public:
  using Variable = std::pair<std::string, LabelSet>;

  JointTable() = default;
  /// Throws InvalidDistribution unless entries are >= 0 and sum to 1, and
  /// InvalidLabels on duplicate variable names.
  JointTable(std::vector<Variable> variables, ScalarVector table);

  const std::vector<Variable>& variables() const { return variables_; }
  const ScalarVector& table() const { return table_; }

  std::optional<std::size_t> variable_index(const std::string& name) const;
  std::size_t flat_index(const std::vector<std::size_t>& assignment) const;
  std::vector<std::size_t> assignment(std::size_t flat) const;

  /// Marginal over the named variables, in the given order.
  JointTable marginal(const std::vector<std::string>& names) const;

 private:
  std::vector<Variable> variables_;
  ScalarVector table_;
};

struct ProductWitness {
  /// (variable, label) for every variable of the table.
  std::vector<std::pair<std::string, std::string>> assignment;
  Scalar joint;
  Scalar left;
  Scalar right;
  Scalar product() const { return left * right; }
};

struct ProductResult {
  bool product = true;
  std::optional<ProductWitness> witness;

  explicit operator bool() const { return product; }
};

/// True iff P(left, right) = P(left) P(right) for every assignment.
/// Throws BadPartition unless left and right partition the variables.
ProductResult check_product(const JointTable& joint, const std::vector<std::string>& left,
                            const std::vector<std::string>& right);

}  // namespace hvlab
