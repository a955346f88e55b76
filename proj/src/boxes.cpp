#include "hvlab/boxes.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace hvlab {

LabelSet::LabelSet(std::vector<std::string> labels) : labels_(std::move(labels)) {
  std::set<std::string> seen;
  for (const auto& label : labels_) {
    if (label.empty()) throw Error(ErrorCode::InvalidLabels, "empty label");
    if (!seen.insert(label).second) {
      throw Error(ErrorCode::InvalidLabels, "duplicate label '" + label + "'");
    }
  }
}

std::optional<std::size_t> LabelSet::find(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

std::string to_string(Side side) { return side == Side::alice ? "alice" : "bob"; }

Behavior::Behavior(Spaces spaces) : spaces_(std::move(spaces)) {
  table_ = ScalarMatrix::Constant(static_cast<Eigen::Index>(spaces_.setting_pairs()),
                                  static_cast<Eigen::Index>(spaces_.outcome_pairs()), Scalar(0));
}

Behavior::Behavior(Spaces spaces, ScalarMatrix table)
    : spaces_(std::move(spaces)), table_(std::move(table)) {
  if (table_.rows() != static_cast<Eigen::Index>(spaces_.setting_pairs()) ||
      table_.cols() != static_cast<Eigen::Index>(spaces_.outcome_pairs())) {
    throw Error(ErrorCode::SpaceMismatch, "table shape does not match the label sets");
  }
}

namespace {

std::size_t index_or_throw(const LabelSet& set, const std::string& label, const char* what) {
  auto i = set.find(label);
  if (!i) throw Error(ErrorCode::UnknownSetting, std::string("unknown ") + what + " '" + label + "'");
  return *i;
}

}  // namespace

const Scalar& Behavior::at(const std::string& a, const std::string& b, const std::string& x,
                           const std::string& y) const {
  return (*this)(index_or_throw(spaces_.settings_a, a, "setting"),
                 index_or_throw(spaces_.settings_b, b, "setting"),
                 index_or_throw(spaces_.outcomes_x, x, "outcome"),
                 index_or_throw(spaces_.outcomes_y, y, "outcome"));
}

bool operator==(const Behavior& lhs, const Behavior& rhs) {
  return lhs.spaces_ == rhs.spaces_ && lhs.table_ == rhs.table_;
}

BehaviorReport validate_behavior(const Behavior& behavior) {
  BehaviorReport report;
  const Spaces& s = behavior.spaces();
  for (std::size_t a = 0; a < s.settings_a.size(); ++a) {
    for (std::size_t b = 0; b < s.settings_b.size(); ++b) {
      for (std::size_t x = 0; x < s.outcomes_x.size(); ++x) {
        for (std::size_t y = 0; y < s.outcomes_y.size(); ++y) {
          if (sign(behavior(a, b, x, y)) < 0) report.negative_cells.push_back({a, b, x, y});
        }
      }
      Scalar sum = behavior.table().row(behavior.row(a, b)).sum();
      if (sum != Scalar(1)) report.unnormalized_rows.push_back({a, b, sum});
    }
  }
  return report;
}

ScalarVector marginal(const Behavior& behavior, Side side, std::size_t a, std::size_t b) {
  const Spaces& s = behavior.spaces();
  if (a >= s.settings_a.size() || b >= s.settings_b.size()) {
    throw Error(ErrorCode::UnknownSetting, "setting index out of range");
  }
  const std::size_t nx = s.outcomes_x.size();
  const std::size_t ny = s.outcomes_y.size();
  const auto cells = behavior.table().row(behavior.row(a, b));
  // cells viewed as an |X| x |Y| matrix, row-major
  ScalarVector out(static_cast<Eigen::Index>(side == Side::alice ? nx : ny));
  out.setConstant(Scalar(0));
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      out(static_cast<Eigen::Index>(side == Side::alice ? x : y)) += cells(behavior.col(x, y));
    }
  }
  return out;
}

ScalarVector marginal(const Behavior& behavior, Side side, const std::string& a,
                      const std::string& b) {
  const Spaces& s = behavior.spaces();
  return marginal(behavior, side, index_or_throw(s.settings_a, a, "setting"),
                  index_or_throw(s.settings_b, b, "setting"));
}

NsResult is_no_signalling(const Behavior& behavior) {
  if (!validate_behavior(behavior).valid()) {
    throw Error(ErrorCode::InvalidBehavior, "no-signalling check needs a valid behavior");
  }
  const Spaces& s = behavior.spaces();
  const std::size_t na = s.settings_a.size();
  const std::size_t nb = s.settings_b.size();

  // Alice: P(x|a,b) against P(x|a,b0).
  for (std::size_t a = 0; a < na; ++a) {
    if (nb == 0) break;
    const ScalarVector reference = marginal(behavior, Side::alice, a, 0);
    for (std::size_t b = 1; b < nb; ++b) {
      const ScalarVector other = marginal(behavior, Side::alice, a, b);
      for (Eigen::Index x = 0; x < reference.size(); ++x) {
        if (reference(x) != other(x)) {
          return {false, NsWitness{Side::alice, a, 0, b, static_cast<std::size_t>(x), reference(x),
                                   other(x)}};
        }
      }
    }
  }
  for (std::size_t b = 0; b < nb; ++b) {
    if (na == 0) break;
    const ScalarVector reference = marginal(behavior, Side::bob, 0, b);
    for (std::size_t a = 1; a < na; ++a) {
      const ScalarVector other = marginal(behavior, Side::bob, a, b);
      for (Eigen::Index y = 0; y < reference.size(); ++y) {
        if (reference(y) != other(y)) {
          return {false, NsWitness{Side::bob, b, 0, a, static_cast<std::size_t>(y), reference(y),
                                   other(y)}};
        }
      }
    }
  }
  return {};
}

std::string describe(const NsWitness& w, const Spaces& s) {
  const bool alice = w.side == Side::alice;
  const LabelSet& own = alice ? s.settings_a : s.settings_b;
  const LabelSet& counter = alice ? s.settings_b : s.settings_a;
  const LabelSet& outcomes = alice ? s.outcomes_x : s.outcomes_y;
  const char* own_name = alice ? "a" : "b";
  const char* counter_name = alice ? "b" : "a";
  const char* outcome_name = alice ? "x" : "y";
  std::ostringstream os;
  os << to_string(w.side) << ' ' << own_name << '=' << own[w.own_setting] << ' ' << outcome_name
     << '=' << outcomes[w.outcome] << ": P(" << outcome_name << '|' << own_name << ','
     << counter_name << '=' << counter[w.reference_counterpart] << ")=" << w.reference_value
     << " != P(" << outcome_name << '|' << own_name << ',' << counter_name << '='
     << counter[w.other_counterpart] << ")=" << w.other_value;
  return os.str();
}

Behavior mix(const std::vector<MixtureComponent>& components) {
  if (components.empty()) throw Error(ErrorCode::WeightSumMismatch, "empty mixture");
  Scalar total(0);
  const Spaces& spaces = components.front().second.spaces();
  for (const auto& [weight, behavior] : components) {
    if (sign(weight) < 0) throw Error(ErrorCode::InvalidDistribution, "negative mixture weight");
    if (!(behavior.spaces() == spaces)) {
      throw Error(ErrorCode::SpaceMismatch, "mixture components live on different spaces");
    }
    total += weight;
  }
  if (total != Scalar(1)) {
    throw Error(ErrorCode::WeightSumMismatch, "mixture weights sum to " + format_scalar(total));
  }
  Behavior out(spaces);
  for (const auto& [weight, behavior] : components) {
    if (weight.is_zero()) continue;
    out.table() += behavior.table() * weight;
  }
  return out;
}

JointTable::JointTable(std::vector<Variable> variables, ScalarVector table)
    : variables_(std::move(variables)), table_(std::move(table)) {
  std::set<std::string> names;
  std::size_t size = 1;
  for (const auto& [name, labels] : variables_) {
    if (!names.insert(name).second) {
      throw Error(ErrorCode::InvalidLabels, "duplicate variable '" + name + "'");
    }
    size *= labels.size();
  }
  if (static_cast<std::size_t>(table_.size()) != size) {
    throw Error(ErrorCode::SpaceMismatch, "joint table size does not match its variables");
  }
  for (Eigen::Index i = 0; i < table_.size(); ++i) {
    if (sign(table_(i)) < 0) throw Error(ErrorCode::InvalidDistribution, "negative joint entry");
  }
  if (table_.sum() != Scalar(1)) {
    throw Error(ErrorCode::InvalidDistribution, "joint table does not sum to 1");
  }
}

std::optional<std::size_t> JointTable::variable_index(const std::string& name) const {
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    if (variables_[i].first == name) return i;
  }
  return std::nullopt;
}

std::size_t JointTable::flat_index(const std::vector<std::size_t>& assignment) const {
  std::size_t flat = 0;
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    flat = flat * variables_[i].second.size() + assignment[i];
  }
  return flat;
}

std::vector<std::size_t> JointTable::assignment(std::size_t flat) const {
  std::vector<std::size_t> out(variables_.size());
  for (std::size_t i = variables_.size(); i-- > 0;) {
    const std::size_t n = variables_[i].second.size();
    out[i] = flat % n;
    flat /= n;
  }
  return out;
}

JointTable JointTable::marginal(const std::vector<std::string>& names) const {
  std::vector<std::size_t> picks;
  std::vector<Variable> vars;
  for (const auto& name : names) {
    auto i = variable_index(name);
    if (!i) throw Error(ErrorCode::BadPartition, "unknown variable '" + name + "'");
    picks.push_back(*i);
    vars.push_back(variables_[*i]);
  }
  std::size_t size = 1;
  for (const auto& v : vars) size *= v.second.size();
  ScalarVector out = ScalarVector::Constant(static_cast<Eigen::Index>(size), Scalar(0));
  for (Eigen::Index flat = 0; flat < table_.size(); ++flat) {
    if (table_(flat).is_zero()) continue;
    const auto full = assignment(static_cast<std::size_t>(flat));
    std::size_t idx = 0;
    for (std::size_t k = 0; k < picks.size(); ++k) {
      idx = idx * vars[k].second.size() + full[picks[k]];
    }
    out(static_cast<Eigen::Index>(idx)) += table_(flat);
  }
  return JointTable(std::move(vars), std::move(out));
}

ProductResult check_product(const JointTable& joint, const std::vector<std::string>& left,
                            const std::vector<std::string>& right) {
  const auto& vars = joint.variables();
  std::vector<int> owner(vars.size(), -1);
  auto claim = [&](const std::vector<std::string>& names, int side) {
    for (const auto& name : names) {
      auto i = joint.variable_index(name);
      if (!i) throw Error(ErrorCode::BadPartition, "unknown variable '" + name + "'");
      if (owner[*i] != -1) throw Error(ErrorCode::BadPartition, "variable '" + name + "' listed twice");
      owner[*i] = side;
    }
  };
  claim(left, 0);
  claim(right, 1);
  if (std::find(owner.begin(), owner.end(), -1) != owner.end()) {
    throw Error(ErrorCode::BadPartition, "left and right do not cover every variable");
  }

  const JointTable pl = joint.marginal(left);
  const JointTable pr = joint.marginal(right);
  std::vector<std::size_t> li(left.size()), ri(right.size());
  for (std::size_t k = 0; k < left.size(); ++k) li[k] = *joint.variable_index(left[k]);
  for (std::size_t k = 0; k < right.size(); ++k) ri[k] = *joint.variable_index(right[k]);

  for (Eigen::Index flat = 0; flat < joint.table().size(); ++flat) {
    const auto full = joint.assignment(static_cast<std::size_t>(flat));
    std::vector<std::size_t> la(left.size()), ra(right.size());
    for (std::size_t k = 0; k < li.size(); ++k) la[k] = full[li[k]];
    for (std::size_t k = 0; k < ri.size(); ++k) ra[k] = full[ri[k]];
    const Scalar& l = pl.table()(static_cast<Eigen::Index>(pl.flat_index(la)));
    const Scalar& r = pr.table()(static_cast<Eigen::Index>(pr.flat_index(ra)));
    if (joint.table()(flat) != l * r) {
      ProductWitness w{{}, joint.table()(flat), l, r};
      for (std::size_t i = 0; i < vars.size(); ++i) {
        w.assignment.emplace_back(vars[i].first, vars[i].second[full[i]]);
      }
      return {false, std::move(w)};
    }
  }
  return {};
}

}  // namespace hvlab
