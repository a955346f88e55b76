#include "hvlab/hvmodel.hpp"

#include <algorithm>
#include <set>

namespace hvlab {

namespace {

bool is_distribution(const std::vector<Scalar>& weights) {
  Scalar total(0);
  for (const auto& w : weights) {
    if (sign(w) < 0) return false;
    total += w;
  }
  return total == Scalar(1);
}

void require_valid(const HiddenVariableModel& model) {
  const auto issues = validate_model(model);
  if (!issues.empty()) throw Error(ErrorCode::InvalidModel, issues.front());
}

}  // namespace

std::vector<std::string> validate_model(const HiddenVariableModel& model) {
  std::vector<std::string> issues;
  if (model.pairs.empty()) {
    issues.emplace_back("model has no hidden pairs");
    return issues;
  }
  if (model.weights.size() != model.pairs.size() || model.kernels.size() != model.pairs.size()) {
    issues.emplace_back("pairs, weights and kernels differ in length");
    return issues;
  }
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& p : model.pairs) {
    if (p.u.empty() || p.v.empty()) issues.push_back("empty hidden label in pair " + p.label());
    if (!seen.emplace(p.u, p.v).second) issues.push_back("duplicate hidden pair " + p.label());
  }
  if (!is_distribution(model.weights)) {
    issues.emplace_back("P_UV is not a distribution (weights must be >= 0 and sum to 1)");
  }
  const Spaces& spaces = model.kernels.front().spaces();
  for (std::size_t i = 0; i < model.size(); ++i) {
    if (!(model.kernels[i].spaces() == spaces)) {
      issues.push_back("kernel " + model.pairs[i].label() + " uses different spaces");
    } else if (!validate_behavior(model.kernels[i]).valid()) {
      issues.push_back("kernel " + model.pairs[i].label() + " is not a valid behavior");
    }
  }
  return issues;
}

Behavior reconstruct(const HiddenVariableModel& model) {
  require_valid(model);
  std::vector<MixtureComponent> parts;
  parts.reserve(model.size());
  for (std::size_t i = 0; i < model.size(); ++i) parts.emplace_back(model.weights[i], model.kernels[i]);
  return mix(parts);
}

LocalityResult check_locality(const HiddenVariableModel& model) {
  require_valid(model);
  for (std::size_t i = 0; i < model.size(); ++i) {
    if (sign(model.weights[i]) == 0) continue;
    NsResult ns = is_no_signalling(model.kernels[i]);
    if (!ns) return {false, LocalityWitness{i, *ns.witness}};
  }
  return {};
}

namespace {

std::optional<TrivialityWitness> first_marginal_difference(const Behavior& kernel,
                                                           const Behavior& reference,
                                                           std::size_t pair) {
  const Spaces& s = kernel.spaces();
  for (Side side : {Side::alice, Side::bob}) {
    for (std::size_t a = 0; a < s.settings_a.size(); ++a) {
      for (std::size_t b = 0; b < s.settings_b.size(); ++b) {
        const ScalarVector k = marginal(kernel, side, a, b);
        const ScalarVector r = marginal(reference, side, a, b);
        for (Eigen::Index o = 0; o < k.size(); ++o) {
          if (k(o) != r(o)) {
            return TrivialityWitness{pair, side, a, b, static_cast<std::size_t>(o), k(o), r(o)};
          }
        }
      }
    }
  }
  return std::nullopt;
}

Behavior reference_for(const HiddenVariableModel& model, const std::optional<Behavior>& reference) {
  if (!reference) return reconstruct(model);
  if (!(reference->spaces() == model.spaces())) {
    throw Error(ErrorCode::SpaceMismatch, "reference box and model use different spaces");
  }
  return *reference;
}

}  // namespace

TrivialityResult check_triviality(const HiddenVariableModel& model,
                                  const std::optional<Behavior>& reference) {
  require_valid(model);
  const Behavior observed = reference_for(model, reference);
  for (std::size_t i = 0; i < model.size(); ++i) {
    if (sign(model.weights[i]) == 0) continue;
    if (auto w = first_marginal_difference(model.kernels[i], observed, i)) return {false, w};
  }
  return {};
}

Scalar nontrivial_weight(const HiddenVariableModel& model, const std::optional<Behavior>& reference) {
  require_valid(model);
  const Behavior observed = reference_for(model, reference);
  Scalar total(0);
  for (std::size_t i = 0; i < model.size(); ++i) {
    if (sign(model.weights[i]) == 0) continue;
    if (first_marginal_difference(model.kernels[i], observed, i)) total += model.weights[i];
  }
  return total;
}

Scalar guessing_probability(const HiddenVariableModel& model, Side side, std::size_t setting) {
  require_valid(model);
  const Spaces& s = model.spaces();
  const LabelSet& own = side == Side::alice ? s.settings_a : s.settings_b;
  const LabelSet& counter = side == Side::alice ? s.settings_b : s.settings_a;
  if (setting >= own.size()) throw Error(ErrorCode::UnknownSetting, "setting index out of range");
  if (counter.empty()) throw Error(ErrorCode::InvalidModel, "counterpart has no settings");
  if (!check_locality(model)) {
    throw Error(ErrorCode::NotLocal, "guessing probability needs kernels that do not signal");
  }
  Scalar total(0);
  for (std::size_t i = 0; i < model.size(); ++i) {
    if (sign(model.weights[i]) == 0) continue;
    const ScalarVector m = side == Side::alice ? marginal(model.kernels[i], side, setting, 0)
                                               : marginal(model.kernels[i], side, 0, setting);
    Scalar best = m(0);
    for (Eigen::Index o = 1; o < m.size(); ++o) best = std::max(best, m(o));
    total += model.weights[i] * best;
  }
  return total;
}

Scalar guessing_probability(const HiddenVariableModel& model, Side side,
                            const std::string& setting) {
  require_valid(model);
  const Spaces& s = model.spaces();
  const LabelSet& own = side == Side::alice ? s.settings_a : s.settings_b;
  auto i = own.find(setting);
  if (!i) throw Error(ErrorCode::UnknownSetting, "unknown setting '" + setting + "'");
  return guessing_probability(model, side, *i);
}

std::vector<std::string> validate_extended_model(const ExtendedModel& model) {
  std::vector<std::string> issues;
  if (model.pairs.empty()) {
    issues.emplace_back("model has no hidden pairs");
    return issues;
  }
  if (model.weights.size() != model.pairs.size() || model.extensions.size() != model.pairs.size()) {
    issues.emplace_back("pairs, weights and extensions differ in length");
    return issues;
  }
  if (!is_distribution(model.weights)) {
    issues.emplace_back("P_UV is not a distribution (weights must be >= 0 and sum to 1)");
  }
  const Spaces* spaces = nullptr;
  for (std::size_t i = 0; i < model.pairs.size(); ++i) {
    const auto& ext = model.extensions[i];
    const std::string label = model.pairs[i].label();
    if (ext.w_values.empty() || ext.w_weights.size() != ext.w_values.size() ||
        ext.kernels.size() != ext.w_values.size()) {
      issues.push_back("W extension of " + label + " is malformed");
      continue;
    }
    if (!is_distribution(ext.w_weights)) issues.push_back("P_{W|uv} of " + label + " is not a distribution");
    for (const auto& k : ext.kernels) {
      if (!spaces) spaces = &k.spaces();
      if (!(k.spaces() == *spaces)) {
        issues.push_back("a kernel of " + label + " uses different spaces");
      } else if (!validate_behavior(k).valid()) {
        issues.push_back("a kernel of " + label + " is not a valid behavior");
      }
    }
  }
  return issues;
}

HiddenVariableModel marginalize_nonlocal(const ExtendedModel& model) {
  const auto issues = validate_extended_model(model);
  if (!issues.empty()) throw Error(ErrorCode::InvalidModel, issues.front());
  HiddenVariableModel out{model.pairs, model.weights, {}};
  for (const auto& ext : model.extensions) {
    std::vector<MixtureComponent> parts;
    for (std::size_t w = 0; w < ext.kernels.size(); ++w) parts.emplace_back(ext.w_weights[w], ext.kernels[w]);
    out.kernels.push_back(mix(parts));
  }
  return out;
}

Distribution uniform_distribution(std::size_t n) {
  if (n == 0) return {};
  return Distribution(n, Scalar::fraction(1, static_cast<long>(n)));
}

JointTable first_mover_joint(const HiddenVariableModel& model, const Distribution& pa,
                             const Distribution& pb) {
  require_valid(model);
  const Spaces& s = model.spaces();
  if (pa.size() != s.settings_a.size() || !is_distribution(pa)) {
    throw Error(ErrorCode::InvalidDistribution, "pA is not a distribution over Alice's settings");
  }
  if (pb.size() != s.settings_b.size() || !is_distribution(pb)) {
    throw Error(ErrorCode::InvalidDistribution, "pB is not a distribution over Bob's settings");
  }

  std::vector<std::string> us, vs;
  for (const auto& p : model.pairs) {
    if (std::find(us.begin(), us.end(), p.u) == us.end()) us.push_back(p.u);
    if (std::find(vs.begin(), vs.end(), p.v) == vs.end()) vs.push_back(p.v);
  }
  std::vector<JointTable::Variable> vars{{"A", s.settings_a},
                                         {"B", s.settings_b},
                                         {"U", LabelSet(us)},
                                         {"V", LabelSet(vs)},
                                         {"X", s.outcomes_x}};
  const std::size_t nx = s.outcomes_x.size();
  const std::size_t size = s.settings_a.size() * s.settings_b.size() * us.size() * vs.size() * nx;
  ScalarVector table = ScalarVector::Constant(static_cast<Eigen::Index>(size), Scalar(0));

  auto flat = [&](std::size_t a, std::size_t b, std::size_t u, std::size_t v, std::size_t x) {
    return static_cast<Eigen::Index>(
        (((a * s.settings_b.size() + b) * us.size() + u) * vs.size() + v) * nx + x);
  };
  for (std::size_t i = 0; i < model.size(); ++i) {
    const std::size_t u = static_cast<std::size_t>(std::find(us.begin(), us.end(), model.pairs[i].u) - us.begin());
    const std::size_t v = static_cast<std::size_t>(std::find(vs.begin(), vs.end(), model.pairs[i].v) - vs.begin());
    for (std::size_t a = 0; a < s.settings_a.size(); ++a) {
      for (std::size_t b = 0; b < s.settings_b.size(); ++b) {
        const Scalar prefix = pa[a] * pb[b] * model.weights[i];
        if (prefix.is_zero()) continue;
        const ScalarVector px = marginal(model.kernels[i], Side::alice, a, b);
        for (std::size_t x = 0; x < nx; ++x) table(flat(a, b, u, v, x)) += prefix * px(static_cast<Eigen::Index>(x));
      }
    }
  }
  return JointTable(std::move(vars), std::move(table));
}

}  // namespace hvlab
