#include "hvlab/decompose.hpp"

#include <set>

namespace hvlab {

std::vector<Behavior> enumerate_local_vertices(const Spaces& spaces) {
  std::vector<Behavior> out;
  for (const auto& st : enumerate_strategies(spaces)) out.push_back(deterministic_behavior(spaces, st));
  return out;
}

Behavior uniform_behavior(const Spaces& spaces) {
  Behavior out(spaces);
  if (spaces.outcome_pairs() == 0) return out;
  out.table().setConstant(Scalar::fraction(1, static_cast<long>(spaces.outcome_pairs())));
  return out;
}

LocalDecomposition max_local_content(const Behavior& behavior) {
  if (!validate_behavior(behavior).valid()) {
    throw Error(ErrorCode::InvalidBehavior, "local content needs a valid behavior");
  }
  const Spaces& spaces = behavior.spaces();
  if (spaces.setting_pairs() == 0) {
    throw Error(ErrorCode::InvalidBehavior, "behavior has no setting pairs");
  }
  if (!is_no_signalling(behavior)) {
    throw Error(ErrorCode::SignallingInput, "signalling input: no local hidden variable model exists");
  }

  const auto vertices = enumerate_local_vertices(spaces);
  const ScalarMatrix& p = behavior.table();
  const Eigen::Index cells = p.size();
  const Eigen::Index nv = static_cast<Eigen::Index>(vertices.size());

  // Row r*cols+c of the LP is table cell (r, c); column i is vertex i.
  LocalDecomposition out;
  out.lp.A = ScalarMatrix::Constant(cells, nv, Scalar(0));
  out.lp.b = ScalarVector(cells);
  out.lp.c = ScalarVector::Constant(nv, Scalar(1));
  for (Eigen::Index r = 0; r < p.rows(); ++r) {
    for (Eigen::Index c = 0; c < p.cols(); ++c) {
      const Eigen::Index row = r * p.cols() + c;
      out.lp.b(row) = p(r, c);
      for (Eigen::Index i = 0; i < nv; ++i) out.lp.A(row, i) = vertices[static_cast<std::size_t>(i)].table()(r, c);
    }
  }

  out.solution = solve_lp(out.lp);
  if (out.solution.status != LpStatus::optimal) {
    throw Error(ErrorCode::LpFailure, std::string("local content LP ended ") + to_string(out.solution.status));
  }

  out.local_content = out.solution.value;
  ScalarMatrix local = ScalarMatrix::Constant(p.rows(), p.cols(), Scalar(0));
  for (Eigen::Index i = 0; i < nv; ++i) {
    const Scalar& q = out.solution.q(i);
    if (q.is_zero()) continue;
    out.vertices.push_back(vertices[static_cast<std::size_t>(i)]);
    out.weights.push_back(q);
    local += vertices[static_cast<std::size_t>(i)].table() * q;
  }

  if (out.local_content == Scalar(1)) {
    out.residual = uniform_behavior(spaces);
    out.residual_used = false;
  } else {
    const Scalar scale = (Scalar(1) - out.local_content).inverse();
    out.residual = Behavior(spaces, (p - local) * scale);
  }
  return out;
}

namespace {

std::string strategy_label(const std::vector<std::size_t>& table, const LabelSet& outcomes) {
  if (table.empty()) return "-";
  bool constant = true;
  for (auto o : table) constant = constant && o == table.front();
  if (constant) return outcomes[table.front()];
  std::string out;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (i) out += ',';
    out += outcomes[table[i]];
  }
  return out;
}

}  // namespace

HiddenVariableModel decomposition_to_model(const LocalDecomposition& d) {
  if (d.vertices.size() != d.weights.size()) {
    throw Error(ErrorCode::InvalidDecomposition, "vertices and weights differ in length");
  }
  Scalar total(0);
  std::vector<DeterministicStrategy> strategies;
  for (std::size_t i = 0; i < d.vertices.size(); ++i) {
    if (sign(d.weights[i]) < 0) throw Error(ErrorCode::InvalidDecomposition, "negative vertex weight");
    auto st = as_deterministic(d.vertices[i]);
    if (!st) throw Error(ErrorCode::InvalidDecomposition, "vertex is not a deterministic local box");
    strategies.push_back(*st);
    total += d.weights[i];
  }
  if (total != d.local_content || d.local_content > Scalar(1)) {
    throw Error(ErrorCode::InvalidDecomposition, "local content does not match the weights");
  }

  HiddenVariableModel model;
  std::set<std::pair<std::string, std::string>> used;
  std::vector<HiddenPair> vertex_pairs;
  for (std::size_t i = 0; i < d.vertices.size(); ++i) {
    const Spaces& s = d.vertices[i].spaces();
    HiddenPair pair{strategy_label(strategies[i].alice, s.outcomes_x),
                    strategy_label(strategies[i].bob, s.outcomes_y)};
    used.emplace(pair.u, pair.v);
    vertex_pairs.push_back(std::move(pair));
  }

  const bool with_residual = d.local_content != Scalar(1);
  if (with_residual) {
    HiddenPair residual{"0", "0"};
    if (used.count({residual.u, residual.v})) residual = {"*", "*"};
    model.pairs.push_back(residual);
    model.weights.push_back(Scalar(1) - d.local_content);
    model.kernels.push_back(d.residual);
  }
  for (std::size_t i = 0; i < d.vertices.size(); ++i) {
    model.pairs.push_back(vertex_pairs[i]);
    model.weights.push_back(d.weights[i]);
    model.kernels.push_back(d.vertices[i]);
  }

  const auto issues = validate_model(model);
  if (!issues.empty()) throw Error(ErrorCode::InvalidDecomposition, issues.front());
  return model;
}

bool DecompositionReport::ok() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

DecompositionReport verify_decomposition(const LocalDecomposition& d, const Behavior& behavior) {
  DecompositionReport report;
  auto add = [&](std::string name, bool passed, std::string detail = {}) {
    report.checks.push_back({std::move(name), passed, std::move(detail)});
  };

  const bool lengths = d.vertices.size() == d.weights.size();
  add("lengths", lengths, lengths ? "" : "vertices and weights differ in length");
  if (!lengths) return report;

  bool nonnegative = true;
  Scalar total(0);
  for (const auto& w : d.weights) {
    if (sign(w) < 0) nonnegative = false;
    total += w;
  }
  add("nonnegative weights", nonnegative);
  add("content equals weight sum", total == d.local_content,
      "sum " + format_scalar(total) + " vs " + format_scalar(d.local_content));
  add("content at most 1", d.local_content <= Scalar(1) && sign(d.local_content) >= 0,
      format_scalar(d.local_content));

  bool spaces_match = true;
  bool deterministic = true;
  for (const auto& v : d.vertices) {
    if (!(v.spaces() == behavior.spaces())) spaces_match = false;
    else if (!as_deterministic(v)) deterministic = false;
  }
  const bool residual_used = d.residual_used && d.local_content != Scalar(1);
  if (residual_used && !(d.residual.spaces() == behavior.spaces())) spaces_match = false;
  add("spaces match", spaces_match);
  add("vertices deterministic", spaces_match && deterministic);
  if (!spaces_match) return report;

  ScalarMatrix sum = ScalarMatrix::Constant(behavior.table().rows(), behavior.table().cols(), Scalar(0));
  for (std::size_t i = 0; i < d.vertices.size(); ++i) sum += d.vertices[i].table() * d.weights[i];
  if (residual_used) sum += d.residual.table() * (Scalar(1) - d.local_content);
  add("reconstruction exact", sum == behavior.table());

  if (residual_used) {
    const bool residual_valid = validate_behavior(d.residual).valid();
    add("residual valid", residual_valid);
    if (residual_valid && validate_behavior(behavior).valid() && is_no_signalling(behavior)) {
      add("residual no-signalling", static_cast<bool>(is_no_signalling(d.residual)));
    }
  }
  return report;
}

}  // namespace hvlab
