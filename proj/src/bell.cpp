#include "hvlab/bell.hpp"

#include "hvlab/lp.hpp"

namespace hvlab {

BellExpression BellExpression::zero(Spaces spaces) {
  BellExpression e{std::move(spaces), {}};
  e.coefficients = ScalarMatrix::Constant(static_cast<Eigen::Index>(e.spaces.setting_pairs()),
                                          static_cast<Eigen::Index>(e.spaces.outcome_pairs()),
                                          Scalar(0));
  return e;
}

Scalar& BellExpression::operator()(std::size_t a, std::size_t b, std::size_t x, std::size_t y) {
  return coefficients(static_cast<Eigen::Index>(a * spaces.settings_b.size() + b),
                      static_cast<Eigen::Index>(x * spaces.outcomes_y.size() + y));
}

const Scalar& BellExpression::operator()(std::size_t a, std::size_t b, std::size_t x,
                                         std::size_t y) const {
  return coefficients(static_cast<Eigen::Index>(a * spaces.settings_b.size() + b),
                      static_cast<Eigen::Index>(x * spaces.outcomes_y.size() + y));
}

Scalar evaluate(const BellExpression& expression, const Behavior& behavior) {
  if (!(expression.spaces == behavior.spaces())) {
    throw Error(ErrorCode::SpaceMismatch, "expression and behavior use different spaces");
  }
  if (expression.coefficients.size() == 0) return Scalar(0);
  return expression.coefficients.cwiseProduct(behavior.table()).sum();
}

BellExpression chsh() {
  BellExpression e = BellExpression::zero(
      Spaces{LabelSet{"0", "2"}, LabelSet{"1", "3"}, LabelSet{"+1", "-1"}, LabelSet{"+1", "-1"}});
  const int value[2] = {1, -1};
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t b = 0; b < 2; ++b) {
      const int s = (a == 0 && b == 1) ? -1 : 1;  // the (0,3) pair
      for (std::size_t x = 0; x < 2; ++x) {
        for (std::size_t y = 0; y < 2; ++y) e(a, b, x, y) = Scalar(s * value[x] * value[y]);
      }
    }
  }
  return e;
}

Behavior deterministic_behavior(const Spaces& spaces, const DeterministicStrategy& strategy) {
  if (strategy.alice.size() != spaces.settings_a.size() ||
      strategy.bob.size() != spaces.settings_b.size()) {
    throw Error(ErrorCode::SpaceMismatch, "strategy does not match the spaces");
  }
  Behavior out(spaces);
  for (std::size_t a = 0; a < spaces.settings_a.size(); ++a) {
    for (std::size_t b = 0; b < spaces.settings_b.size(); ++b) {
      out(a, b, strategy.alice[a], strategy.bob[b]) = Scalar(1);
    }
  }
  return out;
}

std::optional<DeterministicStrategy> as_deterministic(const Behavior& behavior) {
  const Spaces& s = behavior.spaces();
  DeterministicStrategy st{std::vector<std::size_t>(s.settings_a.size(), 0),
                           std::vector<std::size_t>(s.settings_b.size(), 0)};
  std::vector<bool> seen_a(s.settings_a.size(), false), seen_b(s.settings_b.size(), false);
  for (std::size_t a = 0; a < s.settings_a.size(); ++a) {
    for (std::size_t b = 0; b < s.settings_b.size(); ++b) {
      std::optional<std::pair<std::size_t, std::size_t>> unit;
      for (std::size_t x = 0; x < s.outcomes_x.size(); ++x) {
        for (std::size_t y = 0; y < s.outcomes_y.size(); ++y) {
          const Scalar& p = behavior(a, b, x, y);
          if (p.is_zero()) continue;
          if (p != Scalar(1) || unit) return std::nullopt;
          unit = std::make_pair(x, y);
        }
      }
      if (!unit) return std::nullopt;
      if (seen_a[a] && st.alice[a] != unit->first) return std::nullopt;
      if (seen_b[b] && st.bob[b] != unit->second) return std::nullopt;
      st.alice[a] = unit->first;
      st.bob[b] = unit->second;
      seen_a[a] = seen_b[b] = true;
    }
  }
  return st;
}

namespace {

// Every function from n settings to k outcomes, lexicographic.
std::vector<std::vector<std::size_t>> all_functions(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  if (n > 0 && k == 0) return out;
  std::vector<std::size_t> f(n, 0);
  for (;;) {
    out.push_back(f);
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (++f[i] < k) break;
      f[i] = 0;
      if (i == 0) return out;
    }
    if (n == 0) return out;
  }
}

}  // namespace

std::vector<DeterministicStrategy> enumerate_strategies(const Spaces& spaces) {
  const auto fs = all_functions(spaces.settings_a.size(), spaces.outcomes_x.size());
  const auto gs = all_functions(spaces.settings_b.size(), spaces.outcomes_y.size());
  std::vector<DeterministicStrategy> out;
  out.reserve(fs.size() * gs.size());
  for (const auto& f : fs) {
    for (const auto& g : gs) out.push_back({f, g});
  }
  return out;
}

LocalBound local_bound(const BellExpression& expression) {
  const auto strategies = enumerate_strategies(expression.spaces);
  if (strategies.empty()) throw Error(ErrorCode::SpaceMismatch, "no deterministic strategies exist");
  std::optional<LocalBound> best;
  for (const auto& st : strategies) {
    Scalar value(0);
    for (std::size_t a = 0; a < st.alice.size(); ++a) {
      for (std::size_t b = 0; b < st.bob.size(); ++b) value += expression(a, b, st.alice[a], st.bob[b]);
    }
    if (!best || value > best->value) best = LocalBound{value, st};
  }
  return *best;
}

Scalar ns_bound(const BellExpression& expression) {
  const Spaces& s = expression.spaces;
  const std::size_t na = s.settings_a.size(), nb = s.settings_b.size();
  const std::size_t nx = s.outcomes_x.size(), ny = s.outcomes_y.size();
  if (na == 0 || nb == 0) return Scalar(0);

  auto var = [&](std::size_t a, std::size_t b, std::size_t x, std::size_t y) {
    return static_cast<Eigen::Index>(((a * nb + b) * nx + x) * ny + y);
  };
  const Eigen::Index n = static_cast<Eigen::Index>(na * nb * nx * ny);

  // Equalities E p = f, each emitted as a pair of inequalities.
  std::vector<ScalarVector> rows;
  std::vector<Scalar> rhs;
  auto equality = [&](const ScalarVector& row, const Scalar& value) {
    rows.push_back(row);
    rhs.push_back(value);
    rows.push_back(-row);
    rhs.push_back(-value);
  };
  for (std::size_t a = 0; a < na; ++a) {
    for (std::size_t b = 0; b < nb; ++b) {
      ScalarVector row = ScalarVector::Constant(n, Scalar(0));
      for (std::size_t x = 0; x < nx; ++x) {
        for (std::size_t y = 0; y < ny; ++y) row(var(a, b, x, y)) = Scalar(1);
      }
      equality(row, Scalar(1));
    }
  }
  for (std::size_t a = 0; a < na; ++a) {
    for (std::size_t b = 1; b < nb; ++b) {
      for (std::size_t x = 0; x < nx; ++x) {
        ScalarVector row = ScalarVector::Constant(n, Scalar(0));
        for (std::size_t y = 0; y < ny; ++y) {
          row(var(a, b, x, y)) = Scalar(1);
          row(var(a, 0, x, y)) = Scalar(-1);
        }
        equality(row, Scalar(0));
      }
    }
  }
  for (std::size_t b = 0; b < nb; ++b) {
    for (std::size_t a = 1; a < na; ++a) {
      for (std::size_t y = 0; y < ny; ++y) {
        ScalarVector row = ScalarVector::Constant(n, Scalar(0));
        for (std::size_t x = 0; x < nx; ++x) {
          row(var(a, b, x, y)) = Scalar(1);
          row(var(0, b, x, y)) = Scalar(-1);
        }
        equality(row, Scalar(0));
      }
    }
  }

  LpProblem<Scalar> lp;
  lp.A = ScalarMatrix(static_cast<Eigen::Index>(rows.size()), n);
  lp.b = ScalarVector(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    lp.A.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
    lp.b(static_cast<Eigen::Index>(i)) = rhs[i];
  }
  lp.c = ScalarVector(n);
  for (std::size_t a = 0; a < na; ++a) {
    for (std::size_t b = 0; b < nb; ++b) {
      for (std::size_t x = 0; x < nx; ++x) {
        for (std::size_t y = 0; y < ny; ++y) lp.c(var(a, b, x, y)) = expression(a, b, x, y);
      }
    }
  }

  const auto solution = solve_lp(lp);
  if (solution.status != LpStatus::optimal) {
    throw Error(ErrorCode::LpFailure, std::string("no-signalling LP ended ") + to_string(solution.status));
  }
  if (!verify_certificate(lp, solution).ok()) {
    throw Error(ErrorCode::LpFailure, "no-signalling LP certificate did not verify");
  }
  return solution.value;
}

}  // namespace hvlab
