#include "hvlab/catalog.hpp"

namespace hvlab::catalog {

namespace {

// Sign pattern s(a,b) of the CHSH expression; index 1 of B is setting 3.
int chsh_sign(std::size_t a, std::size_t b) { return (a == 0 && b == 1) ? -1 : 1; }

const int kOutcome[2] = {1, -1};

}  // namespace

Scalar alpha() {
  const Scalar sin2_pi_8 = (Scalar(2) - Scalar::sqrt2()) / Scalar(4);
  return Scalar::fraction(1, 2) * sin2_pi_8;
}

Spaces chsh_spaces() {
  return Spaces{LabelSet{"0", "2"}, LabelSet{"1", "3"}, LabelSet{"+1", "-1"}, LabelSet{"+1", "-1"}};
}

Behavior table1_box() {
  const Scalar a = alpha();
  const Scalar big = Scalar::fraction(1, 2) - a;
  Behavior box(chsh_spaces());
  for (std::size_t sa = 0; sa < 2; ++sa) {
    for (std::size_t sb = 0; sb < 2; ++sb) {
      for (std::size_t x = 0; x < 2; ++x) {
        for (std::size_t y = 0; y < 2; ++y) {
          const bool favoured = kOutcome[x] * kOutcome[y] == chsh_sign(sa, sb);
          box(sa, sb, x, y) = favoured ? big : a;
        }
      }
    }
  }
  return box;
}

Behavior pr_box() {
  Behavior box(chsh_spaces());
  for (std::size_t sa = 0; sa < 2; ++sa) {
    for (std::size_t sb = 0; sb < 2; ++sb) {
      for (std::size_t x = 0; x < 2; ++x) {
        for (std::size_t y = 0; y < 2; ++y) {
          if (kOutcome[x] * kOutcome[y] == chsh_sign(sa, sb)) box(sa, sb, x, y) = Scalar::fraction(1, 2);
        }
      }
    }
  }
  return box;
}

Behavior noise_box() {
  Behavior box(chsh_spaces());
  box.table().setConstant(Scalar::fraction(1, 4));
  return box;
}

Behavior signalling_box() {
  const LabelSet bits{"0", "1"};
  Behavior box(Spaces{bits, bits, bits, bits});
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t b = 0; b < 2; ++b) box(a, b, b, a) = Scalar(1);
  }
  return box;
}

namespace {

Behavior constant_kernel(std::size_t x, std::size_t y) {
  return deterministic_behavior(chsh_spaces(), DeterministicStrategy{{x, x}, {y, y}});
}

}  // namespace

HiddenVariableModel appendix_a_model() {
  const Scalar a = alpha();
  const LabelSet labels = chsh_spaces().outcomes_x;
  HiddenVariableModel m;
  m.pairs.push_back({"0", "0"});
  m.weights.push_back(Scalar(1) - Scalar(4) * a);
  m.kernels.push_back(pr_box());
  for (std::size_t x = 0; x < 2; ++x) {
    for (std::size_t y = 0; y < 2; ++y) {
      m.pairs.push_back({labels[x], labels[y]});
      m.weights.push_back(a);
      m.kernels.push_back(constant_kernel(x, y));
    }
  }
  return m;
}

HiddenVariableModel classical_model() {
  HiddenVariableModel m;
  for (std::size_t c = 0; c < 2; ++c) {
    const std::string label = chsh_spaces().outcomes_x[c];
    m.pairs.push_back({label, label});
    m.weights.push_back(Scalar::fraction(1, 2));
    m.kernels.push_back(constant_kernel(c, c));
  }
  return m;
}

ExtendedModel pr_extension_model() {
  NonlocalExtension ext;
  ext.w_values = LabelSet{"0", "1"};
  ext.w_weights = {Scalar::fraction(1, 2), Scalar::fraction(1, 2)};
  for (std::size_t w = 0; w < 2; ++w) {
    Behavior k(chsh_spaces());
    for (std::size_t sa = 0; sa < 2; ++sa) {
      for (std::size_t sb = 0; sb < 2; ++sb) {
        // y = s(a,b) x: Bob's outcome depends on Alice's setting.
        const std::size_t y = chsh_sign(sa, sb) == 1 ? w : 1 - w;
        k(sa, sb, w, y) = Scalar(1);
      }
    }
    ext.kernels.push_back(std::move(k));
  }
  return ExtendedModel{{{"0", "0"}}, {Scalar(1)}, {std::move(ext)}};
}

std::string to_string(Kind kind) {
  switch (kind) {
    case Kind::scalar: return "scalar";
    case Kind::behavior: return "behavior";
    case Kind::model: return "model";
    case Kind::extended_model: return "extended-model";
    case Kind::expression: return "expression";
  }
  return "unknown";
}

const std::vector<Entry>& entries() {
  static const std::vector<Entry> all = [] {
    std::vector<Entry> out;
    out.push_back({"alpha", Kind::scalar, alpha(), "alpha = 1/2 sin^2(pi/8) = 1/4 - sqrt2/8"});
    out.push_back({"table1", Kind::behavior, table1_box(), "maximally CHSH-violating correlations P(x,y|a,b) with error weight alpha"});
    out.push_back({"pr", Kind::behavior, pr_box(), "PR box; the (0,0) kernel of the appendix-a model"});
    out.push_back({"noise", Kind::behavior, noise_box(), "uniform box on the CHSH spaces"});
    out.push_back({"signalling", Kind::behavior, signalling_box(),
                   "completely signalling X=B, Y=A on binary labels (outcomes range over the other side's settings)"});
    out.push_back({"appendix-a", Kind::model, appendix_a_model(), "local hidden variables (U,V) with a non-trivial local part reproducing table1"});
    out.push_back({"classical", Kind::model, classical_model(), "shared random coin U=V, X=Y=U"});
    out.push_back({"pr-extension", Kind::extended_model, pr_extension_model(),
                   "non-local W averaging signalling kernels to the PR box"});
    out.push_back({"chsh", Kind::expression, chsh(), "CHSH functional, signs +,+,+,- on (0,3)"});

    for (const auto& e : out) {
      if (const auto* b = std::get_if<Behavior>(&e.value); b && !validate_behavior(*b).valid()) {
        throw Error(ErrorCode::InvalidBehavior, "catalog entry '" + e.key + "' is invalid");
      }
      if (const auto* m = std::get_if<HiddenVariableModel>(&e.value); m && !validate_model(*m).empty()) {
        throw Error(ErrorCode::InvalidModel, "catalog entry '" + e.key + "' is invalid");
      }
      if (const auto* m = std::get_if<ExtendedModel>(&e.value); m && !validate_extended_model(*m).empty()) {
        throw Error(ErrorCode::InvalidModel, "catalog entry '" + e.key + "' is invalid");
      }
    }
    return out;
  }();
  return all;
}

std::optional<Entry> find(const std::string& key) {
  for (const auto& e : entries()) {
    if (e.key == key) return e;
  }
  return std::nullopt;
}

}  // namespace hvlab::catalog
