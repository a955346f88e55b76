#include "hvlab/catalog.hpp"
#include "hvlab/decompose.hpp"
#include "hvlab/sampling.hpp"
#include "oracles/dual_vertices.hpp"
#include "support.hpp"

using namespace hvlab;
using test::s;

namespace {

oracle::Cells cells_of(const Behavior& b) {
  oracle::Cells out;
  for (unsigned a = 0; a < 2; ++a) {
    for (unsigned bb = 0; bb < 2; ++bb) {
      for (unsigned x = 0; x < 2; ++x) {
        for (unsigned y = 0; y < 2; ++y) {
          const Scalar& v = b(a, bb, x, y);
          REQUIRE(v.sqrt2_part() == 0);
          out[oracle::cell(a, bb, x, y)] = v.rational_part();
        }
      }
    }
  }
  return out;
}

}  // namespace

TEST_SUITE("decompose") {

TEST_CASE("local vertices") {
  const auto v = enumerate_local_vertices(catalog::chsh_spaces());
  CHECK(v.size() == 16u);
  for (const auto& d : v) CHECK(is_no_signalling(d));
  const LabelSet two{"0", "1"};
  CHECK(enumerate_local_vertices(Spaces{LabelSet{"a"}, LabelSet{"b"}, two, two}).size() == 4u);
}

TEST_CASE("table1") {
  const Behavior t = catalog::table1_box();
  const LocalDecomposition d = max_local_content(t);
  CHECK(d.local_content == s("2-1*sqrt2"));
  CHECK(d.local_content == Scalar(8) * catalog::alpha());
  CHECK(verify_certificate(d.lp, d.solution).ok());
  CHECK(verify_decomposition(d, t).ok());
  CHECK(d.residual == catalog::pr_box());

  // each deterministic box puts its mass on at least one of the eight alpha cells per unit weight
  Scalar alpha_cells(0);
  for (Eigen::Index r = 0; r < 4; ++r) {
    for (Eigen::Index c = 0; c < 4; ++c) {
      if (t.table()(r, c) == catalog::alpha()) alpha_cells += t.table()(r, c);
    }
  }
  CHECK(alpha_cells == Scalar(8) * catalog::alpha());
  CHECK(d.local_content <= alpha_cells);
}

TEST_CASE("extremes") {
  CHECK(max_local_content(catalog::pr_box()).local_content == Scalar(0));
  for (const auto& v : enumerate_local_vertices(catalog::chsh_spaces())) {
    const LocalDecomposition d = max_local_content(v);
    CHECK(d.local_content == Scalar(1));
    CHECK(!d.residual_used);
    CHECK(verify_decomposition(d, v).ok());
  }
  CHECK(max_local_content(catalog::noise_box()).local_content == Scalar(1));
  CHECK(test::throws_code([] { max_local_content(catalog::signalling_box()); }, ErrorCode::SignallingInput));
  Behavior invalid = catalog::noise_box();
  invalid(0, 0, 0, 0) = Scalar(0);
  CHECK(test::throws_code([&] { max_local_content(invalid); }, ErrorCode::InvalidBehavior));
}

TEST_CASE("decomposition to model") {
  const Behavior t = catalog::table1_box();
  const HiddenVariableModel m = decomposition_to_model(max_local_content(t));
  CHECK(check_locality(m));
  CHECK(reconstruct(m) == t);
  CHECK(nontrivial_weight(m) == s("2-1*sqrt2"));

  const LocalDecomposition zero = max_local_content(catalog::pr_box());
  const HiddenVariableModel single = decomposition_to_model(zero);
  REQUIRE(single.size() == 1u);
  CHECK(single.kernels[0] == catalog::pr_box());
  CHECK(check_triviality(single).trivial);

  // the hand decomposition behind the appendix-a model
  LocalDecomposition hand;
  const Spaces sp = catalog::chsh_spaces();
  for (std::size_t x = 0; x < 2; ++x) {
    for (std::size_t y = 0; y < 2; ++y) {
      hand.vertices.push_back(deterministic_behavior(sp, {{x, x}, {y, y}}));
      hand.weights.push_back(catalog::alpha());
    }
  }
  hand.local_content = Scalar(4) * catalog::alpha();
  hand.residual = catalog::pr_box();
  CHECK(verify_decomposition(hand, t).ok());
  CHECK(decomposition_to_model(hand) == catalog::appendix_a_model());

  LocalDecomposition broken = hand;
  broken.local_content += Scalar(1);
  CHECK(test::throws_code([&] { decomposition_to_model(broken); }, ErrorCode::InvalidDecomposition));
}

TEST_CASE("verify_decomposition failures") {
  const Behavior t = catalog::table1_box();
  LocalDecomposition d = max_local_content(t);
  d.weights[0] += s("1/1000");
  d.local_content += s("1/1000");
  auto rep = verify_decomposition(d, t);
  CHECK(!rep.ok());
  for (const auto& c : rep.checks) {
    if (c.name == "reconstruction exact") CHECK(!c.passed);
  }

  d = max_local_content(t);
  d.weights[0] = -d.weights[0];
  rep = verify_decomposition(d, t);
  for (const auto& c : rep.checks) {
    if (c.name == "nonnegative weights") CHECK(!c.passed);
  }
}

TEST_CASE("dual vertex oracle") {
  const auto vertices = oracle::dual_vertices();
  CHECK(vertices.size() == 132u);
  sampling::Rng rng(67);
  for (int i = 0; i < 60; ++i) {
    const Behavior b = sampling::random_ns_behavior(rng, catalog::chsh_spaces());
    const oracle::Cells c = cells_of(b);
    const Scalar lib = max_local_content(b).local_content;
    CHECK(lib == Scalar(oracle::local_content(c, vertices)));
    CHECK(lib == Scalar(oracle::chsh_losing_mass_bound(c)));
  }
}

TEST_CASE("monotonicity") {
  sampling::Rng rng(71);
  const auto vertices = enumerate_local_vertices(catalog::chsh_spaces());
  for (int i = 0; i < 30; ++i) {
    const Behavior b = sampling::random_ns_behavior(rng, catalog::chsh_spaces());
    const Scalar w = sampling::random_distribution(rng, 2)[0];
    const Behavior& v = vertices[static_cast<std::size_t>(i) % vertices.size()];
    const Scalar before = max_local_content(b).local_content;
    const Scalar after = max_local_content(mix({{w, v}, {Scalar(1) - w, b}})).local_content;
    CHECK(after >= w + (Scalar(1) - w) * before);
  }
}

TEST_CASE("round trip and positive content") {
  sampling::Rng rng(73);
  for (int i = 0; i < 30; ++i) {
    const Behavior b = sampling::random_ns_behavior(rng, catalog::chsh_spaces());
    const LocalDecomposition d = max_local_content(b);
    CHECK(verify_decomposition(d, b).ok());
    const HiddenVariableModel m = decomposition_to_model(d);
    CHECK(reconstruct(m) == b);
    CHECK(check_locality(m));
    if (sign(d.local_content) > 0 && d.local_content != Scalar(1)) {
      bool differs = false;
      for (const auto& v : d.vertices) {
        for (std::size_t a = 0; a < 2; ++a) {
          if (marginal(v, Side::alice, a, 0) != marginal(b, Side::alice, a, 0)) differs = true;
        }
      }
      if (differs) CHECK(sign(nontrivial_weight(m)) > 0);
    }
  }
  // table1 marginals are uniform, so any positive content shows up as nontrivial weight
  CHECK(sign(nontrivial_weight(decomposition_to_model(max_local_content(catalog::table1_box())))) > 0);
}

}  // TEST_SUITE
