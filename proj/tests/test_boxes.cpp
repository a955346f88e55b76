#include "hvlab/catalog.hpp"
#include "hvlab/sampling.hpp"
#include "support.hpp"

using namespace hvlab;
using test::s;

namespace {

Spaces bits() {
  const LabelSet b{"0", "1"};
  return Spaces{b, b, b, b};
}

}  // namespace

TEST_SUITE("boxes") {

TEST_CASE("label sets") {
  CHECK(test::throws_code([] { LabelSet({"0", ""}); }, ErrorCode::InvalidLabels));
  CHECK(test::throws_code([] { LabelSet({"a", "a"}); }, ErrorCode::InvalidLabels));
  const LabelSet l{"0", "2"};
  CHECK(l.find("2") == 1u);
  CHECK(!l.find("1"));
}

TEST_CASE("behavior shape") {
  CHECK(test::throws_code([] { Behavior(bits(), ScalarMatrix::Constant(3, 4, Scalar(0))); }, ErrorCode::SpaceMismatch));
  const Behavior t = catalog::table1_box();
  CHECK(t.at("0", "3", "+1", "+1") == s("1/4-1/8*sqrt2"));
  CHECK(t.at("0", "1", "+1", "+1") == s("1/4+1/8*sqrt2"));
  CHECK(test::throws_code([&] { t.at("1", "3", "+1", "+1"); }, ErrorCode::UnknownSetting));
}

TEST_CASE("validate_behavior") {
  CHECK(validate_behavior(catalog::table1_box()).valid());

  Behavior neg = catalog::noise_box();
  neg(1, 0, 0, 1) = s("-1/8");
  neg(1, 0, 1, 1) = s("5/8");
  auto rep = validate_behavior(neg);
  CHECK(!rep.valid());
  REQUIRE(rep.negative_cells.size() == 1);
  CHECK(rep.negative_cells[0] == CellRef{1, 0, 0, 1});
  CHECK(rep.unnormalized_rows.empty());

  Behavior half = catalog::noise_box();
  half(0, 1, 0, 0) = Scalar(0);
  half(0, 1, 1, 1) = Scalar(0);
  rep = validate_behavior(half);
  CHECK(!rep.valid());
  REQUIRE(rep.unnormalized_rows.size() == 1);
  CHECK(rep.unnormalized_rows[0].a == 0);
  CHECK(rep.unnormalized_rows[0].b == 1);
  CHECK(rep.unnormalized_rows[0].sum == s("1/2"));
}

TEST_CASE("validate_behavior fuzz with perturbed tables") {
  std::mt19937_64 rng(23);
  sampling::Rng srng(23);
  std::uniform_int_distribution<int> pick(0, 15), delta(-3, 3);
  for (int i = 0; i < 200; ++i) {
    Behavior b = sampling::random_ns_behavior(srng, catalog::chsh_spaces());
    REQUIRE(validate_behavior(b).valid());
    const int c = pick(rng);
    const Scalar d = Scalar::fraction(delta(rng), 8);
    b.table()(c / 4, c % 4) += d;
    bool expect_valid = true;
    for (Eigen::Index r = 0; r < 4; ++r) {
      Scalar sum(0);
      for (Eigen::Index k = 0; k < 4; ++k) {
        if (sign(b.table()(r, k)) < 0) expect_valid = false;
        sum += b.table()(r, k);
      }
      if (sum != Scalar(1)) expect_valid = false;
    }
    CHECK(validate_behavior(b).valid() == expect_valid);
    CHECK(expect_valid == d.is_zero());
  }
}

TEST_CASE("marginals") {
  const Behavior t = catalog::table1_box();
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t b = 0; b < 2; ++b) {
      const ScalarVector m = marginal(t, Side::alice, a, b);
      CHECK(m(0) == s("1/2"));
      CHECK(m(1) == s("1/2"));
      const ScalarVector mb = marginal(catalog::pr_box(), Side::bob, a, b);
      CHECK(mb(0) == s("1/2"));
      CHECK(mb(1) == s("1/2"));
    }
  }
  const ScalarVector sig = marginal(catalog::signalling_box(), Side::alice, "0", "1");
  CHECK(sig(0) == Scalar(0));
  CHECK(sig(1) == Scalar(1));
}

TEST_CASE("no-signalling") {
  CHECK(is_no_signalling(catalog::table1_box()));
  CHECK(is_no_signalling(catalog::pr_box()));
  CHECK(is_no_signalling(catalog::noise_box()));
  const NsResult r = is_no_signalling(catalog::signalling_box());
  CHECK(!r);
  REQUIRE(r.witness);
  CHECK(r.witness->side == Side::alice);
  CHECK(r.witness->reference_value != r.witness->other_value);
  CHECK(describe(*r.witness, catalog::signalling_box().spaces()) ==
        "alice a=0 x=0: P(x|a,b=0)=1 != P(x|a,b=1)=0");

  // bob-side only: Y = A with X uniform
  Behavior bob(bits());
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t b = 0; b < 2; ++b) {
      for (std::size_t x = 0; x < 2; ++x) bob(a, b, x, a) = s("1/2");
    }
  }
  const NsResult rb = is_no_signalling(bob);
  REQUIRE(rb.witness);
  CHECK(rb.witness->side == Side::bob);

  Behavior invalid = catalog::noise_box();
  invalid(0, 0, 0, 0) = Scalar(1);
  CHECK(test::throws_code([&] { is_no_signalling(invalid); }, ErrorCode::InvalidBehavior));
}

TEST_CASE("degenerate spaces") {
  const Spaces one{LabelSet{"a"}, LabelSet{"b"}, LabelSet{"x"}, LabelSet{"y", "z"}};
  Behavior b(one);
  b(0, 0, 0, 0) = s("1/3");
  b(0, 0, 0, 1) = s("2/3");
  CHECK(validate_behavior(b).valid());
  CHECK(is_no_signalling(b));
}

TEST_CASE("mix") {
  const Scalar w = s("1/2*sqrt2");
  CHECK(mix({{w, catalog::pr_box()}, {Scalar(1) - w, catalog::noise_box()}}) == catalog::table1_box());
  const Behavior t = catalog::table1_box();
  CHECK(mix({{Scalar(1), t}}) == t);
  CHECK(mix({{s("1/2"), t}, {s("1/2"), t}}) == t);
  CHECK(test::throws_code([&] { mix({{s("1/2"), t}}); }, ErrorCode::WeightSumMismatch));
  CHECK(test::throws_code([&] { mix({{s("3/2"), t}, {s("-1/2"), t}}); }, ErrorCode::InvalidDistribution));
  CHECK(test::throws_code([&] { mix({{s("1/2"), t}, {s("1/2"), catalog::signalling_box()}}); },
                          ErrorCode::SpaceMismatch));
}

TEST_CASE("mixture closure and marginal consistency") {
  sampling::Rng rng(29);
  for (int i = 0; i < 100; ++i) {
    const Behavior b1 = sampling::random_ns_behavior(rng, catalog::chsh_spaces());
    const Behavior b2 = sampling::random_ns_behavior(rng, catalog::chsh_spaces());
    const Scalar w = sampling::random_distribution(rng, 2)[0];
    const Behavior m = mix({{w, b1}, {Scalar(1) - w, b2}});
    CHECK(is_no_signalling(m));
    for (std::size_t a = 0; a < 2; ++a) {
      for (std::size_t b = 0; b < 2; ++b) {
        const ScalarVector pm = marginal(m, Side::alice, a, b);
        CHECK(pm.sum() == Scalar(1));
        CHECK(pm == marginal(b1, Side::alice, a, b) * w + marginal(b2, Side::alice, a, b) * (Scalar(1) - w));
      }
    }
  }
}

TEST_CASE("ns witness iff false") {
  sampling::Rng rng(31);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int i = 0; i < 100; ++i) {
    // a mixture that sometimes includes the signalling box
    const Behavior ns = sampling::random_ns_behavior(rng, bits());
    const Behavior b = coin(rng) ? mix({{s("1/3"), catalog::signalling_box()}, {s("2/3"), ns}}) : ns;
    const NsResult r = is_no_signalling(b);
    CHECK(r.no_signalling == !r.witness.has_value());
    if (r.witness) CHECK(r.witness->reference_value != r.witness->other_value);
  }
}

TEST_CASE("joint tables and product check") {
  const LabelSet b01{"0", "1"};
  CHECK(test::throws_code([&] { JointTable({{"A", b01}}, ScalarVector::Constant(2, s("1/3"))); },
                          ErrorCode::InvalidDistribution));
  CHECK(test::throws_code([&] { JointTable({{"A", b01}, {"A", b01}}, ScalarVector::Constant(4, s("1/4"))); },
                          ErrorCode::InvalidLabels));

  // P_A x P_T
  ScalarVector prod(6);
  const Scalar pa[2] = {s("1/3"), s("2/3")};
  const Scalar pt[3] = {s("1/2"), s("1/4"), s("1/4")};
  for (int a = 0; a < 2; ++a) {
    for (int t = 0; t < 3; ++t) prod(a * 3 + t) = pa[a] * pt[t];
  }
  const JointTable j({{"A", b01}, {"T", LabelSet{"p", "q", "r"}}}, prod);
  CHECK(check_product(j, {"A"}, {"T"}));
  CHECK(j.marginal({"T"}).table()(0) == s("1/2"));
  CHECK(j.flat_index(j.assignment(4)) == 4u);

  ScalarVector corr = ScalarVector::Constant(4, Scalar(0));
  corr(0) = s("1/2");
  corr(3) = s("1/2");
  const JointTable c({{"X", b01}, {"Y", b01}}, corr);
  const ProductResult r = check_product(c, {"X"}, {"Y"});
  CHECK(!r);
  REQUIRE(r.witness);
  CHECK(r.witness->assignment == std::vector<std::pair<std::string, std::string>>{{"X", "0"}, {"Y", "0"}});
  CHECK(r.witness->joint == s("1/2"));
  CHECK(r.witness->product() == s("1/4"));

  CHECK(test::throws_code([&] { check_product(c, {"X"}, {"X"}); }, ErrorCode::BadPartition));
  CHECK(test::throws_code([&] { check_product(c, {"X"}, {}); }, ErrorCode::BadPartition));
  CHECK(test::throws_code([&] { check_product(c, {"X"}, {"Z"}); }, ErrorCode::BadPartition));
}

}  // TEST_SUITE
