#include <doctest.h>

#include "hierq/density.hpp"
#include "support.hpp"

using namespace hierq;

namespace {

const double kH = 1.0 / std::sqrt(2.0);

Operator pauli_z() {
  const std::vector<double> z{1.0, -1.0};
  return Operator::diagonal(z);
}

}  // namespace

TEST_CASE("build_density fixed cases") {
  const JointCoefficients pure(1, {2}, {1.0, 0.0});
  const auto rho = build_density(pure);
  CHECK(rho.op() == Operator(2, {1.0, 0.0, 0.0, 0.0}));

  // C^0_0 = C^1_1 = 1/sqrt2: orthogonal environment states decohere.
  const JointCoefficients mixed(2, {2}, {kH, 0.0, 0.0, kH});
  const auto rho2 = build_density(mixed);
  CHECK(max_abs_diff(rho2.op(), Operator::diagonal(std::vector<double>{0.5, 0.5})) < 1e-15);
}

TEST_CASE("build_density row index carries the un-conjugated coefficient") {
  // Single macro state, c = (1, i)/sqrt2: rho(0, 1) = c0 conj(c1) = -i/2.
  const JointCoefficients c(1, {2}, {kH, Complex(0, kH)});
  const auto rho = build_density(c);
  CHECK(std::abs(rho.op()(0, 1) - Complex(0, -0.5)) < 1e-15);
  CHECK(std::abs(rho.op()(1, 0) - Complex(0, 0.5)) < 1e-15);
}

TEST_CASE("build_density matches the outer-product oracle") {
  test::Rng rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const auto c = test::random_joint(rng, 2, {2, 2});
    const auto rho = build_density(c);
    CHECK(test::max_diff(test::outer_product_density(c), rho.op()) < 1e-14);
    CHECK(rho.op().hermiticity_defect() == 0.0);
  }
  for (int trial = 0; trial < 20; ++trial) {
    const auto c = test::random_joint_shape(rng, 1, 3, 3);
    CHECK(build_density(c).purity() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("JointCoefficients validation") {
  CHECK(test::code_of([] { JointCoefficients(1, {2}, {1.0, 1.0}); }) == ErrorCode::NotNormalized);
  CHECK(test::code_of([] { JointCoefficients(1, {2}, {1.0}); }) == ErrorCode::DimensionMismatch);
  CHECK(test::code_of([] { JointCoefficients(0, {2}, {}); }) == ErrorCode::InvalidArgument);
  CHECK(test::code_of([] { JointCoefficients(1, {}, {1.0}); }) == ErrorCode::InvalidArgument);
  CHECK(test::code_of([] { JointCoefficients(2, {64, 64}, std::vector<Complex>(2 * 4096)); }) ==
        ErrorCode::TooLarge);
}

TEST_CASE("expectation") {
  const JointCoefficients pure(1, {2}, {1.0, 0.0});
  CHECK(expectation(pure, Operator::identity(2)) == doctest::Approx(1.0));
  CHECK(expectation(pure, pauli_z()) == doctest::Approx(1.0));

  CHECK(test::code_of([&] { expectation(pure, Operator::identity(3)); }) == ErrorCode::DimensionMismatch);
  const Operator skew(2, {0.0, 1.0, -1.0, 0.0});
  CHECK(test::code_of([&] { expectation(pure, skew); }) == ErrorCode::NotHermitian);

  test::Rng rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    const auto c = test::random_joint_shape(rng, 3, 3, 3);
    const auto a = test::random_hermitian(rng, c.micro_dim());
    const auto oracle = test::full_state_expectation(c, a);
    CHECK(std::abs(oracle.imag()) < 1e-12);
    CHECK(std::abs(expectation(c, a) - oracle.real()) < 1e-10);
    CHECK(std::abs(expectation(c, Operator::identity(c.micro_dim())) - 1.0) < 1e-12);
  }
}

TEST_CASE("reduce fixed cases") {
  // macro-pure ⊗ |0> ⊗ |1>: index (0, 1) -> flat 1.
  const JointCoefficients product(1, {2, 2}, {0.0, 1.0, 0.0, 0.0});
  CHECK(max_abs_diff(reduce(product, 1).op(), Operator(2, {1.0, 0.0, 0.0, 0.0})) < 1e-15);
  CHECK(max_abs_diff(reduce(product, 2).op(), Operator(2, {0.0, 0.0, 0.0, 1.0})) < 1e-15);

  const JointCoefficients bell(1, {2, 2}, {kH, 0.0, 0.0, kH});
  const auto half = Operator::diagonal(std::vector<double>{0.5, 0.5});
  CHECK(max_abs_diff(reduce(bell, 1).op(), half) < 1e-15);
  CHECK(max_abs_diff(reduce(bell, 2).op(), half) < 1e-15);

  CHECK(test::code_of([&] { reduce(bell, 0); }) == ErrorCode::IndexOutOfRange);
  CHECK(test::code_of([&] { reduce(bell, 3); }) == ErrorCode::IndexOutOfRange);
}

TEST_CASE("reduce equals the naive partial trace for every subsystem") {
  test::Rng rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    const auto c = test::random_joint_shape(rng, 3, 3, 3);
    const auto full = test::outer_product_density(c);
    const std::vector<std::size_t> dims(c.micro_dims().begin(), c.micro_dims().end());
    for (std::size_t s = 1; s <= c.factor_count(); ++s) {
      const auto r = reduce(c, s);
      CHECK(test::max_diff(test::naive_partial_trace(full, dims, s - 1), r.op()) < 1e-10);
      CHECK(std::abs(r.op().trace() - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("diagonalize") {
  const auto half = DensityMatrix(Operator::diagonal(std::vector<double>{0.5, 0.5}));
  auto s = diagonalize(half);
  CHECK(s.weights == std::vector<double>{0.5, 0.5});

  const JointCoefficients pure(1, {3}, {0.0, Complex(0, 1), 0.0});
  s = diagonalize(build_density(pure));
  CHECK(s.weights[0] == doctest::Approx(1.0));
  CHECK(s.weights[1] == 0.0);
  CHECK(s.weights[2] == 0.0);
  CHECK(std::abs(s.eigenvectors(1, 0)) == doctest::Approx(1.0));

  test::Rng rng(44);
  for (int trial = 0; trial < 50; ++trial) {
    const auto c = test::random_joint_shape(rng, 3, 3, 2);
    const auto rho = build_density(c);
    const auto spectrum = diagonalize(rho);
    const auto eig = eig_hermitian(rho.op());
    double sum = 0.0;
    for (std::size_t k = 0; k < spectrum.weights.size(); ++k) {
      CHECK(spectrum.weights[k] >= 0.0);
      CHECK(std::abs(spectrum.weights[k] - std::max(0.0, eig.values[eig.values.size() - 1 - k])) < 1e-12);
      if (k > 0) CHECK(spectrum.weights[k] <= spectrum.weights[k - 1]);
      sum += spectrum.weights[k];
    }
    CHECK(std::abs(sum - 1.0) < 1e-9);
    const auto& v = spectrum.eigenvectors;
    CHECK(max_abs_diff(v * Operator::diagonal(spectrum.weights) * v.adjoint(), rho.op()) < 1e-9);

    // Spectral consistency: <A> = sum_i w_i <v_i|A|v_i>.
    const auto a = test::random_hermitian(rng, rho.dim());
    double spectral = 0.0;
    for (std::size_t k = 0; k < spectrum.weights.size(); ++k) {
      const auto vk = v.column(k);
      spectral += spectrum.weights[k] * inner_product(vk, apply(a, vk)).real();
    }
    CHECK(std::abs(spectral - expectation(c, a)) < 1e-9);
  }
}

TEST_CASE("DensityMatrix invariants are enforced") {
  CHECK(test::code_of([] { DensityMatrix(Operator::identity(2)); }) == ErrorCode::NotNormalized);
  CHECK(test::code_of([] { DensityMatrix(Operator(2, {0.5, 1.0, 0.0, 0.5})); }) == ErrorCode::NotHermitian);
  CHECK(test::code_of([] { DensityMatrix(Operator::diagonal(std::vector<double>{1.5, -0.5})); }) ==
        ErrorCode::NotPositive);
  // Rounding-level negativity is tolerated and clamped.
  const DensityMatrix nearly(Operator::diagonal(std::vector<double>{1.0 + 1e-12, -1e-12}));
  CHECK(diagonalize(nearly).weights[1] == 0.0);
}

TEST_CASE("macro_expectation") {
  test::Rng rng(45);
  const auto c = test::random_joint(rng, 2, {2});
  std::vector<Operator> ids(2, Operator::identity(2));
  CHECK(macro_expectation(c, MacroConditionedOperator(ids)) == doctest::Approx(1.0));

  // Support only on macro state 1, block 1 = 0.
  const JointCoefficients upper(2, {2}, {0.0, 0.0, kH, kH});
  const MacroConditionedOperator disjoint({test::random_hermitian(rng, 2), Operator::zeros(2)});
  CHECK(macro_expectation(upper, disjoint) == 0.0);

  CHECK(test::code_of([&] { macro_expectation(c, MacroConditionedOperator({Operator::identity(2)})); }) ==
        ErrorCode::DimensionMismatch);
  CHECK(test::code_of([&] {
          macro_expectation(c, MacroConditionedOperator({Operator::identity(3), Operator::identity(3)}));
        }) == ErrorCode::DimensionMismatch);
  CHECK(test::code_of([&] {
          macro_expectation(c, MacroConditionedOperator({Operator::identity(2), Operator(2, {0.0, 1.0, 0.0, 0.0})}));
        }) == ErrorCode::NotHermitian);
  CHECK(test::code_of([] { MacroConditionedOperator({Operator::identity(2), Operator::identity(3)}); }) ==
        ErrorCode::DimensionMismatch);

  for (int trial = 0; trial < 100; ++trial) {
    const auto cc = test::random_joint_shape(rng, 3, 3, 3);
    std::vector<Operator> blocks;
    for (std::size_t m = 0; m < cc.macro_dim(); ++m) blocks.push_back(test::random_hermitian(rng, cc.micro_dim()));
    const auto oracle = test::triple_loop_macro(cc, blocks);
    CHECK(std::abs(macro_expectation(cc, MacroConditionedOperator(blocks)) - oracle.real()) < 1e-10);

    const auto a = test::random_hermitian(rng, cc.micro_dim());
    const std::vector<Operator> same(cc.macro_dim(), a);
    CHECK(std::abs(macro_expectation(cc, MacroConditionedOperator(same)) - expectation(cc, a)) < 1e-10);
  }
}

TEST_CASE("joint coefficient JSON") {
  test::Rng rng(46);
  const auto c = test::random_joint(rng, 2, {2, 3});
  const auto doc = joint_to_json(c);
  const auto back = joint_from_json(json_io::parse_document(json_io::to_canonical(doc)));
  CHECK(back.macro_dim() == 2);
  CHECK(std::vector<Complex>(back.coeffs().begin(), back.coeffs().end()) ==
        std::vector<Complex>(c.coeffs().begin(), c.coeffs().end()));

  auto extra = doc;
  extra["note"] = "x";
  CHECK(test::code_of([&] { joint_from_json(extra); }) == ErrorCode::SchemaError);
}
