#include <gtest/gtest.h>

#include <vector>

#include "helpers.hpp"
#include "unravel/qstate.hpp"
#include "unravel/unitary.hpp"

using namespace unravel;
using namespace testing_helpers;

TEST(Tensor, BasisKets) {
  const StateVector s = tensor(StateVector::basis("0"), StateVector::basis("1"));
  EXPECT_EQ(s.n_qubits(), 2);
  EXPECT_EQ(s.amplitudes(), StateVector::basis("01").amplitudes());
  EXPECT_EQ(s[1], Complex(1.0));
}

TEST(Tensor, IdentityAndBitFlip) {
  EXPECT_EQ(tensor(pauli::identity(), pauli::identity()).matrix(), Matrix::Identity(4, 4));
  const StateVector flipped = tensor(pauli::x(), pauli::x()).apply(StateVector::basis("00"));
  EXPECT_EQ(flipped.amplitudes(), StateVector::basis("11").amplitudes());
}

TEST(Tensor, Associative) {
  Rng rng = make_stream(11, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const Operator a(random_unitary(2, rng)), b(random_unitary(2, rng)), c(random_unitary(4, rng));
    EXPECT_LT(max_abs(tensor(tensor(a, b), c).matrix() - tensor(a, tensor(b, c)).matrix()), 1e-12);
  }
}

TEST(Embed, Examples) {
  EXPECT_EQ(embed(pauli::z(), 0, 2).matrix(), tensor(pauli::z(), pauli::identity()).matrix());
  const StateVector lowered = embed(pauli::minus(), 1, 2).apply(StateVector::basis("11"));
  EXPECT_EQ(lowered.amplitudes(), StateVector::basis("10").amplitudes());
  for (int k = 0; k < 3; ++k) EXPECT_EQ(embed(pauli::identity(), k, 3).matrix(), Matrix::Identity(8, 8));
}

TEST(Embed, OutOfRange) {
  EXPECT_THROW(embed(pauli::x(), 2, 2), Error);
  EXPECT_THROW(embed(pauli::x(), -1, 2), Error);
  EXPECT_THROW(embed(tensor(pauli::x(), pauli::x()), 0, 3), Error);
}

TEST(Embed, DifferentQubitsCommute) {
  Rng rng = make_stream(12, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const Operator a(random_unitary(2, rng)), b(random_unitary(2, rng));
    const Matrix ea = embed(a, 0, 3).matrix(), eb = embed(b, 2, 3).matrix();
    EXPECT_LT(max_abs(ea * eb - eb * ea), 1e-12);
  }
}

TEST(PartialTrace, Examples) {
  const DensityMatrix r01 = DensityMatrix::pure(StateVector::basis("01"));
  EXPECT_LT(max_abs(partial_trace(r01, {0}).matrix() - projector(StateVector::basis("0"))), 1e-15);
  EXPECT_LT(max_abs(partial_trace(r01, {1}).matrix() - projector(StateVector::basis("1"))), 1e-15);
  const DensityMatrix bell = DensityMatrix::pure(phi_plus());
  EXPECT_LT(max_abs(partial_trace(bell, {0}).matrix() - Matrix::Identity(2, 2) / 2.0), 1e-15);
}

TEST(PartialTrace, ProductFactorizes) {
  Rng rng = make_stream(13, 0);
  const DensityMatrix a = random_density(1, rng), b = random_density(2, rng);
  const DensityMatrix ab(Eigen::kroneckerProduct(a.matrix(), b.matrix()).eval());
  EXPECT_LT(max_abs(partial_trace(ab, {0}).matrix() - a.matrix()), 1e-14);
  EXPECT_LT(max_abs(partial_trace(ab, {1, 2}).matrix() - b.matrix()), 1e-14);
}

TEST(PartialTrace, Errors) {
  const DensityMatrix bell = DensityMatrix::pure(phi_plus());
  EXPECT_THROW(partial_trace(bell, std::span<const int>{}), Error);
  EXPECT_THROW(partial_trace(bell, {2}), Error);
  EXPECT_THROW(partial_trace(bell, {0, 0}), Error);
}

TEST(PartialTrace, UnitTraceAndPositive) {
  Rng rng = make_stream(14, 0);
  const std::vector<std::vector<int>> keeps{{0}, {1}, {2}, {0, 2}, {1, 2}, {0, 1}};
  for (int trial = 0; trial < 20; ++trial) {
    const DensityMatrix rho = random_density(3, rng, 1 + trial % 8);
    for (const auto& keep : keeps) {
      const DensityMatrix red = partial_trace(rho, keep);  // validates Hermitian, trace, positivity
      EXPECT_NEAR(red.matrix().trace().real(), 1.0, 1e-12);
      EXPECT_GE(red.eigenvalues().minCoeff(), -1e-12);
    }
  }
}

TEST(PartialTrace, SchmidtSpectraAgree) {
  Rng rng = make_stream(15, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const StateVector psi = random_state(3, rng);
    // A = qubit 0, B = qubits 1,2: the 4x4 reduced matrix has two extra zeros.
    Eigen::VectorXd a = DensityMatrix(reduced_density(psi, std::vector<int>{0})).eigenvalues();
    Eigen::VectorXd b = DensityMatrix(reduced_density(psi, std::vector<int>{1, 2})).eigenvalues();
    std::sort(a.data(), a.data() + a.size(), std::greater<>());
    std::sort(b.data(), b.data() + b.size(), std::greater<>());
    EXPECT_NEAR(a(0), b(0), 1e-10);
    EXPECT_NEAR(a(1), b(1), 1e-10);
    EXPECT_NEAR(b(2), 0.0, 1e-10);
    EXPECT_NEAR(b(3), 0.0, 1e-10);
  }
}

TEST(PartialTrace, ReducedDensityMatchesDensityRoute) {
  Rng rng = make_stream(16, 0);
  const StateVector psi = random_state(3, rng);
  const std::vector<int> keep{0, 2};
  EXPECT_LT(max_abs(reduced_density(psi, keep) - partial_trace(DensityMatrix::pure(psi), keep).matrix()), 1e-14);
}

TEST(Normalize, Examples) {
  const auto a = normalize(2.0 * StateVector::basis("0"));
  EXPECT_EQ(a.state.amplitudes(), StateVector::basis("0").amplitudes());
  EXPECT_DOUBLE_EQ(a.norm_squared, 4.0);

  const auto b = normalize(StateVector::basis("0") + StateVector::basis("1"));
  EXPECT_NEAR(std::abs(b.state[0] - 1.0 / std::sqrt(2.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(b.state[1] - 1.0 / std::sqrt(2.0)), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(b.norm_squared, 2.0);

  try {
    normalize(StateVector(Vector::Zero(2)));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("null state"), std::string::npos);
  }
}

TEST(StateVector, Validation) {
  EXPECT_THROW(StateVector(Vector::Zero(3)), Error);
  EXPECT_THROW(StateVector::basis("012"), Error);
  EXPECT_TRUE(phi_plus().is_normalized());
  EXPECT_FALSE((2.0 * phi_plus()).is_normalized());
}

TEST(DensityMatrix, Validation) {
  EXPECT_THROW(DensityMatrix(Matrix{{1.0, 0.5}, {0.0, 0.0}}), Error);  // not Hermitian
  EXPECT_THROW(DensityMatrix(Matrix{{0.6, 0.0}, {0.0, 0.6}}), Error);  // trace 1.2
  EXPECT_THROW(DensityMatrix(Matrix{{1.1, 0.0}, {0.0, -0.1}}), Error);  // negative eigenvalue
  EXPECT_NO_THROW(DensityMatrix(Matrix{{1.0 + 1e-9, 0.0}, {0.0, -1e-9}}));  // within default tolerances
  const DensityMatrix mm = DensityMatrix::maximally_mixed(2);
  EXPECT_NEAR(mm.purity(), 0.25, 1e-15);
}

TEST(TraceDistance, Basics) {
  const DensityMatrix zero = DensityMatrix::pure(StateVector::basis("0"));
  const DensityMatrix one = DensityMatrix::pure(StateVector::basis("1"));
  EXPECT_NEAR(trace_distance(zero, one), 1.0, 1e-15);
  EXPECT_NEAR(trace_distance(zero, DensityMatrix::maximally_mixed(1)), 0.5, 1e-15);
  EXPECT_NEAR(trace_distance(zero, zero), 0.0, 1e-15);
}
