#include <gtest/gtest.h>

#include <numbers>
#include <vector>

#include "helpers.hpp"
#include "unravel/exact.hpp"
#include "unravel/mcwf.hpp"
#include "unravel/unravelling.hpp"

using namespace unravel;
using namespace testing_helpers;

namespace {

Unravelling random_unravelling(std::size_t n, Rng& rng, double shift_scale = 2.0) {
  std::vector<Complex> mu(n);
  for (Complex& z : mu) z = shift_scale * Complex(standard_normal(rng), standard_normal(rng));
  return Unravelling(random_unitary(static_cast<int>(n), rng), mu);
}

// Superoperator column j = vec(L(E_j)) built from lindblad_apply on basis matrices.
Matrix superoperator_by_columns(const LindbladModel& model) {
  const Eigen::Index d = model.dim();
  Matrix s(d * d, d * d);
  for (Eigen::Index c = 0; c < d; ++c) {
    for (Eigen::Index r = 0; r < d; ++r) {
      Matrix e = Matrix::Zero(d, d);
      e(r, c) = 1.0;
      const Matrix out = lindblad_apply(model, e);
      s.col(c * d + r) = Eigen::Map<const Vector>(out.data(), d * d);
    }
  }
  return s;
}

}  // namespace

TEST(Transform, IdentityGivesSignedHalves) {
  const LindbladModel m = zero_temperature(2, 0.5);
  const TransformedChannels t = transform(Unravelling::identity(2), m);
  ASSERT_EQ(t.channels.size(), 4u);
  for (std::size_t k = 0; k < 2; ++k) {
    const Matrix j = m.channels()[k].jump.matrix() / std::sqrt(2.0);
    EXPECT_LT(max_abs(t.channels[2 * k].jump.matrix() - j), 1e-15);
    EXPECT_LT(max_abs(t.channels[2 * k + 1].jump.matrix() + j), 1e-15);
    EXPECT_EQ(t.channels[2 * k].rate, 0.5);
  }
  EXPECT_LT(max_abs(reconstruct_dissipator(t.channels, 2) - reconstruct_dissipator(m.channels(), 2)), 1e-15);
}

TEST(Transform, ShiftedSingleChannel) {
  const LindbladModel m = zero_temperature(1, 1.0);
  for (double mu : {1.0, 3.0}) {
    const TransformedChannels t = transform(Unravelling::with_shift(Matrix::Identity(1, 1), mu), m);
    const Matrix id = Matrix::Identity(2, 2), sm = pauli::minus().matrix();
    EXPECT_LT(max_abs(t.channels[0].jump.matrix() - (mu * id + sm) / std::sqrt(2.0)), 1e-15);
    EXPECT_LT(max_abs(t.channels[1].jump.matrix() - (mu * id - sm) / std::sqrt(2.0)), 1e-15);
  }
}

TEST(Transform, Errors) {
  const LindbladModel m = zero_temperature(2, 1.0);
  EXPECT_THROW(transform(Unravelling::identity(3), m), Error);
  EXPECT_THROW(Unravelling(Matrix{{1.0, 1.0}, {0.0, 1.0}}, {0.0, 0.0}), Error);
  EXPECT_THROW(Unravelling(Matrix::Identity(2, 2), {0.0}), Error);

  const LindbladModel unequal(Operator::zero(2), {{1.0, embed(pauli::minus(), 0, 2)}, {2.0, embed(pauli::minus(), 1, 2)}});
  const Matrix swap{{0.0, 1.0}, {1.0, 0.0}};
  try {
    transform(Unravelling(swap, {0.0, 0.0}), unequal);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("mixing requires equal rates"), std::string::npos);
  }
  EXPECT_NO_THROW(transform(Unravelling(Matrix::Identity(2, 2), {1.0, kI}), unequal));
}

TEST(Dissipator, InvariantUnderRandomUnravellings) {
  Rng rng = make_stream(41, 0);
  for (const LindbladModel& m : {zero_temperature(2, 1.0), infinite_temperature(2, 0.7), dephasing(3, 1.3)}) {
    const Matrix original = reconstruct_dissipator(m.channels(), m.n_qubits());
    for (int trial = 0; trial < 100; ++trial) {
      const Unravelling u = random_unravelling(m.channels().size(), rng);
      const Matrix transformed = reconstruct_dissipator(transform(u, m).channels, m.n_qubits());
      ASSERT_LT(max_abs(transformed - original), 1e-10) << "trial " << trial;
    }
  }
}

TEST(Dissipator, MatchesLindbladApply) {
  const LindbladModel m = infinite_temperature(2, 0.8);
  EXPECT_LT(max_abs(reconstruct_dissipator(m.channels(), 2) - superoperator_by_columns(m)), 1e-14);
}

TEST(Dissipator, EmptyAndSpectrum) {
  EXPECT_EQ(reconstruct_dissipator({}, 2), Matrix::Zero(16, 16));

  const Matrix s = reconstruct_dissipator(zero_temperature(1, 1.0).channels(), 1);
  Eigen::ComplexEigenSolver<Matrix> es(s);
  std::vector<double> re;
  for (Eigen::Index i = 0; i < 4; ++i) {
    EXPECT_NEAR(es.eigenvalues()(i).imag(), 0.0, 1e-12);
    re.push_back(es.eigenvalues()(i).real());
  }
  std::sort(re.begin(), re.end());
  EXPECT_NEAR(re[0], -1.0, 1e-12);  // population relaxation
  EXPECT_NEAR(re[1], -0.5, 1e-12);  // coherences
  EXPECT_NEAR(re[2], -0.5, 1e-12);
  EXPECT_NEAR(re[3], 0.0, 1e-12);  // steady state
}

TEST(Parametrize, ZeroVectorIsIdentity) {
  const Unravelling u = parametrize(std::vector<double>(unravelling_parameter_count(3), 0.0), 3);
  EXPECT_EQ(u.mixing(), Matrix::Identity(3, 3));
  for (Complex z : u.shifts()) EXPECT_EQ(z, Complex(0.0));
}

TEST(Parametrize, QuarterTurnSwap) {
  // Generator layout: diagonal phases, then (Re, Im) of the (0,1) entry, then shifts.
  const std::vector<double> p{0.0, 0.0, std::numbers::pi / 2.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  const Unravelling u = parametrize(p, 2);
  EXPECT_LT(max_abs(u.mixing() - Matrix{{0.0, 1.0}, {-1.0, 0.0}}), 1e-15);
}

TEST(Parametrize, ShiftsAndLayouts) {
  std::vector<double> p(unravelling_parameter_count(2), 0.0);
  p[4] = 1.5;
  p[5] = -0.5;
  p[6] = 0.25;
  p[7] = 2.0;
  const Unravelling u = parametrize(p, 2);
  EXPECT_EQ(u.shifts()[0], Complex(1.5, -0.5));
  EXPECT_EQ(u.shifts()[1], Complex(0.25, 2.0));

  std::vector<double> q(unravelling_parameter_count(2, ShiftLayout::shared), 0.0);
  EXPECT_EQ(q.size(), 6u);
  q[4] = 3.0;
  const Unravelling v = parametrize(q, 2, ShiftLayout::shared);
  EXPECT_EQ(v.shifts()[0], Complex(3.0));
  EXPECT_EQ(v.shifts()[1], Complex(3.0));

  EXPECT_THROW(parametrize(std::vector<double>(5, 0.0), 2), Error);
}

TEST(Parametrize, AlwaysUnitary) {
  Rng rng = make_stream(42, 0);
  for (std::size_t n : {1u, 2u, 3u, 4u}) {
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> p(unravelling_parameter_count(n));
      for (double& x : p) x = 4.0 * standard_normal(rng);
      EXPECT_LT(unitarity_defect(parametrize(p, n).mixing()), 1e-12);
    }
  }
}

TEST(Parametrize, ReachesArbitraryUnitaries) {
  // Surjectivity spot check: log of a random unitary fed back through the generator layout.
  Rng rng = make_stream(43, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix target = random_unitary(3, rng);
    Eigen::ComplexEigenSolver<Matrix> es(target);
    const Vector logs = es.eigenvalues().array().log().matrix();
    const Matrix a = es.eigenvectors() * logs.asDiagonal() * es.eigenvectors().inverse();
    std::vector<double> p;
    for (int j = 0; j < 3; ++j) p.push_back(a(j, j).imag());
    for (int j = 0; j < 3; ++j) {
      for (int k = j + 1; k < 3; ++k) {
        p.push_back(a(j, k).real());
        p.push_back(a(j, k).imag());
      }
    }
    EXPECT_LT(max_abs(unitary_from_parameters(p, 3) - target), 1e-9);
  }
}

TEST(JumpRates, SumRule) {
  Rng rng = make_stream(44, 0);
  const LindbladModel m = infinite_temperature(2, 0.9);
  for (int trial = 0; trial < 50; ++trial) {
    const Unravelling u = random_unravelling(4, rng);
    const StateVector psi = random_state(2, rng);
    double total = 0.0;
    for (const Channel& c : transform(u, m).channels) total += c.rate * c.jump.apply(psi).norm_squared();
    double expected = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
      Matrix mixed = Matrix::Zero(4, 4);
      for (std::size_t i = 0; i < 4; ++i) mixed += u.mixing()(k, i) * m.channels()[i].jump.matrix();
      expected += 0.9 * (std::norm(u.shifts()[k]) + (mixed * psi.amplitudes()).squaredNorm());
    }
    EXPECT_NEAR(total, expected, 1e-10);
    // The unshifted part does not depend on U.
    double unshifted = 0.0;
    for (const Channel& c : m.channels()) unshifted += c.rate * c.jump.apply(psi).norm_squared();
    double shifts = 0.0;
    for (Complex z : u.shifts()) shifts += 0.9 * std::norm(z);
    EXPECT_NEAR(total, unshifted + shifts, 1e-10);
  }
}
