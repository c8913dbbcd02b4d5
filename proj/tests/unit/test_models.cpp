#include <gtest/gtest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include "helpers.hpp"
#include "unravel/exact.hpp"
#include "unravel/models.hpp"

using namespace unravel;
using namespace testing_helpers;

TEST(ZeroTemperature, Channels) {
  const LindbladModel m = zero_temperature(2, 0.7);
  ASSERT_EQ(m.channels().size(), 2u);
  EXPECT_EQ(m.channels()[0].jump.matrix(), tensor(pauli::minus(), pauli::identity()).matrix());
  EXPECT_EQ(m.channels()[1].jump.matrix(), tensor(pauli::identity(), pauli::minus()).matrix());
  for (const Channel& c : m.channels()) EXPECT_EQ(c.rate, 0.7);
  EXPECT_EQ(m.hamiltonian().matrix(), Matrix::Zero(4, 4));
  EXPECT_THROW(zero_temperature(2, -1.0), Error);
}

TEST(ZeroTemperature, DecayFreeModel) {
  const LindbladModel m = zero_temperature(1, 0.0);
  const DensityMatrix rho0 = DensityMatrix::pure(ket({{"0", 1.0}, {"1", kI}}));
  const auto out = evolve_density(m, rho0, 2.0, 1e-2, {2.0});
  EXPECT_LT(max_abs(out.samples.back().rho.matrix() - rho0.matrix()), 1e-14);
}

TEST(ZeroTemperature, ExcitedPopulationDecays) {
  const double gamma = 1.3;
  const LindbladModel m = zero_temperature(1, gamma);
  const auto out = evolve_density(m, DensityMatrix::pure(StateVector::basis("1")), 2.0, 1e-3, {0.5, 1.0, 2.0});
  for (const auto& s : out.samples) EXPECT_NEAR(s.rho(1, 1).real(), std::exp(-gamma * s.time), 1e-10);
}

TEST(ZeroTemperature, GroundStateIsSteady) {
  Rng rng = make_stream(21, 0);
  const LindbladModel m = zero_temperature(2, 1.0);
  // Coherences with |00> decay as exp(-t/2).
  const auto out = evolve_density(m, random_density(2, rng), 40.0, 1e-3, {40.0});
  const DensityMatrix ground = DensityMatrix::pure(StateVector::basis("00"));
  EXPECT_LE(trace_distance(out.samples.back().rho, ground), 1e-6);
}

TEST(Dephasing, Channels) {
  const LindbladModel m = dephasing(3, 1.0);
  ASSERT_EQ(m.channels().size(), 3u);
  for (int k = 0; k < 3; ++k) {
    const Operator sp_sm = pauli::plus() * pauli::minus();
    EXPECT_EQ(m.channels()[k].jump.matrix(), embed(sp_sm, k, 3).matrix());
    EXPECT_EQ(m.channels()[k].jump.matrix(), embed(pauli::excited_projector(), k, 3).matrix());
  }
  EXPECT_THROW(dephasing(1, -0.1), Error);
}

TEST(Dephasing, CoherenceDecaysPopulationsFixed) {
  const double gamma = 0.8;
  const LindbladModel m = dephasing(1, gamma);
  const DensityMatrix plus = DensityMatrix::pure(ket({{"0", 1.0}, {"1", 1.0}}));
  const auto out = evolve_density(m, plus, 3.0, 1e-3, {1.0, 3.0});
  for (const auto& s : out.samples) {
    EXPECT_NEAR(std::abs(s.rho(0, 1)), 0.5 * std::exp(-gamma * s.time / 2.0), 1e-10);
    EXPECT_NEAR(s.rho(0, 0).real(), 0.5, 1e-12);
    EXPECT_NEAR(s.rho(1, 1).real(), 0.5, 1e-12);
  }
}

TEST(Dephasing, DiagonalInvariant) {
  Rng rng = make_stream(22, 0);
  const DensityMatrix rho0 = random_density(3, rng);
  const auto out = evolve_density(dephasing(3, 1.0), rho0, 5.0, 1e-3, {1.0, 2.5, 5.0});
  for (const auto& s : out.samples) {
    EXPECT_LE((s.rho.matrix().diagonal() - rho0.matrix().diagonal()).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(InfiniteTemperature, Channels) {
  const LindbladModel m = infinite_temperature(2, 1.0);
  ASSERT_EQ(m.channels().size(), 4u);
  EXPECT_EQ(m.channels()[0].jump.matrix(), embed(pauli::minus(), 0, 2).matrix());
  EXPECT_EQ(m.channels()[1].jump.matrix(), embed(pauli::plus(), 0, 2).matrix());
  EXPECT_EQ(m.channels()[2].jump.matrix(), embed(pauli::minus(), 1, 2).matrix());
  EXPECT_EQ(m.channels()[3].jump.matrix(), embed(pauli::plus(), 1, 2).matrix());
  for (const Channel& c : m.channels()) EXPECT_EQ(c.rate, 1.0);
}

TEST(InfiniteTemperature, SteadyStateIsMaximallyMixed) {
  const auto out = evolve_density(infinite_temperature(1, 1.0), DensityMatrix::pure(StateVector::basis("1")), 15.0,
                                  1e-3, {15.0});
  EXPECT_LT(trace_distance(out.samples.back().rho, DensityMatrix::maximally_mixed(1)), 1e-10);
}

TEST(InfiniteTemperature, ZeroRateIsIdentity) {
  Rng rng = make_stream(23, 0);
  const DensityMatrix rho0 = random_density(2, rng);
  const auto out = evolve_density(infinite_temperature(2, 0.0), rho0, 1.0, 1e-2, {1.0});
  EXPECT_LT(max_abs(out.samples.back().rho.matrix() - rho0.matrix()), 1e-14);
}

TEST(Cnot, GeneratorGivesCnotExactly) {
  const double t_gate = 0.2;
  const Matrix h = cnot_generator(t_gate).matrix();
  const Matrix u = (-kI * t_gate * h).exp();
  Matrix cnot = Matrix::Zero(4, 4);
  cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1.0;
  EXPECT_LT(max_abs(u - cnot), 1e-12);
  // Control 0 is untouched at every time.
  const Matrix half = (-kI * 0.37 * h).exp();
  EXPECT_LT(max_abs(half * StateVector::basis("01").amplitudes() - StateVector::basis("01").amplitudes()), 1e-14);
  EXPECT_THROW(cnot_generator(0.0), Error);
}

TEST(Cnot, NoiselessGateMakesBellState) {
  const double t_gate = 1.0 / 5.0;
  const LindbladModel m = cnot_drive(t_gate, 0.0);
  const auto out = evolve_density(m, DensityMatrix::pure(ket({{"00", 1.0}, {"10", 1.0}})), t_gate, 1e-4, {t_gate});
  EXPECT_LT(trace_distance(out.samples.back().rho, DensityMatrix::pure(phi_plus())), 1e-10);
  EXPECT_EQ(cnot_drive(t_gate, 1.0).channels().size(), 2u);
  EXPECT_THROW(cnot_drive(-1.0, 1.0), Error);
}

TEST(LindbladModel, Validation) {
  EXPECT_THROW(LindbladModel(Operator(Matrix{{0.0, 1.0}, {0.0, 0.0}}), {}), Error);
  EXPECT_THROW(LindbladModel(Operator::zero(1), {{-1.0, pauli::minus()}}), Error);
  EXPECT_THROW(LindbladModel(Operator::zero(2), {{1.0, pauli::minus()}}), Error);
}
