#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "entroad/errors.hpp"
#include "entroad/random.hpp"
#include "entroad/system.hpp"
#include "gen.hpp"

using namespace entroad;

namespace {

ThermostaticSystem tank(double c) { return {ConvexSpace::orthant(1), EntropyFn::log_tank(c), "tank"}; }

ThermostaticSystem gas(double m = 1.0, double h = 1.0) {
  return {ConvexSpace::orthant(3), EntropyFn::sackur_tetrode(m, h), "gas"};
}

// Random density matrix B B* / tr(B B*).
DensityMatrix random_density(Rng& rng, std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  Eigen::MatrixXcd b(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) b(i, j) = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
  Eigen::MatrixXcd rho = b * b.adjoint();
  rho /= rho.trace().real();
  return {rho.real(), rho.imag()};
}

Eigen::MatrixXcd to_complex(const DensityMatrix& r) {
  Eigen::MatrixXcd m(r.re.rows(), r.re.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = {r.re(i, j), r.im(i, j)};
  return m;
}

}  // namespace

TEST(System, EntropyDimensionMustMatchSpace) {
  EXPECT_THROW(ThermostaticSystem(ConvexSpace::orthant(2), EntropyFn::log_tank(1.0)), DomainError);
  EXPECT_THROW(ThermostaticSystem(ConvexSpace::simplex(2), EntropyFn::shannon(3)), DomainError);
  EXPECT_NO_THROW(ThermostaticSystem(ConvexSpace::simplex(2), EntropyFn::shannon(2)));
}

TEST(System, LogTankAndHeatBath) {
  for (double c : {0.5, 1.0, 7.0})
    for (double u : {0.1, 1.0, 42.0}) EXPECT_NEAR(evaluate(tank(c), make_state({u})).value(), c * std::log(u), 1e-14);
  const ThermostaticSystem bath{ConvexSpace::real_line(1), EntropyFn::heat_bath(4.0)};
  EXPECT_EQ(evaluate(bath, make_state({-8.0})).value(), -2.0);
  EXPECT_THROW(evaluate(tank(1.0), make_state({-1.0})), DomainError);
  EXPECT_TRUE(evaluate_raw(EntropyFn::log_tank(1.0), make_state({0.0})).is_neg_inf());
}

TEST(System, SackurTetrodeMatchesDirectFormula) {
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const double u = rng.uniform(0.1, 10), v = rng.uniform(0.1, 10), n = rng.uniform(0.1, 10);
    const double m = rng.uniform(0.5, 2), h = rng.uniform(0.5, 2);
    const double inner = (v / n) * std::pow(4.0 * std::numbers::pi * m * u / (3.0 * n * h * h), 1.5);
    const double expected = n * (std::log(inner) + 2.5);
    EXPECT_NEAR(evaluate(gas(m, h), make_state({u, v, n})).value(), expected, 1e-12 * (1 + std::abs(expected)));
  }
}

TEST(System, SackurTetrodeIsExtensive) {
  const State x = make_state({3.0, 2.0, 1.5});
  const double s = evaluate(gas(), x).value();
  EXPECT_NEAR(evaluate(gas(), State(2.5 * x)).value(), 2.5 * s, 1e-12);
}

TEST(System, ShannonHandlesZeros) {
  const ThermostaticSystem s{ConvexSpace::simplex(3), EntropyFn::shannon(3)};
  EXPECT_NEAR(evaluate(s, make_state({0.25, 0.25, 0.25, 0.25})).value(), std::log(4.0), 1e-15);
  EXPECT_EQ(evaluate(s, make_state({1, 0, 0, 0})).value(), 0.0);
  EXPECT_NEAR(shannon_entropy(make_state({0.5, 0.5, 0})), std::log(2.0), 1e-15);
}

TEST(System, AffineConstantAndSum) {
  const ThermostaticSystem a{ConvexSpace::real_line(2), EntropyFn::affine({2, -1}, 0.5)};
  EXPECT_EQ(evaluate(a, make_state({1, 3})).value(), -0.5);
  const ThermostaticSystem inf{ConvexSpace::point(), EntropyFn::constant(ExtReal::pos_inf())};
  EXPECT_TRUE(evaluate(inf, State(0)).is_pos_inf());

  const ThermostaticSystem both = sum_systems(tank(2.0), a);
  EXPECT_EQ(both.space().dim(), 3u);
  EXPECT_NEAR(evaluate(both, make_state({std::exp(1.0), 1, 3})).value(), 1.5, 1e-14);
}

TEST(System, SumWithNegativeInfinityDominates) {
  const ThermostaticSystem up{ConvexSpace::point(), EntropyFn::constant(ExtReal::pos_inf())};
  const ThermostaticSystem down{ConvexSpace::point(), EntropyFn::constant(ExtReal::neg_inf())};
  EXPECT_TRUE(evaluate(sum_systems(up, down), State(0)).is_neg_inf());
  EXPECT_TRUE(evaluate(sum_systems(down, up), State(0)).is_neg_inf());
}

TEST(System, AnalyticDerivativesMatchFiniteDifferences) {
  const EntropyFn fs[] = {EntropyFn::log_tank(3.0), EntropyFn::sackur_tetrode(1.3, 0.7), EntropyFn::shannon(2)};
  const State xs[] = {make_state({2.0}), make_state({2.0, 1.5, 0.8}), make_state({0.2, 0.3, 0.5})};
  for (int k = 0; k < 3; ++k) {
    Vector g;
    Matrix h;
    ASSERT_TRUE(entropy_derivatives(fs[k], xs[k], g, h));
    const double eps = 1e-5;
    for (Eigen::Index i = 0; i < xs[k].size(); ++i) {
      State p = xs[k], m = xs[k];
      p[i] += eps;
      m[i] -= eps;
      const double fd = (evaluate_raw(fs[k], p).value() - evaluate_raw(fs[k], m).value()) / (2 * eps);
      EXPECT_NEAR(g[i], fd, 1e-7 * (1 + std::abs(fd)));
    }
    EXPECT_LE((h - h.transpose()).norm(), 1e-12);
  }
  Vector g;
  Matrix h;
  ASSERT_TRUE(entropy_derivatives(EntropyFn::constant(0.0, 1), make_state({1.0}), g, h));
  EXPECT_EQ(g.norm() + h.norm(), 0.0);
}

TEST(System, TankBathGapShrinksWithCapacity) {
  double prev = tank_bath_limit_gap(1.0, 1.0, 1.0);
  EXPECT_NEAR(prev, std::abs(std::log(2.0) - 1.0), 1e-15);
  for (double c = 10.0; c <= 1e5; c *= 10.0) {
    const double gap = tank_bath_limit_gap(c, 1.0, 1.0);
    EXPECT_LT(gap, prev);
    EXPECT_NEAR(gap, 1.0 / (2.0 * c), 1.0 / (c * c));  // second-order term
    prev = gap;
  }
  EXPECT_THROW(tank_bath_limit_gap(1.0, 1.0, -2.0), DomainError);
}

TEST(System, StochasticMapValidation) {
  EXPECT_NO_THROW(StochasticMap::from_columns({{0.5, 0.5}, {1.0, 0.0}}));
  EXPECT_THROW(StochasticMap::from_columns({{0.5, 0.6}}), DomainError);
  EXPECT_THROW(StochasticMap::from_columns({{1.5, -0.5}}), DomainError);
  const StochasticMap id = StochasticMap::identity(3);
  EXPECT_EQ(id.apply(make_state({0.1, 0.2, 0.7})), make_state({0.1, 0.2, 0.7}));
}

TEST(System, MeasurementEntropyIsTheWorstMap) {
  const State p = make_state({0.25, 0.25, 0.5});
  const StochasticMap id = StochasticMap::identity(3);
  const StochasticMap merge01 = coarse_grain(id, {0, 0, 1});
  EXPECT_EQ(merge01.outcomes(), 2u);
  EXPECT_NEAR(measurement_entropy({id, merge01}, p).value(), std::log(2.0), 1e-15);
  EXPECT_NEAR(measurement_entropy({id}, p).value(), shannon_entropy(p), 1e-15);
  EXPECT_THROW(measurement_entropy({}, p), DomainError);
  EXPECT_THROW(measurement_entropy({StochasticMap::identity(2)}, p), DomainError);
}

TEST(System, CoarseGrainingNeverRaisesEntropy) {
  Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    std::vector<double> w = entroad::testing::positive_vector(rng, 4);
    double total = 0;
    for (double x : w) total += x;
    State p(4);
    for (int k = 0; k < 4; ++k) p[k] = w[static_cast<std::size_t>(k)] / total;
    const StochasticMap e = StochasticMap::identity(4);
    const StochasticMap c = coarse_grain(e, {rng.index(2), rng.index(2), rng.index(2), rng.index(2)}, 2);
    EXPECT_LE(shannon_entropy(c.apply(p)), shannon_entropy(p) + 1e-15);
  }
}

TEST(System, DensityEncodingRoundTrips) {
  Rng rng(5);
  const DensityMatrix rho = random_density(rng, 3);
  const State coords = encode_density(rho);
  EXPECT_EQ(coords.size(), 9);
  const DensityMatrix back = decode_density(coords, 3);
  EXPECT_LE((back.re - rho.re).norm() + (back.im - rho.im).norm(), 1e-15);
  EXPECT_TRUE(contains(density_space(3), coords));
}

TEST(System, HermitianEigenvaluesAgreeWithEigen) {
  Rng rng(13);
  for (std::size_t d = 1; d <= 5; ++d) {
    for (int trial = 0; trial < 10; ++trial) {
      const DensityMatrix rho = random_density(rng, d);
      const std::vector<double> ours = hermitian_eigenvalues(rho);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_complex(rho));
      ASSERT_EQ(ours.size(), d);
      for (std::size_t k = 0; k < d; ++k) EXPECT_NEAR(ours[k], es.eigenvalues()[static_cast<Eigen::Index>(k)], 1e-10);
    }
  }
}

TEST(System, VonNeumannEntropy) {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const DensityMatrix rho = random_density(rng, 3);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_complex(rho));
    double expected = 0;
    for (Eigen::Index k = 0; k < 3; ++k) {
      const double l = es.eigenvalues()[k];
      if (l > 0) expected -= l * std::log(l);
    }
    EXPECT_NEAR(von_neumann(encode_density(rho)).value(), expected, 1e-10);
  }
  // pure state and maximally mixed state
  DensityMatrix pure{Matrix::Zero(2, 2), Matrix::Zero(2, 2)};
  pure.re(0, 0) = 1.0;
  EXPECT_NEAR(von_neumann(encode_density(pure)).value(), 0.0, 1e-12);
  DensityMatrix mixed{Matrix::Identity(2, 2) / 2.0, Matrix::Zero(2, 2)};
  EXPECT_NEAR(von_neumann(encode_density(mixed)).value(), std::log(2.0), 1e-12);
}

TEST(System, VonNeumannRejectsNonStates) {
  DensityMatrix bad{Matrix::Identity(2, 2), Matrix::Zero(2, 2)};  // trace 2
  EXPECT_THROW(von_neumann(encode_density(bad)), DomainError);
  DensityMatrix neg{Matrix::Zero(2, 2), Matrix::Zero(2, 2)};
  neg.re(0, 0) = 1.5;
  neg.re(1, 1) = -0.5;
  EXPECT_THROW(von_neumann(encode_density(neg)), DomainError);
}
