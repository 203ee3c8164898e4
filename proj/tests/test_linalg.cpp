#include <gtest/gtest.h>

#include <random>

#include "ktuple/linalg.hpp"
#include "oracles.hpp"

using namespace ktuple;
using namespace ktuple::linalg;

namespace {

ComplexMatrix to_fixed(const oracle::Mat& m) { return ComplexMatrix(m); }

}  // namespace

TEST(Pauli, Algebra) {
    const auto x = sigma_x(), y = sigma_y(), z = sigma_z();
    EXPECT_LT(max_abs(x * y - kI * z), 1e-15);
    EXPECT_LT(max_abs(x * x - identity(2)), 1e-15);
    EXPECT_LT(max_abs(z * basis_state(2, 1) + basis_state(2, 1)), 1e-15);  // sigma_z |g> = -|g>
}

TEST(Kron, DimensionsAndLimit) {
    const auto k = kron(sigma_x(), identity(3));
    EXPECT_EQ(k.rows(), 6);
    EXPECT_EQ(k(0, 3), cplx(1.0));
    EXPECT_THROW(kron(identity(3), identity(3)), ContractViolation);
}

TEST(Expm, TwoByTwoMatchesTaylor) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const auto h = oracle::random_hermitian(2, rng);
        const double s = 0.3 * (trial + 1);
        EXPECT_LT((expm_skew(to_fixed(h), s) - to_fixed(oracle::expm_taylor(h, s))).norm(), 1e-12);
    }
}

TEST(Expm, SixBySixMatchesTaylor) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const auto h = oracle::random_hermitian(6, rng);
        const double s = 0.2 * (trial + 1);
        const auto u = expm_skew(to_fixed(h), s);
        EXPECT_LT((u - to_fixed(oracle::expm_taylor(h, s))).norm(), 1e-11);
        EXPECT_LT(unitarity_error(u), 1e-12);
    }
}

TEST(Expm, ZeroGenerator) {
    EXPECT_LT(max_abs(expm_skew(ComplexMatrix::Zero(2, 2), 3.0) - identity(2)), 1e-15);
}

TEST(HermitianEig, ResidualsAndOrder) {
    std::mt19937_64 rng(9);
    for (int dim = 2; dim <= 8; ++dim) {
        const ComplexMatrix h = to_fixed(oracle::random_hermitian(dim, rng));
        const auto e = hermitian_eig(h);
        for (int i = 0; i < dim; ++i) {
            EXPECT_LT((h * e.vectors.col(i) - e.values(i) * e.vectors.col(i)).norm(), 1e-12);
            if (i) {
                EXPECT_LE(e.values(i - 1), e.values(i));
            }
        }
        EXPECT_LT(unitarity_error(e.vectors), 1e-12);
    }
}

TEST(HermitianEig, TwoByTwoClosedForm) {
    ComplexMatrix h(2, 2);
    h << 1.5, 0.7, 0.7, -0.3;
    const auto [lo, hi] = oracle::eig2(1.5, -0.3, 0.7);
    const auto e = hermitian_eig(h);
    EXPECT_NEAR(e.values(0), lo, 1e-14);
    EXPECT_NEAR(e.values(1), hi, 1e-14);
}

TEST(HermitianEig, RejectsBadInput) {
    ComplexMatrix h = ComplexMatrix::Zero(2, 2);
    h(0, 1) = 1.0;
    EXPECT_THROW(hermitian_eig(h), ContractViolation);
    ComplexMatrix big = ComplexMatrix::Identity(1, 1);
    EXPECT_THROW(hermitian_eig(big), ContractViolation);
    ComplexMatrix nan = ComplexMatrix::Identity(2, 2);
    nan(0, 0) = std::nan("");
    EXPECT_THROW(hermitian_eig(nan), ContractViolation);
}

TEST(UnitaryEig, RecoversConstructedPhases) {
    std::mt19937_64 rng(10);
    for (int dim = 2; dim <= 8; dim += 2) {
        const auto v = oracle::random_unitary(dim, rng);
        Eigen::VectorXd phases(dim);
        for (int i = 0; i < dim; ++i) phases(i) = 0.7 * i + 0.1;
        oracle::Mat d = oracle::Mat::Zero(dim, dim);
        for (int i = 0; i < dim; ++i) d(i, i) = std::polar(1.0, phases(i));
        const ComplexMatrix u = to_fixed(v * d * v.adjoint());
        const auto e = unitary_eigenphases(u);
        for (int i = 0; i < dim; ++i) {
            double best = 10.0;
            for (int j = 0; j < dim; ++j) best = std::min(best, phase_distance(e.phases(i), phases(j)));
            EXPECT_LT(best, 1e-12);
            EXPECT_LT((u * e.vectors.col(i) - std::polar(1.0, e.phases(i)) * e.vectors.col(i)).norm(), 1e-11);
            EXPECT_GE(e.phases(i), 0.0);
            EXPECT_LT(e.phases(i), kTwoPi);
        }
    }
}

TEST(UnitaryEig, DegenerateEigenspaceStaysOrthonormal) {
    std::mt19937_64 rng(11);
    const auto v = oracle::random_unitary(4, rng);
    oracle::Mat d = oracle::Mat::Identity(4, 4) * std::polar(1.0, 1.0);
    d(3, 3) = std::polar(1.0, 2.0);
    const auto e = unitary_eigenphases(to_fixed(v * d * v.adjoint()));
    EXPECT_LT(unitarity_error(e.vectors), 1e-12);
}

TEST(UnitaryEig, RejectsNonUnitary) {
    EXPECT_THROW(unitary_eigenphases(ComplexMatrix(2.0 * identity(2))), ContractViolation);
}

TEST(Phase, FoldAndDistance) {
    EXPECT_DOUBLE_EQ(fold_phase(-0.5), kTwoPi - 0.5);
    EXPECT_DOUBLE_EQ(fold_phase(kTwoPi), 0.0);
    EXPECT_NEAR(phase_distance(0.1, kTwoPi - 0.1), 0.2, 1e-15);
}

TEST(States, FidelityAndBloch) {
    const auto e = basis_state(2, 0), g = basis_state(2, 1);
    EXPECT_DOUBLE_EQ(fidelity(e, g), 0.0);
    EXPECT_DOUBLE_EQ(bloch_vector(g).z(), -1.0);
    const auto plus = make_state({1.0, 1.0});
    EXPECT_NEAR(bloch_vector(plus).x(), 1.0, 1e-15);
    EXPECT_THROW(make_state({0.0, 0.0}), ContractViolation);
    EXPECT_THROW(bloch_vector(basis_state(3, 0)), ContractViolation);
}

TEST(Density, Invariants) {
    EXPECT_NEAR(DensityState::maximally_mixed(6).purity(), 1.0 / 6.0, 1e-15);
    EXPECT_NEAR(DensityState::pure(make_state({1.0, kI})).purity(), 1.0, 1e-15);
    ComplexMatrix bad = identity(2);
    EXPECT_THROW(DensityState{bad}, ContractViolation);  // trace 2
    RealVector neg(2);
    neg << 1.5, -0.5;
    EXPECT_THROW(DensityState::diagonal(neg), ContractViolation);
    ComplexMatrix nh = 0.5 * identity(2);
    nh(0, 1) = 0.1;
    EXPECT_THROW(DensityState{nh}, ContractViolation);
}

TEST(Density, UnitaryEvolutionPreservesTraceAndPurity) {
    std::mt19937_64 rng(12);
    RealVector p(4);
    p << 0.4, 0.3, 0.2, 0.1;
    auto rho = DensityState::diagonal(p);
    const double purity = rho.purity();
    const ComplexMatrix u = to_fixed(oracle::random_unitary(4, rng));
    for (int i = 0; i < 100; ++i) rho = rho.evolved(u);
    EXPECT_NEAR(rho.trace(), 1.0, 1e-12);
    EXPECT_NEAR(rho.purity(), purity, 1e-12);
    const auto mixed = DensityState::mix(0.5, rho, DensityState::maximally_mixed(4));
    EXPECT_NEAR(mixed.trace(), 1.0, 1e-12);
}
