#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace symsep;

namespace {

Matrix random_nonnegative(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    Matrix b(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) b(i, j) = uniform01(rng);
    return b;
}

Matrix fixture_matrix() {
    const auto doc = Json::parse(read_file(std::string(SYMSEP_FIXTURES) + "/dnn_not_cp_5x5.json"));
    return matrix_from_json(doc["matrix"]);
}

// Sampled copositivity check: x^T W x >= 0 on random points of the orthant,
// including sparse ones, since copositive-not-PSD matrices fail off the interior.
bool looks_copositive(const Matrix& w, Rng& rng, int trials = 20000) {
    const Eigen::Index n = w.rows();
    for (int t = 0; t < trials; ++t) {
        Vector x(n);
        for (Eigen::Index i = 0; i < n; ++i) x(i) = uniform01(rng) < 0.3 ? 0.0 : uniform01(rng);
        if (x.dot(w * x) < -1e-12 * x.squaredNorm() * w.cwiseAbs().maxCoeff()) return false;
    }
    return true;
}

void expect_certificate_consistent(const ConeVerdict& v, const Matrix& m, const Tolerances& tol = {}) {
    if (v.cp == CpStatus::cp) {
        EXPECT_TRUE(v.dnn);
        if (v.certificate == CertificateKind::factor) {
            EXPECT_GE(v.factor.minCoeff(), 0.0);
            EXPECT_LE(factor_residual(m, v.factor), tol.cp_residual);
        }
    }
    if (v.dnn) EXPECT_TRUE(v.psd);
    if (v.cp == CpStatus::not_cp && v.certificate == CertificateKind::witness) {
        EXPECT_LT(replay_witness(v.witness, m), -tol.witness);
    }
}

}  // namespace

TEST(Dnn, Examples) {
    const auto id = check_dnn(Matrix::Identity(3, 3));
    EXPECT_TRUE(id.psd);
    EXPECT_TRUE(id.dnn);
    const auto neg = check_dnn((Matrix(2, 2) << 1, -0.5, -0.5, 1).finished());
    EXPECT_TRUE(neg.psd);
    EXPECT_FALSE(neg.dnn);
    const auto swap = check_dnn((Matrix(2, 2) << 0, 1, 1, 0).finished());
    EXPECT_FALSE(swap.psd);
    EXPECT_NEAR(swap.spectrum(0), -1.0, 1e-15);
    EXPECT_THROW(check_dnn(DenseHermitian(Matrix::Zero(2, 3), {"a", "b"})), DomainError);
}

TEST(Factorize, DiagonalUsesSquareRoot) {
    const Vector diag = (Vector(4) << 4.0, 0.0, 1.0, 9.0).finished();
    const auto v = cp_factorize(Matrix(diag.asDiagonal()));
    ASSERT_EQ(v.cp, CpStatus::cp);
    EXPECT_LE((v.factor * v.factor.transpose() - Matrix(diag.asDiagonal())).norm(), 1e-15);
    EXPECT_GE(v.factor.minCoeff(), 0.0);
}

TEST(Factorize, PlantedFiveBySeven) {
    auto rng = make_rng(123, 0);
    const Matrix b0 = random_nonnegative(5, 7, rng);
    const Matrix m = b0 * b0.transpose();
    const auto v = cp_factorize(m);
    ASSERT_EQ(v.cp, CpStatus::cp);
    EXPECT_LE(factor_residual(m, v.factor), 1e-8);
    EXPECT_GE(v.factor.minCoeff(), 0.0);
}

TEST(Factorize, NonDnnRejectedImmediately) {
    Matrix m = Matrix::Identity(5, 5);
    m(0, 1) = m(1, 0) = -0.1;
    const auto v = check_cp(m);
    EXPECT_EQ(v.cp, CpStatus::not_cp);
    EXPECT_EQ(v.certificate, CertificateKind::negative_entry);
}

TEST(Factorize, SmallDnnIsCpWithFactor) {
    auto rng = make_rng(5, 0);
    for (int t = 0; t < 20; ++t) {
        const Matrix b = random_nonnegative(3, 4, rng);
        const Matrix m = b * b.transpose();
        const auto v = check_cp(m);
        EXPECT_EQ(v.cp, CpStatus::cp);
        EXPECT_EQ(v.certificate, CertificateKind::factor);
        expect_certificate_consistent(v, m);
    }
}

TEST(Factorize, RoundTripProperty) {
    int recovered = 0;
    int total = 0;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        auto rng = make_rng(seed, 77);
        const Eigen::Index side = 2 + static_cast<Eigen::Index>(seed % 5);
        const Eigen::Index rank = 1 + static_cast<Eigen::Index>((seed * 7) % 10);
        const Matrix m = [&] {
            const Matrix b = random_nonnegative(side, rank, rng);
            return Matrix(b * b.transpose());
        }();
        const auto v = check_cp(m, CpOptions{0, 20, 5000, seed});
        ++total;
        EXPECT_NE(v.cp, CpStatus::not_cp);
        if (v.cp == CpStatus::cp && v.certificate == CertificateKind::factor) ++recovered;
        expect_certificate_consistent(v, m);
    }
    EXPECT_GE(recovered, total * 95 / 100);
}

TEST(Factorize, Deterministic) {
    auto rng = make_rng(9, 0);
    const Matrix b = random_nonnegative(6, 5, rng);
    const Matrix m = b * b.transpose();
    const auto a = cp_factorize(m, CpOptions{0, 20, 5000, 4});
    const auto c = cp_factorize(m, CpOptions{0, 20, 5000, 4});
    EXPECT_EQ(a.factor, c.factor);
}

TEST(Witness, HornMatrixIsCopositiveNotPsd) {
    auto rng = make_rng(1, 0);
    const Matrix h = horn_matrix();
    EXPECT_TRUE(looks_copositive(h, rng));
    EXPECT_LT(symmetric_eigenvalues(h)(0), 0.0);
}

TEST(Witness, IdentityIsUndecided) {
    EXPECT_EQ(not_cp_witness(Matrix::Identity(5, 5)).cp, CpStatus::undecided);
}

TEST(Witness, NeverFiresOnCpMatrices) {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        auto rng = make_rng(seed, 5);
        const Eigen::Index side = 5 + static_cast<Eigen::Index>(seed % 2);
        const Matrix b = random_nonnegative(side, 1 + static_cast<Eigen::Index>(seed % 9), rng);
        // sparse columns push the matrix towards the boundary of the cone
        Matrix bs = b;
        for (Eigen::Index i = 0; i < bs.size(); ++i)
            if (uniform01(rng) < 0.4) bs.data()[i] = 0.0;
        for (const Matrix& m : {Matrix(b * b.transpose()), Matrix(bs * bs.transpose())}) {
            EXPECT_NE(not_cp_witness(m, {}, seed).cp, CpStatus::not_cp) << seed;
        }
    }
}

TEST(Witness, FixtureIsDnnButNotCp) {
    const Matrix m = fixture_matrix();
    ASSERT_EQ(m.rows(), 5);
    const auto dnn = check_dnn(m);
    EXPECT_TRUE(dnn.psd);
    EXPECT_TRUE(dnn.dnn);
    const auto v = check_cp(m);
    ASSERT_EQ(v.cp, CpStatus::not_cp);
    EXPECT_EQ(v.certificate, CertificateKind::witness);
    EXPECT_LE(v.witness_value, -1e-10);
    EXPECT_NEAR(replay_witness(v.witness, m), v.witness_value, 1e-12);
    auto rng = make_rng(2, 0);
    EXPECT_TRUE(looks_copositive(v.witness, rng));
}

TEST(Witness, SmallSidesNeverClaimNotCp) {
    auto rng = make_rng(3, 0);
    const Matrix b = random_nonnegative(4, 6, rng);
    EXPECT_EQ(not_cp_witness(b * b.transpose()).cp, CpStatus::undecided);
}

TEST(Blocks, AllZeroIsCp) {
    const auto bm = build_m3(DsState(3, 3, {{{3, 0, 0}, 1.0}}));
    BlockMatrix zero = bm;
    for (auto& b : zero.blocks) {
        b.matrix = DenseHermitian(Matrix::Zero(static_cast<Eigen::Index>(b.side()), static_cast<Eigen::Index>(b.side())),
                                  b.matrix.labels());
    }
    EXPECT_EQ(check_block(zero, ConeKind::cp).overall.cp, CpStatus::cp);
}

TEST(Blocks, OneBadBlockSpoilsAll) {
    auto bm = build_m3(oracle::random_state(3, 3, 1));
    Matrix bad = bm.blocks[1].matrix.matrix();
    bad(0, 1) = bad(1, 0) = -0.01;
    bm.blocks[1].matrix = DenseHermitian(bad, bm.blocks[1].matrix.labels());
    const auto v = check_block(bm, ConeKind::cp);
    EXPECT_EQ(v.overall.cp, CpStatus::not_cp);
    EXPECT_EQ(v.blocks[1].cp, CpStatus::not_cp);
    EXPECT_FALSE(check_block(bm, ConeKind::dnn).overall.dnn);
}

TEST(Blocks, BlockwiseEqualsAssembled) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto rng = make_rng(seed, 8);
        const auto s = seed % 2 ? sample_radial_ppt(3, 3, rng) : sample_dirichlet(3, 3, rng);
        const auto bm = build_m3(s);
        std::vector<Matrix> parts;
        for (const auto& b : bm.blocks) parts.push_back(b.matrix.matrix());
        const Matrix whole = block_diagonal(parts);
        const auto blockwise = check_block(bm, ConeKind::dnn);
        const auto assembled = check_dnn(whole);
        EXPECT_EQ(blockwise.overall.psd, assembled.psd) << seed;
        EXPECT_EQ(blockwise.overall.dnn, assembled.dnn) << seed;
        const auto cp = check_block(bm, ConeKind::cp);
        if (cp.overall.cp == CpStatus::cp && cp.overall.certificate == CertificateKind::factor) {
            EXPECT_GE(cp.overall.factor.minCoeff(), 0.0);
            EXPECT_LE(factor_residual(whole, cp.overall.factor), 1e-8);
        }
        if (assembled.dnn) EXPECT_EQ(cp.overall.cp, CpStatus::cp);
    }
}

TEST(Blocks, PptThreeQutritBlocksAreCp) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto rng = make_rng(seed, 9);
        const auto bm = build_m3(sample_radial_ppt(3, 3, rng));
        const auto v = check_block(bm, ConeKind::cp);
        EXPECT_EQ(v.overall.cp, CpStatus::cp);
        for (std::size_t i = 0; i < v.blocks.size(); ++i) {
            expect_certificate_consistent(v.blocks[i], bm.blocks[i].matrix.matrix());
        }
    }
}
