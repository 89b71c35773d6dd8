#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace symsep;

namespace {

const Block& block_named(const BlockMatrix& bm, const std::string& name) {
    for (const auto& b : bm.blocks) {
        if (b.name == name) return b;
    }
    throw std::runtime_error("no block " + name);
}

double spectrum_gap(const DsState& s, int transposed) {
    const Matrix pt = oracle::transpose_first(oracle::dense_ds(s), s.n_parties(), s.local_dim(), transposed);
    return oracle::max_sorted_gap(oracle::eigenvalues(pt), reduced_partial_transpose(s, transposed).spectrum());
}

}  // namespace

TEST(BipartitionTest, Validation) {
    EXPECT_THROW(Bipartition({}, 3), DomainError);
    EXPECT_THROW(Bipartition({0, 1, 2}, 3), DomainError);
    EXPECT_THROW(Bipartition({3}, 3), DomainError);
    Bipartition b({2, 0, 0}, 4);
    EXPECT_EQ(b.left_parties(), (std::vector<int>{0, 2}));
    EXPECT_EQ(b.label(), "2:2");
}

TEST(BruteForce, DiagonalProductIsFixed) {
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = 1.0;
    const DenseHermitian rho(m, {"00", "01", "10", "11"});
    EXPECT_EQ(brute_force_pt(rho, Bipartition({0}, 2), 2).matrix(), m);
}

TEST(BruteForce, BellPairSpectrum) {
    const auto rho = expand_density_matrix(DsState(2, 2, {{{1, 1}, 1.0}}));
    const Vector ev = symmetric_eigenvalues(brute_force_pt(rho, Bipartition({0}, 2), 2).matrix());
    Vector expect(4);
    expect << -0.5, 0.5, 0.5, 0.5;
    EXPECT_LE((ev - expect).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(BruteForce, InvolutionTraceNormAndOracle) {
    for (auto [n, d] : std::vector<std::pair<int, int>>{{2, 3}, {3, 2}, {3, 3}, {4, 2}}) {
        auto rng = make_rng(42, static_cast<std::uint64_t>(n * 10 + d));
        const auto dim = static_cast<Eigen::Index>(oracle::ipow(d, n));
        Matrix a(dim, dim);
        for (Eigen::Index i = 0; i < dim; ++i)
            for (Eigen::Index j = 0; j < dim; ++j) a(i, j) = standard_normal(rng);
        const DenseHermitian rho(a + a.transpose(), std::vector<std::string>(static_cast<std::size_t>(dim)));
        for (int s = 1; s < n; ++s) {
            std::vector<int> left;
            for (int p = n - s; p < n; ++p) left.push_back(p);
            const Bipartition cut(left, n);
            const auto once = brute_force_pt(rho, cut, d);
            EXPECT_EQ(brute_force_pt(once, cut, d).matrix(), rho.matrix());
            EXPECT_NEAR(once.matrix().trace(), rho.matrix().trace(), 1e-12);
            EXPECT_NEAR(once.matrix().norm(), rho.matrix().norm(), 1e-12);
        }
        const Bipartition first = Bipartition::first(1, n);
        EXPECT_EQ(brute_force_pt(rho, first, d).matrix(), oracle::transpose_first(rho.matrix(), n, d, 1));
    }
}

TEST(BruteForce, DimensionMismatch) {
    const DenseHermitian rho(Matrix::Identity(8, 8), std::vector<std::string>(8));
    EXPECT_THROW(brute_force_pt(rho, Bipartition({0}, 2), 3), DomainError);
}

TEST(MBipartite, DiagonalCase) {
    const auto bm = build_m_bipartite(DsState(2, 2, {{{2, 0}, 0.5}, {{0, 2}, 0.5}}));
    ASSERT_EQ(bm.blocks.size(), 1u);
    EXPECT_EQ(bm.blocks[0].matrix.matrix(), (Matrix(2, 2) << 0.5, 0, 0, 0.5).finished());
    for (const auto& s : bm.singletons) EXPECT_EQ(s.value, 0.0);
}

TEST(MBipartite, OffDiagonalPair) {
    const auto bm = build_m_bipartite(DsState(2, 2, {{{1, 1}, 1.0}}));
    ASSERT_EQ(bm.blocks.size(), 1u);
    EXPECT_EQ(bm.blocks[0].matrix.matrix(), (Matrix(2, 2) << 0, 0.5, 0.5, 0).finished());
    std::vector<double> singles;
    for (const auto& s : bm.singletons)
        for (int c = 0; c < s.copies; ++c) singles.push_back(s.value);
    EXPECT_EQ(singles, (std::vector<double>{0.5, 0.5}));
}

TEST(MBipartite, WrongPartyCount) {
    EXPECT_THROW(build_m_bipartite(oracle::random_state(3, 2, 0)), DomainError);
    EXPECT_THROW(build_m3(oracle::random_state(2, 2, 0)), DomainError);
    EXPECT_THROW(build_m4(oracle::random_state(3, 2, 0)), DomainError);
    EXPECT_THROW(build_m1v3(oracle::random_state(5, 2, 0)), DomainError);
}

TEST(M3, ProductState) {
    const auto bm = build_m3(DsState(3, 3, {{{3, 0, 0}, 1.0}}));
    ASSERT_EQ(bm.blocks.size(), 3u);
    for (const auto& b : bm.blocks) {
        ASSERT_EQ(b.side(), 3u);
        const double expect_00 = b.name == "-0" ? 1.0 : 0.0;
        EXPECT_EQ(b.matrix(0, 0), expect_00);
        EXPECT_EQ(b.matrix.matrix().cwiseAbs().sum(), expect_00);
    }
}

TEST(M3, UniformFirstRow) {
    std::map<PartitionIndex, double> probs;
    for (const auto& k : enumerate_partitions(3, 3)) probs[k] = 1.0;
    const auto bm = build_m3(DsState(3, 3, probs));
    const auto& m0 = block_named(bm, "-0");
    EXPECT_NEAR(m0.matrix(0, 0), 1.0 / 10, 1e-15);
    EXPECT_NEAR(m0.matrix(0, 1), 1.0 / 30, 1e-15);
    EXPECT_NEAR(m0.matrix(0, 2), 1.0 / 30, 1e-15);
}

TEST(M4, BlockSizes) {
    for (int d : {2, 3, 4}) {
        const auto bm = build_m4(oracle::random_state(4, d, 5));
        std::multiset<std::size_t> sizes;
        for (const auto& b : bm.blocks) sizes.insert(b.side());
        std::multiset<std::size_t> expect{static_cast<std::size_t>(d * (d + 1) / 2)};
        for (int i = 0; i < d * (d - 1) / 2; ++i) expect.insert(static_cast<std::size_t>(d));
        EXPECT_EQ(sizes, expect) << "d=" << d;
        EXPECT_EQ(bm.total_side(), static_cast<std::size_t>((d * d * d + d) / 2));
    }
}

TEST(M1v3, ProductState) {
    const auto bm = build_m1v3(DsState(4, 2, {{{4, 0}, 1.0}}));
    for (const auto& b : bm.blocks) {
        const double expect = b.name == "-00" ? 1.0 : 0.0;
        EXPECT_EQ(b.matrix.matrix().cwiseAbs().sum(), expect) << b.name;
    }
}

TEST(M1v3, ContainedInM4) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const int d = 3;
        const auto s = oracle::random_state(4, d, seed);
        const auto m4 = build_m4(s);
        const auto m13 = build_m1v3(s);
        ASSERT_EQ(m13.blocks.size(), static_cast<std::size_t>(d * (d + 1) / 2));
        const auto& big = block_named(m4, "0");
        for (int i = 0; i < d; ++i) {
            for (int j = i; j < d; ++j) {
                const auto& small = block_named(m13, "-" + std::to_string(i) + std::to_string(j));
                ASSERT_EQ(small.side(), static_cast<std::size_t>(d));
                if (i < j) {
                    const auto& twin = block_named(m4, "+" + std::to_string(i) + "-" + std::to_string(j));
                    EXPECT_EQ(small.matrix.matrix(), twin.matrix.matrix());
                } else {
                    // rows i + k of the big block, indexed over two-party types
                    PartitionTable two(2, d);
                    std::vector<Eigen::Index> rows;
                    for (int k = 0; k < d; ++k) {
                        std::vector<int> c(static_cast<std::size_t>(d), 0);
                        ++c[static_cast<std::size_t>(i)];
                        ++c[static_cast<std::size_t>(k)];
                        rows.push_back(static_cast<Eigen::Index>(two.rank(c)));
                    }
                    for (int a = 0; a < d; ++a)
                        for (int b = 0; b < d; ++b)
                            EXPECT_EQ(small.matrix(a, b), big.matrix(rows[static_cast<std::size_t>(a)],
                                                                     rows[static_cast<std::size_t>(b)]));
                }
            }
        }
    }
}

TEST(SpectrumEquivalence, LargestCutGrid) {
    const std::vector<std::pair<int, int>> grid{{2, 2}, {2, 3}, {2, 5}, {3, 2}, {3, 3}, {3, 4},
                                                {4, 2}, {4, 3}, {5, 2}, {6, 2}, {5, 3}};
    for (auto [n, d] : grid) {
        for (std::uint64_t seed = 0; seed < 4; ++seed) {
            EXPECT_LE(spectrum_gap(oracle::random_state(n, d, seed), n / 2), 1e-10) << n << "," << d;
        }
    }
}

TEST(SpectrumEquivalence, EverySmallerCut) {
    for (auto [n, d] : std::vector<std::pair<int, int>>{{4, 3}, {5, 2}, {6, 2}}) {
        const auto s = oracle::random_state(n, d, 9);
        for (int a = 1; a < n; ++a) EXPECT_LE(spectrum_gap(s, a), 1e-10) << n << "," << d << " a=" << a;
    }
}

TEST(SpectrumEquivalence, SpecializedBuildersMatchGeneral) {
    const auto s2 = oracle::random_state(2, 3, 1);
    const auto s3 = oracle::random_state(3, 3, 1);
    const auto s4 = oracle::random_state(4, 3, 1);
    EXPECT_EQ(build_mn(s2).spectrum(), build_m_bipartite(s2).spectrum());
    EXPECT_EQ(build_mn(s3).spectrum(), build_m3(s3).spectrum());
    EXPECT_EQ(build_mn(s4).spectrum(), build_m4(s4).spectrum());
}

TEST(SpectrumEquivalence, SameSizeCutsAgree) {
    for (auto [n, d] : std::vector<std::pair<int, int>>{{3, 3}, {4, 2}, {4, 3}, {5, 2}}) {
        const auto s = oracle::random_state(n, d, 3);
        const auto rho = expand_density_matrix(s);
        const Vector ref = symmetric_eigenvalues(brute_force_pt(rho, Bipartition::first(1, n), d).matrix());
        for (int p = 1; p < n; ++p) {
            const Vector ev = symmetric_eigenvalues(brute_force_pt(rho, Bipartition({p}, n), d).matrix());
            EXPECT_LE((ev - ref).cwiseAbs().maxCoeff(), 1e-12);
        }
        if (n >= 4) {
            const Vector ref2 = symmetric_eigenvalues(brute_force_pt(rho, Bipartition({0, 1}, n), d).matrix());
            for (const std::vector<int>& left : {std::vector<int>{0, 2}, std::vector<int>{1, 3}}) {
                const Vector ev = symmetric_eigenvalues(brute_force_pt(rho, Bipartition(left, n), d).matrix());
                EXPECT_LE((ev - ref2).cwiseAbs().maxCoeff(), 1e-12);
            }
        }
    }
}

TEST(Ppt, Examples) {
    EXPECT_TRUE(is_ppt(DsState(3, 3, {{{3, 0, 0}, 0.5}, {{0, 3, 0}, 0.5}})));
    const auto all = ppt_all_partitions(DsState(3, 3, {{{3, 0, 0}, 0.5}, {{0, 3, 0}, 0.5}}));
    for (const auto& [cut, ppt] : all) EXPECT_TRUE(ppt) << cut.label();
    const auto bell = ppt_all_partitions(DsState(2, 2, {{{1, 1}, 1.0}}));
    ASSERT_EQ(bell.size(), 1u);
    EXPECT_FALSE(bell.begin()->second);
}

TEST(Ppt, ReducedMatchesBruteForceVerdicts) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto rng = make_rng(seed, 1);
        const auto s = seed % 2 ? sample_dirichlet(4, 3, rng) : sample_radial_ppt(4, 3, rng);
        const auto a = ppt_cuts(s);
        const auto b = ppt_cuts_reduced(s);
        ASSERT_EQ(a.size(), b.size());
        for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].ppt, b[i].ppt);
        EXPECT_EQ(a.back().ppt, build_m4(s).is_psd());
    }
}

TEST(Ppt, LargestCutImpliesSmallerForFourParties) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        auto rng = make_rng(seed, 2);
        const auto s = seed % 2 ? sample_dirichlet(4, 3, rng) : sample_radial_ppt(4, 3, rng, false);
        if (build_m4(s).is_psd()) EXPECT_TRUE(build_m1v3(s).is_psd()) << seed;
    }
}

TEST(Sampling, RadialSamplesArePpt) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto rng = make_rng(seed, 3);
        EXPECT_TRUE(is_ppt(sample_radial_ppt(3, 4, rng)));
    }
}

TEST(Conjecture, ZeroSamplesRejected) {
    EXPECT_THROW(test_conjecture1(4, 3, 0, 7), DomainError);
}

TEST(Conjecture, FourPartiesHaveNoCounterexamples) {
    const auto r = test_conjecture1(4, 3, 100, 7, Ensemble::radial);
    EXPECT_EQ(r.counterexamples, 0u);
    EXPECT_EQ(r.largest_cut_ppt, 100u);
    const auto d = test_conjecture1(4, 3, 100, 7);
    EXPECT_EQ(d.counterexamples, 0u);
}

TEST(Conjecture, Deterministic) {
    const auto a = test_conjecture1(5, 2, 30, 11, Ensemble::radial);
    const auto b = test_conjecture1(5, 2, 30, 11, Ensemble::radial);
    ASSERT_EQ(a.records.size(), b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        EXPECT_EQ(a.records[i].probs, b.records[i].probs);
        EXPECT_EQ(a.records[i].largest_cut_ppt, b.records[i].largest_cut_ppt);
    }
}

TEST(Caps, ReducedSideCap) {
    Limits small;
    small.max_reduced_side = 10;
    EXPECT_THROW(reduced_partial_transpose(oracle::random_state(4, 3, 0), 2, small), ResourceError);
}
