#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace symsep;

namespace {

Vector kron(const Vector& a, const Vector& b) {
    Vector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

Vector nonzero_sorted(const Vector& ev, double tol) {
    std::vector<double> keep;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (std::abs(ev(i)) > tol) keep.push_back(ev(i));
    std::sort(keep.begin(), keep.end());
    return Eigen::Map<Vector>(keep.data(), static_cast<Eigen::Index>(keep.size()));
}

BipartiteSymmetricState random_slice(std::uint64_t seed, int middle = 1) {
    auto rng = make_rng(seed, 61);
    return fourqubit_to_qutrit(sample_dirichlet(4, 2, rng), middle);
}

}  // namespace

TEST(Dictionary, RowsReproduceDickeVectors) {
    for (int n : {2, 4, 6}) {
        for (int d : {2, 3}) {
            const auto dict = build_embedding_dictionary(n, d);
            EXPECT_EQ(static_cast<std::uint64_t>(dict.target_dim), binomial(n / 2 + d - 1, d - 1));
            for (std::size_t r = 0; r < dict.rows.size(); ++r) {
                Vector sum = Vector::Zero(static_cast<Eigen::Index>(oracle::ipow(d, n)));
                double norm = 0.0;
                for (const auto& e : dict.rows[r]) {
                    ASSERT_LE(e.a, e.b);
                    ASSERT_LT(e.b, static_cast<std::size_t>(dict.target_dim));
                    const Vector da = oracle::dicke_vector(dict.half_labels[e.a].counts);
                    const Vector db = oracle::dicke_vector(dict.half_labels[e.b].counts);
                    const Vector pair = e.a == e.b ? kron(da, da) : Vector((kron(da, db) + kron(db, da)) / std::sqrt(2.0));
                    sum += e.coefficient * pair;
                    norm += e.coefficient * e.coefficient;
                }
                EXPECT_NEAR(norm, 1.0, 1e-12);
                EXPECT_LE((sum - oracle::dicke_vector(dict.labels[r].counts)).cwiseAbs().maxCoeff(), 1e-12)
                    << n << "," << d << " row " << r;
                EXPECT_LE((dicke_state_vector(dict.labels[r]) - oracle::dicke_vector(dict.labels[r].counts)).cwiseAbs().maxCoeff(), 1e-15);
            }
        }
    }
}

TEST(Dictionary, FourQutritRows) {
    const auto dict = build_embedding_dictionary(4, 3);
    auto row_of = [&](const PartitionIndex& k) -> const std::vector<EmbeddingEntry>& {
        for (std::size_t r = 0; r < dict.labels.size(); ++r)
            if (dict.labels[r] == k) return dict.rows[r];
        throw std::runtime_error("missing row");
    };
    auto half = [&](const PartitionIndex& k) {
        for (std::size_t i = 0; i < dict.half_labels.size(); ++i)
            if (dict.half_labels[i] == k) return i;
        throw std::runtime_error("missing half label");
    };
    const auto& iiii = row_of({4, 0, 0});
    ASSERT_EQ(iiii.size(), 1u);
    EXPECT_NEAR(iiii[0].coefficient, 1.0, 1e-15);
    EXPECT_EQ(iiii[0].a, half({2, 0, 0}));
    EXPECT_EQ(iiii[0].b, half({2, 0, 0}));

    const auto& iijj = row_of({2, 2, 0});
    ASSERT_EQ(iijj.size(), 2u);
    for (const auto& e : iijj) {
        if (e.a == half({2, 0, 0})) {
            EXPECT_EQ(e.b, half({0, 2, 0}));
            EXPECT_NEAR(e.coefficient, 1.0 / std::sqrt(3.0), 1e-15);
        } else {
            EXPECT_EQ(e.a, half({1, 1, 0}));
            EXPECT_EQ(e.b, half({1, 1, 0}));
            EXPECT_NEAR(e.coefficient, std::sqrt(2.0 / 3.0), 1e-15);
        }
    }
}

TEST(Dictionary, TwoPartiesIsRelabeling) {
    const auto dict = build_embedding_dictionary(2, 4);
    EXPECT_EQ(dict.target_dim, 4);
    for (const auto& row : dict.rows) {
        ASSERT_EQ(row.size(), 1u);
        EXPECT_NEAR(row[0].coefficient, 1.0, 1e-15);
    }
}

TEST(Dictionary, OddPartiesRejected) {
    EXPECT_THROW(build_embedding_dictionary(3, 3), ApplicabilityError);
    EXPECT_THROW(embed(oracle::random_state(3, 2, 0)), ApplicabilityError);
}

TEST(Embed, ProductCaseAndTrace) {
    const auto s = embed(DsState(4, 3, {{{4, 0, 0}, 1.0}}));
    EXPECT_EQ(s.local_dim(), 6);
    EXPECT_NEAR(s.p(0, 0), 1.0, 1e-15);
    EXPECT_TRUE(s.coherences().empty());
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto e = embed(oracle::random_state(4, 3, seed));
        const Matrix rho = e.density_matrix().matrix();
        EXPECT_NEAR(rho.trace(), 1.0, 1e-12);
        EXPECT_LE((rho - rho.transpose()).cwiseAbs().maxCoeff(), 1e-15);
    }
}

TEST(Embed, DensityMatrixIsIsometricImage) {
    // rho_S = V rho_DS V^T on the symmetric subspaces, so the nonzero spectra agree
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto s = oracle::random_state(4, 3, seed);
        const Vector a = nonzero_sorted(oracle::eigenvalues(oracle::dense_ds(s)), 1e-12);
        const Vector b = nonzero_sorted(oracle::eigenvalues(embed(s).density_matrix().matrix()), 1e-12);
        ASSERT_EQ(a.size(), b.size());
        EXPECT_LE((a - b).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Embed, PptEquivalence) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        auto rng = make_rng(seed, 71);
        const auto s = seed % 2 ? sample_dirichlet(4, 3, rng) : sample_radial_ppt(4, 3, rng, false);
        const Vector src = oracle::eigenvalues(oracle::transpose_first(oracle::dense_ds(s), 4, 3, 2));
        const Vector dst = symmetric_eigenvalues(pt_bipartite_symmetric(embed(s)).matrix());
        EXPECT_EQ(spectrum_is_psd(src, 1e-10), spectrum_is_psd(dst, 1e-10)) << seed;
        const Vector a = nonzero_sorted(src, 1e-10);
        const Vector b = nonzero_sorted(dst, 1e-10);
        ASSERT_EQ(a.size(), b.size()) << seed;
        EXPECT_LE((a - b).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(Embed, PureProductPtIsItself) {
    const auto s = embed(DsState(4, 3, {{{4, 0, 0}, 1.0}}));
    EXPECT_EQ(pt_bipartite_symmetric(s).matrix(), s.density_matrix().matrix());
}

TEST(Embed, RankTableBounds) {
    const auto t = embedding_rank_table(oracle::random_state(4, 3, 1));
    EXPECT_EQ(t.source_dim, 81u);
    EXPECT_EQ(t.source_symmetric_dim, 15u);
    EXPECT_EQ(t.target_dim, 36u);
    EXPECT_EQ(t.target_symmetric_dim, 21u);
    EXPECT_LE(t.source_rank, 15);
    EXPECT_LE(t.source_pt_rank, 81);
    EXPECT_LE(t.target_rank, 21);
    EXPECT_LE(t.target_pt_rank, 36);
    EXPECT_EQ(t.source_rank, t.target_rank);
    EXPECT_EQ(t.source_pt_rank, t.target_pt_rank);
}

TEST(Slice, SpecExample) {
    BipartiteSymmetricState s(3, {0.7, 0.0, 0.1, 0.2, 0.0, 0.0}, {{{2, 3}, 0.2 / std::sqrt(2.0)}});
    const auto q = qutrit_to_fourqubit(s);
    EXPECT_NEAR(q.prob({4, 0}), 0.7, 1e-15);
    EXPECT_NEAR(q.prob({2, 2}), 0.3, 1e-15);
    const auto product = qutrit_to_fourqubit(BipartiteSymmetricState(3, {1, 0, 0, 0, 0, 0}, {}));
    EXPECT_NEAR(product.prob({4, 0}), 1.0, 1e-15);
}

TEST(Slice, RejectsOtherCoherences) {
    BipartiteSymmetricState wrong(3, {0.5, 0.2, 0.0, 0.0, 0.0, 0.3}, {{{1, 5}, 0.05}});
    EXPECT_THROW(qutrit_to_fourqubit(wrong), ApplicabilityError);
    BipartiteSymmetricState off(3, {0.7, 0.0, 0.1, 0.2, 0.0, 0.0}, {{{2, 3}, 0.1}});
    try {
        qutrit_to_fourqubit(off);
        FAIL() << "constraint violation accepted";
    } catch (const ApplicabilityError& e) {
        EXPECT_NE(std::string(e.what()).find("not in the isomorphic slice"), std::string::npos);
    }
}

TEST(Slice, RoundTripAllMiddleLevels) {
    for (int middle : {0, 1, 2}) {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const auto s = random_slice(seed, middle);
            EXPECT_EQ(slice_middle_level(s), middle);
            const auto q = qutrit_to_fourqubit(s);
            const auto back = fourqubit_to_qutrit(q, middle);
            EXPECT_LE((back.density_matrix().matrix() - s.density_matrix().matrix()).cwiseAbs().maxCoeff(), 1e-12);
        }
    }
}

TEST(Slice, RoutesAgree) {
    int entangled = 0;
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const auto r = corollary1_certify(random_slice(seed));
        EXPECT_TRUE(r.consistent) << seed;
        if (r.verdict == SliceVerdict::entangled) {
            ++entangled;
            EXPECT_FALSE(r.direct_ppt);
        }
    }
    EXPECT_GT(entangled, 0);
    const auto dominant = fourqubit_to_qutrit(DsState::from_vector(4, 2, {0.9, 0.025, 0.025, 0.025, 0.025}));
    EXPECT_GT(dominant.p(0, 0), 0.85);
    const auto near_product = corollary1_certify(dominant);
    EXPECT_EQ(near_product.verdict, SliceVerdict::separable);
}
