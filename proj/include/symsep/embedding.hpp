#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "symsep/config.hpp"
#include "symsep/dicke.hpp"
#include "symsep/errors.hpp"
#include "symsep/linalg.hpp"
#include "symsep/ptranspose.hpp"

namespace symsep {

/// Normalized Dicke vector |D_k> in the computational basis of (C^d)^{(x) N}.
inline Vector dicke_state_vector(const PartitionIndex& k, const Limits& limits = {}) {
    const int n = k.total();
    const int d = static_cast<int>(k.dim());
    const std::size_t rows = dense_rows(n, d, limits.max_dense_rows);
    Vector v = Vector::Zero(static_cast<Eigen::Index>(rows));
    const double amp = 1.0 / std::sqrt(static_cast<double>(dicke_multiplicity(k)));
    for (std::size_t x = 0; x < rows; ++x) {
        if (basis_type(x, n, d) == k.counts) v(static_cast<Eigen::Index>(x)) = amp;
    }
    return v;
}

struct EmbeddingEntry {
    double coefficient = 0.0;
    /// Half-party Dicke labels, a <= b, as indices into half_labels.
    std::size_t a = 0;
    std::size_t b = 0;
};

/// |D_K> of N parties written over symmetrized pairs |D_ab> of N/2-party
/// Dicke states, viewed as qudits of dimension k.
struct EmbeddingDictionary {
    int n_parties = 0;
    int local_dim = 0;
    int target_dim = 0;
    std::vector<PartitionIndex> labels;
    std::vector<PartitionIndex> half_labels;
    std::vector<std::vector<EmbeddingEntry>> rows;
};

/// |D_K> = sum_{K1 + K2 = K} sqrt(C(K1) C(K2) / C(K)) |D_K1>|D_K2>, and the
/// ordered pair (K1, K2), K1 != K2, together with its swap is sqrt(2) |D_ab>.
inline EmbeddingDictionary build_embedding_dictionary(int n_parties, int local_dim, const Limits& limits = {}) {
    if (n_parties < 2 || n_parties % 2) {
        throw ApplicabilityError("embedding needs an even number of parties; for odd N the direct embedding does not apply");
    }
    EmbeddingDictionary dict;
    dict.n_parties = n_parties;
    dict.local_dim = local_dim;
    dict.labels = enumerate_partitions(n_parties, local_dim);
    dict.half_labels = enumerate_partitions(n_parties / 2, local_dim);
    dict.target_dim = static_cast<int>(dict.half_labels.size());
    const auto k = static_cast<std::size_t>(dict.target_dim);
    if (k * k > limits.max_dense_rows) {
        throw ResourceError("embedding target dimension k^2 exceeds the configured cap", k * k, limits.max_dense_rows);
    }
    for (const auto& big : dict.labels) {
        std::vector<EmbeddingEntry> row;
        const double cbig = static_cast<double>(dicke_multiplicity(big));
        for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t b = a; b < k; ++b) {
                if (!(dict.half_labels[a] + dict.half_labels[b] == big)) continue;
                double c = std::sqrt(static_cast<double>(dicke_multiplicity(dict.half_labels[a]) *
                                                         dicke_multiplicity(dict.half_labels[b])) /
                                     cbig);
                if (a != b) c *= std::sqrt(2.0);
                row.push_back({c, a, b});
            }
        }
        dict.rows.push_back(std::move(row));
    }
    return dict;
}

/// rho_S = sum_K p_K |v_K><v_K| with v_K the dictionary row of K.
inline BipartiteSymmetricState embed(const DsState& state, const Limits& limits = {}) {
    const auto dict = build_embedding_dictionary(state.n_parties(), state.local_dim(), limits);
    const int k = dict.target_dim;
    std::vector<double> diag(BipartiteSymmetricState::pair_count(k), 0.0);
    std::map<std::pair<std::size_t, std::size_t>, double> coh;
    for (std::size_t r = 0; r < dict.rows.size(); ++r) {
        const double p = state.probs()[r];
        if (p == 0.0) continue;
        const auto& row = dict.rows[r];
        for (std::size_t i = 0; i < row.size(); ++i) {
            const auto u = BipartiteSymmetricState::pair_index(static_cast<int>(row[i].a), static_cast<int>(row[i].b), k);
            diag[u] += p * row[i].coefficient * row[i].coefficient;
            for (std::size_t j = i + 1; j < row.size(); ++j) {
                auto v = BipartiteSymmetricState::pair_index(static_cast<int>(row[j].a), static_cast<int>(row[j].b), k);
                auto key = u < v ? std::make_pair(u, v) : std::make_pair(v, u);
                coh[key] += p * row[i].coefficient * row[j].coefficient;
            }
        }
    }
    double sum = 0.0;
    for (double p : diag) sum += p;
    for (double& p : diag) p /= sum;
    for (auto& [key, value] : coh) value /= sum;
    return BipartiteSymmetricState(k, std::move(diag), std::move(coh));
}

/// k^2 x k^2 matrix of the state with the first qudit transposed.
inline DenseHermitian pt_bipartite_symmetric(const BipartiteSymmetricState& state, const Limits& limits = {}) {
    const auto rho = state.density_matrix(limits);
    return brute_force_pt(rho, Bipartition({0}, 2), state.local_dim());
}

struct RankTable {
    std::size_t source_dim = 0;
    std::size_t source_symmetric_dim = 0;
    int source_rank = 0;
    int source_pt_rank = 0;
    std::size_t target_dim = 0;
    std::size_t target_symmetric_dim = 0;
    int target_rank = 0;
    int target_pt_rank = 0;
};

/// Dimensions and numerical ranks of rho_DS, its equal-cut transpose, rho_S and rho_S^T.
inline RankTable embedding_rank_table(const DsState& state, const Config& config = {}) {
    RankTable t;
    const auto rho = expand_density_matrix(state, config.limits);
    const auto half = Bipartition::first(state.n_parties() / 2, state.n_parties());
    t.source_dim = rho.dim();
    t.source_symmetric_dim = state.partitions().size();
    t.source_rank = numerical_rank(rho.matrix(), config.tol.rank_relative);
    t.source_pt_rank = numerical_rank(brute_force_pt(rho, half, state.local_dim()).matrix(), config.tol.rank_relative);
    const auto s = embed(state, config.limits);
    const auto rs = s.density_matrix(config.limits);
    t.target_dim = rs.dim();
    t.target_symmetric_dim = BipartiteSymmetricState::pair_count(s.local_dim());
    t.target_rank = numerical_rank(rs.matrix(), config.tol.rank_relative);
    t.target_pt_rank = numerical_rank(pt_bipartite_symmetric(s, config.limits).matrix(), config.tol.rank_relative);
    return t;
}

// ---------------------------------------------------------------------------
// Qutrit pairs with one coherence <-> four qubits

namespace detail {

/// Levels (j, m, k) of the qutrit slice with middle level m; j < k.
inline std::array<int, 3> slice_levels(int middle) {
    if (middle < 0 || middle > 2) throw DomainError("slice middle level must be 0, 1 or 2");
    std::array<int, 3> out{0, middle, 0};
    int fill = 0;
    for (int l = 0; l < 3; ++l) {
        if (l == middle) continue;
        if (fill == 0) out[0] = l;
        else out[2] = l;
        ++fill;
    }
    return out;
}

}  // namespace detail

/// Middle level m of a slice state (its coherence couples (j,k) with (m,m)),
/// or -1 when the coherence pattern does not fit.
inline int slice_middle_level(const BipartiteSymmetricState& state) {
    if (state.local_dim() != 3) return -1;
    if (state.coherences().empty()) return 1;
    if (state.coherences().size() != 1) return -1;
    const auto [u, v] = state.coherences().begin()->first;
    for (int m = 0; m < 3; ++m) {
        const auto lv = detail::slice_levels(m);
        const auto jk = BipartiteSymmetricState::pair_index(lv[0], lv[2], 3);
        const auto mm = BipartiteSymmetricState::pair_index(m, m, 3);
        if ((u == jk && v == mm) || (u == mm && v == jk)) return m;
    }
    return -1;
}

/// Four-qubit DS state q = (p_jj, p_jm, 3 p_jk, p_mk, p_kk) of a qutrit
/// state in the slice p_mm = 2 p_jk = sqrt(2) alpha_{jk}^{mm}; the usual
/// slice has m = 1.
inline DsState qutrit_to_fourqubit(const BipartiteSymmetricState& state, const Tolerances& tol = {},
                                   int middle = -1) {
    if (state.local_dim() != 3) throw ApplicabilityError("qutrit_to_fourqubit: needs local dimension 3");
    const int detected = slice_middle_level(state);
    if (detected < 0) {
        throw ApplicabilityError(
            "not in the isomorphic slice: the only coherence allowed couples |D_jk> with |D_mm>, {j,m,k} = {0,1,2}");
    }
    if (middle < 0) middle = detected;
    if (!state.coherences().empty() && middle != detected) {
        throw ApplicabilityError("not in the isomorphic slice: coherence does not match the requested middle level");
    }
    const auto [j, m, k] = detail::slice_levels(middle);
    const double pjk = state.p(j, k);
    const double pmm = state.p(m, m);
    const double alpha = state.alpha(j, k, m, m);
    if (std::abs(pmm - 2.0 * pjk) > tol.slice_constraint || std::abs(pmm - std::sqrt(2.0) * alpha) > tol.slice_constraint) {
        throw ApplicabilityError("not in the isomorphic slice: separability transfer requires p_mm = 2 p_jk = sqrt(2) alpha (got p_mm = " +
                                 std::to_string(pmm) + ", p_jk = " + std::to_string(pjk) +
                                 ", alpha = " + std::to_string(alpha) + ")");
    }
    std::vector<double> q{state.p(j, j), state.p(j, m), 3.0 * pjk, state.p(m, k), state.p(k, k)};
    return DsState::from_vector(4, 2, std::move(q));
}

/// Inverse map: embed the four-qubit state into qutrit pairs and relabel the
/// levels 0, 1, 2 as j, m, k.
inline BipartiteSymmetricState fourqubit_to_qutrit(const DsState& state, int middle = 1) {
    if (state.n_parties() != 4 || state.local_dim() != 2) {
        throw ApplicabilityError("fourqubit_to_qutrit: needs a four-qubit DS state");
    }
    const auto base = embed(state);
    const auto lv = detail::slice_levels(middle);
    auto relabel = [&](std::size_t pair) {
        const auto [a, b] = BipartiteSymmetricState::pair_at(pair, 3);
        return BipartiteSymmetricState::pair_index(lv[static_cast<std::size_t>(a)], lv[static_cast<std::size_t>(b)], 3);
    };
    std::vector<double> diag(6, 0.0);
    for (std::size_t i = 0; i < 6; ++i) diag[relabel(i)] = base.diag()[i];
    BipartiteSymmetricState::Coherences coh;
    for (const auto& [key, value] : base.coherences()) {
        auto u = relabel(key.first);
        auto v = relabel(key.second);
        coh[u < v ? std::make_pair(u, v) : std::make_pair(v, u)] = value;
    }
    return BipartiteSymmetricState(3, std::move(diag), std::move(coh));
}

enum class SliceVerdict { separable, entangled };

inline const char* to_string(SliceVerdict v) { return v == SliceVerdict::separable ? "SEPARABLE" : "ENTANGLED"; }

struct Corollary1Result {
    SliceVerdict verdict = SliceVerdict::entangled;
    DsState qubit_state;
    bool qubit_ppt = false;
    double qubit_min_eigenvalue = 0.0;
    bool direct_ppt = false;
    double direct_min_eigenvalue = 0.0;
    bool consistent = false;
};

/// Maps a slice state to four qubits, where PPT DS states are separable, and
/// transfers the verdict. The partial transpose of the qutrit state itself is
/// checked as a second route.
inline Corollary1Result corollary1_certify(const BipartiteSymmetricState& state, const Config& config = {}) {
    auto q = qutrit_to_fourqubit(state, config.tol);
    const auto cuts = ppt_cuts(q, config);
    bool qubit_ppt = true;
    double qmin = cuts.front().min_eigenvalue;
    for (const auto& c : cuts) {
        qubit_ppt = qubit_ppt && c.ppt;
        qmin = std::min(qmin, c.min_eigenvalue);
    }
    const Vector ev = symmetric_eigenvalues(pt_bipartite_symmetric(state, config.limits).matrix());
    const bool direct = spectrum_is_psd(ev, config.tol.psd_relative);
    return Corollary1Result{qubit_ppt ? SliceVerdict::separable : SliceVerdict::entangled,
                            std::move(q), qubit_ppt, qmin, direct, ev(0), qubit_ppt == direct};
}

}  // namespace symsep
