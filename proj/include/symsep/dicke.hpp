#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "symsep/config.hpp"
#include "symsep/errors.hpp"
#include "symsep/linalg.hpp"

namespace symsep {

/// Occupation vector k = (k_0, ..., k_{d-1}) labelling a Dicke state.
///
/// operator< is the canonical order (lexicographically descending on the
/// counts), so ordered containers keyed by PartitionIndex iterate canonically:
/// (3,0,0) < (2,1,0) < ... < (0,0,3).
struct PartitionIndex {
    std::vector<int> counts;

    PartitionIndex() = default;
    explicit PartitionIndex(std::vector<int> c) : counts(std::move(c)) {}
    PartitionIndex(std::initializer_list<int> c) : counts(c) {}

    int total() const noexcept {
        int s = 0;
        for (int k : counts) s += k;
        return s;
    }
    std::size_t dim() const noexcept { return counts.size(); }
    int operator[](std::size_t l) const { return counts[l]; }

    /// Comma-separated counts, the key format of state files ("2,1,0").
    std::string key() const {
        std::string out;
        for (std::size_t l = 0; l < counts.size(); ++l) {
            if (l) out += ',';
            out += std::to_string(counts[l]);
        }
        return out;
    }

    friend bool operator==(const PartitionIndex& a, const PartitionIndex& b) {
        return a.counts == b.counts;
    }
    friend bool operator<(const PartitionIndex& a, const PartitionIndex& b) {
        return a.counts > b.counts;
    }
};

inline PartitionIndex operator+(const PartitionIndex& a, const PartitionIndex& b) {
    if (a.dim() != b.dim()) throw DomainError("partition dimensions differ");
    PartitionIndex out = a;
    for (std::size_t l = 0; l < out.counts.size(); ++l) out.counts[l] += b.counts[l];
    return out;
}

/// Multiset of levels of a partition, e.g. (2,1,0) -> "001".
inline std::string level_string(const PartitionIndex& k) {
    std::string out;
    const bool wide = k.dim() > 10;
    for (std::size_t l = 0; l < k.dim(); ++l) {
        for (int r = 0; r < k.counts[l]; ++r) {
            if (wide && !out.empty()) out += ',';
            out += std::to_string(l);
        }
    }
    return out;
}

inline std::uint64_t binomial(int n, int r) {
    if (r < 0 || r > n) return 0;
    r = std::min(r, n - r);
    std::uint64_t out = 1;
    for (int i = 1; i <= r; ++i) out = out * static_cast<std::uint64_t>(n - r + i) / static_cast<std::uint64_t>(i);
    return out;
}

/// All occupation vectors of length d summing to N, in canonical order.
inline std::vector<PartitionIndex> enumerate_partitions(int n_parties, int local_dim) {
    if (n_parties < 1) throw DomainError("enumerate_partitions: N must be >= 1");
    if (local_dim < 2) throw DomainError("enumerate_partitions: d must be >= 2");
    std::vector<PartitionIndex> out;
    out.reserve(binomial(n_parties + local_dim - 1, local_dim - 1));
    std::vector<int> c(static_cast<std::size_t>(local_dim), 0);
    auto rec = [&](auto&& self, std::size_t l, int left) -> void {
        if (l + 1 == c.size()) {
            c[l] = left;
            out.emplace_back(c);
            return;
        }
        for (int k = left; k >= 0; --k) {
            c[l] = k;
            self(self, l + 1, left - k);
        }
    };
    rec(rec, 0, n_parties);
    return out;
}

/// Partitions of n into d parts, n = 0 allowed (a single all-zero vector).
inline std::vector<PartitionIndex> partitions_allow_zero(int n, int d) {
    if (n == 0) return {PartitionIndex(std::vector<int>(static_cast<std::size_t>(d), 0))};
    return enumerate_partitions(n, d);
}

/// Multinomial coefficient N! / (k_0! ... k_{d-1}!).
inline std::uint64_t dicke_multiplicity(const PartitionIndex& k) {
    std::uint64_t out = 1;
    int running = 0;
    for (int c : k.counts) {
        if (c < 0) throw DomainError("dicke_multiplicity: negative count");
        running += c;
        out *= binomial(running, c);
    }
    return out;
}

/// Canonical partition list with constant-time rank lookup.
class PartitionTable {
public:
    PartitionTable(int n, int d) : n_(n), d_(d), list_(partitions_allow_zero(n, d)) {
        for (std::size_t i = 0; i < list_.size(); ++i) rank_.emplace(list_[i].counts, i);
    }

    int n() const noexcept { return n_; }
    int d() const noexcept { return d_; }
    std::size_t size() const noexcept { return list_.size(); }
    const std::vector<PartitionIndex>& list() const noexcept { return list_; }
    const PartitionIndex& operator[](std::size_t i) const { return list_[i]; }

    /// Rank of k in canonical order, or size() if k is not a partition of n.
    std::size_t rank(const std::vector<int>& k) const {
        auto it = rank_.find(k);
        return it == rank_.end() ? list_.size() : it->second;
    }
    std::size_t rank(const PartitionIndex& k) const { return rank(k.counts); }

private:
    int n_;
    int d_;
    std::vector<PartitionIndex> list_;
    std::map<std::vector<int>, std::size_t> rank_;
};

/// Diagonal symmetric state rho = sum_k p_k |D_k><D_k|.
class DsState {
public:
    DsState(int n_parties, int local_dim, const std::map<PartitionIndex, double>& probs)
        : DsState(n_parties, local_dim) {
        for (const auto& [k, p] : probs) {
            if (k.dim() != static_cast<std::size_t>(local_dim)) {
                throw DomainError("DsState: key " + k.key() + " has length " +
                                  std::to_string(k.dim()) + ", expected " +
                                  std::to_string(local_dim));
            }
            for (int c : k.counts) {
                if (c < 0) throw DomainError("DsState: negative count in key " + k.key());
            }
            if (k.total() != n_parties) {
                throw DomainError("DsState: key " + k.key() + " does not sum to " +
                                  std::to_string(n_parties));
            }
            probs_[table_->rank(k)] += p;
        }
        normalize();
    }

    /// Probabilities given in canonical partition order.
    static DsState from_vector(int n_parties, int local_dim, std::vector<double> probs) {
        DsState s(n_parties, local_dim);
        if (probs.size() != s.table_->size()) {
            throw DomainError("DsState: expected " + std::to_string(s.table_->size()) +
                              " probabilities, got " + std::to_string(probs.size()));
        }
        s.probs_ = std::move(probs);
        s.normalize();
        return s;
    }

    int n_parties() const noexcept { return table_->n(); }
    int local_dim() const noexcept { return table_->d(); }
    const PartitionTable& table() const noexcept { return *table_; }
    const std::vector<PartitionIndex>& partitions() const noexcept { return table_->list(); }
    const std::vector<double>& probs() const noexcept { return probs_; }

    double prob(const PartitionIndex& k) const {
        const auto r = table_->rank(k);
        return r < probs_.size() ? probs_[r] : 0.0;
    }

    /// p_k / C(N,k): the common value of every computational-basis entry
    /// inside the |D_k><D_k| block. Zero for vectors that are not partitions.
    double pbar(const std::vector<int>& k) const {
        const auto r = table_->rank(k);
        if (r >= probs_.size()) return 0.0;
        return probs_[r] / static_cast<double>(dicke_multiplicity((*table_)[r]));
    }
    double pbar(const PartitionIndex& k) const { return pbar(k.counts); }

    std::vector<double> pbar_vector() const {
        std::vector<double> out(probs_.size());
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] = probs_[i] / static_cast<double>(dicke_multiplicity((*table_)[i]));
        }
        return out;
    }

    std::map<PartitionIndex, double> probs_map() const {
        std::map<PartitionIndex, double> out;
        for (std::size_t i = 0; i < probs_.size(); ++i) out.emplace((*table_)[i], probs_[i]);
        return out;
    }

private:
    DsState(int n_parties, int local_dim)
        : table_(std::make_shared<const PartitionTable>(checked(n_parties, local_dim), local_dim)),
          probs_(table_->size(), 0.0) {}

    static int checked(int n_parties, int local_dim) {
        if (n_parties < 1) throw DomainError("DsState: N must be >= 1");
        if (local_dim < 2) throw DomainError("DsState: d must be >= 2");
        return n_parties;
    }

    void normalize() {
        double sum = 0.0;
        for (double p : probs_) {
            if (!std::isfinite(p) || p < 0.0) {
                throw DomainError("DsState: probabilities must be finite and nonnegative");
            }
            sum += p;
        }
        if (!(sum > 0.0)) throw DomainError("DsState: probabilities sum to zero");
        for (double& p : probs_) p /= sum;
    }

    std::shared_ptr<const PartitionTable> table_;
    std::vector<double> probs_;
};

/// d^N with an overflow-safe comparison against the cap.
inline std::size_t dense_rows(int n_parties, int local_dim, std::size_t cap) {
    std::size_t rows = 1;
    for (int i = 0; i < n_parties; ++i) {
        if (rows > cap / static_cast<std::size_t>(local_dim)) {
            throw ResourceError("dense dimension d^N exceeds the configured cap",
                                rows * static_cast<std::size_t>(local_dim), cap);
        }
        rows *= static_cast<std::size_t>(local_dim);
    }
    return rows;
}

/// Digits of a computational basis index, party 0 most significant.
inline std::vector<int> basis_digits(std::size_t index, int n_parties, int local_dim) {
    std::vector<int> out(static_cast<std::size_t>(n_parties));
    for (int p = n_parties - 1; p >= 0; --p) {
        out[static_cast<std::size_t>(p)] = static_cast<int>(index % static_cast<std::size_t>(local_dim));
        index /= static_cast<std::size_t>(local_dim);
    }
    return out;
}

inline std::string basis_label(std::size_t index, int n_parties, int local_dim) {
    std::string out;
    for (int digit : basis_digits(index, n_parties, local_dim)) {
        if (local_dim > 10 && !out.empty()) out += ',';
        out += std::to_string(digit);
    }
    return out;
}

inline std::vector<int> basis_type(std::size_t index, int n_parties, int local_dim) {
    std::vector<int> t(static_cast<std::size_t>(local_dim), 0);
    for (int digit : basis_digits(index, n_parties, local_dim)) ++t[static_cast<std::size_t>(digit)];
    return t;
}

/// Full d^N x d^N density matrix in the computational basis.
inline DenseHermitian expand_density_matrix(const DsState& state, const Limits& limits = {}) {
    const int n = state.n_parties();
    const int d = state.local_dim();
    const std::size_t rows = dense_rows(n, d, limits.max_dense_rows);
    std::vector<std::vector<Eigen::Index>> groups(state.table().size());
    std::vector<std::string> labels(rows);
    for (std::size_t x = 0; x < rows; ++x) {
        groups[state.table().rank(basis_type(x, n, d))].push_back(static_cast<Eigen::Index>(x));
        labels[x] = basis_label(x, n, d);
    }
    Matrix rho = Matrix::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(rows));
    const auto pbar = state.pbar_vector();
    for (std::size_t g = 0; g < groups.size(); ++g) {
        if (pbar[g] == 0.0) continue;
        for (auto x : groups[g]) {
            for (auto y : groups[g]) rho(x, y) = pbar[g];
        }
    }
    return DenseHermitian(std::move(rho), std::move(labels));
}

/// Reduced state of N - drop parties; again diagonal symmetric.
///
/// A basis entry of the reduced state is sum_z rho((x,z),(y,z)), which only
/// depends on the types, giving qbar_J = sum_L C(drop, L) pbar_{J+L}.
inline DsState partial_trace(const DsState& state, int parties_to_drop) {
    const int n = state.n_parties();
    const int d = state.local_dim();
    if (parties_to_drop < 1 || parties_to_drop >= n) {
        throw DomainError("partial_trace: must drop between 1 and N-1 parties");
    }
    const auto kept = enumerate_partitions(n - parties_to_drop, d);
    const auto dropped = enumerate_partitions(parties_to_drop, d);
    std::vector<double> q(kept.size(), 0.0);
    for (std::size_t j = 0; j < kept.size(); ++j) {
        double qbar = 0.0;
        for (const auto& l : dropped) {
            qbar += static_cast<double>(dicke_multiplicity(l)) * state.pbar(kept[j] + l);
        }
        q[j] = qbar * static_cast<double>(dicke_multiplicity(kept[j]));
    }
    return DsState::from_vector(n - parties_to_drop, d, std::move(q));
}

/// Symmetric two-party state sum p_ab |D_ab><D_ab| + sum alpha (|D_ab><D_cd| + h.c.)
/// with real coherences.
///
/// Pairs a <= b are indexed in the order (0,0), (0,1), ..., (0,k-1), (1,1), ...
class BipartiteSymmetricState {
public:
    using Coherences = std::map<std::pair<std::size_t, std::size_t>, double>;

    BipartiteSymmetricState(int local_dim, std::vector<double> diag, Coherences coherences,
                            double tol = Tolerances{}.normalization)
        : k_(local_dim), diag_(std::move(diag)) {
        if (k_ < 1) throw DomainError("BipartiteSymmetricState: local dimension must be positive");
        if (diag_.size() != pair_count(k_)) {
            throw DomainError("BipartiteSymmetricState: expected " +
                              std::to_string(pair_count(k_)) + " diagonal weights");
        }
        double sum = 0.0;
        for (double p : diag_) {
            if (!std::isfinite(p) || p < 0.0) {
                throw DomainError("BipartiteSymmetricState: diagonal weights must be nonnegative");
            }
            sum += p;
        }
        if (std::abs(sum - 1.0) > tol) {
            throw DomainError("BipartiteSymmetricState: diagonal weights sum to " +
                              std::to_string(sum) + ", not 1");
        }
        for (const auto& [key, value] : coherences) {
            auto [u, v] = key;
            if (u == v) throw DomainError("BipartiteSymmetricState: coherence on the diagonal");
            if (u >= diag_.size() || v >= diag_.size()) {
                throw DomainError("BipartiteSymmetricState: coherence index out of range");
            }
            if (u > v) std::swap(u, v);
            if (coherences_.count({u, v})) {
                throw DomainError("BipartiteSymmetricState: coherence pair listed twice");
            }
            if (!std::isfinite(value)) throw DomainError("BipartiteSymmetricState: coherence not finite");
            coherences_[{u, v}] = value;
        }
    }

    static std::size_t pair_count(int k) {
        return static_cast<std::size_t>(k) * static_cast<std::size_t>(k + 1) / 2;
    }
    static std::size_t pair_index(int a, int b, int k) {
        if (a > b) std::swap(a, b);
        return static_cast<std::size_t>(a * k - a * (a - 1) / 2 + (b - a));
    }
    static std::pair<int, int> pair_at(std::size_t index, int k) {
        for (int a = 0; a < k; ++a) {
            const auto row = static_cast<std::size_t>(k - a);
            if (index < row) return {a, a + static_cast<int>(index)};
            index -= row;
        }
        throw DomainError("pair index out of range");
    }

    int local_dim() const noexcept { return k_; }
    const std::vector<double>& diag() const noexcept { return diag_; }
    const Coherences& coherences() const noexcept { return coherences_; }

    double p(int a, int b) const { return diag_[pair_index(a, b, k_)]; }
    double alpha(int a, int b, int c, int e) const {
        auto u = pair_index(a, b, k_);
        auto v = pair_index(c, e, k_);
        if (u > v) std::swap(u, v);
        auto it = coherences_.find({u, v});
        return it == coherences_.end() ? 0.0 : it->second;
    }

    /// |D_ab> as a vector of C^k (x) C^k.
    Vector dicke_vector(std::size_t pair) const {
        const auto [a, b] = pair_at(pair, k_);
        Vector v = Vector::Zero(k_ * k_);
        if (a == b) {
            v(a * k_ + a) = 1.0;
        } else {
            v(a * k_ + b) = v(b * k_ + a) = 1.0 / std::sqrt(2.0);
        }
        return v;
    }

    /// k^2 x k^2 matrix in the computational basis of C^k (x) C^k.
    DenseHermitian density_matrix(const Limits& limits = {}) const {
        const auto rows = static_cast<std::size_t>(k_) * static_cast<std::size_t>(k_);
        if (rows > limits.max_dense_rows) {
            throw ResourceError("bipartite dimension k^2 exceeds the configured cap", rows,
                                limits.max_dense_rows);
        }
        std::vector<Vector> basis;
        for (std::size_t i = 0; i < diag_.size(); ++i) basis.push_back(dicke_vector(i));
        Matrix rho = Matrix::Zero(k_ * k_, k_ * k_);
        for (std::size_t i = 0; i < diag_.size(); ++i) {
            rho += diag_[i] * basis[i] * basis[i].transpose();
        }
        for (const auto& [key, value] : coherences_) {
            rho += value * (basis[key.first] * basis[key.second].transpose() +
                            basis[key.second] * basis[key.first].transpose());
        }
        std::vector<std::string> labels;
        for (int a = 0; a < k_; ++a) {
            for (int b = 0; b < k_; ++b) labels.push_back(std::to_string(a) + "," + std::to_string(b));
        }
        return DenseHermitian(std::move(rho), std::move(labels));
    }

private:
    int k_;
    std::vector<double> diag_;
    Coherences coherences_;
};

}  // namespace symsep
