#pragma once

// Independent reference computations used by the tests. None of these call
// the reduced builders; they work on dense computational-basis matrices.

#include <algorithm>
#include <cmath>
#include <vector>

#include <symsep/symsep.hpp>

namespace oracle {

using symsep::Matrix;
using symsep::Vector;

inline std::size_t ipow(int base, int e) {
    std::size_t r = 1;
    for (int i = 0; i < e; ++i) r *= static_cast<std::size_t>(base);
    return r;
}

inline std::vector<int> digits(std::size_t index, int n, int d) {
    std::vector<int> out(static_cast<std::size_t>(n));
    for (int p = n - 1; p >= 0; --p) {
        out[static_cast<std::size_t>(p)] = static_cast<int>(index % static_cast<std::size_t>(d));
        index /= static_cast<std::size_t>(d);
    }
    return out;
}

inline std::size_t index_of(const std::vector<int>& dig, int d) {
    std::size_t r = 0;
    for (int x : dig) r = r * static_cast<std::size_t>(d) + static_cast<std::size_t>(x);
    return r;
}

/// |D_k> from scratch: normalized sum of all strings with letter counts k.
inline Vector dicke_vector(const std::vector<int>& k) {
    int n = 0;
    for (int c : k) n += c;
    const int d = static_cast<int>(k.size());
    const std::size_t dim = ipow(d, n);
    Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) {
        std::vector<int> c(static_cast<std::size_t>(d), 0);
        for (int x : digits(i, n, d)) ++c[static_cast<std::size_t>(x)];
        if (c == k) v(static_cast<Eigen::Index>(i)) = 1.0;
    }
    return v.normalized();
}

/// Density matrix from scratch: |D_k> is the normalized sum of all strings
/// whose letter counts equal k.
inline Matrix dense_ds(const symsep::DsState& s) {
    const int n = s.n_parties();
    const int d = s.local_dim();
    const std::size_t dim = ipow(d, n);
    Matrix rho = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t t = 0; t < s.partitions().size(); ++t) {
        const auto& k = s.partitions()[t].counts;
        Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
        for (std::size_t i = 0; i < dim; ++i) {
            std::vector<int> c(static_cast<std::size_t>(d), 0);
            for (int x : digits(i, n, d)) ++c[static_cast<std::size_t>(x)];
            if (c == k) v(static_cast<Eigen::Index>(i)) = 1.0;
        }
        v.normalize();
        rho += s.probs()[t] * v * v.transpose();
    }
    return rho;
}

/// Swaps parties p and q of an n-party operator.
inline Matrix swap_parties(const Matrix& m, int n, int d, int p, int q) {
    const std::size_t dim = static_cast<std::size_t>(m.rows());
    std::vector<std::size_t> perm(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        auto dig = digits(i, n, d);
        std::swap(dig[static_cast<std::size_t>(p)], dig[static_cast<std::size_t>(q)]);
        perm[i] = index_of(dig, d);
    }
    Matrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
            out(static_cast<Eigen::Index>(perm[i]), static_cast<Eigen::Index>(perm[j])) =
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    return out;
}

/// Traces out the last `drop` parties.
inline Matrix trace_last(const Matrix& m, int n, int d, int drop) {
    const std::size_t keep_dim = ipow(d, n - drop);
    const std::size_t env = ipow(d, drop);
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(keep_dim), static_cast<Eigen::Index>(keep_dim));
    for (std::size_t i = 0; i < keep_dim; ++i)
        for (std::size_t j = 0; j < keep_dim; ++j)
            for (std::size_t e = 0; e < env; ++e)
                out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +=
                    m(static_cast<Eigen::Index>(i * env + e), static_cast<Eigen::Index>(j * env + e));
    return out;
}

/// Partial transpose on the first `a` parties.
inline Matrix transpose_first(const Matrix& m, int n, int d, int a) {
    const std::size_t left = ipow(d, a);
    const std::size_t right = ipow(d, n - a);
    Matrix out(m.rows(), m.cols());
    for (std::size_t i1 = 0; i1 < left; ++i1)
        for (std::size_t i2 = 0; i2 < right; ++i2)
            for (std::size_t j1 = 0; j1 < left; ++j1)
                for (std::size_t j2 = 0; j2 < right; ++j2)
                    out(static_cast<Eigen::Index>(j1 * right + i2), static_cast<Eigen::Index>(i1 * right + j2)) =
                        m(static_cast<Eigen::Index>(i1 * right + i2), static_cast<Eigen::Index>(j1 * right + j2));
    return out;
}

inline Vector eigenvalues(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

inline double max_sorted_gap(Vector a, Vector b) {
    if (a.size() != b.size()) return INFINITY;
    std::sort(a.data(), a.data() + a.size());
    std::sort(b.data(), b.data() + b.size());
    return (a - b).cwiseAbs().maxCoeff();
}

inline symsep::DsState random_state(int n, int d, std::uint64_t seed) {
    auto rng = symsep::make_rng(seed, 0);
    return symsep::sample_dirichlet(n, d, rng);
}

}  // namespace oracle
