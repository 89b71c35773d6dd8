#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "symsep/config.hpp"
#include "symsep/errors.hpp"

namespace symsep {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Real symmetric matrix with basis labels.
///
/// Every matrix in this library (density matrices of DS states, their partial
/// transposes, the reduced M-matrices) is real in the computational basis, so
/// no complex storage is used.
class DenseHermitian {
public:
    DenseHermitian() = default;

    explicit DenseHermitian(Matrix entries, std::vector<std::string> labels = {},
                            double symmetry_tol = Tolerances{}.symmetry)
        : entries_(std::move(entries)), labels_(std::move(labels)) {
        if (entries_.rows() != entries_.cols()) {
            throw DomainError("DenseHermitian: matrix is " + std::to_string(entries_.rows()) +
                              "x" + std::to_string(entries_.cols()) + ", not square");
        }
        if (!labels_.empty() && labels_.size() != static_cast<std::size_t>(entries_.rows())) {
            throw DomainError("DenseHermitian: label count does not match dimension");
        }
        const double scale = entries_.size() ? entries_.cwiseAbs().maxCoeff() : 0.0;
        const double defect =
            entries_.size() ? (entries_ - entries_.transpose()).cwiseAbs().maxCoeff() : 0.0;
        if (defect > symmetry_tol * scale) {
            throw DomainError("DenseHermitian: matrix is not symmetric (defect " +
                              std::to_string(defect) + ")");
        }
    }

    std::size_t dim() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
    const Matrix& matrix() const noexcept { return entries_; }
    double operator()(std::size_t i, std::size_t j) const {
        return entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

private:
    Matrix entries_;
    std::vector<std::string> labels_;
};

namespace detail {

inline std::size_t find_root(std::vector<std::size_t>& parent, std::size_t i) {
    while (parent[i] != i) {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    return i;
}

}  // namespace detail

/// Groups the indices of a symmetric matrix into the connected components of
/// its nonzero pattern. Each component is an exact direct summand.
inline std::vector<std::vector<std::size_t>> sparsity_components(const Matrix& m) {
    const auto n = static_cast<std::size_t>(m.rows());
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = j + 1; i < n; ++i) {
            if (m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) != 0.0) {
                auto a = detail::find_root(parent, i);
                auto b = detail::find_root(parent, j);
                if (a != b) parent[a] = b;
            }
        }
    }
    std::vector<std::vector<std::size_t>> groups;
    std::vector<std::size_t> slot(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = detail::find_root(parent, i);
        if (slot[r] == n) {
            slot[r] = groups.size();
            groups.emplace_back();
        }
        groups[slot[r]].push_back(i);
    }
    return groups;
}

/// Eigenvalues of a real symmetric matrix in ascending order.
///
/// The matrix is split into the connected components of its sparsity
/// pattern and each component goes through a self-adjoint (tridiagonal QR)
/// solver; partial transposes of DS states are extremely block sparse.
inline Vector symmetric_eigenvalues(const Matrix& m) {
    const auto n = m.rows();
    Vector out(n);
    Eigen::Index filled = 0;
    for (const auto& group : sparsity_components(m)) {
        const auto k = static_cast<Eigen::Index>(group.size());
        if (k == 1) {
            out(filled++) = m(static_cast<Eigen::Index>(group[0]),
                              static_cast<Eigen::Index>(group[0]));
            continue;
        }
        Matrix sub(k, k);
        for (Eigen::Index a = 0; a < k; ++a) {
            for (Eigen::Index b = 0; b < k; ++b) {
                sub(a, b) = m(static_cast<Eigen::Index>(group[static_cast<std::size_t>(a)]),
                              static_cast<Eigen::Index>(group[static_cast<std::size_t>(b)]));
            }
        }
        Eigen::SelfAdjointEigenSolver<Matrix> solver(sub, Eigen::EigenvaluesOnly);
        out.segment(filled, k) = solver.eigenvalues();
        filled += k;
    }
    std::sort(out.data(), out.data() + out.size());
    return out;
}

/// PSD decision with the relative floor lambda_min >= -tol * max(1, lambda_max).
inline bool spectrum_is_psd(const Vector& ascending, double tol) {
    if (ascending.size() == 0) return true;
    const double top = std::max(1.0, ascending(ascending.size() - 1));
    return ascending(0) >= -tol * top;
}

inline bool is_psd(const Matrix& m, double tol = Tolerances{}.psd_relative) {
    return spectrum_is_psd(symmetric_eigenvalues(m), tol);
}

/// Number of singular values above rel * sigma_max.
/// Symmetric input goes through the eigensolver; BDCSVD misplaced small
/// singular values on some 81x81 transposes.
inline int numerical_rank(const Matrix& m, double rel = Tolerances{}.rank_relative) {
    if (m.size() == 0) return 0;
    Vector s;
    if (m.rows() == m.cols() && m == m.transpose()) {
        s = Eigen::SelfAdjointEigenSolver<Matrix>(m, Eigen::EigenvaluesOnly).eigenvalues().cwiseAbs();
    } else {
        s = Eigen::JacobiSVD<Matrix>(m).singularValues();
    }
    if (s.size() == 0 || s.maxCoeff() == 0.0) return 0;
    const double top = s.maxCoeff();
    int r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) > rel * top) ++r;
    }
    return r;
}

/// Direct sum of square matrices.
inline Matrix block_diagonal(const std::vector<Matrix>& parts) {
    Eigen::Index n = 0;
    for (const auto& p : parts) n += p.rows();
    Matrix out = Matrix::Zero(n, n);
    Eigen::Index at = 0;
    for (const auto& p : parts) {
        out.block(at, at, p.rows(), p.cols()) = p;
        at += p.rows();
    }
    return out;
}

struct NnlsResult {
    Vector x;
    double residual_norm = 0.0;
    bool converged = false;
};

/// Nonnegative least squares, min ||A x - b|| subject to x >= 0
/// (Lawson-Hanson active set).
inline NnlsResult nnls(const Matrix& a, const Vector& b, int max_outer = 0) {
    const Eigen::Index n = a.cols();
    if (max_outer <= 0) max_outer = static_cast<int>(3 * n + 10);
    NnlsResult res;
    res.x = Vector::Zero(n);
    std::vector<bool> passive(static_cast<std::size_t>(n), false);
    const double tol = 10.0 * std::numeric_limits<double>::epsilon() *
                       std::max<double>(1.0, a.cwiseAbs().colwise().sum().maxCoeff()) *
                       static_cast<double>(std::max(a.rows(), a.cols()));

    auto solve_passive = [&](Vector& s) {
        std::vector<Eigen::Index> idx;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
        }
        Matrix sub(a.rows(), static_cast<Eigen::Index>(idx.size()));
        for (std::size_t c = 0; c < idx.size(); ++c) sub.col(static_cast<Eigen::Index>(c)) = a.col(idx[c]);
        Vector z = sub.completeOrthogonalDecomposition().solve(b);
        s = Vector::Zero(n);
        for (std::size_t c = 0; c < idx.size(); ++c) s(idx[c]) = z(static_cast<Eigen::Index>(c));
    };

    Vector w = a.transpose() * (b - a * res.x);
    int outer = 0;
    while (outer++ < max_outer) {
        Eigen::Index best = -1;
        double best_w = tol;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (!passive[static_cast<std::size_t>(j)] && w(j) > best_w) {
                best_w = w(j);
                best = j;
            }
        }
        if (best < 0) {
            res.converged = true;
            break;
        }
        passive[static_cast<std::size_t>(best)] = true;
        Vector s;
        for (int inner = 0; inner < 3 * n + 10; ++inner) {
            solve_passive(s);
            double alpha = 2.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (passive[static_cast<std::size_t>(j)] && s(j) <= 0.0) {
                    const double denom = res.x(j) - s(j);
                    if (denom > 0.0) alpha = std::min(alpha, res.x(j) / denom);
                    else alpha = 0.0;
                }
            }
            if (alpha > 1.0) break;
            res.x += alpha * (s - res.x);
            for (Eigen::Index j = 0; j < n; ++j) {
                if (passive[static_cast<std::size_t>(j)] && res.x(j) <= tol) {
                    passive[static_cast<std::size_t>(j)] = false;
                    res.x(j) = 0.0;
                }
            }
        }
        for (Eigen::Index j = 0; j < n; ++j) {
            res.x(j) = passive[static_cast<std::size_t>(j)] ? std::max(0.0, s(j)) : 0.0;
        }
        w = a.transpose() * (b - a * res.x);
    }
    res.residual_norm = (a * res.x - b).norm();
    return res;
}

}  // namespace symsep
