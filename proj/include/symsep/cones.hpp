#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "symsep/config.hpp"
#include "symsep/errors.hpp"
#include "symsep/linalg.hpp"
#include "symsep/ptranspose.hpp"
#include "symsep/random.hpp"

namespace symsep {

enum class CpStatus { cp, not_cp, undecided };

enum class CertificateKind {
    none,
    spectrum,        // negative eigenvalue
    negative_entry,  // entry below the DNN floor
    factor,          // nonnegative B with B B^T = M
    witness,         // copositive W with <W, M> < 0
    existence,       // DNN of side <= 4, no explicit factor
};

inline const char* to_string(CpStatus s) {
    switch (s) {
        case CpStatus::cp: return "CP";
        case CpStatus::not_cp: return "NOT_CP";
        default: return "UNDECIDED";
    }
}

inline const char* to_string(CertificateKind k) {
    switch (k) {
        case CertificateKind::spectrum: return "eigen-spectrum";
        case CertificateKind::negative_entry: return "negative-entry";
        case CertificateKind::factor: return "cp-factor";
        case CertificateKind::witness: return "copositive-witness";
        case CertificateKind::existence: return "existence";
        default: return "none";
    }
}

struct ConeVerdict {
    bool psd = false;
    bool dnn = false;
    CpStatus cp = CpStatus::undecided;
    CertificateKind certificate = CertificateKind::none;
    Vector spectrum;
    double min_entry = 0.0;
    /// Nonnegative factor, side x k.
    Matrix factor;
    /// ||B B^T - M||_F / ||M||_F of `factor`.
    double residual = 0.0;
    Matrix witness;
    double witness_value = 0.0;
    std::string note;
    std::uint64_t seed = 0;
    int restarts_used = 0;
};

/// The 5x5 Horn matrix: copositive, and not a sum of a PSD and a nonnegative matrix.
inline Matrix horn_matrix() {
    Matrix h(5, 5);
    h << 1, -1, 1, 1, -1,
        -1, 1, -1, 1, 1,
        1, -1, 1, -1, 1,
        1, 1, -1, 1, -1,
        -1, 1, 1, -1, 1;
    return h;
}

inline ConeVerdict check_dnn(const Matrix& m, const Tolerances& tol = {}) {
    if (m.rows() != m.cols()) throw DomainError("check_dnn: matrix is not square");
    ConeVerdict v;
    v.spectrum = symmetric_eigenvalues(m);
    v.psd = spectrum_is_psd(v.spectrum, tol.psd_relative);
    v.min_entry = m.size() ? m.minCoeff() : 0.0;
    v.dnn = v.psd && v.min_entry >= -tol.dnn_entry;
    if (!v.psd) {
        v.cp = CpStatus::not_cp;
        v.certificate = CertificateKind::spectrum;
        v.note = "negative eigenvalue";
    } else if (!v.dnn) {
        v.cp = CpStatus::not_cp;
        v.certificate = CertificateKind::negative_entry;
        v.note = "negative entry";
    } else {
        v.certificate = CertificateKind::spectrum;
    }
    return v;
}

inline ConeVerdict check_dnn(const DenseHermitian& m, const Tolerances& tol = {}) {
    return check_dnn(m.matrix(), tol);
}

inline double factor_residual(const Matrix& m, const Matrix& b) {
    const double scale = m.norm();
    const double err = (b * b.transpose() - m).norm();
    return scale > 0.0 ? err / scale : err;
}

namespace detail {

/// Orthogonal polar factor of a square matrix.
inline Matrix polar(const Matrix& a) {
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().transpose();
}

/// Moves the rows of an exact square root R (R R^T = M) by an orthogonal Q
/// towards the nonnegative orthant, starting from the rotation closest to B.
/// Every R Q is an exact root, so clipping the tiny negative leftovers gives
/// a factor whose residual is at rounding level.
inline Matrix rotate_to_orthant(const Matrix& root, const Matrix& b, int steps = 300) {
    Matrix q = polar(root.transpose() * b);
    for (int it = 0; it < steps; ++it) {
        const Matrix x = root * q;
        if (x.minCoeff() >= -1e-15 * std::max(1.0, x.cwiseAbs().maxCoeff())) break;
        q = polar(root.transpose() * x.cwiseMax(0.0));
    }
    return (root * q).cwiseMax(0.0);
}

}  // namespace detail

/// Nonnegative factorization M = B B^T by symmetric multiplicative updates
/// B <- B o (1/2 + 1/2 (M B) / (B B^T B)) from seeded random starts, with the
/// iterate periodically snapped onto an exact root by an orthogonal rotation.
inline ConeVerdict cp_factorize(const Matrix& m, const CpOptions& opts = {}, const Tolerances& tol = {}) {
    ConeVerdict v = check_dnn(m, tol);
    v.seed = opts.seed;
    if (!v.dnn) return v;
    const auto n = m.rows();
    auto succeed = [&](Matrix b, int restarts) {
        v.cp = CpStatus::cp;
        v.certificate = CertificateKind::factor;
        v.factor = std::move(b);
        v.residual = factor_residual(m, v.factor);
        v.restarts_used = restarts;
        return v;
    };
    const double scale = m.norm();
    if (scale == 0.0) return succeed(Matrix::Zero(n, 1), 0);

    // Rows with zero diagonal are zero rows of any factor.
    std::vector<Eigen::Index> support;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (m(i, i) > 0.0) support.push_back(i);
    }
    const auto s = static_cast<Eigen::Index>(support.size());
    Matrix sub(s, s);
    for (Eigen::Index i = 0; i < s; ++i) {
        for (Eigen::Index j = 0; j < s; ++j) sub(i, j) = std::max(0.0, m(support[i], support[j]));
    }
    auto lift = [&](const Matrix& b) {
        Matrix full = Matrix::Zero(n, b.cols());
        for (Eigen::Index i = 0; i < s; ++i) full.row(support[static_cast<std::size_t>(i)]) = b.row(i);
        return full;
    };
    auto accept = [&](const Matrix& b) { return factor_residual(m, lift(b)) <= tol.cp_residual; };

    Matrix off = sub;
    off.diagonal().setZero();
    if (off.cwiseAbs().maxCoeff() == 0.0) {
        Matrix b = sub.diagonal().cwiseSqrt().asDiagonal();
        return succeed(lift(b), 0);
    }

    const Eigen::Index k_default =
        opts.max_rank > 0 ? static_cast<Eigen::Index>(opts.max_rank) : std::max<Eigen::Index>(s * (s + 1) / 2, 1);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(sub);
    const Eigen::Index width = std::max(k_default, s);
    Matrix root = Matrix::Zero(s, width);
    root.leftCols(s) = eig.eigenvectors() * eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();

    // Odd restarts use the numerical rank as width, which suits low-rank input.
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < s; ++i) {
        if (eig.eigenvalues()(i) > tol.rank_relative * eig.eigenvalues().maxCoeff()) ++rank;
    }
    rank = std::max<Eigen::Index>(rank, 1);
    for (int r = 0; r < opts.restarts; ++r) {
        const Eigen::Index k = (r % 2 == 0 || opts.max_rank > 0) ? k_default : rank;
        const double init_scale = std::sqrt(sub.trace() / static_cast<double>(s * k));
        Rng rng = make_rng(opts.seed, static_cast<std::uint64_t>(r));
        Matrix b(s, k);
        for (Eigen::Index i = 0; i < s; ++i) {
            for (Eigen::Index j = 0; j < k; ++j) b(i, j) = init_scale * (0.05 + uniform01(rng));
        }
        for (int it = 1; it <= opts.iterations; ++it) {
            const Matrix mb = sub * b;
            const Matrix bbb = b * (b.transpose() * b);
            b = b.cwiseProduct((0.5 * Matrix::Ones(s, k) + 0.5 * mb.cwiseQuotient(bbb.cwiseMax(1e-300))));
            if (it % 250 == 0 || it == opts.iterations) {
                if (accept(b)) return succeed(lift(b), r + 1);
                Matrix padded = Matrix::Zero(s, width);
                padded.leftCols(k) = b;
                const Matrix polished = detail::rotate_to_orthant(root, padded);
                if (accept(polished)) return succeed(lift(polished), r + 1);
            }
        }
    }
    v.restarts_used = opts.restarts;
    v.note = "factorization budget exhausted";
    return v;
}

inline ConeVerdict cp_factorize(const DenseHermitian& m, const CpOptions& opts = {}, const Tolerances& tol = {}) {
    return cp_factorize(m.matrix(), opts, tol);
}

namespace detail {

/// The 12 distinct orderings of a 5-cycle (Hamiltonian cycles of K5).
inline std::vector<std::array<int, 5>> five_cycles() {
    std::vector<std::array<int, 5>> out;
    std::array<int, 4> rest{1, 2, 3, 4};
    do {
        if (rest[0] < rest[3]) out.push_back({0, rest[0], rest[1], rest[2], rest[3]});
    } while (std::next_permutation(rest.begin(), rest.end()));
    return out;
}

/// min x^T A x over the probability simplex by replicator dynamics on
/// c - A >= 0, which increases x^T (c - A) x monotonically.
inline double simplex_quadratic_min(const Matrix& a, Rng& rng, int starts, Vector& best_x) {
    const auto n = a.rows();
    const double c = a.maxCoeff() + 1e-3 * std::max(1.0, a.cwiseAbs().maxCoeff());
    const Matrix b = (Matrix::Constant(n, n, c) - a);
    double best = std::numeric_limits<double>::infinity();
    for (int s = 0; s < starts; ++s) {
        Vector x(n);
        if (s == 0) {
            x.setConstant(1.0 / static_cast<double>(n));
        } else {
            for (Eigen::Index i = 0; i < n; ++i) x(i) = -std::log1p(-uniform01(rng));
            x /= x.sum();
        }
        double last = -1.0;
        for (int it = 0; it < 3000; ++it) {
            const Vector bx = b * x;
            const double val = x.dot(bx);
            x = x.cwiseProduct(bx) / val;
            if (std::abs(val - last) <= 1e-16 * std::abs(val)) break;
            last = val;
        }
        const double val = x.dot(a * x);
        if (val < best) {
            best = val;
            best_x = x;
        }
    }
    return best;
}

}  // namespace detail

/// Searches the orbit of the Horn matrix under principal 5x5 embeddings,
/// simultaneous permutations and positive diagonal congruences D H D.
/// For fixed embedding and permutation, <D H D, M> = x^T (H o M) x with x the
/// diagonal of D, so the best congruence is a quadratic minimization over the
/// simplex.
inline ConeVerdict not_cp_witness(const Matrix& m, const Tolerances& tol = {}, std::uint64_t seed = 0) {
    if (m.rows() != m.cols()) throw DomainError("not_cp_witness: matrix is not square");
    ConeVerdict v;
    v.seed = seed;
    const auto n = m.rows();
    if (n < 5) {
        v.note = "no copositive witness below side 5";
        return v;
    }
    const Matrix h = horn_matrix();
    const auto cycles = detail::five_cycles();
    Rng rng = make_rng(seed, 0x5eed);

    std::vector<std::array<Eigen::Index, 5>> subsets;
    std::array<Eigen::Index, 5> idx{0, 1, 2, 3, 4};
    const std::uint64_t total = binomial(static_cast<int>(n), 5);
    const std::uint64_t cap = 1000;
    if (total <= cap) {
        auto rec = [&](auto&& self, int pos, Eigen::Index from) -> void {
            if (pos == 5) {
                subsets.push_back(idx);
                return;
            }
            for (Eigen::Index i = from; i < n; ++i) {
                idx[static_cast<std::size_t>(pos)] = i;
                self(self, pos + 1, i + 1);
            }
        };
        rec(rec, 0, 0);
    } else {
        for (std::uint64_t t = 0; t < cap; ++t) {
            std::vector<Eigen::Index> all(static_cast<std::size_t>(n));
            std::iota(all.begin(), all.end(), 0);
            for (std::size_t i = 0; i < 5; ++i) {
                const auto j = i + static_cast<std::size_t>(rng() % (all.size() - i));
                std::swap(all[i], all[j]);
            }
            std::sort(all.begin(), all.begin() + 5);
            subsets.push_back({all[0], all[1], all[2], all[3], all[4]});
        }
    }

    double best = std::numeric_limits<double>::infinity();
    Matrix best_w;
    for (const auto& sub : subsets) {
        for (const auto& cyc : cycles) {
            // Position cyc[p] of the cycle sits on index sub[p].
            Matrix hp(5, 5);
            for (int i = 0; i < 5; ++i) {
                for (int j = 0; j < 5; ++j) hp(cyc[static_cast<std::size_t>(i)], cyc[static_cast<std::size_t>(j)]) = h(i, j);
            }
            Matrix a(5, 5);
            for (int i = 0; i < 5; ++i) {
                for (int j = 0; j < 5; ++j) a(i, j) = hp(i, j) * m(sub[static_cast<std::size_t>(i)], sub[static_cast<std::size_t>(j)]);
            }
            Vector x;
            detail::simplex_quadratic_min(a, rng, 6, x);
            const Vector dvec = x / x.maxCoeff();
            Matrix w = Matrix::Zero(n, n);
            for (int i = 0; i < 5; ++i) {
                for (int j = 0; j < 5; ++j) {
                    w(sub[static_cast<std::size_t>(i)], sub[static_cast<std::size_t>(j)]) = dvec(i) * hp(i, j) * dvec(j);
                }
            }
            const double value = (w.array() * m.array()).sum();
            if (value < best) {
                best = value;
                best_w = std::move(w);
            }
        }
    }
    v.witness_value = best;
    if (best < -tol.witness) {
        v.cp = CpStatus::not_cp;
        v.certificate = CertificateKind::witness;
        v.witness = best_w;
        v.note = "Horn-orbit witness";
    } else {
        v.note = "no witness fired";
    }
    return v;
}

inline ConeVerdict not_cp_witness(const DenseHermitian& m, const Tolerances& tol = {}, std::uint64_t seed = 0) {
    return not_cp_witness(m.matrix(), tol, seed);
}

/// Replays a witness certificate: W is D P H P^T D on a principal 5x5
/// submatrix (copositive by construction) and <W, M> is recomputed.
inline double replay_witness(const Matrix& w, const Matrix& m) { return (w.array() * m.array()).sum(); }

/// DNN test, then a factor search, then (side >= 5) the witness family.
/// Up to side 4 the DNN and CP cones coincide, so a DNN matrix is CP even
/// when no factor is found.
inline ConeVerdict check_cp(const Matrix& m, const CpOptions& opts = {}, const Tolerances& tol = {}) {
    ConeVerdict v = cp_factorize(m, opts, tol);
    if (!v.dnn || v.cp == CpStatus::cp) return v;
    if (m.rows() <= 4) {
        v.cp = CpStatus::cp;
        v.certificate = CertificateKind::existence;
        v.note = "DNN equals CP up to side 4; no explicit factor found";
        return v;
    }
    const ConeVerdict w = not_cp_witness(m, tol, opts.seed);
    v.witness_value = w.witness_value;
    if (w.cp == CpStatus::not_cp) {
        v.cp = CpStatus::not_cp;
        v.certificate = CertificateKind::witness;
        v.witness = w.witness;
        v.note = w.note;
    } else {
        v.note = "factorization budget exhausted and no witness fired";
    }
    return v;
}

inline ConeVerdict check_cp(const DenseHermitian& m, const CpOptions& opts = {}, const Tolerances& tol = {}) {
    return check_cp(m.matrix(), opts, tol);
}

enum class ConeKind { dnn, cp };

struct BlockVerdict {
    ConeVerdict overall;
    std::vector<ConeVerdict> blocks;
    bool singletons_nonnegative = true;
};

/// Per-block test conjoined over the direct sum. Block i uses the seed
/// derive_seed(opts.seed, i); CP factors are stacked block-diagonally.
inline BlockVerdict check_block(const BlockMatrix& bm, ConeKind kind, const CpOptions& opts = {},
                                const Tolerances& tol = {}) {
    BlockVerdict out;
    double top = 1.0;
    for (const auto& s : bm.singletons) top = std::max(top, s.value);
    for (const auto& s : bm.singletons) {
        if (s.value < -tol.psd_relative * top) out.singletons_nonnegative = false;
    }
    bool psd = out.singletons_nonnegative;
    bool dnn = out.singletons_nonnegative;
    bool all_cp = true;
    bool any_not_cp = !out.singletons_nonnegative;
    bool all_factors = true;
    for (std::size_t i = 0; i < bm.blocks.size(); ++i) {
        ConeVerdict v;
        if (kind == ConeKind::dnn) {
            v = check_dnn(bm.blocks[i].matrix, tol);
        } else {
            CpOptions o = opts;
            o.seed = derive_seed(opts.seed, i);
            v = check_cp(bm.blocks[i].matrix, o, tol);
        }
        psd = psd && v.psd;
        dnn = dnn && v.dnn;
        all_cp = all_cp && v.cp == CpStatus::cp;
        any_not_cp = any_not_cp || v.cp == CpStatus::not_cp;
        all_factors = all_factors && v.certificate == CertificateKind::factor;
        out.blocks.push_back(std::move(v));
    }
    ConeVerdict& o = out.overall;
    o.psd = psd;
    o.dnn = dnn;
    o.seed = opts.seed;
    if (kind == ConeKind::dnn) {
        o.certificate = CertificateKind::spectrum;
        if (!dnn) o.cp = CpStatus::not_cp;
        return out;
    }
    if (any_not_cp) {
        o.cp = CpStatus::not_cp;
        o.certificate = out.singletons_nonnegative ? CertificateKind::witness : CertificateKind::spectrum;
        for (const auto& v : out.blocks) {
            if (v.cp == CpStatus::not_cp) {
                o.certificate = v.certificate;
                o.witness_value = v.witness_value;
                break;
            }
        }
    } else if (all_cp) {
        o.cp = CpStatus::cp;
        if (all_factors) {
            o.certificate = CertificateKind::factor;
            std::vector<Matrix> parts;
            Eigen::Index rows = 0;
            Eigen::Index cols = 0;
            for (const auto& v : out.blocks) {
                rows += v.factor.rows();
                cols += v.factor.cols();
            }
            o.factor = Matrix::Zero(rows, cols);
            Eigen::Index r0 = 0;
            Eigen::Index c0 = 0;
            double worst = 0.0;
            for (const auto& v : out.blocks) {
                o.factor.block(r0, c0, v.factor.rows(), v.factor.cols()) = v.factor;
                r0 += v.factor.rows();
                c0 += v.factor.cols();
                worst = std::max(worst, v.residual);
            }
            o.residual = worst;
        } else {
            o.certificate = CertificateKind::existence;
            o.note = "some blocks are CP without an explicit factor";
        }
    }
    return out;
}

}  // namespace symsep
