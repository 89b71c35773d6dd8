#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "symsep/cones.hpp"
#include "symsep/config.hpp"
#include "symsep/dicke.hpp"
#include "symsep/errors.hpp"
#include "symsep/linalg.hpp"
#include "symsep/ptranspose.hpp"
#include "symsep/random.hpp"

namespace symsep {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

struct ProductTerm {
    double weight = 0.0;
    std::vector<CVector> local_states;
};

/// Weighted symmetric product states sum_t w_t |psi_t><psi_t|^{(x) N}.
class SeparableDecomposition {
public:
    SeparableDecomposition(DsState target, std::vector<ProductTerm> terms, std::string phase_group)
        : target_(std::move(target)), terms_(std::move(terms)), phase_group_(std::move(phase_group)) {}

    const DsState& target() const noexcept { return target_; }
    const std::vector<ProductTerm>& terms() const noexcept { return terms_; }
    const std::string& phase_group() const noexcept { return phase_group_; }
    double reconstruction_error() const noexcept { return error_; }

    double weight_sum() const {
        double s = 0.0;
        for (const auto& t : terms_) s += t.weight;
        return s;
    }

    /// sum_t w_t |x_t><x_t| with x_t the tensor product of the local states.
    CMatrix rebuild(const Limits& limits = {}) const {
        const std::size_t rows = dense_rows(target_.n_parties(), target_.local_dim(), limits.max_dense_rows);
        CMatrix v(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(terms_.size()));
        for (std::size_t t = 0; t < terms_.size(); ++t) {
            CVector x = CVector::Ones(1);
            for (const auto& local : terms_[t].local_states) {
                CVector next(x.size() * local.size());
                for (Eigen::Index i = 0; i < x.size(); ++i) next.segment(i * local.size(), local.size()) = x(i) * local;
                x = std::move(next);
            }
            v.col(static_cast<Eigen::Index>(t)) = std::sqrt(terms_[t].weight) * x;
        }
        return v * v.adjoint();
    }

    /// Frobenius distance between the rebuilt matrix and the target density matrix.
    double recompute_error(const Limits& limits = {}) const {
        const CMatrix rec = rebuild(limits);
        const Matrix rho = expand_density_matrix(target_, limits).matrix();
        return (rec - rho.cast<Complex>()).norm();
    }

    void set_error(double e) { error_ = e; }

private:
    DsState target_;
    std::vector<ProductTerm> terms_;
    std::string phase_group_;
    double error_ = std::numeric_limits<double>::infinity();
};

/// All d * 2^d vectors xi_l = (-1)^{k_l} w^{s l} chi_l with w = exp(i pi / d),
/// k in {0,1}^d and s in {0..d-1}; s is the outer index, k the bitmask.
inline std::vector<CVector> phase_states(const Vector& chi) {
    const auto d = chi.size();
    for (Eigen::Index l = 0; l < d; ++l) {
        if (chi(l) < 0.0) throw DomainError("phase_states: chi must be nonnegative");
    }
    const Complex w = std::polar(1.0, M_PI / static_cast<double>(d));
    std::vector<CVector> out;
    for (Eigen::Index s = 0; s < d; ++s) {
        for (std::uint64_t k = 0; k < (std::uint64_t{1} << d); ++k) {
            CVector xi(d);
            for (Eigen::Index l = 0; l < d; ++l) {
                const double sign = (k >> l) & 1U ? -1.0 : 1.0;
                xi(l) = sign * std::pow(w, static_cast<double>(s * l)) * chi(l);
            }
            out.push_back(std::move(xi));
        }
    }
    return out;
}

/// Phases phi (one per level) whose average of exp(i phi . D) vanishes for
/// every nonzero type difference D of N-party basis states, so that averaging
/// |psi_phi><psi_phi|^{(x) N} keeps exactly the Dicke-diagonal entries.
///
/// Up to N = 3 the sign flips times powers of exp(i pi / d) suffice (d 2^d
/// elements, the set used by phase_states). From N = 4 on that set leaves
/// differences such as 2(e_a + e_b - e_c - e_e) alive, and the grid
/// phi_l = 2 pi s_l / (N+1), s in Z_{N+1}^{d-1}, phi_0 = 0 is used instead:
/// it averages exp(i phi . D) to the indicator of D_l = 0 mod N+1 for l >= 1.
inline std::vector<std::vector<double>> dephasing_phases(int n_parties, int local_dim, std::string* name = nullptr) {
    std::vector<std::vector<double>> out;
    const auto d = static_cast<std::size_t>(local_dim);
    if (n_parties <= 3) {
        if (name) *name = "signs-and-roots";
        for (int s = 0; s < local_dim; ++s) {
            for (std::uint64_t k = 0; k < (std::uint64_t{1} << d); ++k) {
                std::vector<double> phi(d);
                for (std::size_t l = 0; l < d; ++l) {
                    phi[l] = ((k >> l) & 1U ? M_PI : 0.0) + M_PI * static_cast<double>(s) * static_cast<double>(l) / local_dim;
                }
                out.push_back(std::move(phi));
            }
        }
        return out;
    }
    if (name) *name = "grid-mod-" + std::to_string(n_parties + 1);
    const int m = n_parties + 1;
    std::vector<int> s(d, 0);
    while (true) {
        std::vector<double> phi(d, 0.0);
        for (std::size_t l = 1; l < d; ++l) phi[l] = 2.0 * M_PI * s[l] / m;
        out.push_back(std::move(phi));
        std::size_t l = 1;
        while (l < d && ++s[l] == m) s[l++] = 0;
        if (l == d) break;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Moment decomposition

/// Atoms x on the simplex and weights with pbar_K = sum_r w_r x_r^K.
struct MomentDecomposition {
    std::vector<Vector> atoms;
    std::vector<double> weights;
    /// Frobenius distance of the density matrices, sqrt(sum_K C(K)^2 dpbar_K^2).
    double residual = std::numeric_limits<double>::infinity();
    int rounds = 0;
};

namespace detail {

inline double monomial(const Vector& x, const PartitionIndex& k) {
    double v = 1.0;
    for (std::size_t l = 0; l < k.dim(); ++l) {
        if (k[l]) v *= std::pow(x(static_cast<Eigen::Index>(l)), k[l]);
    }
    return v;
}

inline Vector random_simplex(Eigen::Index d, Rng& rng) {
    Vector x(d);
    for (Eigen::Index l = 0; l < d; ++l) x(l) = -std::log1p(-uniform01(rng));
    return x / x.sum();
}

}  // namespace detail

/// Column generation for pbar_K = sum_r w_r x_r^K, w >= 0, x_r in the simplex.
/// Each round solves a weighted NNLS over the current atoms, then prices new
/// atoms by maximizing sum_K C(K) r_K x^K (r the weighted residual) with
/// multi-start exponentiated gradient. A state is separable exactly when the
/// residual can be driven to zero.
inline MomentDecomposition decompose_moments(const DsState& state, const std::vector<Vector>& seeds,
                                             const DecompositionOptions& opts = {}, double target = 1e-13) {
    const auto& parts = state.partitions();
    const auto n_k = static_cast<Eigen::Index>(parts.size());
    const auto d = static_cast<Eigen::Index>(state.local_dim());
    Vector c(n_k);
    Vector b(n_k);
    const auto pbar = state.pbar_vector();
    for (Eigen::Index i = 0; i < n_k; ++i) {
        c(i) = static_cast<double>(dicke_multiplicity(parts[static_cast<std::size_t>(i)]));
        b(i) = c(i) * pbar[static_cast<std::size_t>(i)];
    }
    auto column = [&](const Vector& x) {
        Vector col(n_k);
        for (Eigen::Index i = 0; i < n_k; ++i) col(i) = c(i) * detail::monomial(x, parts[static_cast<std::size_t>(i)]);
        return col;
    };

    Rng rng = make_rng(opts.seed, 0xa70);
    std::vector<Vector> atoms;
    for (Eigen::Index l = 0; l < d; ++l) atoms.push_back(Vector::Unit(d, l));
    for (const auto& s : seeds) {
        if (s.size() == d && s.minCoeff() >= 0.0 && s.sum() > 0.0) atoms.push_back(s / s.sum());
    }
    for (int i = 0; i < opts.initial_atoms; ++i) atoms.push_back(detail::random_simplex(d, rng));

    MomentDecomposition best;
    for (int round = 0; round < opts.rounds; ++round) {
        Matrix a(n_k, static_cast<Eigen::Index>(atoms.size()));
        for (std::size_t j = 0; j < atoms.size(); ++j) a.col(static_cast<Eigen::Index>(j)) = column(atoms[j]);
        const NnlsResult fit = nnls(a, b);
        if (fit.residual_norm < best.residual) {
            best.atoms.clear();
            best.weights.clear();
            for (std::size_t j = 0; j < atoms.size(); ++j) {
                if (fit.x(static_cast<Eigen::Index>(j)) > 0.0) {
                    best.atoms.push_back(atoms[j]);
                    best.weights.push_back(fit.x(static_cast<Eigen::Index>(j)));
                }
            }
            best.residual = fit.residual_norm;
        }
        best.rounds = round + 1;
        if (fit.residual_norm <= target) break;

        const Vector r = b - a * fit.x;
        std::vector<std::pair<double, Vector>> priced;
        for (int start = 0; start < opts.pricing_starts; ++start) {
            Vector x = detail::random_simplex(d, rng);
            for (int step = 0; step < opts.pricing_steps; ++step) {
                Vector g = Vector::Zero(d);
                for (Eigen::Index i = 0; i < n_k; ++i) {
                    const auto& k = parts[static_cast<std::size_t>(i)];
                    for (Eigen::Index l = 0; l < d; ++l) {
                        if (k[static_cast<std::size_t>(l)] == 0) continue;
                        PartitionIndex km = k;
                        --km.counts[static_cast<std::size_t>(l)];
                        g(l) += c(i) * r(i) * k[static_cast<std::size_t>(l)] * detail::monomial(x, km);
                    }
                }
                const double scale = g.cwiseAbs().maxCoeff();
                if (scale == 0.0) break;
                x = x.cwiseProduct((0.5 * g / scale).array().exp().matrix());
                x /= x.sum();
            }
            priced.emplace_back(column(x).dot(r), x);
        }
        std::sort(priced.begin(), priced.end(), [](const auto& p, const auto& q) { return p.first > q.first; });

        std::vector<Vector> next;
        for (std::size_t j = 0; j < atoms.size(); ++j) {
            if (fit.x(static_cast<Eigen::Index>(j)) > 0.0) next.push_back(atoms[j]);
        }
        for (std::size_t j = 0; j < std::min<std::size_t>(10, priced.size()); ++j) next.push_back(priced[j].second);
        for (int i = 0; i < 20; ++i) next.push_back(detail::random_simplex(d, rng));
        atoms = std::move(next);
    }
    return best;
}

/// Turns simplex atoms into product terms: each atom x contributes
/// weight / |G| times |psi_phi><psi_phi|^{(x) N}, psi_phi = sum_l sqrt(x_l) e^{i phi_l} |l>,
/// for every phase vector phi of the dephasing set G.
inline SeparableDecomposition assemble_decomposition(const DsState& state, const MomentDecomposition& md,
                                                     const Config& config = {}) {
    std::string group;
    const auto phases = dephasing_phases(state.n_parties(), state.local_dim(), &group);
    double total = 0.0;
    for (double w : md.weights) total += w;
    std::vector<ProductTerm> terms;
    for (std::size_t r = 0; r < md.atoms.size(); ++r) {
        const double w = md.weights[r] / total;
        if (w < config.tol.weight_prune) continue;
        const Vector x = md.atoms[r] / md.atoms[r].sum();
        for (const auto& phi : phases) {
            CVector psi(x.size());
            for (Eigen::Index l = 0; l < x.size(); ++l) {
                psi(l) = std::polar(std::sqrt(x(l)), phi[static_cast<std::size_t>(l)]);
            }
            terms.push_back(ProductTerm{w / static_cast<double>(phases.size()),
                                        std::vector<CVector>(static_cast<std::size_t>(state.n_parties()), psi)});
        }
    }
    SeparableDecomposition dec(state, std::move(terms), group);
    dec.set_error(dec.recompute_error(config.limits));
    return dec;
}

enum class DecompositionStatus { success, undecided, not_separable };

inline const char* to_string(DecompositionStatus s) {
    switch (s) {
        case DecompositionStatus::success: return "SUCCESS";
        case DecompositionStatus::not_separable: return "NOT_SEPARABLE";
        default: return "UNDECIDED";
    }
}

struct DecompositionResult {
    DecompositionStatus status = DecompositionStatus::undecided;
    std::optional<SeparableDecomposition> decomposition;
    /// Moment-fit residual of the best attempt (Frobenius).
    double residual = std::numeric_limits<double>::infinity();
    std::string note;
};

namespace detail {

/// Simplex points suggested by nonnegative factor columns. For blocks whose
/// rows are b = delta_minus + e_k a column is proportional to (x_k)_k; for the
/// delta = 0 block of an even cut, the rows 2 e_a carry x_a^2.
inline std::vector<Vector> seeds_from_factors(const BlockMatrix& bm, const BlockVerdict& verdict) {
    std::vector<Vector> seeds;
    const auto d = static_cast<Eigen::Index>(bm.local_dim);
    for (std::size_t i = 0; i < bm.blocks.size() && i < verdict.blocks.size(); ++i) {
        const auto& block = bm.blocks[i];
        const Matrix& f = verdict.blocks[i].factor;
        if (f.size() == 0) continue;
        const auto minus = negative_part(block.delta);
        int minus_total = 0;
        for (int m : minus) minus_total += m;
        const int row_total = block.rows.empty() ? 0 : block.rows.front().total();
        for (Eigen::Index col = 0; col < f.cols(); ++col) {
            Vector x = Vector::Zero(d);
            if (row_total == minus_total + 1) {
                for (std::size_t r = 0; r < block.rows.size(); ++r) {
                    for (Eigen::Index l = 0; l < d; ++l) {
                        if (block.rows[r][static_cast<std::size_t>(l)] > minus[static_cast<std::size_t>(l)]) {
                            x(l) = f(static_cast<Eigen::Index>(r), col);
                        }
                    }
                }
            } else if (row_total == 2 && minus_total == 0) {
                for (std::size_t r = 0; r < block.rows.size(); ++r) {
                    for (Eigen::Index l = 0; l < d; ++l) {
                        if (block.rows[r][static_cast<std::size_t>(l)] == 2) x(l) = std::sqrt(f(static_cast<Eigen::Index>(r), col));
                    }
                }
            }
            if (x.sum() > 0.0) seeds.push_back(x / x.sum());
        }
    }
    return seeds;
}

inline DecompositionResult decompose_with_blocks(const DsState& state, const BlockMatrix& bm,
                                                 const BlockVerdict& verdict, const Config& config) {
    DecompositionResult out;
    dense_rows(state.n_parties(), state.local_dim(), config.limits.max_dense_rows);
    if (!verdict.overall.psd) {
        throw ApplicabilityError("state is not PPT (minimum eigenvalue " + std::to_string(bm.min_eigenvalue()) + ")");
    }
    if (verdict.overall.cp == CpStatus::not_cp) {
        out.status = DecompositionStatus::not_separable;
        out.note = "a reduced block is not completely positive";
        return out;
    }
    const auto md = decompose_moments(state, seeds_from_factors(bm, verdict), config.decomposition);
    out.residual = md.residual;
    if (md.residual <= config.tol.reconstruction) {
        auto dec = assemble_decomposition(state, md, config);
        if (dec.reconstruction_error() <= config.tol.reconstruction) {
            out.status = DecompositionStatus::success;
            out.decomposition = std::move(dec);
            return out;
        }
        out.note = "moment fit converged but the rebuilt matrix missed the tolerance";
        return out;
    }
    if (verdict.overall.certificate == CertificateKind::existence) {
        out.note = "blocks are CP without explicit factors and the atom search did not converge";
    } else {
        out.note = "atom search did not converge";
    }
    return out;
}

}  // namespace detail

/// Three-party decomposition: the 1:2 blocks M_i are CP-checked (their factor
/// columns seed the atom search), then the moment fit is assembled into
/// dephased product states.
inline DecompositionResult decompose_tripartite(const DsState& state, const BlockVerdict& cp_factors,
                                                const Config& config = {}) {
    detail::require_parties(state, 3, "decompose_tripartite");
    return detail::decompose_with_blocks(state, build_m3(state, config.limits), cp_factors, config);
}

inline DecompositionResult decompose_tripartite(const DsState& state, const Config& config = {}) {
    detail::require_parties(state, 3, "decompose_tripartite");
    const auto bm = build_m3(state, config.limits);
    return detail::decompose_with_blocks(state, bm, check_block(bm, ConeKind::cp, config.cp, config.tol), config);
}

/// Four-party decomposition, seeded from the 2:2 blocks. The 1:3 cut is
/// checked too, since a PSD 2:2 transpose does not by itself rule out an
/// NPT 1:3 transpose for an arbitrary input.
inline DecompositionResult decompose_fourpartite(const DsState& state, const BlockVerdict& cp_factors,
                                                 const Config& config = {}) {
    detail::require_parties(state, 4, "decompose_fourpartite");
    const auto m13 = build_m1v3(state, config.limits);
    if (!m13.is_psd(config.tol.psd_relative)) {
        throw ApplicabilityError("state is not PPT across 1:3 (minimum eigenvalue " +
                                 std::to_string(m13.min_eigenvalue()) + ")");
    }
    return detail::decompose_with_blocks(state, build_m4(state, config.limits), cp_factors, config);
}

inline DecompositionResult decompose_fourpartite(const DsState& state, const Config& config = {}) {
    detail::require_parties(state, 4, "decompose_fourpartite");
    const auto bm = build_m4(state, config.limits);
    return decompose_fourpartite(state, check_block(bm, ConeKind::cp, config.cp, config.tol), config);
}

// ---------------------------------------------------------------------------
// Moment witness for three parties

/// For levels a, b, c and scalings s > 0 the cubic
/// f(u,v,w) = s_a^2 s_b u^2 v + s_a s_b^2 u v^2 + s_c^3 w^3 - 3 s_a s_b s_c uvw
/// is nonnegative on the orthant (AM-GM), so
/// L(T) = s_a^2 s_b T_{aab} + s_a s_b^2 T_{abb} + s_c^3 T_{ccc} - 3 s_a s_b s_c T_{abc}
/// is nonnegative whenever T = sum_r w_r x_r^{(x)3} with x_r >= 0, that is for
/// every separable three-party DS state. Its square-lifted form is not a sum of
/// squares, which is why PPT does not imply L(T) >= 0.
struct MomentWitness {
    bool fired = false;
    std::array<int, 3> levels{0, 0, 0};
    std::array<double, 3> scaling{1.0, 1.0, 1.0};
    double value = 0.0;
};

inline double evaluate_moment_witness(const DsState& state, const MomentWitness& w) {
    const int d = state.local_dim();
    auto t = [&](int i, int j, int k) {
        std::vector<int> c(static_cast<std::size_t>(d), 0);
        ++c[static_cast<std::size_t>(i)];
        ++c[static_cast<std::size_t>(j)];
        ++c[static_cast<std::size_t>(k)];
        return state.pbar(c);
    };
    const auto [a, b, c] = w.levels;
    const auto [sa, sb, sc] = w.scaling;
    return sa * sa * sb * t(a, a, b) + sa * sb * sb * t(a, b, b) + sc * sc * sc * t(c, c, c) -
           3.0 * sa * sb * sc * t(a, b, c);
}

inline MomentWitness motzkin_witness(const DsState& state, const Tolerances& tol = {}, std::uint64_t seed = 0) {
    MomentWitness best;
    best.value = std::numeric_limits<double>::infinity();
    if (state.n_parties() != 3 || state.local_dim() < 3) {
        best.value = 0.0;
        return best;
    }
    const int d = state.local_dim();
    Rng rng = make_rng(seed, 0x307);
    for (int a = 0; a < d; ++a) {
        for (int b = a + 1; b < d; ++b) {
            for (int c = 0; c < d; ++c) {
                if (c == a || c == b) continue;
                MomentWitness w;
                w.levels = {a, b, c};
                for (int start = 0; start < 12; ++start) {
                    // Homogeneous of degree 3: search log-scalings, normalize max s = 1.
                    std::array<double, 3> g{0.0, 0.0, 0.0};
                    if (start > 0) {
                        for (double& x : g) x = 1.5 * standard_normal(rng);
                    }
                    auto eval = [&](const std::array<double, 3>& lg) {
                        const double top = std::max({lg[0], lg[1], lg[2]});
                        w.scaling = {std::exp(lg[0] - top), std::exp(lg[1] - top), std::exp(lg[2] - top)};
                        return evaluate_moment_witness(state, w);
                    };
                    double val = eval(g);
                    double step = 0.5;
                    for (int it = 0; it < 400 && step > 1e-6; ++it) {
                        bool moved = false;
                        for (int axis = 0; axis < 3; ++axis) {
                            for (double dir : {step, -step}) {
                                auto trial = g;
                                trial[static_cast<std::size_t>(axis)] += dir;
                                const double v = eval(trial);
                                if (v < val) {
                                    val = v;
                                    g = trial;
                                    moved = true;
                                }
                            }
                        }
                        if (!moved) step *= 0.5;
                    }
                    eval(g);
                    w.value = val;
                    if (val < best.value) best = w;
                }
            }
        }
    }
    best.fired = best.value < -tol.witness;
    return best;
}

// ---------------------------------------------------------------------------
// Classification

enum class Classification { separable, ppt_undecided, npt_entangled, ppt_entangled };

inline const char* to_string(Classification c) {
    switch (c) {
        case Classification::separable: return "SEPARABLE";
        case Classification::npt_entangled: return "NPT_ENTANGLED";
        case Classification::ppt_entangled: return "PPT_ENTANGLED";
        default: return "PPT_UNDECIDED";
    }
}

struct BlockCertificate {
    /// Parties of the state whose blocks were tested (N for the state itself,
    /// fewer for a marginal).
    int parties = 0;
    int transposed = 0;
    BlockMatrix blocks;
    BlockVerdict verdict;
};

struct ClassificationResult {
    Classification verdict = Classification::ppt_undecided;
    std::vector<CutVerdict> cuts;
    std::vector<BlockCertificate> block_checks;
    std::optional<MomentWitness> moment_witness;
    std::optional<DecompositionResult> decomposition;
    std::string reason;
};

/// NPT under some cut gives NPT_ENTANGLED. Otherwise the reduced blocks of
/// the largest cut and of the largest cut of every marginal are CP-checked
/// (a separable state and all its marginals have CP blocks), the three-party
/// moment witness is tried, and for N <= 4 an explicit decomposition is
/// searched. SEPARABLE is only returned with a decomposition that rebuilds
/// the state within tolerance.
inline ClassificationResult classify(const DsState& state, const Config& config = {}) {
    ClassificationResult out;
    const int n = state.n_parties();
    dense_rows(n, state.local_dim(), config.limits.max_dense_rows);
    if (n == 1) {
        out.verdict = Classification::separable;
        out.reason = "single party";
        return out;
    }
    out.cuts = ppt_cuts_reduced(state, config);
    for (const auto& c : out.cuts) {
        if (!c.ppt) {
            out.verdict = Classification::npt_entangled;
            out.reason = "negative eigenvalue " + std::to_string(c.min_eigenvalue) + " across cut " + c.cut.label();
            return out;
        }
    }

    for (int parties = n; parties >= 2; --parties) {
        const DsState reduced = parties == n ? state : partial_trace(state, n - parties);
        BlockCertificate cert{parties, parties / 2, build_mn(reduced, config.limits), {}};
        CpOptions o = config.cp;
        o.seed = derive_seed(config.cp.seed, static_cast<std::uint64_t>(parties));
        cert.verdict = check_block(cert.blocks, ConeKind::cp, o, config.tol);
        const bool not_cp = cert.verdict.overall.cp == CpStatus::not_cp;
        out.block_checks.push_back(std::move(cert));
        if (not_cp) {
            out.verdict = Classification::ppt_entangled;
            out.reason = parties == n ? "a reduced block is not completely positive"
                                      : "a reduced block of the " + std::to_string(parties) +
                                            "-party marginal is not completely positive";
            return out;
        }
    }

    if (n == 3 && state.local_dim() >= 3) {
        out.moment_witness = motzkin_witness(state, config.tol, config.decomposition.seed);
        if (out.moment_witness->fired) {
            out.verdict = Classification::ppt_entangled;
            out.reason = "three-party moment witness is negative";
            return out;
        }
    }

    if (n <= 4) {
        const auto& own = out.block_checks.front();
        out.decomposition = detail::decompose_with_blocks(state, own.blocks, own.verdict, config);
        if (out.decomposition->status == DecompositionStatus::success) {
            out.verdict = Classification::separable;
            out.reason = "explicit decomposition";
            return out;
        }
        out.reason = out.decomposition->note;
    } else {
        out.reason = "no decomposition search beyond four parties";
    }
    out.verdict = Classification::ppt_undecided;
    return out;
}

}  // namespace symsep
