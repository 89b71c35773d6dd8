#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "symsep/config.hpp"
#include "symsep/dicke.hpp"
#include "symsep/errors.hpp"
#include "symsep/linalg.hpp"
#include "symsep/random.hpp"

namespace symsep {

/// Split of N parties; the left parties are the ones transposed.
class Bipartition {
public:
    Bipartition(std::vector<int> left_parties, int n_parties)
        : left_(std::move(left_parties)), n_(n_parties) {
        std::sort(left_.begin(), left_.end());
        left_.erase(std::unique(left_.begin(), left_.end()), left_.end());
        if (left_.empty() || static_cast<int>(left_.size()) >= n_) {
            throw DomainError("Bipartition: left side must be a non-empty proper subset");
        }
        if (left_.front() < 0 || left_.back() >= n_) {
            throw DomainError("Bipartition: party index out of range");
        }
    }

    /// Parties {0, ..., size-1}; every cut of that size is equivalent on a DS state.
    static Bipartition first(int size, int n_parties) {
        std::vector<int> left(static_cast<std::size_t>(std::max(size, 0)));
        for (int i = 0; i < size; ++i) left[static_cast<std::size_t>(i)] = i;
        return Bipartition(std::move(left), n_parties);
    }

    const std::vector<int>& left_parties() const noexcept { return left_; }
    int n_parties() const noexcept { return n_; }
    int size() const noexcept { return static_cast<int>(left_.size()); }

    /// "1:3" style label.
    std::string label() const { return std::to_string(size()) + ":" + std::to_string(n_ - size()); }

    friend bool operator<(const Bipartition& a, const Bipartition& b) {
        if (a.n_ != b.n_) return a.n_ < b.n_;
        if (a.left_.size() != b.left_.size()) return a.left_.size() < b.left_.size();
        return a.left_ < b.left_;
    }
    friend bool operator==(const Bipartition& a, const Bipartition& b) {
        return a.n_ == b.n_ && a.left_ == b.left_;
    }

private:
    std::vector<int> left_;
    int n_;
};

/// Partial transpose of the left parties of a d^N x d^N matrix.
inline DenseHermitian brute_force_pt(const DenseHermitian& rho, const Bipartition& cut, int local_dim) {
    const int n = cut.n_parties();
    std::size_t rows = 1;
    for (int i = 0; i < n; ++i) rows *= static_cast<std::size_t>(local_dim);
    if (rho.dim() != rows) {
        throw DomainError("brute_force_pt: matrix dimension " + std::to_string(rho.dim()) +
                          " is not d^N = " + std::to_string(rows));
    }
    // index = left(index) + right(index) where left collects the digits of the
    // transposed parties.
    std::vector<std::size_t> left(rows, 0);
    std::vector<bool> is_left(static_cast<std::size_t>(n), false);
    for (int p : cut.left_parties()) is_left[static_cast<std::size_t>(p)] = true;
    for (std::size_t x = 0; x < rows; ++x) {
        std::size_t rest = x;
        std::size_t place = 1;
        for (int p = n - 1; p >= 0; --p) {
            const std::size_t digit = rest % static_cast<std::size_t>(local_dim);
            rest /= static_cast<std::size_t>(local_dim);
            if (is_left[static_cast<std::size_t>(p)]) left[x] += digit * place;
            place *= static_cast<std::size_t>(local_dim);
        }
    }
    const Matrix& m = rho.matrix();
    Matrix out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(rows));
    for (std::size_t j = 0; j < rows; ++j) {
        const std::size_t rj = j - left[j];
        for (std::size_t i = 0; i < rows; ++i) {
            const std::size_t ri = i - left[i];
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                m(static_cast<Eigen::Index>(left[j] + ri), static_cast<Eigen::Index>(left[i] + rj));
        }
    }
    return DenseHermitian(std::move(out), rho.labels());
}

/// One direct summand of a reduced partial transpose.
///
/// `matrix` holds the pbar entries R[b, b'] = pbar_{delta + b + b'} indexed by
/// the types b of the untransposed side. Row b stands for weights[b]
/// computational basis rows, so the summand of rho^T is W^{1/2} R W^{1/2}
/// followed by sum(weights) - side zero eigenvalues; it appears `copies` times.
struct Block {
    std::string name;
    std::vector<int> delta;
    DenseHermitian matrix;
    std::vector<double> weights;
    std::vector<PartitionIndex> rows;
    int copies = 1;

    std::size_t side() const noexcept { return matrix.dim(); }

    Matrix weighted() const {
        Vector s(static_cast<Eigen::Index>(weights.size()));
        for (std::size_t i = 0; i < weights.size(); ++i) s(static_cast<Eigen::Index>(i)) = std::sqrt(weights[i]);
        return s.asDiagonal() * matrix.matrix() * s.asDiagonal();
    }

    double basis_rows() const {
        double sum = 0.0;
        for (double w : weights) sum += w;
        return sum;
    }
};

/// A 1x1 summand: eigenvalue `value` repeated `copies` times.
struct Singleton {
    std::string label;
    double value = 0.0;
    int copies = 1;
};

/// Reduced form of rho^T: blocks, 1x1 summands and a count of structural zeros.
class BlockMatrix {
public:
    int n_parties = 0;
    int local_dim = 0;
    int transposed = 0;
    std::vector<Block> blocks;
    std::vector<Singleton> singletons;
    std::size_t zero_eigenvalues = 0;

    /// Sum of block sides, the size of the pbar matrix built from the blocks.
    std::size_t total_side() const {
        std::size_t s = 0;
        for (const auto& b : blocks) s += b.side();
        return s;
    }

    /// Eigenvalues of the full partial transpose, ascending.
    Vector spectrum() const {
        std::vector<double> all;
        for (const auto& b : blocks) {
            const Vector ev = symmetric_eigenvalues(b.weighted());
            for (int c = 0; c < b.copies; ++c) {
                for (Eigen::Index i = 0; i < ev.size(); ++i) all.push_back(ev(i));
            }
        }
        for (const auto& s : singletons) {
            for (int c = 0; c < s.copies; ++c) all.push_back(s.value);
        }
        all.insert(all.end(), zero_eigenvalues, 0.0);
        std::sort(all.begin(), all.end());
        return Eigen::Map<Vector>(all.data(), static_cast<Eigen::Index>(all.size()));
    }

    bool is_psd(double tol = Tolerances{}.psd_relative) const { return spectrum_is_psd(spectrum(), tol); }

    double min_eigenvalue() const {
        const Vector s = spectrum();
        return s.size() ? s(0) : 0.0;
    }
};

namespace detail {

inline std::string delta_name(const std::vector<int>& delta) {
    std::string plus;
    std::string minus;
    for (std::size_t l = 0; l < delta.size(); ++l) {
        const std::string digit = delta.size() > 10 ? std::to_string(l) + "," : std::to_string(l);
        for (int r = 0; r < delta[l]; ++r) plus += digit;
        for (int r = 0; r < -delta[l]; ++r) minus += digit;
    }
    if (plus.empty() && minus.empty()) return "0";
    return (plus.empty() ? "" : "+" + plus) + (minus.empty() ? "" : "-" + minus);
}

inline std::vector<int> positive_part(const std::vector<int>& delta) {
    std::vector<int> out(delta.size());
    for (std::size_t l = 0; l < delta.size(); ++l) out[l] = std::max(delta[l], 0);
    return out;
}

inline std::vector<int> negative_part(const std::vector<int>& delta) {
    std::vector<int> out(delta.size());
    for (std::size_t l = 0; l < delta.size(); ++l) out[l] = std::max(-delta[l], 0);
    return out;
}

}  // namespace detail

/// Reduced partial transpose of a DS state with `transposed` parties transposed.
///
/// Row (x_A, x_B) and column (y_A, y_B) of rho^T couple only when
/// t(x_A) - t(x_B) = t(y_A) - t(y_B) =: delta, so rho^T splits into one summand
/// per delta, indexed by the B-types b with delta + b >= 0. For an equal cut
/// the delta and -delta summands coincide and are stored once with copies = 2.
inline BlockMatrix reduced_partial_transpose(const DsState& state, int transposed, const Limits& limits = {}) {
    const int n = state.n_parties();
    const int d = state.local_dim();
    const int a = transposed;
    const int b = n - a;
    if (a < 1 || a >= n) throw DomainError("reduced_partial_transpose: need 1 <= transposed < N");

    const auto a_types = enumerate_partitions(a, d);
    const auto b_types = enumerate_partitions(b, d);
    std::map<std::vector<int>, std::vector<std::size_t>> groups;
    for (const auto& alpha : a_types) {
        for (std::size_t j = 0; j < b_types.size(); ++j) {
            std::vector<int> delta(static_cast<std::size_t>(d));
            for (std::size_t l = 0; l < delta.size(); ++l) delta[l] = alpha[l] - b_types[j][l];
            groups[delta].push_back(j);
        }
    }

    BlockMatrix out;
    out.n_parties = n;
    out.local_dim = d;
    out.transposed = a;
    std::size_t side_total = 0;
    for (const auto& [delta, members] : groups) {
        int copies = 1;
        if (a == b) {
            std::vector<int> neg(delta.size());
            for (std::size_t l = 0; l < delta.size(); ++l) neg[l] = -delta[l];
            if (neg != delta) {
                if (delta < neg) continue;
                copies = 2;
            }
        }
        const auto k = static_cast<Eigen::Index>(members.size());
        Matrix r(k, k);
        std::vector<double> weights(members.size());
        std::vector<PartitionIndex> rows;
        std::vector<std::string> labels;
        for (Eigen::Index i = 0; i < k; ++i) {
            const auto& beta = b_types[members[static_cast<std::size_t>(i)]];
            PartitionIndex alpha(delta);
            alpha = alpha + beta;
            weights[static_cast<std::size_t>(i)] =
                static_cast<double>(dicke_multiplicity(alpha) * dicke_multiplicity(beta));
            rows.push_back(beta);
            labels.push_back(level_string(beta));
            for (Eigen::Index j = 0; j < k; ++j) {
                r(i, j) = state.pbar((alpha + b_types[members[static_cast<std::size_t>(j)]]).counts);
            }
        }
        const std::string name = detail::delta_name(delta);
        double basis_rows = 0.0;
        for (double w : weights) basis_rows += w;
        if (k == 1) {
            out.singletons.push_back({name + ":" + labels[0], weights[0] * r(0, 0), copies});
            out.zero_eigenvalues += static_cast<std::size_t>(copies) * (static_cast<std::size_t>(basis_rows) - 1);
            continue;
        }
        side_total += members.size();
        if (side_total > limits.max_reduced_side) {
            throw ResourceError("reduced block matrix exceeds the configured side cap", side_total,
                                limits.max_reduced_side);
        }
        out.zero_eigenvalues +=
            static_cast<std::size_t>(copies) * (static_cast<std::size_t>(basis_rows) - members.size());
        out.blocks.push_back(Block{name, delta, DenseHermitian(std::move(r), std::move(labels)),
                                   std::move(weights), std::move(rows), copies});
    }
    std::stable_sort(out.blocks.begin(), out.blocks.end(), [](const Block& x, const Block& y) {
        if (x.side() != y.side()) return x.side() > y.side();
        const auto xm = detail::negative_part(x.delta);
        const auto ym = detail::negative_part(y.delta);
        if (xm != ym) return xm > ym;
        return detail::positive_part(x.delta) > detail::positive_part(y.delta);
    });
    return out;
}

namespace detail {

inline void require_parties(const DsState& state, int n, const char* who) {
    if (state.n_parties() != n) {
        throw DomainError(std::string(who) + ": needs N = " + std::to_string(n) + ", got N = " +
                          std::to_string(state.n_parties()));
    }
}

}  // namespace detail

/// One d x d block of pbar_ij plus the p_ij / 2 summands for i != j.
inline BlockMatrix build_m_bipartite(const DsState& state, const Limits& limits = {}) {
    detail::require_parties(state, 2, "build_m_bipartite");
    return reduced_partial_transpose(state, 1, limits);
}

/// d blocks M_i, one per level of the transposed party: M_i[j][k] = pbar_ijk.
inline BlockMatrix build_m3(const DsState& state, const Limits& limits = {}) {
    detail::require_parties(state, 3, "build_m3");
    return reduced_partial_transpose(state, 1, limits);
}

/// 2:2 cut: one d(d+1)/2 block over two-qudit Dicke labels and d(d-1)/2
/// blocks of side d (each present twice in rho^T).
inline BlockMatrix build_m4(const DsState& state, const Limits& limits = {}) {
    detail::require_parties(state, 4, "build_m4");
    return reduced_partial_transpose(state, 2, limits);
}

/// 1:3 cut: d(d+1)/2 blocks of side d, one per pair i <= j.
inline BlockMatrix build_m1v3(const DsState& state, const Limits& limits = {}) {
    detail::require_parties(state, 4, "build_m1v3");
    return reduced_partial_transpose(state, 1, limits);
}

/// Largest cut floor(N/2) : ceil(N/2), smaller side transposed.
inline BlockMatrix build_mn(const DsState& state, const Limits& limits = {}) {
    if (state.n_parties() < 2) throw DomainError("build_mn: needs N >= 2");
    return reduced_partial_transpose(state, state.n_parties() / 2, limits);
}

struct CutVerdict {
    Bipartition cut;
    bool ppt = false;
    double min_eigenvalue = 0.0;
    double max_eigenvalue = 0.0;
};

inline CutVerdict verdict_from_spectrum(const Bipartition& cut, const Vector& ev, double tol) {
    return CutVerdict{cut, spectrum_is_psd(ev, tol), ev.size() ? ev(0) : 0.0,
                      ev.size() ? ev(ev.size() - 1) : 0.0};
}

/// One representative cut per size 1..floor(N/2), by explicit partial transpose.
inline std::vector<CutVerdict> ppt_cuts(const DsState& state, const Config& config = {}) {
    const auto rho = expand_density_matrix(state, config.limits);
    std::vector<CutVerdict> out;
    for (int s = 1; s <= state.n_parties() / 2; ++s) {
        const auto cut = Bipartition::first(s, state.n_parties());
        const Vector ev = symmetric_eigenvalues(brute_force_pt(rho, cut, state.local_dim()).matrix());
        out.push_back(verdict_from_spectrum(cut, ev, config.tol.psd_relative));
    }
    return out;
}

/// Same verdicts from the reduced blocks; no d^N matrix is formed.
inline std::vector<CutVerdict> ppt_cuts_reduced(const DsState& state, const Config& config = {}) {
    std::vector<CutVerdict> out;
    for (int s = 1; s <= state.n_parties() / 2; ++s) {
        const auto cut = Bipartition::first(s, state.n_parties());
        const Vector ev = reduced_partial_transpose(state, s, config.limits).spectrum();
        out.push_back(verdict_from_spectrum(cut, ev, config.tol.psd_relative));
    }
    return out;
}

inline std::map<Bipartition, bool> ppt_all_partitions(const DsState& state, const Config& config = {}) {
    std::map<Bipartition, bool> out;
    for (const auto& v : ppt_cuts(state, config)) out.emplace(v.cut, v.ppt);
    return out;
}

inline bool is_ppt(const DsState& state, const Config& config = {}) {
    for (const auto& v : ppt_cuts_reduced(state, config)) {
        if (!v.ppt) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Random states

enum class Ensemble { dirichlet, radial };

inline const char* ensemble_name(Ensemble e) { return e == Ensemble::dirichlet ? "dirichlet" : "radial"; }

inline DsState sample_dirichlet(int n_parties, int local_dim, Rng& rng) {
    const auto count = binomial(n_parties + local_dim - 1, local_dim - 1);
    return DsState::from_vector(n_parties, local_dim, dirichlet_flat(count, rng));
}

/// Flat Dirichlet draw p pulled towards the uniform mixture u over Dicke
/// states, p(t) = (1-t) p + t u, with t uniform on [t*, 1] where t* is the
/// smallest mixing that makes the chosen cuts PSD. u is separable, so the
/// segment ends inside the PPT set. When `all_cuts` is false only the largest
/// cut is enforced.
inline DsState sample_radial_ppt(int n_parties, int local_dim, Rng& rng, bool all_cuts = true,
                                 const Limits& limits = {}) {
    const auto count = binomial(n_parties + local_dim - 1, local_dim - 1);
    const auto p = dirichlet_flat(count, rng);
    const double u = 1.0 / static_cast<double>(count);
    auto mix = [&](double t) {
        std::vector<double> q(count);
        for (std::size_t i = 0; i < count; ++i) q[i] = (1.0 - t) * p[i] + t * u;
        return DsState::from_vector(n_parties, local_dim, std::move(q));
    };
    auto psd = [&](double t) {
        const auto s = mix(t);
        const int largest = n_parties / 2;
        for (int a = all_cuts ? 1 : largest; a <= largest; ++a) {
            if (reduced_partial_transpose(s, a, limits).min_eigenvalue() < 0.0) return false;
        }
        return true;
    };
    double lo = 0.0;
    double hi = 1.0;
    if (psd(0.0)) {
        hi = 0.0;
    } else {
        for (int it = 0; it < 50; ++it) {
            const double mid = 0.5 * (lo + hi);
            (psd(mid) ? hi : lo) = mid;
        }
    }
    return mix(hi + (1.0 - hi) * uniform01(rng));
}

inline DsState sample_state(Ensemble ensemble, int n_parties, int local_dim, Rng& rng,
                            const Limits& limits = {}) {
    return ensemble == Ensemble::dirichlet ? sample_dirichlet(n_parties, local_dim, rng)
                                           : sample_radial_ppt(n_parties, local_dim, rng, false, limits);
}

// ---------------------------------------------------------------------------
// Largest-cut PPT versus smaller cuts

struct ConjectureRecord {
    std::size_t index = 0;
    std::vector<double> probs;
    std::vector<CutVerdict> cuts;
    bool largest_cut_ppt = false;
    bool counterexample = false;
};

struct ConjectureReport {
    int n_parties = 0;
    int local_dim = 0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    Ensemble ensemble = Ensemble::dirichlet;
    std::size_t largest_cut_ppt = 0;
    std::size_t fully_ppt = 0;
    std::size_t counterexamples = 0;
    std::vector<ConjectureRecord> records;
};

/// Draws `samples` states, sample i from the stream derive_seed(seed, i), and
/// checks every smaller cut of those that are PSD under the largest cut.
inline ConjectureReport test_conjecture1(int n_parties, int local_dim, std::size_t samples, std::uint64_t seed,
                                         Ensemble ensemble = Ensemble::dirichlet, const Config& config = {}) {
    if (samples == 0) throw DomainError("test_conjecture1: samples must be >= 1");
    if (n_parties < 2) throw DomainError("test_conjecture1: needs N >= 2");
    dense_rows(n_parties, local_dim, config.limits.max_dense_rows);
    ConjectureReport report;
    report.n_parties = n_parties;
    report.local_dim = local_dim;
    report.samples = samples;
    report.seed = seed;
    report.ensemble = ensemble;
    for (std::size_t i = 0; i < samples; ++i) {
        Rng rng = make_rng(seed, i);
        const auto state = sample_state(ensemble, n_parties, local_dim, rng, config.limits);
        ConjectureRecord rec;
        rec.index = i;
        rec.probs = state.probs();
        rec.cuts = ppt_cuts(state, config);
        rec.largest_cut_ppt = rec.cuts.back().ppt;
        if (rec.largest_cut_ppt) {
            ++report.largest_cut_ppt;
            bool all = true;
            for (const auto& c : rec.cuts) all = all && c.ppt;
            if (all) ++report.fully_ppt;
            rec.counterexample = !all;
            if (!all) ++report.counterexamples;
        }
        report.records.push_back(std::move(rec));
    }
    return report;
}

}  // namespace symsep
