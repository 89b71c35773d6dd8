#pragma once

#include <cstddef>
#include <cstdint>

namespace symsep {

/// Numerical thresholds used by every verdict in the library.
///
/// A verdict is only meaningful together with the tolerances under which it
/// was produced, so reports serialize this record verbatim.
struct Tolerances {
    /// PSD floor: lambda_min >= -psd_relative * max(1, lambda_max).
    double psd_relative = 1e-10;
    /// Entrywise floor for the nonnegativity half of the DNN test.
    double dnn_entry = 1e-12;
    /// Relative symmetry defect accepted by DenseHermitian.
    double symmetry = 1e-14;
    /// Probabilities must sum to one within this after normalization.
    double normalization = 1e-12;
    /// ||B B^T - M||_F <= cp_residual * ||M||_F for a CP certificate.
    double cp_residual = 1e-8;
    /// <H, M> must fall below -witness for a NOT_CP certificate.
    double witness = 1e-10;
    /// Frobenius error allowed for a separable decomposition.
    double reconstruction = 1e-8;
    /// Singular values below rank_relative * sigma_max count as zero.
    double rank_relative = 1e-10;
    /// Slack for the linear constraints of the qutrit/four-qubit slice.
    double slice_constraint = 1e-10;
    /// Decomposition terms lighter than this are dropped.
    double weight_prune = 1e-14;
};

struct Limits {
    /// Largest computational-basis dimension d^N that may be materialized.
    std::size_t max_dense_rows = 46656;
    /// Largest total side length of a reduced block matrix.
    std::size_t max_reduced_side = 200000;
};

struct CpOptions {
    /// Width of the nonnegative factor; 0 selects side*(side+1)/2.
    int max_rank = 0;
    int restarts = 20;
    int iterations = 5000;
    std::uint64_t seed = 0;
};

struct DecompositionOptions {
    /// Column-generation rounds of the product-atom search.
    int rounds = 200;
    /// Random atoms in the initial dictionary.
    int initial_atoms = 200;
    /// Local searches per round when pricing a new atom.
    int pricing_starts = 30;
    int pricing_steps = 200;
    std::uint64_t seed = 0;
};

struct Config {
    Tolerances tol;
    Limits limits;
    CpOptions cp;
    DecompositionOptions decomposition;
};

}  // namespace symsep
