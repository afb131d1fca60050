#pragma once

#include "sparselab/config.hpp"
#include "sparselab/report.hpp"
#include "sparselab/sparse.hpp"

namespace sparselab {

/// Per-case pipeline: evaluate the configured operator, build the sparse
/// collection, dominate, check the exact invariants, record the
/// Fefferman-Stein and local ratios where applicable. Deterministic for a
/// fixed config and seed.
Report run_experiment(const ExperimentConfig& cfg);

/// The exact invariants of the stopping time: tile partition, per-entry size
/// cap, and eta >= 1/2. Returns human-readable failure strings (empty when
/// clean).
std::vector<std::string> check_sparse_invariants(const SparseFamily& S,
                                                 const MultiTileCollection& coll,
                                                 std::span<const GridFunction> f,
                                                 std::span<const double> s, int M);

/// Everything a single case needs: operator output, stopping functions and
/// domination sides. Exposed for the verification tools.
struct CaseOutcome {
    GridFunction output;           // |T(...)| relevant output (combined for depth 1)
    std::vector<GridFunction> stopping_functions;
    SparseFamily family;
    double lhs = 0.0;
    double rhs = 0.0;
};

CaseOutcome run_case(const ExperimentConfig& cfg, const SuiteCase& sc,
                     const MultiTileCollection& tiles, PacketProvider& packets);

} // namespace sparselab
