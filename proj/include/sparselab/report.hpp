#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sparselab/grid.hpp"

namespace sparselab {

struct CaseRecord {
    std::string inputs_digest;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    double fs_lhs = 0.0;
    double fs_rhs = 0.0;
    double fs_ratio = 0.0;
    double local_ratio = 0.0;
    std::size_t sparse_entries = 0;
    double eta = 0.0;
    double carleson = 0.0;
    double C_used = 0.0;
    std::vector<std::string> invariant_failures;
};

struct Report {
    std::string operator_name;
    std::string suite_kind;
    std::uint64_t seed = 0;
    std::size_t grid_count = 0;
    double q = 0.0;
    std::vector<CaseRecord> cases;
    // aggregates
    double max_ratio = 0.0;
    double eta_min = 1.0;
    double carleson_max = 0.0;
    int status = 0; // 0 ok, 1 invariant failure, 2 input error

    void aggregate();
};

/// FNV-1a over the little-endian byte pattern of the samples.
std::string digest_of(std::span<const GridFunction> inputs);

std::string report_json(const Report& r);
std::string report_csv(const Report& r);
void emit_report(const Report& r, const std::string& format, const std::string& path);

} // namespace sparselab
