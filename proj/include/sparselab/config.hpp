#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sparselab/packets.hpp"
#include "sparselab/suite.hpp"

namespace sparselab {

enum class OperatorChoice { bhtModel, bhtDirect, t0, carlesonDirect, carlesonModel, varCarleson };

OperatorChoice operator_choice_from_string(const std::string& s);
std::string to_string(OperatorChoice op);

/// Flat key-value configuration (lines of `key=value`, `#` comments).
/// Flags mirror the keys; on conflict the config file wins with a warning.
struct ExperimentConfig {
    GridSpec grid;                      // grid.count, grid.length, grid.origin
    OperatorChoice op = OperatorChoice::bhtModel; // operator
    double var_r = 3.0;                 // operator=varCarleson(r)
    std::vector<double> s = {2.0, 2.0, 2.0}; // exponents.s
    double q = 1.0;                     // exponents.q
    double p = 2.0;                     // exponents.p
    double lr = 2.0;                    // vector.r
    int vector_depth = 0;               // vector.depth (0 or 1)
    double stopping_C = 0.0;            // stopping.C (auto when <= 0)
    int M = 2;                          // stopping.M
    std::uint64_t seed = 42;            // suite.seed
    int cases = 32;                     // suite.cases
    SuiteKind kind = SuiteKind::restrictedSets; // suite.kind
    std::string weight = "one";         // weight preset
    std::string symbol = "mikhlin";     // multiplier preset for t0
    std::string tiles = "rank1(3,8)";   // tile family preset
    double bump_fraction = 0.9;         // packets.fraction
    int bump_smoothness = 8;            // packets.smoothness

    std::map<std::string, std::string> raw; // every key seen, config wins

    static ExperimentConfig from_file(const std::string& path);
    static ExperimentConfig from_entries(const std::vector<std::string>& kv_entries);
    /// Merge: config-file values override flag values; collect warnings.
    void merge_file_over(const std::string& path, std::vector<std::string>& warnings);
    void apply(const std::string& key, const std::string& value);

    MultiTileCollection make_tiles() const;
    WeightFunction make_weight(const GridFunction& like) const;
};

} // namespace sparselab
