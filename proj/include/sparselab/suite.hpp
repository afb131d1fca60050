#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sparselab/operators.hpp"
#include "sparselab/weights.hpp"

namespace sparselab {

enum class SuiteKind { restrictedSets, staircases, randomSteps, powerWeights, vectorFamilies };

SuiteKind suite_kind_from_string(const std::string& s);
std::string to_string(SuiteKind k);

/// Deterministic uniform draws from a fixed-sequence engine. Distributions
/// are hand-rolled on the raw 64-bit stream so runs reproduce across
/// platforms.
class SuiteRng {
public:
    explicit SuiteRng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}
    std::uint64_t next();
    double u01();                       // [0, 1)
    long long uniform(long long lo, long long hi); // inclusive bounds

private:
    std::uint64_t state_;
};

struct SuiteCase {
    std::vector<GridFunction> functions;   // scalar inputs
    std::vector<VectorFunction> vectors;   // populated for vectorFamilies
    std::vector<WeightFunction> weights;   // populated for powerWeights
    int staircase_levels = 0;              // populated for staircases
    DyadicInterval window{4, 0};           // the shared support window (restrictedSets)
};

/// Deterministic pseudo-random inputs; a fixed seed reproduces the suite.
/// restrictedSets: indicators of finite dyadic-interval unions (n_functions
/// per case). staircases: equal-block staircases with 4..16 levels.
/// randomSteps: piecewise-constant dyadic step functions. powerWeights:
/// clipped |x|^a samples. vectorFamilies: component families normalized to
/// pointwise l^r mass at most one.
std::vector<SuiteCase> generate_suite(std::uint64_t seed, SuiteKind kind, int cases,
                                      const GridSpec& grid, int n_functions = 3,
                                      double vector_r = 2.0, int vector_components = 3);

} // namespace sparselab
