#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "pq/metric_space.hpp"

namespace pq {

// Deterministic sampler output: planar points with Euclidean distances and
// the analytically congested locus marked by construction.
struct GeneratedCorpus {
    MetricSpace space;
    SubsetRef truth_congested;
    std::string name;
    std::map<std::string, double> params;  // echoes n plus shape constants
};

struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnknownGeneratorError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Generators: interval, circle, topologist_sine, warsaw_circle, comb,
// cantor_fan, harmonic_broom. Sampling is arc-length uniform per branch with
// the budget split proportionally to branch length. Throws BudgetError when
// n cannot resolve the finest feature (message names the minimum n) and
// UnknownGeneratorError for unknown names.
GeneratedCorpus generate(const std::string& name, int n,
                         const std::map<std::string, double>& params = {});

std::vector<std::string> generator_names();

}  // namespace pq
