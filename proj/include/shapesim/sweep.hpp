#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "shapesim/engine.hpp"

namespace shapesim {

struct SweepCell {
    double k1 = 0.0;
    double k2 = 0.0;
    double turnaround_ratio = 0.0;  // baseline mean turnaround / cell mean turnaround
    double mem_slack = 0.0;
    double cpu_slack = 0.0;
    double failure_pct = 0.0;
};

struct SweepResult {
    Aggregates baseline;
    std::vector<SweepCell> cells;  // k1-major, in the order of the input lists
};

/// A run inside the sweep failed; the message names the grid point.
class SweepError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One run per (k1, k2) with `base` otherwise unchanged, plus a baseline-policy run
/// for the ratios. Runs are spread over `jobs` threads; the result does not depend on it.
SweepResult sweep(const WorkloadTrace& trace, const SimConfig& base, const std::vector<double>& k1s,
                  const std::vector<double>& k2s, unsigned jobs = 1);

/// Header `k1,k2,turnaround_ratio,mem_slack,cpu_slack,failure_pct`; the first row
/// holds the baseline run with k1 and k2 set to "baseline".
std::string sweep_csv(const SweepResult& result);

}  // namespace shapesim
