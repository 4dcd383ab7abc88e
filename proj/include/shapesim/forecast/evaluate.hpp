#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "shapesim/forecast/forecaster.hpp"
#include "shapesim/workload.hpp"

namespace shapesim::forecast {

struct EvalSeries {
    ComponentId id = 0;
    std::span<const ResourceVector> samples;
    double reservation = 1.0;
};

/// Memory series of the first `max_series` components of a trace (all when 0).
std::vector<EvalSeries> memory_corpus(const WorkloadTrace& trace, std::size_t max_series = 0);

struct ErrorSummary {
    double q1 = 0, median = 0, q3 = 0, mean = 0, max = 0;
    std::size_t count = 0;
};

/// Quartiles use linear interpolation between order statistics.
ErrorSummary summarize(std::vector<double> values);

struct EvalRow {
    std::string kind;    // oracle | gp | ari
    std::string kernel;  // gp only
    int h = 0;
    std::string series_id;  // component id, or "all" for the pooled row
    ErrorSummary errors;
};

/// Parses "oracle", "ari", "gp", "gp-exp", "gp-rbf" into a forecaster kind with history h (N = h).
ForecasterKind parse_eval_kind(const std::string& name, int h);

/// One-step-ahead normalized absolute errors |prediction - truth| / reservation.
/// Every configuration is scored on the same targets: those after the longest
/// warm-up among the requested configurations.
std::vector<EvalRow> evaluate_forecasters(const std::vector<EvalSeries>& corpus, const std::vector<std::string>& kinds,
                                          const std::vector<int>& hs, Dimension dimension = Dimension::memory);

/// Pooled mean error of one configuration.
double pooled_mean_error(const std::vector<EvalRow>& rows, const std::string& kind, const std::string& kernel, int h);

std::string eval_csv(const std::vector<EvalRow>& rows);

}  // namespace shapesim::forecast
