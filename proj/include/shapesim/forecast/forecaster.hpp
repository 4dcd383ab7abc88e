#pragma once

#include <deque>
#include <optional>
#include <span>
#include <string>

#include "shapesim/domain.hpp"
#include "shapesim/forecast/ari.hpp"
#include "shapesim/forecast/gp.hpp"

namespace shapesim::forecast {

enum class ForecasterTag { oracle, gp, ari };

struct ForecasterKind {
    ForecasterTag tag = ForecasterTag::oracle;
    KernelKind kernel = KernelKind::exponential;  // gp only
    int history = 10;                             // gp pattern length h
    int window = 10;                              // gp retained patterns N
    int reselect_every = 30;                      // gp ticks between evidence maximizations
    int ari_window = 120;                         // ari trailing observations per refit

    friend bool operator==(const ForecasterKind&, const ForecasterKind&) = default;
};

std::string to_string(ForecasterTag tag);
ForecasterTag forecaster_from_string(const std::string& name);

/// Ground truth handed to the oracle: a usage series, the dimension to read, and
/// the time its first sample belongs to.
struct OracleTruth {
    std::span<const ResourceVector> samples;
    Dimension dimension = Dimension::memory;
    SimTime start_time = 0;
};

/// Online one-step-ahead predictor for one resource of one component.
///
/// Values are normalized by the reservation before modeling and denormalized on the
/// way out. Until enough observations exist (h+1 for gp, 5 for ari, 1 for the
/// oracle) predict() returns (reservation, 0), which leaves the allocation unshaped.
class Forecaster {
public:
    Forecaster(const ForecasterKind& kind, double reservation, SimTime interval = 60,
               std::optional<OracleTruth> truth = std::nullopt);

    /// Appends an observation; `t` must be strictly increasing.
    void observe(SimTime t, double value);

    PredictiveDistribution predict() const;

    bool warmed_up() const;
    std::size_t observations() const { return observed_; }
    const GpHyperparams<double>& hyperparams() const { return hyper_; }
    const ForecasterKind& kind() const { return kind_; }

private:
    GpModel<double> build_gp(double query_time, VectorX<double>* query) const;

    ForecasterKind kind_;
    double reservation_;
    SimTime interval_;
    std::optional<OracleTruth> truth_;

    std::deque<double> values_;  // normalized
    std::deque<SimTime> times_;
    std::size_t observed_ = 0;
    std::optional<SimTime> last_time_;

    GpHyperparams<double> hyper_{};
    bool selected_ = false;
    int since_selection_ = 0;

    std::optional<ArModel<double>> ar_;
};

}  // namespace shapesim::forecast
