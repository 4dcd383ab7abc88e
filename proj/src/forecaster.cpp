#include "shapesim/forecast/forecaster.hpp"

#include <algorithm>
#include <stdexcept>

namespace shapesim::forecast {

std::string_view to_string(KernelKind kind) { return kind == KernelKind::exponential ? "exponential" : "rbf"; }

KernelKind kernel_from_string(std::string_view name) {
    if (name == "exponential" || name == "exp") return KernelKind::exponential;
    if (name == "rbf") return KernelKind::rbf;
    throw std::invalid_argument("unknown kernel: " + std::string(name));
}

std::string to_string(ForecasterTag tag) {
    switch (tag) {
        case ForecasterTag::oracle: return "oracle";
        case ForecasterTag::gp: return "gp";
        case ForecasterTag::ari: return "ari";
    }
    return "?";
}

ForecasterTag forecaster_from_string(const std::string& name) {
    if (name == "oracle") return ForecasterTag::oracle;
    if (name == "gp") return ForecasterTag::gp;
    if (name == "ari") return ForecasterTag::ari;
    throw std::invalid_argument("unknown forecaster: " + name);
}

Forecaster::Forecaster(const ForecasterKind& kind, double reservation, SimTime interval,
                       std::optional<OracleTruth> truth)
    : kind_(kind), reservation_(reservation), interval_(interval), truth_(truth) {
    if (!(reservation > 0.0)) throw std::invalid_argument("Forecaster: reservation must be > 0");
    if (interval <= 0) throw std::invalid_argument("Forecaster: interval must be > 0");
    if (kind.tag == ForecasterTag::oracle && !truth) throw std::invalid_argument("Forecaster: oracle needs ground truth");
    if (kind.tag == ForecasterTag::gp && (kind.history < 1 || kind.window < 1 || kind.reselect_every < 1))
        throw std::invalid_argument("Forecaster: gp history, window and reselect_every must be >= 1");
    if (kind.tag == ForecasterTag::ari && kind.ari_window < kMinAriObservations)
        throw std::invalid_argument("Forecaster: ari_window must be >= 5");
}

bool Forecaster::warmed_up() const {
    switch (kind_.tag) {
        case ForecasterTag::oracle: return observed_ >= 1;
        case ForecasterTag::gp: return observed_ >= static_cast<std::size_t>(kind_.history) + 1;
        case ForecasterTag::ari: return observed_ >= static_cast<std::size_t>(kMinAriObservations);
    }
    return false;
}

void Forecaster::observe(SimTime t, double value) {
    if (last_time_ && t <= *last_time_) throw std::invalid_argument("Forecaster: non-monotone observation time");
    last_time_ = t;
    ++observed_;
    if (kind_.tag == ForecasterTag::oracle) return;

    values_.push_back(value / reservation_);
    times_.push_back(t);
    const std::size_t keep = kind_.tag == ForecasterTag::gp
                                 ? static_cast<std::size_t>(kind_.history + kind_.window)
                                 : static_cast<std::size_t>(kind_.ari_window);
    while (values_.size() > keep) {
        values_.pop_front();
        times_.pop_front();
    }

    if (kind_.tag == ForecasterTag::ari) {
        if (values_.size() >= static_cast<std::size_t>(kMinAriObservations)) {
            VectorX<double> window(static_cast<Eigen::Index>(values_.size()));
            std::copy(values_.begin(), values_.end(), window.begin());
            ar_ = ari_fit(window);
        }
        return;
    }

    ++since_selection_;
    if (!warmed_up()) return;
    const GpModel<double> model = build_gp(static_cast<double>(t + interval_), nullptr);
    if (model.patterns.rows() >= 2 && (!selected_ || since_selection_ >= kind_.reselect_every)) {
        try {
            hyper_ = gp_select_hyperparams(model.patterns, model.targets, kind_.kernel);
            selected_ = true;
            since_selection_ = 0;
        } catch (const SingularSystem&) {
            // keep the previous hyperparameters
        }
    }
}

GpModel<double> Forecaster::build_gp(double query_time, VectorX<double>* query) const {
    const auto h = static_cast<std::size_t>(kind_.history);
    const std::size_t m = values_.size();
    const std::size_t rows = std::min(m - h, static_cast<std::size_t>(kind_.window));
    const std::size_t first = m - rows;  // index of the oldest retained target

    // time coordinate scaled to [0, 1] over [oldest retained target, query]
    const double t0 = static_cast<double>(times_[first]);
    const double scale = query_time - t0;
    auto norm_time = [&](double t) { return scale > 0.0 ? (t - t0) / scale : 0.0; };

    GpModel<double> model;
    model.kernel = kind_.kernel;
    model.history = kind_.history;
    model.window = kind_.window;
    model.hyper = hyper_;
    model.patterns.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(h + 1));
    model.targets.resize(static_cast<Eigen::Index>(rows));
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t j = first + r;
        const auto row = static_cast<Eigen::Index>(r);
        model.patterns(row, 0) = norm_time(static_cast<double>(times_[j]));
        for (std::size_t k = 0; k < h; ++k) model.patterns(row, static_cast<Eigen::Index>(k + 1)) = values_[j - h + k];
        model.targets(row) = values_[j];
    }
    if (query) {
        query->resize(static_cast<Eigen::Index>(h + 1));
        (*query)(0) = norm_time(query_time);
        for (std::size_t k = 0; k < h; ++k) (*query)(static_cast<Eigen::Index>(k + 1)) = values_[m - h + k];
    }
    return model;
}

PredictiveDistribution Forecaster::predict() const {
    if (!warmed_up()) return {reservation_, 0.0};
    switch (kind_.tag) {
        case ForecasterTag::oracle: {
            const SimTime next = *last_time_ + interval_;
            const auto tick = (next - truth_->start_time) / interval_;
            const auto last = static_cast<SimTime>(truth_->samples.size()) - 1;
            const auto idx = static_cast<std::size_t>(std::clamp<SimTime>(tick, 0, last));
            return {truth_->samples[idx][truth_->dimension], 0.0};
        }
        case ForecasterTag::ari: {
            VectorX<double> history(static_cast<Eigen::Index>(values_.size()));
            std::copy(values_.begin(), values_.end(), history.begin());
            const auto p = ari_forecast(*ar_, history);
            return {p.mean * reservation_, p.variance * reservation_ * reservation_};
        }
        case ForecasterTag::gp: {
            VectorX<double> query;
            const GpModel<double> model = build_gp(static_cast<double>(*last_time_ + interval_), &query);
            try {
                const auto p = gp_posterior(model, query);
                return {p.mean * reservation_, p.variance * reservation_ * reservation_};
            } catch (const SingularSystem&) {
                return {reservation_, 0.0};
            }
        }
    }
    return {reservation_, 0.0};
}

}  // namespace shapesim::forecast
