#include "shapesim/forecast/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "shapesim/io_util.hpp"

namespace shapesim::forecast {

namespace {

double quantile_sorted(const std::vector<double>& v, double q) {
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

std::size_t warmup_of(const ForecasterKind& k) {
    switch (k.tag) {
        case ForecasterTag::oracle: return 1;
        case ForecasterTag::ari: return kMinAriObservations;
        case ForecasterTag::gp: return static_cast<std::size_t>(k.history) + 1;
    }
    return 1;
}

}  // namespace

std::vector<EvalSeries> memory_corpus(const WorkloadTrace& trace, std::size_t max_series) {
    std::vector<EvalSeries> corpus;
    for (const auto& app : trace.applications) {
        for (const auto* group : {&app.core_components, &app.elastic_components}) {
            for (const auto& c : *group) {
                if (max_series && corpus.size() >= max_series) return corpus;
                corpus.push_back({c.id, trace.usage_for(c.usage_profile_id).samples, c.reservation.memory});
            }
        }
    }
    return corpus;
}

ErrorSummary summarize(std::vector<double> values) {
    ErrorSummary s;
    s.count = values.size();
    if (values.empty()) return s;
    std::sort(values.begin(), values.end());
    s.q1 = quantile_sorted(values, 0.25);
    s.median = quantile_sorted(values, 0.5);
    s.q3 = quantile_sorted(values, 0.75);
    s.max = values.back();
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    return s;
}

ForecasterKind parse_eval_kind(const std::string& name, int h) {
    ForecasterKind k;
    if (name == "oracle") {
        k.tag = ForecasterTag::oracle;
    } else if (name == "ari") {
        k.tag = ForecasterTag::ari;
    } else if (name == "gp" || name == "gp-exp") {
        k.tag = ForecasterTag::gp;
        k.kernel = KernelKind::exponential;
    } else if (name == "gp-rbf") {
        k.tag = ForecasterTag::gp;
        k.kernel = KernelKind::rbf;
    } else {
        throw std::invalid_argument("unknown forecaster kind: " + name);
    }
    if (h < 1) throw std::invalid_argument("history h must be >= 1");
    k.history = h;
    k.window = h;
    return k;
}

std::vector<EvalRow> evaluate_forecasters(const std::vector<EvalSeries>& corpus, const std::vector<std::string>& kinds,
                                          const std::vector<int>& hs, Dimension dimension) {
    if (corpus.empty()) throw std::invalid_argument("evaluate_forecasters: empty corpus");
    std::vector<ForecasterKind> configs;
    for (const auto& name : kinds)
        for (int h : hs) configs.push_back(parse_eval_kind(name, h));

    std::size_t start = 1;
    for (const auto& k : configs) start = std::max(start, warmup_of(k));

    std::vector<EvalRow> rows;
    for (const auto& k : configs) {
        const std::string kind = to_string(k.tag);
        const std::string kernel = k.tag == ForecasterTag::gp ? std::string(to_string(k.kernel)) : std::string();
        std::vector<double> pooled;
        for (const auto& s : corpus) {
            if (s.samples.size() <= start) continue;
            std::optional<OracleTruth> truth;
            if (k.tag == ForecasterTag::oracle) truth = OracleTruth{s.samples, dimension, 0};
            Forecaster f(k, s.reservation, kUsageResolution, truth);
            std::vector<double> errors;
            for (std::size_t i = 0; i < s.samples.size(); ++i) {
                const double actual = s.samples[i][dimension];
                if (i >= start) errors.push_back(std::abs(f.predict().mean - actual) / s.reservation);
                f.observe(static_cast<SimTime>(i) * kUsageResolution, actual);
            }
            pooled.insert(pooled.end(), errors.begin(), errors.end());
            rows.push_back({kind, kernel, k.history, std::to_string(s.id), summarize(std::move(errors))});
        }
        rows.push_back({kind, kernel, k.history, "all", summarize(std::move(pooled))});
    }
    return rows;
}

double pooled_mean_error(const std::vector<EvalRow>& rows, const std::string& kind, const std::string& kernel, int h) {
    for (const auto& r : rows)
        if (r.series_id == "all" && r.kind == kind && r.kernel == kernel && r.h == h) return r.errors.mean;
    throw std::invalid_argument("pooled_mean_error: configuration not evaluated");
}

std::string eval_csv(const std::vector<EvalRow>& rows) {
    std::ostringstream out;
    out << "kind,kernel,h,series_id,q1,median,q3,mean,max\n";
    for (const auto& r : rows) {
        out << r.kind << ',' << r.kernel << ',' << r.h << ',' << r.series_id << ',' << format_real(r.errors.q1) << ','
            << format_real(r.errors.median) << ',' << format_real(r.errors.q3) << ',' << format_real(r.errors.mean)
            << ',' << format_real(r.errors.max) << '\n';
    }
    return out.str();
}

}  // namespace shapesim::forecast
