#include "shapesim/trace_io.hpp"

#include <cmath>
#include <sstream>

#include "shapesim/config.hpp"
#include "shapesim/io_util.hpp"

namespace shapesim {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kManifest = "manifest.json";
constexpr const char* kUsage = "usage.csv";
constexpr const char* kUsageHeader = "component_id,tick,cpus,mem_mb";

json component_json(const ComponentSpec& c, std::size_t ticks) {
    return {{"id", c.id},
            {"kind", c.kind == ComponentKind::core ? "core" : "elastic"},
            {"cpus", c.reservation.cpus},
            {"mem_mb", c.reservation.memory},
            {"usage_profile_id", c.usage_profile_id},
            {"ticks", ticks}};
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw TraceParseError(where + ": " + what);
}

template <typename T>
T field(const json& j, const char* key, const std::string& where) {
    const auto it = j.find(key);
    if (it == j.end()) fail(where, std::string("missing field '") + key + "'");
    try {
        return it->template get<T>();
    } catch (const json::exception&) {
        fail(where, std::string("field '") + key + "' has the wrong type");
    }
}

ComponentSpec parse_component(const json& j, AppId app, const std::string& where, std::size_t& ticks) {
    ComponentSpec c;
    c.id = field<ComponentId>(j, "id", where);
    c.application_id = app;
    const auto kind = field<std::string>(j, "kind", where);
    if (kind != "core" && kind != "elastic") fail(where, "unknown component kind '" + kind + "'");
    c.kind = kind == "core" ? ComponentKind::core : ComponentKind::elastic;
    c.reservation = {field<double>(j, "cpus", where), field<double>(j, "mem_mb", where)};
    if (!is_valid(c.reservation) || c.reservation.cpus <= 0 || c.reservation.memory <= 0)
        fail(where, "reservation must be positive");
    c.usage_profile_id = field<ComponentId>(j, "usage_profile_id", where);
    ticks = field<std::size_t>(j, "ticks", where);
    if (ticks == 0) fail(where, "ticks must be >= 1");
    return c;
}

}  // namespace

std::string manifest_json(const WorkloadTrace& trace) {
    json apps = json::array();
    for (const auto& a : trace.applications) {
        json comps = json::array();
        for (const auto& c : a.core_components) comps.push_back(component_json(c, trace.usage_for(c.id).samples.size()));
        for (const auto& c : a.elastic_components)
            comps.push_back(component_json(c, trace.usage_for(c.id).samples.size()));
        apps.push_back({{"id", a.id},
                        {"kind", a.kind == AppKind::rigid ? "rigid" : "elastic"},
                        {"submission_time", a.submission_time},
                        {"priority_key", a.priority_key},
                        {"total_work", a.total_work},
                        {"components", std::move(comps)}});
    }
    json j = {{"config", to_json(trace.config)}, {"applications", std::move(apps)}};
    return j.dump(1) + "\n";
}

std::string usage_csv(const WorkloadTrace& trace) {
    std::ostringstream out;
    out << kUsageHeader << '\n';
    for (const auto& s : trace.usage)
        for (std::size_t t = 0; t < s.samples.size(); ++t)
            out << s.component_id << ',' << t << ',' << format_real(s.samples[t].cpus) << ','
                << format_real(s.samples[t].memory) << '\n';
    return out.str();
}

void write_trace(const WorkloadTrace& trace, const fs::path& dir) {
    const std::string manifest = manifest_json(trace);
    const std::string usage = usage_csv(trace);
    atomic_write_dir(
        dir,
        [&](const fs::path& tmp) {
            atomic_write_file(tmp / kManifest, manifest);
            atomic_write_file(tmp / kUsage, usage);
        },
        [](const fs::path& existing) { return fs::exists(existing / kManifest); });
}

WorkloadTrace load_trace(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw std::runtime_error("trace directory not found: " + dir.string());
    const fs::path manifest_path = dir / kManifest;
    const fs::path usage_path = dir / kUsage;

    json manifest;
    try {
        manifest = json::parse(read_file(manifest_path));
    } catch (const json::parse_error& e) {
        fail(manifest_path.string(), e.what());
    }

    WorkloadTrace trace;
    const std::string mwhere = manifest_path.string();
    if (!manifest.is_object()) fail(mwhere, "expected an object");
    try {
        trace.config = workload_config_from_json(field<json>(manifest, "config", mwhere));
    } catch (const InvalidConfig& e) {
        fail(mwhere, e.what());
    }

    std::vector<std::size_t> expected_ticks;
    const json apps = field<json>(manifest, "applications", mwhere);
    if (!apps.is_array()) fail(mwhere, "'applications' must be an array");
    SimTime last_submission = 0;
    for (std::size_t i = 0; i < apps.size(); ++i) {
        const std::string where = mwhere + " applications[" + std::to_string(i) + "]";
        const json& j = apps[i];
        ApplicationSpec a;
        a.id = field<AppId>(j, "id", where);
        if (a.id != static_cast<AppId>(i)) fail(where, "application ids must be 0..n-1 in order");
        const auto kind = field<std::string>(j, "kind", where);
        if (kind != "rigid" && kind != "elastic") fail(where, "unknown application kind '" + kind + "'");
        a.kind = kind == "rigid" ? AppKind::rigid : AppKind::elastic;
        a.submission_time = field<SimTime>(j, "submission_time", where);
        a.priority_key = field<SimTime>(j, "priority_key", where);
        a.total_work = field<double>(j, "total_work", where);
        if (a.submission_time < last_submission) fail(where, "applications must be sorted by submission time");
        last_submission = a.submission_time;
        if (!(a.total_work > 0.0) || !std::isfinite(a.total_work)) fail(where, "total_work must be positive");
        const json comps = field<json>(j, "components", where);
        if (!comps.is_array()) fail(where, "'components' must be an array");
        for (std::size_t k = 0; k < comps.size(); ++k) {
            const std::string cwhere = where + ".components[" + std::to_string(k) + "]";
            std::size_t ticks = 0;
            ComponentSpec c = parse_component(comps[k], a.id, cwhere, ticks);
            if (c.id != static_cast<ComponentId>(expected_ticks.size()))
                fail(cwhere, "component ids must be dense and in order");
            if (c.usage_profile_id != c.id) fail(cwhere, "usage_profile_id must equal the component id");
            expected_ticks.push_back(ticks);
            (c.kind == ComponentKind::core ? a.core_components : a.elastic_components).push_back(c);
        }
        if (a.core_components.empty()) fail(where, "an application needs at least one core component");
        if (a.kind == AppKind::rigid && !a.elastic_components.empty())
            fail(where, "rigid application with elastic components");
        trace.applications.push_back(std::move(a));
    }

    trace.usage.resize(expected_ticks.size());
    for (std::size_t i = 0; i < trace.usage.size(); ++i) trace.usage[i].component_id = static_cast<ComponentId>(i);

    std::istringstream usage(read_file(usage_path));
    const std::string uwhere = usage_path.string();
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(usage, line) || line != kUsageHeader) fail(uwhere + ":1", "expected header '" + std::string(kUsageHeader) + "'");
    while (std::getline(usage, line)) {
        ++line_no;
        const std::string where = uwhere + ":" + std::to_string(line_no);
        if (line.empty()) continue;
        std::vector<std::string_view> cells;
        std::string_view rest(line);
        for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos; rest.remove_prefix(pos + 1))
            cells.push_back(rest.substr(0, pos));
        cells.push_back(rest);
        if (cells.size() != 4) fail(where, "expected 4 columns, got " + std::to_string(cells.size()));
        try {
            const long long cid = parse_integer(cells[0]);
            const long long tick = parse_integer(cells[1]);
            const ResourceVector v{parse_real(cells[2]), parse_real(cells[3])};
            if (cid < 0 || static_cast<std::size_t>(cid) >= trace.usage.size())
                fail(where, "unknown component " + std::to_string(cid));
            auto& series = trace.usage[static_cast<std::size_t>(cid)].samples;
            if (tick != static_cast<long long>(series.size()))
                fail(where, "tick " + std::to_string(tick) + " out of order for component " + std::to_string(cid));
            if (!is_valid(v)) fail(where, "usage must be finite and non-negative");
            series.push_back(v);
        } catch (const std::invalid_argument& e) {
            fail(where, e.what());
        }
    }
    for (std::size_t i = 0; i < trace.usage.size(); ++i)
        if (trace.usage[i].samples.size() != expected_ticks[i])
            fail(uwhere, "component " + std::to_string(i) + " has " + std::to_string(trace.usage[i].samples.size()) +
                             " samples, manifest says " + std::to_string(expected_ticks[i]));
    return trace;
}

}  // namespace shapesim
