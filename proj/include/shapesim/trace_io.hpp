#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "shapesim/workload.hpp"

namespace shapesim {

/// Malformed or inconsistent trace directory. The message names the file and line.
class TraceParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Writes `dir/manifest.json` and `dir/usage.csv` atomically. An existing
/// directory is only replaced if it already holds a trace.
void write_trace(const WorkloadTrace& trace, const std::filesystem::path& dir);

/// Missing directory or files throw std::runtime_error; bad contents throw TraceParseError.
WorkloadTrace load_trace(const std::filesystem::path& dir);

std::string usage_csv(const WorkloadTrace& trace);
std::string manifest_json(const WorkloadTrace& trace);

}  // namespace shapesim
