#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>

namespace shapesim {

/// 17 significant digits: round-trips every double exactly.
std::string format_real(double x);

/// Strict parse of a whole token; throws std::invalid_argument otherwise.
double parse_real(std::string_view token);
long long parse_integer(std::string_view token);

std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it over `path`.
void atomic_write_file(const std::filesystem::path& path, std::string_view content);

/// Fills a sibling temporary directory via `fill`, then renames it to `path`.
/// An existing `path` is only replaced when `replaceable(path)` says so.
void atomic_write_dir(const std::filesystem::path& path,
                      const std::function<void(const std::filesystem::path&)>& fill,
                      const std::function<bool(const std::filesystem::path&)>& replaceable);

}  // namespace shapesim
