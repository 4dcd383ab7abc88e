#include "shapesim/io_util.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unistd.h>

namespace shapesim {

namespace fs = std::filesystem;

std::string format_real(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double parse_real(std::string_view token) {
    const std::string s(token);
    if (s.empty()) throw std::invalid_argument("empty number");
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE) throw std::invalid_argument("malformed number '" + s + "'");
    return v;
}

long long parse_integer(std::string_view token) {
    const std::string s(token);
    if (s.empty()) throw std::invalid_argument("empty integer");
    char* end = nullptr;
    errno = 0;
    const long long v = std::strtoll(s.c_str(), &end, 10);
    if (end != s.c_str() + s.size() || errno == ERANGE) throw std::invalid_argument("malformed integer '" + s + "'");
    return v;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

fs::path temp_sibling(const fs::path& path) {
    return path.parent_path() / ("." + path.filename().string() + ".tmp-" + std::to_string(::getpid()));
}

}  // namespace

void atomic_write_file(const fs::path& path, std::string_view content) {
    const fs::path tmp = temp_sibling(path);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw std::runtime_error("write failed for " + path.string());
        }
    }
    fs::rename(tmp, path);
}

void atomic_write_dir(const fs::path& path, const std::function<void(const fs::path&)>& fill,
                      const std::function<bool(const fs::path&)>& replaceable) {
    if (fs::exists(path) && !(fs::is_directory(path) && (fs::is_empty(path) || replaceable(path))))
        throw std::runtime_error("refusing to overwrite " + path.string());
    const fs::path tmp = temp_sibling(path);
    fs::remove_all(tmp);
    fs::create_directories(tmp);
    try {
        fill(tmp);
    } catch (...) {
        std::error_code ec;
        fs::remove_all(tmp, ec);
        throw;
    }
    if (fs::exists(path)) fs::remove_all(path);
    fs::rename(tmp, path);
}

}  // namespace shapesim
