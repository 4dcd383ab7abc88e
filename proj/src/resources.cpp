#include "shapesim/resources.hpp"

#include <cmath>

namespace shapesim {

const char* to_string(Dimension d) { return d == Dimension::cpus ? "cpus" : "memory"; }

bool is_valid(const ResourceVector& r) {
    return std::isfinite(r.cpus) && std::isfinite(r.memory) && r.cpus >= 0.0 && r.memory >= 0.0;
}

bool fits(const ResourceVector& request, const ResourceVector& free) {
    return request.cpus <= free.cpus && request.memory <= free.memory;
}

ResourceVector operator+(const ResourceVector& a, const ResourceVector& b) {
    return {a.cpus + b.cpus, a.memory + b.memory};
}

ResourceVector& operator+=(ResourceVector& a, const ResourceVector& b) {
    a.cpus += b.cpus;
    a.memory += b.memory;
    return a;
}

ResourceVector operator*(double s, const ResourceVector& r) { return {s * r.cpus, s * r.memory}; }

ResourceUnderflow::ResourceUnderflow(Dimension d)
    : std::runtime_error(std::string("resource underflow in ") + to_string(d)), dimension_(d) {}

ResourceVector sub_checked(const ResourceVector& a, const ResourceVector& b) {
    if (a.cpus < b.cpus) throw ResourceUnderflow(Dimension::cpus);
    if (a.memory < b.memory) throw ResourceUnderflow(Dimension::memory);
    return {a.cpus - b.cpus, a.memory - b.memory};
}

}  // namespace shapesim
