#pragma once

#include <stdexcept>
#include <string>

namespace shapesim {

enum class Dimension { cpus, memory };

const char* to_string(Dimension d);

// CPU in fractional cores, memory in MB.
struct ResourceVector {
    double cpus = 0.0;
    double memory = 0.0;

    double operator[](Dimension d) const { return d == Dimension::cpus ? cpus : memory; }
    double& operator[](Dimension d) { return d == Dimension::cpus ? cpus : memory; }

    friend bool operator==(const ResourceVector&, const ResourceVector&) = default;
};

inline constexpr Dimension kDimensions[] = {Dimension::cpus, Dimension::memory};

/// Finite and non-negative in both dimensions.
bool is_valid(const ResourceVector& r);

/// True iff `request` fits inside `free` in both dimensions.
bool fits(const ResourceVector& request, const ResourceVector& free);

ResourceVector operator+(const ResourceVector& a, const ResourceVector& b);
ResourceVector& operator+=(ResourceVector& a, const ResourceVector& b);
ResourceVector operator*(double s, const ResourceVector& r);

class ResourceUnderflow : public std::runtime_error {
public:
    explicit ResourceUnderflow(Dimension d);
    Dimension dimension() const { return dimension_; }

private:
    Dimension dimension_;
};

/// a - b, or ResourceUnderflow naming the first dimension that would go negative.
ResourceVector sub_checked(const ResourceVector& a, const ResourceVector& b);

}  // namespace shapesim
