#pragma once

#include <cmath>
#include <string>

#include "core/csv.hpp"

namespace linproc {

// A real number, +infinity, or "not known". Used where a finite computation
// may only establish a bound, or nothing at all.
class ExtendedReal {
public:
    enum class Kind { finite, pos_inf, unknown };

    static ExtendedReal finite(double x) { return ExtendedReal(Kind::finite, x); }
    static ExtendedReal infinity() { return ExtendedReal(Kind::pos_inf, 0.0); }
    static ExtendedReal unknown() { return ExtendedReal(Kind::unknown, 0.0); }

    ExtendedReal() = default;

    Kind kind() const noexcept { return kind_; }
    bool is_finite() const noexcept { return kind_ == Kind::finite; }
    bool is_infinite() const noexcept { return kind_ == Kind::pos_inf; }
    bool is_unknown() const noexcept { return kind_ == Kind::unknown; }

    /// Only meaningful when is_finite(); +inf for infinity, NaN for unknown.
    double value() const noexcept {
        switch (kind_) {
        case Kind::finite: return value_;
        case Kind::pos_inf: return INFINITY;
        default: return NAN;
        }
    }

    std::string to_string() const {
        switch (kind_) {
        case Kind::finite: return csv::format_double(value_);
        case Kind::pos_inf: return "inf";
        default: return "unknown";
        }
    }

    bool operator==(const ExtendedReal&) const = default;

private:
    ExtendedReal(Kind kind, double x) : kind_(kind), value_(x) {}

    Kind kind_ = Kind::unknown;
    double value_ = 0.0;
};

} // namespace linproc
