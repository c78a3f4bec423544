#pragma once

#include <limits>

namespace turbilink {

// A non-negative length (or squared length) that may be +infinity.
// Free-space coupling lengths and the coherence length at Cn2 = 0 use the
// infinite state; code branches on is_infinite() rather than testing
// against a large number.
class ExtendedReal {
public:
    static constexpr ExtendedReal infinite() { return ExtendedReal(0.0, true); }
    static constexpr ExtendedReal finite(double v) { return ExtendedReal(v, false); }

    constexpr bool is_infinite() const { return infinite_; }
    constexpr bool is_finite() const { return !infinite_; }
    // Finite value; +inf when infinite.
    constexpr double value() const {
        return infinite_ ? std::numeric_limits<double>::infinity() : value_;
    }
    // 1/value with 1/inf = 0 exactly.
    constexpr double reciprocal() const { return infinite_ ? 0.0 : 1.0 / value_; }

    friend constexpr bool operator==(const ExtendedReal&, const ExtendedReal&) = default;

private:
    constexpr ExtendedReal(double v, bool inf) : value_(v), infinite_(inf) {}
    double value_;
    bool infinite_;
};

}  // namespace turbilink
