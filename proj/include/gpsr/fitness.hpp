#pragma once

#include <cmath>
#include <limits>

namespace gpsr {

// Minimized fitness value. An individual whose evaluation produced a
// non-finite number carries the invalid state, which orders strictly after
// every finite fitness so sorting and tournaments stay total.
struct Fitness {
    double value = std::numeric_limits<double>::quiet_NaN();
    bool valid = false;

    Fitness() = default;
    explicit Fitness(double v) : value(v), valid(true) {}

    static Fitness invalid_sentinel() { return Fitness{}; }

    friend bool operator<(const Fitness& a, const Fitness& b) {
        if (a.valid != b.valid) return a.valid;  // valid sorts before invalid
        if (!a.valid) return false;              // two invalids compare equal
        return a.value < b.value;
    }

    friend bool operator==(const Fitness& a, const Fitness& b) {
        if (a.valid != b.valid) return false;
        return !a.valid || a.value == b.value;
    }

    friend bool operator!=(const Fitness& a, const Fitness& b) { return !(a == b); }
    friend bool operator>(const Fitness& a, const Fitness& b) { return b < a; }
    friend bool operator<=(const Fitness& a, const Fitness& b) { return !(b < a); }
    friend bool operator>=(const Fitness& a, const Fitness& b) { return !(a < b); }
};

}  // namespace gpsr
