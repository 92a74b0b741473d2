#pragma once

#include <cmath>

namespace truncprob {

// Neumaier-compensated accumulator. The compensation term recovers the
// low-order bits lost in each addition, so the result stays accurate to a
// few ulps regardless of term count or ordering.
struct KahanAccumulator {
    double sum = 0.0;
    double compensation = 0.0;

    void operator+=(double value) {
        const double t = sum + value;
        if (std::abs(sum) >= std::abs(value)) {
            compensation += (sum - t) + value;
        } else {
            compensation += (value - t) + sum;
        }
        sum = t;
    }

    double value() const { return sum + compensation; }
};

}  // namespace truncprob
