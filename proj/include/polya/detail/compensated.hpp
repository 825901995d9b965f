#pragma once

#include <cmath>

namespace polya::detail {

// Neumaier variant of Kahan summation: carries the rounding error of every
// addition in a separate compensation term, so long probability sums keep
// ~1 ulp accuracy instead of O(n) ulps.
class NeumaierSum {
public:
    void add(double x) noexcept {
        double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }

    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

} // namespace polya::detail
