#pragma once

#include <algorithm>
#include <cmath>

namespace intstbc::detail {

/// Walks the arithmetic alphabet {lo, lo+step, ..., hi} in nondecreasing
/// distance from a center (Schnorr-Euchner order). After the first value,
/// ties between the two sides go to the smaller value.
class Zigzag {
public:
    Zigzag(double center, int lo, int hi, int step)
        : lo_(lo), step_(step), count_((hi - lo) / step + 1), center_(center)
    {
        const double k = std::round((center - lo) / step);
        first_ = static_cast<int>(std::clamp(k, 0.0, static_cast<double>(count_ - 1)));
        down_ = first_ - 1;
        up_ = first_ + 1;
    }

    bool next(int& value)
    {
        if (pending_first_) {
            pending_first_ = false;
            value = value_at(first_);
            return true;
        }
        const bool has_down = down_ >= 0;
        const bool has_up = up_ < count_;
        if (!has_down && !has_up) {
            return false;
        }
        if (has_down && (!has_up || distance(down_) <= distance(up_))) {
            value = value_at(down_--);
        }
        else {
            value = value_at(up_++);
        }
        return true;
    }

private:
    int value_at(int k) const { return lo_ + k * step_; }
    double distance(int k) const { return std::abs(value_at(k) - center_); }

    int lo_;
    int step_;
    int count_;
    double center_;
    int down_ = 0;
    int up_ = 0;
    int first_ = 0;
    bool pending_first_ = true;
};

}  // namespace intstbc::detail
