#include "streamreg/adwin.hpp"

#include <cmath>

namespace streamreg {

adwin::adwin(adwin_config cfg) : cfg_(cfg) {
    rows_.emplace_back();
}

bool adwin::update(double value) {
    insert_bucket(value);
    compress();
    ++ticks_;
    if (ticks_ % cfg_.check_interval != 0 || width_ < cfg_.min_window) return false;
    return detect_and_shrink();
}

void adwin::insert_bucket(double value) {
    // Window-level Welford update before the bucket goes in.
    if (width_ > 0) {
        const double mean_prev = sum_ / static_cast<double>(width_);
        var_sum_ += static_cast<double>(width_) * (value - mean_prev) * (value - mean_prev) /
                    static_cast<double>(width_ + 1);
    }
    ++width_;
    sum_ += value;
    rows_[0].push_back({value, 0.0});
}

void adwin::compress() {
    for (std::size_t row = 0; row < rows_.size(); ++row) {
        if (rows_[row].size() <= static_cast<std::size_t>(cfg_.max_buckets)) break;
        if (row + 1 == rows_.size()) rows_.emplace_back();
        // Merge the two oldest buckets of this row into one of double size.
        const double n = std::pow(2.0, static_cast<double>(row));
        bucket a = rows_[row].front();
        rows_[row].pop_front();
        bucket b = rows_[row].front();
        rows_[row].pop_front();
        const double u1 = a.sum / n, u2 = b.sum / n;
        bucket merged;
        merged.sum = a.sum + b.sum;
        merged.var = a.var + b.var + n * n * (u1 - u2) * (u1 - u2) / (n + n);
        rows_[row + 1].push_back(merged);
    }
}

bool adwin::cut_significant(double n0, double n1, double u0, double u1) const {
    const double n = static_cast<double>(width_);
    const double diff = std::fabs(u0 / n0 - u1 / n1);
    const double v = var_sum_ / n;
    const double dd = std::log(2.0 * std::log(n) / cfg_.delta);
    const double min_len = static_cast<double>(cfg_.min_sub_window);
    const double m = 1.0 / (n0 - min_len + 1.0) + 1.0 / (n1 - min_len + 1.0);
    const double eps = std::sqrt(2.0 * m * v * dd) + (2.0 / 3.0) * dd * m;
    return diff > eps;
}

bool adwin::detect_and_shrink() {
    bool change = false;
    bool reduced = true;
    while (reduced) {
        reduced = false;
        double n0 = 0.0, u0 = 0.0;
        double n1 = static_cast<double>(width_), u1 = sum_;
        // Walk cuts from the oldest bucket towards the newest.
        bool stop = false;
        for (std::size_t row = rows_.size(); row-- > 0 && !stop;) {
            const double bucket_n = std::pow(2.0, static_cast<double>(row));
            for (const bucket& b : rows_[row]) {
                if (row == 0 && &b == &rows_[0].back()) break; // never cut off everything
                n0 += bucket_n;
                n1 -= bucket_n;
                u0 += b.sum;
                u1 -= b.sum;
                if (n0 >= cfg_.min_sub_window && n1 >= cfg_.min_sub_window &&
                    cut_significant(n0, n1, u0, u1)) {
                    change = true;
                    if (width_ > 0) drop_oldest_bucket();
                    reduced = true;
                    stop = true;
                    break;
                }
            }
        }
    }
    if (change) ++changes_;
    return change;
}

void adwin::drop_oldest_bucket() {
    // The oldest bucket lives at the front of the highest nonempty row.
    for (std::size_t row = rows_.size(); row-- > 0;) {
        if (rows_[row].empty()) continue;
        const double n = std::pow(2.0, static_cast<double>(row));
        bucket b = rows_[row].front();
        rows_[row].pop_front();
        const double mean_b = b.sum / n;
        const double w = static_cast<double>(width_);
        // Remove the bucket's contribution from the window aggregates.
        var_sum_ -= b.var;
        if (w - n > 0) {
            const double mean_rest = (sum_ - b.sum) / (w - n);
            var_sum_ -= n * (w - n) / w * (mean_b - mean_rest) * (mean_b - mean_rest);
        }
        if (var_sum_ < 0.0) var_sum_ = 0.0;
        width_ -= static_cast<std::int64_t>(n);
        sum_ -= b.sum;
        return;
    }
}

} // namespace streamreg
