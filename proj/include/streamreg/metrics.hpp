#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "streamreg/errors.hpp"

namespace streamreg {

/// Cumulative and trailing-window prequential regression metrics.
///
/// Cumulative MAE/RMSE/R^2 come from running sums; windowed metrics are
/// recomputed exactly from a ring buffer of the most recent (y_hat, y) pairs.
/// R^2 is NaN whenever the relevant target variance is zero.
class prequential_tracker {
public:
    explicit prequential_tracker(std::size_t window = 1000) : window_(window) {
        ring_.reserve(window_);
    }

    void record(double y_hat, double y) {
        const double e = y_hat - y;
        abs_err_sum_ += e < 0 ? -e : e;
        sq_err_sum_ += e * e;
        y_sum_ += y;
        y_sq_sum_ += y * y;
        ++n_;
        if (ring_.size() < window_) {
            ring_.emplace_back(y_hat, y);
        } else {
            ring_[head_] = {y_hat, y};
            head_ = (head_ + 1) % window_;
        }
    }

    std::int64_t count() const { return n_; }

    double mae() const {
        require_nonempty();
        return abs_err_sum_ / static_cast<double>(n_);
    }
    double rmse() const {
        require_nonempty();
        return std::sqrt(sq_err_sum_ / static_cast<double>(n_));
    }
    /// 1 - SSE / SST with the cumulative target mean; NaN when SST is 0.
    double r2() const {
        require_nonempty();
        const double sst = y_sq_sum_ - y_sum_ * y_sum_ / static_cast<double>(n_);
        if (!(sst > 0.0)) return std::numeric_limits<double>::quiet_NaN();
        return 1.0 - sq_err_sum_ / sst;
    }

    struct window_metrics {
        double mae = 0.0;
        double rmse = 0.0;
        double r2 = 0.0; // NaN sentinel when the window's targets are constant
    };

    /// Metrics over the trailing min(count, window) pairs.
    window_metrics windowed() const {
        require_nonempty();
        double abs_sum = 0.0, sq_sum = 0.0, ys = 0.0, yss = 0.0;
        for (const auto& [y_hat, y] : ring_) {
            const double e = y_hat - y;
            abs_sum += e < 0 ? -e : e;
            sq_sum += e * e;
            ys += y;
            yss += y * y;
        }
        const double k = static_cast<double>(ring_.size());
        window_metrics wm;
        wm.mae = abs_sum / k;
        wm.rmse = std::sqrt(sq_sum / k);
        const double sst = yss - ys * ys / k;
        wm.r2 = (sst > 0.0) ? 1.0 - sq_sum / sst : std::numeric_limits<double>::quiet_NaN();
        return wm;
    }

    std::size_t window_capacity() const { return window_; }

private:
    void require_nonempty() const {
        if (n_ == 0) throw empty_state_error("metrics queried before any record");
    }

    std::size_t window_;
    std::int64_t n_ = 0;
    double abs_err_sum_ = 0.0;
    double sq_err_sum_ = 0.0;
    double y_sum_ = 0.0;
    double y_sq_sum_ = 0.0;
    std::vector<std::pair<double, double>> ring_;
    std::size_t head_ = 0;
};

} // namespace streamreg
