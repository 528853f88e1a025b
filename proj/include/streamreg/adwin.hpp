#pragma once

#include <cstdint>
#include <deque>
#include <vector>

namespace streamreg {

struct adwin_config {
    double delta = 0.002;   // confidence for the cut test
    int max_buckets = 5;    // buckets per exponential-histogram row
    int min_window = 16;    // no cut checks below this width
    int min_sub_window = 5; // each side of a tested cut needs this many
    int check_interval = 32;
};

/// Adaptive-windowing change detector over a stream of reals.
///
/// The window is kept as an exponential histogram: row i holds buckets
/// summarizing 2^i values each. On every check the bucket boundaries are
/// scanned as candidate cuts; if two subwindow means differ beyond the
/// confidence bound, the older part of the window is dropped and the update
/// reports a change.
class adwin {
public:
    explicit adwin(double delta) : adwin(adwin_config{.delta = delta}) {}
    explicit adwin(adwin_config cfg = {});

    /// Inserts a value; true when a distribution change was detected (the
    /// retained window is then the suffix after the best cut).
    bool update(double value);

    std::int64_t width() const { return width_; }
    double mean() const { return width_ > 0 ? sum_ / static_cast<double>(width_) : 0.0; }
    double variance() const {
        return width_ > 0 ? var_sum_ / static_cast<double>(width_) : 0.0;
    }
    std::int64_t detected_changes() const { return changes_; }

private:
    struct bucket {
        double sum = 0.0;
        double var = 0.0; // internal sum of squared deviations
    };

    void insert_bucket(double value);
    void compress();
    bool detect_and_shrink();
    void drop_oldest_bucket();
    bool cut_significant(double n0, double n1, double u0, double u1) const;

    adwin_config cfg_;
    // rows_[i] holds buckets of size 2^i, newest at the back of each row.
    std::vector<std::deque<bucket>> rows_;
    std::int64_t width_ = 0;
    double sum_ = 0.0;
    double var_sum_ = 0.0; // total sum of squared deviations of the window
    std::int64_t ticks_ = 0;
    std::int64_t changes_ = 0;
};

} // namespace streamreg
