#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "streamreg/errors.hpp"

namespace streamreg {

/// One stream element: numeric feature vector plus real-valued target.
/// `seq` is the 1-based position in the stream, assigned after all row
/// filtering, so it always increases by exactly 1.
struct labeled_example {
    std::vector<double> features;
    double target = 0.0;
    std::int64_t seq = 0;
};

enum class target_transform { identity, log1p };
enum class missing_policy { skip_row, impute_mean };

/// How to turn a CSV file into a stream of labeled examples.
struct stream_spec {
    std::string path;
    /// Header name, or a 0-based column index given as digits ("8").
    std::string target_column;
    std::optional<std::int64_t> max_examples;
    /// 0-based positions among the data rows (header excluded), skipped before
    /// anything else happens to the stream.
    std::vector<std::int64_t> drop_indices;
    target_transform transform = target_transform::identity;
    missing_policy missing = missing_policy::skip_row;
    char delimiter = ',';
};

struct stream_load_report {
    std::int64_t rows_read = 0;     // data rows in the file
    std::int64_t rows_dropped = 0;  // removed via drop_indices
    std::int64_t rows_skipped = 0;  // removed by the missing policy / bad cells
    std::int64_t cells_imputed = 0; // filled under impute_mean
};

struct loaded_stream {
    std::vector<labeled_example> examples;
    std::vector<std::string> feature_names;
    std::string target_name;
    stream_load_report report;
};

/// Reads the whole file according to `spec`. Non-numeric columns are excluded
/// from the feature set (tree learners here consume numeric attributes only).
/// Throws io_error / config_error per the spec'd failure modes.
loaded_stream open_stream(const stream_spec& spec);

/// Running (min, max) of the targets observed so far.
class running_minmax {
public:
    void update(double y) {
        if (n_ == 0) {
            min_ = max_ = y;
        } else {
            if (y < min_) min_ = y;
            if (y > max_) max_ = y;
        }
        ++n_;
    }
    std::int64_t count() const { return n_; }
    double min() const {
        require_nonempty();
        return min_;
    }
    double max() const {
        require_nonempty();
        return max_;
    }

private:
    void require_nonempty() const {
        if (n_ == 0) throw empty_state_error("stream_stats queried before any example");
    }
    std::int64_t n_ = 0;
    double min_ = 0.0;
    double max_ = 0.0;
};

} // namespace streamreg
