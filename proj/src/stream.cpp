#include "streamreg/stream.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <unordered_set>

namespace streamreg {
namespace {

std::vector<std::string> split_line(const std::string& line, char delim) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == delim) {
            cells.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    cells.push_back(cur);
    return cells;
}

std::string trimmed(const std::string& s) {
    auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

bool is_missing_marker(const std::string& cell) {
    static const std::unordered_set<std::string> markers = {
        "", "?", "NA", "N/A", "na", "nan", "NaN", "NAN", "null", "NULL"};
    return markers.count(trimmed(cell)) > 0;
}

// Parses a numeric cell; returns nullopt for anything that is not a finite number.
std::optional<double> parse_numeric(const std::string& cell) {
    const std::string t = trimmed(cell);
    if (t.empty()) return std::nullopt;
    const char* begin = t.data();
    const char* end = begin + t.size();
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) return std::nullopt;
    if (!std::isfinite(value)) return std::nullopt;
    return value;
}

} // namespace

loaded_stream open_stream(const stream_spec& spec) {
    if (spec.max_examples && *spec.max_examples <= 0)
        throw config_error("max_examples must be > 0 when present");
    {
        std::unordered_set<std::int64_t> uniq(spec.drop_indices.begin(), spec.drop_indices.end());
        if (uniq.size() != spec.drop_indices.size())
            throw config_error("drop_indices must be distinct");
    }

    std::ifstream in(spec.path);
    if (!in) throw io_error("cannot open stream file: " + spec.path);

    std::string line;
    if (!std::getline(in, line)) throw io_error("stream file has no header row: " + spec.path);
    const std::vector<std::string> header = split_line(line, spec.delimiter);

    // Resolve the target column: exact header match first, then digits as index.
    std::int64_t target_idx = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (trimmed(header[i]) == spec.target_column) {
            target_idx = static_cast<std::int64_t>(i);
            break;
        }
    }
    if (target_idx < 0 && !spec.target_column.empty() &&
        std::all_of(spec.target_column.begin(), spec.target_column.end(),
                    [](unsigned char c) { return std::isdigit(c); })) {
        target_idx = std::stoll(spec.target_column);
    }
    if (target_idx < 0 || target_idx >= static_cast<std::int64_t>(header.size()))
        throw config_error("target column not found: '" + spec.target_column + "'");

    // Read all data rows first; column classification needs a probe window.
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        rows.push_back(split_line(line, spec.delimiter));
    }

    loaded_stream out;
    out.report.rows_read = static_cast<std::int64_t>(rows.size());
    out.target_name = trimmed(header[target_idx]);

    // A column is a feature when its first non-missing cell within the probe
    // window parses as a number. Date/text columns drop out here.
    const std::size_t probe = std::min<std::size_t>(rows.size(), 100);
    std::vector<std::size_t> feature_cols;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (static_cast<std::int64_t>(c) == target_idx) continue;
        bool numeric = false;
        for (std::size_t rix = 0; rix < probe; ++rix) {
            if (c >= rows[rix].size() || is_missing_marker(rows[rix][c])) continue;
            numeric = parse_numeric(rows[rix][c]).has_value();
            break;
        }
        if (numeric) feature_cols.push_back(c);
    }
    for (std::size_t c : feature_cols) out.feature_names.push_back(trimmed(header[c]));

    std::unordered_set<std::int64_t> drop(spec.drop_indices.begin(), spec.drop_indices.end());

    // Running per-feature means for impute_mean.
    std::vector<double> col_sum(feature_cols.size(), 0.0);
    std::vector<std::int64_t> col_n(feature_cols.size(), 0);

    std::int64_t seq = 0;
    for (std::size_t rix = 0; rix < rows.size(); ++rix) {
        if (spec.max_examples && seq >= *spec.max_examples) break;
        if (drop.count(static_cast<std::int64_t>(rix))) {
            ++out.report.rows_dropped;
            continue;
        }
        const auto& cells = rows[rix];
        if (static_cast<std::size_t>(target_idx) >= cells.size()) {
            ++out.report.rows_skipped;
            continue;
        }

        auto target = parse_numeric(cells[target_idx]);
        if (!target) {
            ++out.report.rows_skipped; // target is never imputed
            continue;
        }
        double y = *target;
        if (spec.transform == target_transform::log1p) {
            if (y <= -1.0) {
                ++out.report.rows_skipped;
                continue;
            }
            y = std::log1p(y);
        }

        std::vector<double> feats(feature_cols.size(), 0.0);
        bool skip = false;
        for (std::size_t j = 0; j < feature_cols.size(); ++j) {
            const std::size_t c = feature_cols[j];
            std::optional<double> v =
                c < cells.size() ? parse_numeric(cells[c]) : std::nullopt;
            if (!v) {
                if (spec.missing == missing_policy::skip_row || col_n[j] == 0) {
                    skip = true;
                    break;
                }
                feats[j] = col_sum[j] / static_cast<double>(col_n[j]);
                ++out.report.cells_imputed;
            } else {
                feats[j] = *v;
            }
        }
        if (skip) {
            ++out.report.rows_skipped;
            continue;
        }

        for (std::size_t j = 0; j < feature_cols.size(); ++j) {
            col_sum[j] += feats[j];
            ++col_n[j];
        }
        out.examples.push_back({std::move(feats), y, ++seq});
    }
    return out;
}

} // namespace streamreg
