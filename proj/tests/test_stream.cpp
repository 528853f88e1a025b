#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "streamreg/stream.hpp"

using namespace streamreg;

namespace {

struct temp_csv {
    std::string path;
    explicit temp_csv(const std::string& content, const char* name) {
        path = (std::filesystem::temp_directory_path() / name).string();
        std::ofstream out(path, std::ios::binary);
        out << content;
    }
    ~temp_csv() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("drop indices filter rows before seq assignment") {
    temp_csv f("a,b,y\n1,2,10\n3,4,20\n5,6,30\n", "sr_drop.csv");
    stream_spec spec;
    spec.path = f.path;
    spec.target_column = "y";
    spec.drop_indices = {1};
    auto s = open_stream(spec);
    REQUIRE(s.examples.size() == 2);
    CHECK(s.examples[0].seq == 1);
    CHECK(s.examples[1].seq == 2);
    CHECK(s.examples[0].target == 10.0);
    CHECK(s.examples[1].target == 30.0);
    CHECK(s.report.rows_dropped == 1);
}

TEST_CASE("max examples caps the stream") {
    std::string content = "x,y\n";
    for (int i = 0; i < 50; ++i) content += std::to_string(i) + "," + std::to_string(2 * i) + "\n";
    temp_csv f(content, "sr_cap.csv");
    stream_spec spec;
    spec.path = f.path;
    spec.target_column = "y";
    spec.max_examples = 7;
    auto s = open_stream(spec);
    CHECK(s.examples.size() == 7);
    CHECK(s.examples.back().seq == 7);
}

TEST_CASE("log1p transform") {
    temp_csv f("x,y\n1,0\n2,1\n", "sr_log.csv");
    stream_spec spec;
    spec.path = f.path;
    spec.target_column = "y";
    spec.transform = target_transform::log1p;
    auto s = open_stream(spec);
    CHECK(s.examples[0].target == 0.0); // log1p(0) = 0
    CHECK(s.examples[1].target == doctest::Approx(std::log(2.0)));
}

TEST_CASE("skip-row policy counts and removes bad rows") {
    temp_csv f("x,y\n1,10\n?,20\n3,oops\n4,40\n", "sr_skip.csv");
    stream_spec spec;
    spec.path = f.path;
    spec.target_column = "y";
    auto s = open_stream(spec);
    REQUIRE(s.examples.size() == 2);
    CHECK(s.report.rows_skipped == 2);
    // count invariant: yielded = rows - dropped - skipped
    CHECK(static_cast<std::int64_t>(s.examples.size()) ==
          s.report.rows_read - s.report.rows_dropped - s.report.rows_skipped);
}

TEST_CASE("impute-mean fills feature gaps with the running mean") {
    temp_csv f("x,y\n2,10\n4,20\n?,30\n6,40\n", "sr_imp.csv");
    stream_spec spec;
    spec.path = f.path;
    spec.target_column = "y";
    spec.missing = missing_policy::impute_mean;
    auto s = open_stream(spec);
    REQUIRE(s.examples.size() == 4);
    CHECK(s.examples[2].features[0] == doctest::Approx(3.0)); // mean of {2, 4}
    CHECK(s.report.cells_imputed == 1);
}

TEST_CASE("non-numeric columns are excluded from features") {
    temp_csv f("date,x,y\n2006-12-16,1.5,10\n2006-12-17,2.5,20\n", "sr_cols.csv");
    stream_spec spec;
    spec.path = f.path;
    spec.target_column = "y";
    auto s = open_stream(spec);
    REQUIRE(s.feature_names.size() == 1);
    CHECK(s.feature_names[0] == "x");
    CHECK(s.examples[0].features.size() == 1);
}

TEST_CASE("target column by index; semicolon delimiter") {
    temp_csv f("a;b;c\n1;2;3\n4;5;6\n", "sr_idx.csv");
    stream_spec spec;
    spec.path = f.path;
    spec.target_column = "2";
    spec.delimiter = ';';
    auto s = open_stream(spec);
    CHECK(s.target_name == "c");
    CHECK(s.examples[0].target == 3.0);
    CHECK(s.examples[0].features.size() == 2);
}

TEST_CASE("replay yields a bitwise-identical stream") {
    temp_csv f("x,y\n0.1,1.25\n0.2,2.5\n0.3,3.75\n", "sr_replay.csv");
    stream_spec spec;
    spec.path = f.path;
    spec.target_column = "y";
    auto a = open_stream(spec);
    auto b = open_stream(spec);
    REQUIRE(a.examples.size() == b.examples.size());
    for (std::size_t i = 0; i < a.examples.size(); ++i) {
        CHECK(a.examples[i].target == b.examples[i].target);
        CHECK(a.examples[i].features == b.examples[i].features);
        CHECK(a.examples[i].seq == b.examples[i].seq);
    }
}

TEST_CASE("error cases") {
    stream_spec spec;
    spec.path = "/nonexistent/file.csv";
    spec.target_column = "y";
    CHECK_THROWS_AS(open_stream(spec), io_error);

    temp_csv f("a,b\n1,2\n", "sr_err.csv");
    stream_spec bad_col;
    bad_col.path = f.path;
    bad_col.target_column = "zzz";
    CHECK_THROWS_AS(open_stream(bad_col), config_error);

    stream_spec dup;
    dup.path = f.path;
    dup.target_column = "b";
    dup.drop_indices = {0, 0};
    CHECK_THROWS_AS(open_stream(dup), config_error);

    stream_spec zero_cap;
    zero_cap.path = f.path;
    zero_cap.target_column = "b";
    zero_cap.max_examples = 0;
    CHECK_THROWS_AS(open_stream(zero_cap), config_error);
}

TEST_CASE("running minmax") {
    running_minmax mm;
    CHECK_THROWS_AS(mm.min(), empty_state_error);
    mm.update(2.0);
    CHECK(mm.min() == 2.0);
    CHECK(mm.max() == 2.0);

    running_minmax mm2;
    for (double y : {3.0, 1.0, 2.0}) mm2.update(y);
    CHECK(mm2.min() == 1.0);
    CHECK(mm2.max() == 3.0);

    running_minmax mm3;
    mm3.update(-1.0);
    mm3.update(-1.0);
    CHECK(mm3.min() == -1.0);
    CHECK(mm3.max() == -1.0);
}
