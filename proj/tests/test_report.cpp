#include "catch_amalgamated.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rotorlab/fit.hpp"
#include "rotorlab/report.hpp"

using namespace rotorlab;
using Catch::Matchers::WithinAbs;

namespace {

Report sample_report() {
    Report rep;
    rep.metadata["tool"] = "rotorlab";
    for (int i = 0; i < 3; ++i) {
        ReportRow r;
        r.family = "cycle";
        r.graph = "cycle(" + std::to_string(5 + 2 * i) + ")";
        r.n = 5 + 2 * i;
        r.m = r.n;
        r.builder = "cycle_inward";
        r.vertex_cover_steps = 10 + i;
        if (i != 1) r.mc_vertex_mean = 1.0 / 3.0 + i;
        r.max_K = 123456.789;
        rep.rows.push_back(r);
    }
    rep.summary["slope"] = 2.0;
    return rep;
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("rotorlab_test_" + name);
}

}  // namespace

TEST_CASE("six significant digits") {
    CHECK(format6(1.0 / 3.0) == "0.333333");
    CHECK(format6(123456.789) == "123457");
    CHECK(format6(2.0) == "2");
    CHECK(round6(1.0 / 3.0) == 0.333333);
}

TEST_CASE("csv has a header plus one line per row") {
    const std::string csv = to_csv(sample_report());
    std::istringstream in(csv);
    std::vector<std::string> lines;
    for (std::string l; std::getline(in, l);) lines.push_back(l);
    REQUIRE(lines.size() == 4);
    CHECK(lines[0].rfind("family,graph,n,m,builder,start,vertex_cover_steps,edge_cover_steps", 0) == 0);
    CHECK(lines[0].find(",maxK,3maxK,") != std::string::npos);
    // Absent values are empty cells, integers print without decimals, names with commas are quoted.
    CHECK(lines[1].rfind("cycle,cycle(5),5,5,cycle_inward,0,10,,", 0) == 0);
    CHECK(lines[2].find(",,,,,,123457,") != std::string::npos);
}

TEST_CASE("csv round-trips values at six digits") {
    const Report rep = sample_report();
    std::istringstream in(to_csv(rep));
    const Report back = read_csv(in);
    REQUIRE(back.rows.size() == 3);
    CHECK(back.rows[0].vertex_cover_steps == 10u);
    CHECK_FALSE(back.rows[0].edge_cover_steps);
    CHECK_FALSE(back.rows[1].mc_vertex_mean);
    CHECK(*back.rows[0].mc_vertex_mean == round6(1.0 / 3.0));
    CHECK(back.rows[2].graph == "cycle(9)");
}

TEST_CASE("csv quoting") {
    Report rep = sample_report();
    rep.rows[0].graph = "torus(7,7)";
    rep.rows[0].status = "say \"hi\"";
    std::istringstream in(to_csv(rep));
    const Report back = read_csv(in);
    CHECK(back.rows[0].graph == "torus(7,7)");
    CHECK(back.rows[0].status == "say \"hi\"");
}

TEST_CASE("csv reader rejects malformed input") {
    std::istringstream empty("");
    CHECK_THROWS_AS(read_csv(empty), ParseError);
    std::istringstream header("a,b,c\n");
    CHECK_THROWS_AS(read_csv(header), ParseError);
    std::string csv = to_csv(sample_report());
    const auto pos = csv.find(",10,");
    csv.replace(pos, 4, ",1x,");
    std::istringstream bad(csv);
    CHECK_THROWS_AS(read_csv(bad), ParseError);
}

TEST_CASE("json round-trips to an equal report") {
    Report rep = sample_report();
    for (auto& r : rep.rows)
        if (r.mc_vertex_mean) r.mc_vertex_mean = round6(*r.mc_vertex_mean);
    rep.rows[0].max_K = round6(*rep.rows[0].max_K);
    rep.rows[1].max_K = round6(*rep.rows[1].max_K);
    rep.rows[2].max_K = round6(*rep.rows[2].max_K);
    const Report back = report_from_json(ordered_json::parse(to_json_text(rep)));
    CHECK(back == rep);
    const auto j = to_json(rep);
    CHECK(j["rows"][1]["mc_vertex_mean"].is_null());
    CHECK(j["rows"][0]["vertex_cover_steps"].is_number_unsigned());
    CHECK_THROWS_AS(report_from_json(ordered_json::parse(R"({"rows":[]})")), ParseError);
}

TEST_CASE("emit writes files and surfaces errors with the path") {
    const Report rep = sample_report();
    for (Format f : {Format::csv, Format::json}) {
        const auto path = temp_file(f == Format::csv ? "a.csv" : "a.json");
        emit(rep, f, path.string());
        const Report back = load_report(path.string(), f);
        CHECK(back.rows.size() == 3);
        std::filesystem::remove(path);
    }
    try {
        emit(rep, Format::csv, "/nonexistent/dir/out.csv");
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("/nonexistent/dir/out.csv") != std::string::npos);
    }
    CHECK_THROWS_AS(emit(Report{}, Format::csv, temp_file("empty.csv").string()), InvalidParameters);
    CHECK_THROWS_AS(load_report("/nonexistent/file.json", Format::json), IoError);
    CHECK(parse_format("csv") == Format::csv);
    CHECK_THROWS_AS(parse_format("xml"), InvalidParameters);
}

TEST_CASE("least squares recovers exact lines") {
    const auto f = least_squares({1, 2, 3, 4}, {3, 5, 7, 9});
    CHECK_THAT(f.slope, WithinAbs(2.0, 1e-12));
    CHECK_THAT(f.intercept, WithinAbs(1.0, 1e-12));
    CHECK_THAT(f.r2, WithinAbs(1.0, 1e-12));
    CHECK(f.points == 4);
    CHECK_THROWS_AS(least_squares({1}, {1}), InvalidParameters);
    CHECK_THROWS_AS(least_squares({1, 1}, {1, 2}), InvalidParameters);
    CHECK_THROWS_AS(least_squares({1, 2}, {1}), DimensionMismatch);
}

TEST_CASE("log-log fit and ratio bands") {
    std::vector<double> x{10, 20, 40, 80}, y;
    for (double v : x) y.push_back(3 * std::pow(v, 1.5));
    const auto f = loglog_fit(x, y);
    CHECK_THAT(f.slope, WithinAbs(1.5, 1e-12));
    CHECK_THAT(std::exp(f.intercept), WithinAbs(3.0, 1e-9));
    CHECK_THROWS_AS(loglog_fit({1, -1}, {1, 1}), InvalidParameters);

    std::vector<double> z;
    for (double v : x) z.push_back(7 * v * std::log(v));
    const auto band = ratio_band(x, z, 1.0);
    CHECK_THAT(band.spread(), WithinAbs(1.0, 1e-12));
    CHECK_THAT(band.min, WithinAbs(7.0, 1e-12));
    CHECK(ratio_band(x, z, 2.0).spread() > 1.5);
}
