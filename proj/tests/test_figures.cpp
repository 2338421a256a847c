#include <catch2/catch_amalgamated.hpp>

#include <charconv>
#include <cmath>
#include <string>
#include <vector>

#include "qbm/figures.hpp"

using namespace qbm;

namespace {

std::vector<std::string> split(const std::string& line, char sep = ',') {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t next = line.find(sep, pos);
        if (next == std::string::npos) {
            out.push_back(line.substr(pos));
            return out;
        }
        out.push_back(line.substr(pos, next - pos));
        pos = next + 1;
    }
}

double parse(const std::string& s) {
    double v = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), v);
    return v;
}

}  // namespace

TEST_CASE("format_double round-trips exactly") {
    for (double v : {1.0 / 3.0, 0.05, 1e-300, -2.5, 2.0, 0.0, -1.0 / qbm::pi}) {
        const std::string s = format_double(v);
        double back = 0.0;
        std::from_chars(s.data(), s.data() + s.size(), back);
        CHECK(back == v);
    }
    CHECK(format_double(2.0) == "2");
}

TEST_CASE("velocity curve table: header, gap row, zero crossing") {
    const ParticleConfig cfg{1.0, 1.0, 1.0};
    const SweepGrid grid{SweepVariable::TauOverX, 0.05, 4.0, 80, SweepScale::Linear};
    const CsvTable t = fig1_table(cfg, grid);
    CHECK(t.header == "tau_over_x,value");
    REQUIRE(t.rows.size() == 80);

    int gaps = 0;
    int crossings = 0;
    double prev = -1.0;
    bool have_prev = false;
    for (const auto& row : t.rows) {
        const auto cells = split(row);
        REQUIRE(cells.size() == 2);
        if (cells[1].empty()) {
            ++gaps;
            CHECK(parse(cells[0]) == Catch::Approx(2.0).margin(1e-12));
            continue;
        }
        const double v = parse(cells[1]);
        if (have_prev && prev < 0.0 && v > 0.0) {
            ++crossings;
            // the sign change brackets tau = 2 sqrt(2)
            CHECK(parse(cells[0]) > 2.0 * std::sqrt(2.0) - 0.051);
            CHECK(parse(cells[0]) < 2.0 * std::sqrt(2.0) + 0.051);
        }
        prev = v;
        have_prev = true;
    }
    CHECK(gaps == 1);  // the tau = 2x grid point
    CHECK(crossings == 1);
}

TEST_CASE("figure output is byte-identical across calls") {
    const ParticleConfig cfg{1.0, 1.0, 1.0};
    const SweepGrid grid{SweepVariable::TauOverX, 0.05, 4.0, 41, SweepScale::Linear};
    CHECK(fig1_table(cfg, grid).str() == fig1_table(cfg, grid).str());
    CHECK(fig2_table(cfg, grid).str() == fig2_table(cfg, grid).str());

    const std::string csv = fig1_table(cfg, grid).str();
    CHECK(csv.back() == '\n');
    CHECK(csv.find('\r') == std::string::npos);
}

TEST_CASE("relative position curve is finite at the round-trip point") {
    const ParticleConfig cfg{1.0, 1.0, 1.0};
    const SweepGrid grid{SweepVariable::TauOverX, 1.0, 3.0, 3, SweepScale::Linear};
    const CsvTable t = fig2_table(cfg, grid);
    REQUIRE(t.rows.size() == 3);
    const auto mid = split(t.rows[1]);
    CHECK(parse(mid[0]) == 2.0);
    CHECK_THAT(parse(mid[1]), Catch::Matchers::WithinRel(-1.0 / pi, 1e-12));
}

TEST_CASE("smeared curve table stays finite through the locus") {
    const ParticleConfig cfg{1.0, 1.0, 1.0};
    const SweepGrid grid{SweepVariable::TauOverX, 1.9, 2.1, 3, SweepScale::Linear};
    const CsvTable t = fig3_table(cfg, {0.1, 0.05}, grid);
    CHECK(t.header == "tau_over_x,value,sigma_over_x");
    REQUIRE(t.rows.size() == 6);
    for (const auto& row : t.rows) {
        const auto cells = split(row);
        REQUIRE(cells.size() == 3);
        CHECK_FALSE(cells[1].empty());
        CHECK(std::isfinite(parse(cells[1])));
    }
    // blocks are grouped by sigma in the order requested
    CHECK(split(t.rows[0])[2] == "0.1");
    CHECK(split(t.rows[5])[2] == "0.05");
}

TEST_CASE("comparison table: shared locus, late-time split") {
    const EmParticleConfig cfg{1.0, 1.0, 1.0};
    const SweepGrid grid{SweepVariable::TauOverX, 0.0, 2.0, 2, SweepScale::Linear};
    // degenerate two-point grid hits tau = 0 and the singular tau = 2x
    const CsvTable t = compare_em_table(cfg, grid);
    CHECK(t.header == "tau_over_x,scalar,em_perp,em_parallel");
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0] == "0,0,0,0");
    CHECK(t.rows[1] == "2,,,");

    const SweepGrid late{SweepVariable::TauOverX, 1e4, 2e4, 2, SweepScale::Linear};
    const auto first = split(compare_em_table(cfg, late).rows[0]);
    CHECK_THAT(parse(first[2]), Catch::Matchers::WithinRel(1.0 / (4.0 * pi * pi), 1e-3));
    CHECK(std::abs(parse(first[3])) < 1e-3 * parse(first[2]));
}
