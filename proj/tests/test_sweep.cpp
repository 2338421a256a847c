#include <catch2/catch_amalgamated.hpp>

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "qbm/sweep.hpp"

using qbm::parallel_for_index;
using qbm::SweepGrid;
using qbm::SweepScale;
using qbm::SweepVariable;

TEST_CASE("linear grid hits both endpoints exactly") {
    SweepGrid g{SweepVariable::TauOverX, 0.05, 4.0, 80, SweepScale::Linear};
    const std::vector<double> pts = g.points();
    REQUIRE(pts.size() == 80);
    CHECK(pts.front() == 0.05);
    CHECK(pts.back() == 4.0);
    for (std::size_t i = 1; i < pts.size(); ++i) {
        CHECK(pts[i] > pts[i - 1]);
        CHECK_THAT(pts[i] - pts[i - 1], Catch::Matchers::WithinAbs(0.05, 1e-12));
    }
}

TEST_CASE("log grid spaces points uniformly in the logarithm") {
    SweepGrid g{SweepVariable::SigmaOverX, 0.01, 1.0, 5, SweepScale::Log};
    const std::vector<double> pts = g.points();
    REQUIRE(pts.size() == 5);
    CHECK(pts.front() == 0.01);
    CHECK(pts.back() == 1.0);
    for (std::size_t i = 1; i < pts.size(); ++i)
        CHECK_THAT(pts[i] / pts[i - 1], Catch::Matchers::WithinRel(std::pow(10.0, 0.5), 1e-12));
}

TEST_CASE("grid validation") {
    CHECK_THROWS_AS((SweepGrid{SweepVariable::TauOverX, 1.0, 1.0, 10, SweepScale::Linear}.points()),
                    std::domain_error);
    CHECK_THROWS_AS((SweepGrid{SweepVariable::TauOverX, 0.0, 1.0, 1, SweepScale::Linear}.points()),
                    std::domain_error);
    CHECK_THROWS_AS((SweepGrid{SweepVariable::TauOverX, 0.0, 1.0, 10, SweepScale::Log}.points()),
                    std::domain_error);
}

TEST_CASE("parallel map fills every slot in order") {
    const std::size_t n = 1000;
    std::vector<double> out(n, -1.0);
    parallel_for_index(n, [&](std::size_t i) { out[i] = std::sqrt(static_cast<double>(i)); });
    for (std::size_t i = 0; i < n; ++i) CHECK(out[i] == std::sqrt(static_cast<double>(i)));
}

TEST_CASE("parallel map propagates exceptions") {
    std::atomic<int> done{0};
    auto worker = [&](std::size_t i) {
        if (i == 7) throw std::runtime_error("boom");
        done.fetch_add(1);
    };
    CHECK_THROWS_AS(parallel_for_index(64, worker), std::runtime_error);
}

TEST_CASE("zero-size map is a no-op") {
    bool touched = false;
    parallel_for_index(0, [&](std::size_t) { touched = true; });
    CHECK_FALSE(touched);
}
