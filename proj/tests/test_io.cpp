#include "doctest.h"

#include <cmath>

#include "rbm/json_io.hpp"

using namespace rbm;
using rbm::io::json;

TEST_CASE("parse model json: happy path") {
    const json j = {{"sigma1", 1.0}, {"sigma2", 1.0}, {"rho", 0.0},  {"mu1", -1.0},
                    {"mu2", -3.0},   {"r1", 0.5},     {"r2", 4.0},   {"wedge", "three_quarter"}};
    const RawParams r = io::parse_raw_params(j);
    CHECK(r.mu2 == -3.0);
    CHECK(r.wedge == Wedge::ThreeQuarter);
    const ModelParams m = validate_params(r);
    CHECK(m.beta == doctest::Approx(kPi / 2));
}

TEST_CASE("parse model json: unknown and missing keys rejected") {
    json j = {{"sigma1", 1.0}, {"sigma2", 1.0}, {"rho", 0.0}, {"mu1", -1.0},
              {"mu2", -3.0},   {"r1", 0.5},     {"r2", 4.0}};
    json extra = j;
    extra["drift"] = 1.0;
    CHECK_THROWS_AS(io::parse_raw_params(extra), io::ParseError);
    json missing = j;
    missing.erase("r2");
    CHECK_THROWS_AS(io::parse_raw_params(missing), io::ParseError);
    json badwedge = j;
    badwedge["wedge"] = "half";
    CHECK_THROWS_AS(io::parse_raw_params(badwedge), io::ParseError);
    json notnum = j;
    notnum["rho"] = "zero";
    CHECK_THROWS_AS(io::parse_raw_params(notnum), io::ParseError);
}

TEST_CASE("wedge defaults to three_quarter when omitted") {
    const json j = {{"sigma1", 1.0}, {"sigma2", 1.0}, {"rho", 0.0}, {"mu1", -1.0},
                    {"mu2", -3.0},   {"r1", 0.5},     {"r2", 4.0}};
    CHECK(io::parse_raw_params(j).wedge == Wedge::ThreeQuarter);
}

TEST_CASE("round12 is idempotent and trims noise digits") {
    CHECK(io::round12(0.0) == 0.0);
    const double x = 0.1 + 0.2;  // 0.30000000000000004
    CHECK(io::round12(x) == 0.3);
    CHECK(io::round12(io::round12(1.0 / 3.0)) == io::round12(1.0 / 3.0));
}

TEST_CASE("dump is key-sorted and stable") {
    json j;
    j["zeta"] = 1;
    j["alpha"] = 2;
    j["mid"] = json{{"b", 1}, {"a", 2}};
    const std::string s1 = io::dump_sorted(j);
    const std::string s2 = io::dump_sorted(j);
    CHECK(s1 == s2);
    CHECK(s1.find("alpha") < s1.find("mid"));
    CHECK(s1.find("mid") < s1.find("zeta"));
    CHECK(s1.back() == '\n');
}
