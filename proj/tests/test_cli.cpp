#include "hbm/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <sstream>
#include <string>
#include <vector>

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome call(std::vector<std::string> args) {
    args.insert(args.begin(), "hbm");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = hbm::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> v;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) v.push_back(l);
    return v;
}

std::vector<std::string> fields(const std::string& line) {
    std::vector<std::string> v;
    std::istringstream in(line);
    for (std::string f; std::getline(in, f, ',');) v.push_back(f);
    return v;
}

}  // namespace

TEST_CASE("kernel subcommand") {
    const Outcome o = call({"kernel", "--d", "3", "--t", "1", "--r", "1"});
    REQUIRE(o.code == 0);
    const auto l = lines(o.out);
    REQUIRE(l.size() == 2);
    CHECK(l[0] == "d,t,r,value,log_value");
    const auto f = fields(l[1]);
    CHECK(f[0] == "3");
    CHECK(f[1] == "1");
    CHECK(std::stod(f[3]) == doctest::Approx(0.019875748452065723).epsilon(1e-14));
}

TEST_CASE("density and tail subcommands") {
    const Outcome d = call({"density", "--d", "2,3", "--t", "1", "--r", "0.5,1"});
    REQUIRE(d.code == 0);
    CHECK(lines(d.out).size() == 5);

    const Outcome t = call({"tail", "--d", "2", "--t", "100", "--x", "0"});
    REQUIRE(t.code == 0);
    const auto l = lines(t.out);
    CHECK(l[0] == "d,t,x,value,error_estimate,method");
    const auto f = fields(l[1]);
    CHECK(std::stod(f[3]) > 0.5);
    CHECK(std::stod(f[3]) < 0.6);
    CHECK(f[5] == "even_decomposition");

    const Outcome direct = call({"tail", "--d", "3", "--t", "1", "--x-range", "-1:1:0.5", "--method", "direct"});
    REQUIRE(direct.code == 0);
    CHECK(lines(direct.out).size() == 6);
    CHECK(fields(lines(direct.out)[1])[5] == "direct_kernel_quadrature");
}

TEST_CASE("sweep subcommand") {
    const Outcome o = call({"sweep", "--d", "3", "--t-log-range", "10:1000:5"});
    REQUIRE(o.code == 0);
    const auto l = lines(o.out);
    REQUIRE(l.size() == 6);
    CHECK(l[0] == "d,t,delta,argmax_x,evaluations");
    CHECK(fields(l[5])[1] == "1000");
    double prev = 1.0;
    for (std::size_t i = 1; i < l.size(); ++i) {
        const double delta = std::stod(fields(l[i])[2]);
        CHECK(delta > 0.0);
        CHECK(delta < prev);
        prev = delta;
    }
}

TEST_CASE("simulate output is byte-identical across runs") {
    const std::vector<std::string> args{"simulate", "--d", "3", "--t", "1", "--x", "-1,0,1",
                                        "--paths", "500", "--step", "0.01", "--seed", "18446744073709551615"};
    const Outcome a = call(args);
    const Outcome b = call(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    const auto l = lines(a.out);
    REQUIRE(l.size() == 4);
    CHECK(l[0] == "d,t,x,estimate,standard_error,paths,seed");
    CHECK(fields(l[1])[5] == "500");
    CHECK(fields(l[1])[6] == "18446744073709551615");
}

TEST_CASE("json output") {
    const Outcome o = call({"tail", "--d", "3", "--t", "1,2", "--x", "0", "--format", "json"});
    REQUIRE(o.code == 0);
    const auto doc = nlohmann::json::parse(o.out);
    CHECK(doc["metadata"]["tool"] == "hbm");
    CHECK(doc["metadata"]["config"]["subcommand"] == "tail");
    REQUIRE(doc["rows"].size() == 2);
    CHECK(doc["rows"][1]["t"] == 2.0);
    CHECK(doc["rows"][0]["method"] == "closed_form_d3");
    CHECK(doc["rows"][0]["value"].get<double>() == doctest::Approx(0.86770144583642383).epsilon(1e-14));
}

TEST_CASE("verify subcommand") {
    const Outcome o = call({"verify", "identities"});
    CHECK(o.code == 0);
    CHECK(o.out.find("FAIL") == std::string::npos);
    CHECK(o.out.find("identities: 19/19 passed") != std::string::npos);
    CHECK(call({"verify", "cross-oracle", "--d", "5", "--t", "2"}).code == 0);
}

TEST_CASE("exit codes") {
    CHECK(call({}).code == 2);
    CHECK(call({"kernel", "--d", "1", "--t", "1", "--r", "1"}).code == 2);
    CHECK(call({"kernel", "--d", "3", "--t", "0", "--r", "1"}).code == 2);
    CHECK(call({"kernel", "--d", "3", "--t", "1"}).code == 2);
    CHECK(call({"tail", "--d", "3", "--t", "1", "--x", "0", "--format", "xml"}).code == 2);
    CHECK(call({"tail", "--d", "8", "--t", "1", "--x", "0", "--method", "direct"}).code == 2);
    CHECK(call({"verify", "nonsense"}).code == 2);
    CHECK(call({"simulate", "--d", "3", "--t", "1", "--scheme", "milstein"}).code == 2);
    const Outcome bad = call({"tail", "--d", "3", "--t", "abc", "--x", "0"});
    CHECK(bad.code == 2);
    CHECK_FALSE(bad.err.empty());
    // four nested difference levels lose the kernel near the origin
    const Outcome numeric = call({"kernel", "--d", "10", "--t", "50", "--r", "0.001"});
    CHECK(numeric.code == 1);
    CHECK(numeric.err.find("numerical failure") != std::string::npos);
}

TEST_CASE("argument helpers") {
    using namespace hbm::cli;
    CHECK(parse_dimensions("3") == std::vector<int>{3});
    CHECK(parse_dimensions("2,3,5") == std::vector<int>{2, 3, 5});
    CHECK(parse_dimensions("2..7") == std::vector<int>{2, 3, 4, 5, 6, 7});
    CHECK_THROWS_AS(parse_dimensions("7..2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_dimensions("1,2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_dimensions("x"), std::invalid_argument);

    const auto t = parse_log_range("10:1000:5");
    REQUIRE(t.size() == 5);
    CHECK(t.front() == 10.0);
    CHECK(t[2] == doctest::Approx(100.0).epsilon(1e-15));
    CHECK(t.back() == 1000.0);
    CHECK_THROWS_AS(parse_log_range("0:10:3"), std::invalid_argument);

    const auto x = parse_linear_range("-1:1:0.5");
    CHECK(x == std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0});
    CHECK_THROWS_AS(parse_linear_range("1:0:0.5"), std::invalid_argument);

    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1e-300) == "1e-300");
    CHECK(format_number(100.0) == "100");
}
