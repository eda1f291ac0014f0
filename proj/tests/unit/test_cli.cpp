#include "doctest.h"

#include "eqstates/cli.hpp"
#include "eqstates/csv.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

using namespace eqs;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "eqstates");
    std::vector<char*> argv;
    for (auto& a : args) {
        argv.push_back(a.data());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& content)
{
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << content;
    return path;
}

} // namespace

TEST_CASE("number formatting and hashing")
{
    CHECK(csv_number(0.1) == "0.10000000000000001");
    CHECK(std::stod(csv_number(1.0 / 3.0)) == 1.0 / 3.0);
    CHECK(csv_number(2.0) == "2");
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(csv_header_comment("glue", 255, 7) == "# eqstates glue config_hash=00000000000000ff seed=7");
}

TEST_CASE("map and potential strings")
{
    CHECK(parse_map("doubling").kind() == MapSystem::Kind::doubling);
    CHECK(parse_map("mp:0.5").parameter() == 0.5);
    CHECK(parse_map("manneville_pomeau:0.25").kind() == MapSystem::Kind::manneville_pomeau);
    CHECK(parse_map("perturbed:0.3").kind() == MapSystem::Kind::perturbed);
    CHECK(parse_map("tabulated:0;1;2").degree() == 2);
    CHECK_THROWS_AS(parse_map("tent"), ValidationError);
    CHECK_THROWS_AS(parse_map("mp:abc"), ValidationError);
    CHECK_THROWS_AS(parse_map("mp:2"), ValidationError);
    const auto d = MapSystem::doubling();
    CHECK(parse_potential("constant:1.5", d)(0.2) == 1.5);
    CHECK(parse_potential("cosine:2", d)(0.0) == doctest::Approx(2.0));
    CHECK(parse_potential("geometric:1", d)(0.3) == doctest::Approx(-std::log(2.0)));
    CHECK(parse_potential("tabulated:1:1:0;1", d)(0.25) == doctest::Approx(0.5));
    try {
        parse_potential("banana", d);
        FAIL("no error");
    } catch (const ValidationError& e) {
        CHECK(e.field() == "potential");
    }
}

TEST_CASE("json config overlay and validation")
{
    const auto cfg = config_from_json(R"({"map": "mp:0.5", "sigma": [0.6, 0.9], "eps": 0.0625, "seed": 5})");
    CHECK(cfg.map == "mp:0.5");
    CHECK(cfg.sigma == std::vector<double>{0.6, 0.9});
    CHECK(cfg.eps == std::vector<double>{0.0625});
    CHECK(cfg.seed == 5);
    CHECK(cfg.n_max == ExperimentConfig{}.n_max);
    CHECK_THROWS_AS(config_from_json(R"({"sigmaa": 0.5})"), ValidationError);
    CHECK_THROWS_AS(config_from_json("[1,2]"), ValidationError);
    CHECK_THROWS_AS(config_from_json(R"({"n_max": "ten"})"), ValidationError);

    ExperimentConfig bad;
    bad.sigma = {1.5};
    try {
        validate("check", bad);
        FAIL("no error");
    } catch (const ValidationError& e) {
        CHECK(e.field() == "sigma");
    }
    ExperimentConfig big_eps;
    big_eps.eps = {0.3};
    CHECK_THROWS_AS(validate("pressure", big_eps), ValidationError);
    ExperimentConfig bad_a;
    bad_a.a = {1.0};
    CHECK_THROWS_AS(validate("extension", bad_a), ValidationError);
    CHECK_THROWS_AS(validate("nope", ExperimentConfig{}), ValidationError);

    ExperimentConfig a;
    ExperimentConfig b;
    b.output = "somewhere.csv";
    b.workers = 7;
    CHECK(a.hash() == b.hash());
    b.seed = 2;
    CHECK(a.hash() != b.hash());
}

TEST_CASE("exit codes")
{
    const auto ok = cli({"check", "--map", "doubling"});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("overall,true") != std::string::npos);

    const auto invalid = cli({"check", "--sigma", "1.5"});
    CHECK(invalid.code == 1);
    CHECK(invalid.err.find("sigma") != std::string::npos);

    const auto numerical = cli({"glue", "--tau-cap", "0", "--samples", "2"});
    CHECK(numerical.code == 2);

    CHECK(cli({"frobnicate"}).code == 1);
    CHECK(cli({}).code == 1);
}

TEST_CASE("command line overrides the config file")
{
    const auto path = temp_file("eqstates_cli_test.json", R"({"map": "mp:0.5", "sigma": [0.6], "n_max": 6})");
    const auto from_file = cli({"gap-report", "--config", path.string()});
    REQUIRE(from_file.code == 0);
    CHECK(from_file.out.find("\n0.59999999999999998,") != std::string::npos);
    const auto overridden = cli({"gap-report", "--config", path.string(), "--sigma", "0.9,0.99"});
    REQUIRE(overridden.code == 0);
    CHECK(overridden.out.find("\n0.59999999999999998,") == std::string::npos);
    CHECK(overridden.out.find("\n0.98999999999999999,") != std::string::npos);
    std::filesystem::remove(path);
}

TEST_CASE("reports are self-describing and deterministic")
{
    const std::regex header("^# eqstates ([a-z-]+) config_hash=[0-9a-f]{16} seed=[0-9]+\n");
    const std::vector<std::pair<std::string, std::string>> cases{
        {"pressure", R"({"map": "mp:0.5", "n_max": 6})"},
        {"decompose", R"({"map": "mp:0.5", "sigma": [0.6, 0.9], "samples": 300})"},
        {"glue", R"({"map": "perturbed:0.5", "samples": 5})"},
        {"transfer", R"({"grid_size": 64})"},
        {"extension", R"({"samples": 20})"},
        {"solenoid", R"({"samples": 10, "depth": 6})"},
        {"gap-report", R"({"map": "mp:0.5", "n_max": 6})"},
        {"check", R"({"samples": 20})"},
    };
    for (const auto& [sub, json] : cases) {
        CAPTURE(sub);
        const auto cfg = config_from_json(json);
        std::ostringstream a;
        std::ostringstream b;
        run_subcommand(sub, cfg, a);
        run_subcommand(sub, cfg, b);
        CHECK(a.str() == b.str());
        std::smatch m;
        const std::string text = a.str();
        REQUIRE(std::regex_search(text, m, header));
        CHECK(m[1] == sub);
        CHECK(text.find("config_hash=" + hex64(cfg.hash())) != std::string::npos);
    }
}

TEST_CASE("documented columns")
{
    auto columns = [](const std::string& sub, const std::string& json) {
        std::ostringstream out;
        run_subcommand(sub, config_from_json(json), out);
        std::istringstream in(out.str());
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line[0] != '#') {
                return line;
            }
        }
        return std::string();
    };
    CHECK(columns("gap-report", R"({"n_max": 5})") == "sigma,eps,n_max,p_full,p_bad,gap,holds");
    CHECK(columns("transfer", R"({"grid_size": 32})") == "node,h,nu,density");
    CHECK(columns("extension", R"({"samples": 5})") == "sigma,a,alpha,eps,bound,empirical_max");
    CHECK(columns("solenoid", R"({"samples": 5, "depth": 4})") == "theta,u,v,itinerary");
}

TEST_CASE("json output and output files")
{
    const auto path = std::filesystem::temp_directory_path() / "eqstates_cli_test_plans.json";
    const auto r = cli({"glue", "--samples", "2", "--format", "json", "-o", path.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str().find("\"plans\"") != std::string::npos);
    CHECK(buf.str().find("\"verified_max_distance\"") != std::string::npos);
    std::filesystem::remove(path);
    CHECK(cli({"transfer", "--format", "json"}).code == 1);
}

#ifdef EQSTATES_CLI_PATH
TEST_CASE("installed binary")
{
    const std::string cmd = std::string(EQSTATES_CLI_PATH) + " check --sigma 1.5 2>/dev/null";
    const int status = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(status) == 1);
}
#endif
