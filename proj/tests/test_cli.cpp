#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hardycheck/cli.hpp"

using namespace hardycheck;

namespace {

struct Outcome {
    int code = 0;
    std::string out;
    std::string err;
};

Outcome call(std::vector<std::string> args) {
    std::ostringstream out, err;
    Outcome o;
    o.code = cli::run(std::move(args), out, err);
    o.out = out.str();
    o.err = err.str();
    return o;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::filesystem::path scratch_dir(const std::string& name) {
    auto d = std::filesystem::temp_directory_path() / ("hardycheck_cli_" + name);
    std::filesystem::remove_all(d);
    std::filesystem::create_directories(d);
    return d;
}

} // namespace

TEST_CASE("successful subcommands exit 0 with a JSON report", "[cli]") {
    const std::vector<std::vector<std::string>> cases = {
        {"hardy-max"},
        {"ledger", "--theta", "0.7"},
        {"generalized", "--theta", "1.5707963267948966", "--alpha", "1.0471975511965976", "--beta", "0.52359877559829882"},
        {"generalized", "--theta", "0.9", "--alpha", "1.0", "--beta", "0.5"},
        {"sweep", "--theta-list", "0.6,1.5707963267948966", "--steps", "20"},
        {"wxhh", "--tau1", "0.8", "--tau2", "0.6"},
        {"lhv", "--theta", "0.6"},
        {"lhv", "--theta", "1.0", "--alpha", "0.9", "--beta", "0.4"},
        {"povm", "--alpha", "0.9", "--beta", "0.4", "--random", "50", "--seed", "3"},
    };
    for (const auto& args : cases) {
        Outcome o = call(args);
        INFO(args.front() << ": " << o.err);
        REQUIRE(o.code == 0);
        json j = json::parse(o.out);
        CHECK(j.at("tool") == cli::tool_version);
        CHECK(j.at("command") == args.front());
        CHECK(j.contains("tolerances"));
    }
}

TEST_CASE("hardy-max reports the closed-form maximum", "[cli]") {
    json j = json::parse(call({"hardy-max"}).out);
    const double p = j.at("p_max").get<double>();
    CHECK(std::abs(p - std::pow((std::sqrt(5.0) - 1.0) / 2.0, 5.0)) <= 1e-9);
}

TEST_CASE("failed invariants exit 1 and still write the report", "[cli]") {
    // At theta = 0 the state is a product state and the contradiction claim cannot hold.
    Outcome o = call({"ledger", "--theta", "0"});
    CHECK(o.code == 1);
    CHECK(json::accept(o.out));
    CHECK_FALSE(o.err.empty());
}

TEST_CASE("invalid input exits 2", "[cli][errors]") {
    const std::vector<std::vector<std::string>> cases = {
        {},
        {"bogus"},
        {"ledger"},
        {"ledger", "--theta", "abc"},
        {"ledger", "--theta", "2.0"},
        {"generalized", "--theta", "1.0", "--alpha", "0", "--beta", "0.3"},
        {"generalized", "--theta", "1.0", "--alpha", "1.0", "--beta", "-0.5707963267948966"},
        {"sweep", "--theta-list", "1.0", "--steps", "0"},
        {"sweep", "--theta-list", "1.0,x", "--steps", "4"},
        {"sweep", "--theta-list", "1.0", "--steps", "4", "--shard", "2/2"},
        {"sweep", "--theta-list", "1.0", "--steps", "4", "--shard", "nope"},
        {"sweep", "--theta-list", "1.0", "--steps", "4", "--format", "xml"},
        {"sweep", "--theta-list", "1.0", "--steps", "4", "--jobs", "0"},
        {"wxhh", "--tau1", "1.5", "--tau2", "0.5"},
        {"povm", "--alpha", "0.3", "--beta", "-1.2707963267948966"},
        {"merge", "/nonexistent/shard.json"},
    };
    for (const auto& args : cases) {
        Outcome o = call(args);
        INFO((args.empty() ? std::string("<none>") : args.front()) << " -> " << o.err);
        REQUIRE(o.code == 2);
        REQUIRE_FALSE(o.err.empty());
    }
}

TEST_CASE("reports are byte-identical across runs and thread counts", "[cli]") {
    const std::vector<std::string> base = {"sweep", "--theta-list", "0.5,1.0,1.5707963267948966", "--steps", "40"};
    auto with = [&](std::vector<std::string> extra) {
        auto a = base;
        a.insert(a.end(), extra.begin(), extra.end());
        return call(a);
    };
    Outcome one = with({"--jobs", "1"});
    REQUIRE(one.code == 0);
    CHECK(with({"--jobs", "1"}).out == one.out);
    CHECK(with({"--jobs", "4"}).out == one.out);
    CHECK(call({"generalized", "--theta", "0.9", "--alpha", "1.0", "--beta", "0.5"}).out ==
          call({"generalized", "--theta", "0.9", "--alpha", "1.0", "--beta", "0.5"}).out);
}

TEST_CASE("floats carry 17 significant digits", "[cli]") {
    json j = json::parse(call({"ledger", "--theta", "0.7"}).out);
    const std::string text = call({"ledger", "--theta", "0.7"}).out;
    CHECK(text.find("0.69999999999999996") != std::string::npos);
    CHECK(j.at("config").at("theta").get<double>() == 0.7);
}

TEST_CASE("shards merged from files equal the unsharded report", "[cli]") {
    auto dir = scratch_dir("shards");
    const std::vector<std::string> base = {"sweep", "--theta-list", "0.4,1.2", "--steps", "30", "--top-k", "15"};
    auto whole = base;
    whole.insert(whole.end(), {"-o", (dir / "whole.json").string()});
    REQUIRE(call(whole).code == 0);

    std::vector<std::string> merge_args = {"merge"};
    for (int k = 0; k < 3; ++k) {
        auto a = base;
        const auto path = (dir / ("part" + std::to_string(k) + ".json")).string();
        a.insert(a.end(), {"--shard", std::to_string(k) + "/3", "--jobs", "2", "-o", path});
        REQUIRE(call(a).code == 0);
        merge_args.push_back(path);
    }
    // Reverse order to exercise order independence.
    std::reverse(merge_args.begin() + 1, merge_args.end());
    merge_args.insert(merge_args.end(), {"-o", (dir / "merged.json").string()});
    REQUIRE(call(merge_args).code == 0);
    CHECK(slurp(dir / "merged.json") == slurp(dir / "whole.json"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("csv output", "[cli]") {
    Outcome o = call({"sweep", "--theta-list", "0.4,1.5707963267948966", "--steps", "12", "--format", "csv"});
    REQUIRE(o.code == 0);
    std::istringstream lines(o.out);
    std::string header;
    std::getline(lines, header);
    CHECK(header.find("theta") != std::string::npos);
    const auto cols = std::count(header.begin(), header.end(), ',');
    int rows = 0;
    for (std::string line; std::getline(lines, line);) {
        if (line.empty()) continue;
        ++rows;
        REQUIRE(std::count(line.begin(), line.end(), ',') == cols);
    }
    CHECK(rows >= 2);
    CHECK(call({"sweep", "--theta-list", "0.4,1.5707963267948966", "--steps", "12", "--format", "csv"}).out == o.out);
}

TEST_CASE("generalized report carries the typo diagnostics", "[cli]") {
    json j = json::parse(call({"generalized", "--theta", "0.9", "--alpha", "1.0", "--beta", "0.5"}).out);
    const std::string text = j.dump();
    CHECK(text.find("mm2_printed") != std::string::npos);
    CHECK(text.find("delta_printed") != std::string::npos);
}
