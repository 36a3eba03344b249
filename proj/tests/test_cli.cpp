#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "jmbell/cli.hpp"

using namespace jmbell;
namespace fs = std::filesystem;

namespace {

const char *kSpecker3 = R"({"vertices": ["1","2","3"],
  "maximal_compatible_sets": [["1","2"],["2","3"],["1","3"]]})";
const char *kFourVertex = R"({"vertices": ["1","2","3","4"],
  "maximal_compatible_sets": [["1","2"],["2","3"],["1","3"],["4"]]})";
const char *kPair = R"({"vertices": ["a","b"], "maximal_compatible_sets": [["a"],["b"]]})";
const char *kCompatible = R"({"vertices": ["1","2","3"], "maximal_compatible_sets": [["1","2","3"]]})";
const char *kNonAntichain = R"({"vertices": ["1","2"], "maximal_compatible_sets": [["1","2"],["1"]]})";

class TempDir {
  public:
    TempDir() {
        path_ = fs::temp_directory_path() /
                ("jmbell_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string write(const std::string &name, const std::string &content) const {
        const auto p = path_ / name;
        std::ofstream(p) << content;
        return p.string();
    }

  private:
    fs::path path_;
    static inline int counter_ = 0;
};

struct Run {
    int code;
    std::string out;
    std::string err;
};

template <typename Fn>
Run run(Fn fn, RunConfig config) {
    std::ostringstream out, err;
    const int code = fn(config, out, err);
    return {code, out.str(), err.str()};
}

RunConfig config_for(const std::string &path, OutputFormat format = OutputFormat::Text) {
    RunConfig c;
    c.input = path;
    c.format = format;
    return c;
}

int run_binary(const std::string &args) {
    const char *exe = std::getenv("JMBELL_CLI");
    REQUIRE(exe != nullptr);
    const int status = std::system((std::string(exe) + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST_CASE("validate exit codes") {
    TempDir dir;
    CHECK(run(cmd_validate, config_for(dir.write("s.json", kSpecker3))).code == exit_code::ok);

    const auto bad = run(cmd_validate, config_for(dir.write("n.json", kNonAntichain)));
    CHECK(bad.code == exit_code::invalid);
    CHECK((bad.out + bad.err).find("edge {1} is contained in {1,2}") != std::string::npos);

    CHECK(run(cmd_validate, config_for(dir.write("m.json", "{\"vertices\": [1, 2"))).code ==
          exit_code::parse);
    CHECK(run(cmd_validate, config_for(dir.write("k.json", R"({"vertices": ["1"]})"))).code ==
          exit_code::parse);
    CHECK(run(cmd_validate, config_for("/nonexistent/structure.json")).code == exit_code::parse);
}

TEST_CASE("decompose") {
    TempDir dir;
    const auto s3 = run(cmd_decompose, config_for(dir.write("s.json", kSpecker3)));
    CHECK(s3.code == exit_code::ok);
    CHECK(s3.out == "{1,2,3} N=3\n");

    const auto s4 = run(cmd_decompose, config_for(dir.write("f.json", kFourVertex)));
    CHECK(s4.out == "{1,4} N=2\n{2,4} N=2\n{3,4} N=2\n{1,2,3} N=3\n");

    const auto triv = run(cmd_decompose, config_for(dir.write("c.json", kCompatible)));
    CHECK(triv.code == exit_code::trivial);
    CHECK(triv.err.find("trivial") != std::string::npos);

    const auto js = run(cmd_decompose, config_for(dir.write("s2.json", kSpecker3), OutputFormat::Json));
    const auto doc = nlohmann::json::parse(js.out);
    CHECK(doc["sets"].size() == 1);
    CHECK(doc["sets"][0]["N"] == 3);
}

TEST_CASE("realize values and exit codes") {
    TempDir dir;
    const auto s3 = run(cmd_realize, config_for(dir.write("s.json", kSpecker3), OutputFormat::Json));
    CHECK(s3.code == exit_code::ok);
    const auto r3 = parse_report(s3.out);
    CHECK(r3.global.total_value == doctest::Approx(1.0 / 84.0).epsilon(1e-12));
    CHECK(r3.global.violation());
    REQUIRE(r3.discrepancies.size() == 1);
    CHECK(r3.discrepancies[0].max_formula_delta < 1e-9);
    CHECK(r3.discrepancies[0].unscaled_closed_form == doctest::Approx(1.0 / 42.0));

    const auto pair = run(cmd_realize, config_for(dir.write("p.json", kPair), OutputFormat::Json));
    CHECK(pair.code == exit_code::ok);
    CHECK(std::abs(parse_report(pair.out).global.total_value - 0.2071068) < 1e-7);

    const auto four = run(cmd_realize, config_for(dir.write("f.json", kFourVertex), OutputFormat::Json));
    const auto r4 = parse_report(four.out);
    CHECK(four.code == exit_code::ok);
    CHECK(r4.materialize.performed);
    CHECK(std::abs(r4.materialize.delta) < 1e-9);
    CHECK(r4.global.blocks.size() == 4);

    const auto text = run(cmd_realize, config_for(dir.write("t.json", kSpecker3)));
    CHECK(text.out.find("VIOLATION") != std::string::npos);

    CHECK(run(cmd_realize, config_for(dir.write("c.json", kCompatible))).code == exit_code::trivial);
    CHECK(run(cmd_realize, config_for(dir.write("n.json", kNonAntichain))).code == exit_code::invalid);
}

TEST_CASE("realize parameters from file and flags") {
    TempDir dir;
    const auto path = dir.write("q.json", R"({"vertices": ["1","2","3"],
      "maximal_compatible_sets": [["1","2"],["2","3"],["1","3"]],
      "q0_squared": 0.9, "epsilon": "auto"})");
    auto cfg = config_for(path, OutputFormat::Json);
    const auto from_file = parse_report(run(cmd_realize, cfg).out);
    CHECK(from_file.global.blocks[0].q0_squared == 0.9);

    cfg.q0_squared = 0.95;
    cfg.epsilon = 0.1;
    const auto flagged = parse_report(run(cmd_realize, cfg).out);
    CHECK(flagged.global.blocks[0].q0_squared == 0.95);
    CHECK(flagged.global.blocks[0].epsilon == 0.1);
    CHECK_FALSE(flagged.discrepancies[0].at_cancelling_epsilon);

    // below the threshold q0^2 = 1 - 1/N the block value is negative
    cfg.q0_squared = 0.5;
    cfg.epsilon.reset();
    CHECK(run(cmd_realize, cfg).code != exit_code::ok);
}

TEST_CASE("materialize limit downgrades with a warning") {
    TempDir dir;
    auto cfg = config_for(dir.write("f.json", kFourVertex), OutputFormat::Json);
    cfg.materialize_limit = 10;
    const auto r = run(cmd_realize, cfg);
    CHECK(r.code == exit_code::ok);
    CHECK_FALSE(parse_report(r.out).materialize.performed);
    CHECK_FALSE(r.err.empty());
}

TEST_CASE("JSON report round trip and determinism") {
    TempDir dir;
    auto cfg = config_for(dir.write("f.json", kFourVertex), OutputFormat::Json);
    cfg.shots = 5000;
    cfg.seed = 17;
    const auto a = run(cmd_realize, cfg);
    const auto b = run(cmd_realize, cfg);
    CHECK(a.out == b.out);

    const auto report = parse_report(a.out);
    REQUIRE(report.sampling.has_value());
    CHECK(report.sampling->shots == 5000);
    CHECK(parse_report(emit_json(report)) == report);
    CHECK(emit_json(report) == a.out);

    cfg.seed = 18;
    CHECK(run(cmd_realize, cfg).out != a.out);
}

TEST_CASE("check-compat") {
    TempDir dir;
    const auto s3 = run(cmd_check_compat, config_for(dir.write("s.json", kSpecker3)));
    CHECK(s3.code == exit_code::ok);
    std::size_t compatible = 0;
    for (auto pos = s3.out.find("Compatible"); pos != std::string::npos;
         pos = s3.out.find("Compatible", pos + 1))
        ++compatible;
    CHECK(compatible == 3);
    CHECK(s3.out.find("witness") != std::string::npos);

    const auto toy = run(cmd_check_compat, config_for(dir.write("c.json", R"({
      "vertices": ["z", "zz"], "maximal_compatible_sets": [["z", "zz"]],
      "povms": [[[1,0],[0,0]], [[1,0],[0,[0.5,0]]]]})")));
    CHECK(toy.code == exit_code::ok);
    CHECK(toy.out.find("Undetermined") == std::string::npos);

    std::string edges;
    for (int skip = 1; skip <= 6; ++skip) {
        std::string e;
        for (int k = 1; k <= 6; ++k)
            if (k != skip)
                e += (e.empty() ? "\"" : ",\"") + std::to_string(k) + "\"";
        edges += (edges.empty() ? "[" : ",[") + e + "]";
    }
    const auto big = run(cmd_check_compat,
                         config_for(dir.write("b.json", R"({"vertices": ["1","2","3","4","5","6"],
                           "maximal_compatible_sets": [)" + edges + "]}")));
    CHECK(big.code == exit_code::unverified);
    CHECK(big.out.find("LimitExceeded") != std::string::npos);
    CHECK(big.out.find("positive") != std::string::npos);
}

TEST_CASE("binary front end") {
    TempDir dir;
    CHECK(run_binary("validate " + dir.write("s.json", kSpecker3)) == exit_code::ok);
    CHECK(run_binary("validate --input " + dir.write("n.json", kNonAntichain)) == exit_code::invalid);
    CHECK(run_binary("validate " + dir.write("m.json", "not json")) == exit_code::parse);
    CHECK(run_binary("decompose " + dir.write("c.json", kCompatible)) == exit_code::trivial);
    CHECK(run_binary("realize --format json --epsilon auto --q0-squared default " +
                     dir.write("p.json", kPair)) == exit_code::ok);
    CHECK(run_binary("realize --epsilon nope " + dir.write("p2.json", kPair)) == exit_code::invalid);
}
