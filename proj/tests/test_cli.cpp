#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

// End-to-end checks of the command-line binary.  CTest exports the binary
// path through MULTSPEC_CLI; every invocation here shells out for real, so
// exit codes and output bytes are exactly what a user would see.

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const char* bin = std::getenv("MULTSPEC_CLI");
    REQUIRE_MESSAGE(bin != nullptr, "MULTSPEC_CLI must point at the binary");
    std::string cmd = std::string("'") + bin + "' " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

bool has_line(const std::string& text, const std::string& line) {
    return text.find(line + "\n") != std::string::npos;
}

}  // namespace

TEST_CASE("constants table includes the spectrum endpoints") {
    auto r = run_cli("constants");
    CHECK(r.exit_code == 0);
    CHECK(has_line(r.out, "name,value,error_bound,method"));
    CHECK(r.out.find("delta2,-0.261203874963741,") != std::string::npos);
    CHECK(r.out.find("delta1,-0.65699901371693,") != std::string::npos);
    CHECK(r.out.find("C2,2.1729758338526,") != std::string::npos);
}

TEST_CASE("powerful count matches the brute-force value") {
    auto r = run_cli("powerful count --x 100,1000");
    CHECK(r.exit_code == 0);
    CHECK(has_line(r.out, "100,14,0"));
    CHECK(has_line(r.out, "1000,54,0"));

    auto list = run_cli("powerful list --x 50");
    CHECK(list.exit_code == 0);
    CHECK(has_line(list.out, "36,2^2*3^2,0"));
}

TEST_CASE("volterra trace is flat for the constant kernel") {
    auto r = run_cli("volterra --chi const:1 --umax 2 --stride 256");
    CHECK(r.exit_code == 0);
    size_t traces = 0;
    size_t pos = 0;
    while ((pos = r.out.find("trace,", pos)) != std::string::npos) {
        size_t c1 = r.out.find(',', pos + 6);
        size_t c2 = r.out.find(',', c1 + 1);
        CHECK(r.out.substr(c1 + 1, c2 - c1 - 1) == "1");
        ++traces;
        pos = c2;
    }
    CHECK(traces == 9);
}

TEST_CASE("json output parses and echoes its config") {
    auto r = run_cli("--format json powerful count --x 100");
    CHECK(r.exit_code == 0);
    auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["command"] == "powerful count");
    CHECK(doc["config"]["k"] == 2);
    CHECK(doc["rows"][0]["x"] == 100);
    CHECK(doc["rows"][0]["count"] == 14);
}

TEST_CASE("verification suites report pass rows") {
    auto r = run_cli("verify --suite counterexample");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find(",fail,") == std::string::npos);
    CHECK(r.out.find(",pass,") != std::string::npos);
    CHECK(r.out.find("n=121") != std::string::npos);

    auto v = run_cli("verify --suite volterra");
    CHECK(v.exit_code == 0);
    CHECK(v.out.find(",fail,") == std::string::npos);
}

TEST_CASE("usage and resource failures map to distinct exit codes") {
    CHECK(run_cli("volterra --chi step:nonsense").exit_code == 2);
    CHECK(run_cli("volterra --chi const:1 --step 0.3").exit_code == 2);
    CHECK(run_cli("powerful count --x 1e16").exit_code == 3);
    CHECK(run_cli("powerful list --x 1e12").exit_code == 3);
    CHECK(run_cli("endpoint-run --profile no-such-profile").exit_code == 2);
    CHECK(run_cli("no-such-command").exit_code == 2);
    CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("identical configuration gives identical bytes") {
    const std::string cmd = "endpoint-run --x 1000,100000 --profile all-ones";
    auto a = run_cli(cmd);
    auto b = run_cli(cmd);
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    // The all-ones profile normalizes to ratio 1 identically.
    CHECK(has_line(a.out, "1000,54,1,1.26120387496374,1e-12"));

    auto j1 = run_cli("--format json separation --trials 4");
    auto j2 = run_cli("--format json separation --trials 4");
    CHECK(j1.exit_code == 0);
    CHECK(j1.out == j2.out);
}
