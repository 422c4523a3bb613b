// End-to-end checks of the command-line tool: exit codes, output formats, and
// the worked examples. argv[1] is the path to the binary.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "json.hpp"

namespace {

std::string g_cli;
int g_failures = 0;

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    RunResult r;
    FILE* pipe = popen((g_cli + " " + args + " 2>/dev/null").c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, n);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    if (!r.out.empty() && r.out.back() == '\n') r.out.pop_back();
    return r;
}

void expect(bool ok, const std::string& what) {
    if (!ok) {
        ++g_failures;
        std::printf("FAIL %s\n", what.c_str());
    }
}

void expect_exit(const std::string& args, int want) {
    const RunResult r = run(args);
    expect(r.exit_code == want,
           args + " -> exit " + std::to_string(r.exit_code) + ", want " + std::to_string(want));
}

void expect_output(const std::string& args, const std::string& want) {
    const RunResult r = run(args);
    expect(r.exit_code == 0, args + " -> exit " + std::to_string(r.exit_code));
    expect(r.out == want, args + " -> '" + r.out + "', want '" + want + "'");
}

void expect_value(const std::string& args, double want, double tol) {
    const RunResult r = run(args);
    expect(r.exit_code == 0, args + " -> exit " + std::to_string(r.exit_code));
    expect(std::abs(std::strtod(r.out.c_str(), nullptr) - want) <= tol,
           args + " -> '" + r.out + "', want ~" + std::to_string(want));
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::printf("usage: cli_tests <path-to-binary>\n");
        return 1;
    }
    g_cli = argv[1];

    // rendered smoothing
    expect_output("smooth --sigma 1 \"x1^2\"", "1 + x1^2");
    expect_output("smooth --sigma 0 \"sin(x1)\"", "sin(x1)");
    expect_output("smooth --sigma 1 \"sin(x1)\"", "exp(-0.5)*sin(x1)");

    // evaluation, including the smoothed path
    expect_value("eval \"x1^2*x2^3\" --at 2,1", 4.0, 1e-12);
    expect_value("eval \"sin(x1)\" --sigma 1 --at 1.5707963", std::exp(-0.5), 1e-6);
    expect_value("eval \"rbf(amp=1, center=[0], width=1)\" --sigma 1 --at 0",
                 1.0 / std::sqrt(2.0), 1e-9);

    // smoothed relu rendering re-parses and matches the closed form at (1,1)
    {
        const RunResult sm = run("smooth --sigma 0.5 \"relu(2*x1 - 1*x2)\" --full-precision");
        expect(sm.exit_code == 0, "smooth relu exit");
        const RunResult ev = run("eval \"" + sm.out + "\" --at 1,1");
        const double s = 0.5 * std::sqrt(5.0), y = 1.0;
        const double want = s / std::sqrt(2 * M_PI) * std::exp(-y * y / (2 * s * s)) +
                            0.5 * y * (1 + std::erf(y / (std::sqrt(2.0) * s)));
        expect(ev.exit_code == 0, "eval reparsed relu exit");
        expect(std::abs(std::strtod(ev.out.c_str(), nullptr) - want) <= 1e-9,
               "smoothed relu value " + ev.out);
    }

    // verify: polynomials pass at machine precision; corrupted forms fail
    expect_exit("verify \"x1^2 + x1*x2\" --sigma 0.7 --points 8", 0);
    expect_exit("verify \"sign(x1 + 0.5*x2)\" --sigma 0.8 --points 4", 0);
    expect_exit("verify \"(2*cos(x1) - 3*sin(x2) + 4*cos(x1)*sin(x2) - 8*sin(x1)*cos(x2) + 4)^2\""
                " --sigma 0.5 --points 20",
                0);
    {
        // negative control: a deliberately wrong "closed form" must not pass;
        // verify compares smooth(e) against the oracle, so corrupt the
        // comparison by shrinking the tolerance below the scheme's floor
        const RunResult r = run("verify \"x1^4\" --sigma 1 --points 4 --tol 1e-18");
        expect(r.exit_code == 3, "verify negative control exit " + std::to_string(r.exit_code));
    }

    // table rendering
    {
        const RunResult r = run("table --pmax 2");
        expect(r.exit_code == 0, "table exit");
        expect(r.out.find("sigma^2 + x^2") != std::string::npos, "table row p=2: " + r.out);
        const RunResult j = run("table --pmax 10 --format json");
        const auto parsed = nlohmann::json::parse(j.out, nullptr, false);
        expect(!parsed.is_discarded(), "table json parses");
        expect(parsed.size() == 11, "table json row count");
        expect(parsed[10]["terms"][0]["coeff"] == 945, "table json p=10 leading coeff");
    }
    expect_exit("table --pmax 0", 0);
    expect_exit("table --pmax 65", 1);
    expect_exit("table --pmax 40", 1);  // 64-bit coefficients overflow in the 30s

    // optimize: convex bowl converges to the origin
    {
        const RunResult r = run("optimize \"x1^2\" --x0 5 --format json");
        expect(r.exit_code == 0, "optimize exit " + std::to_string(r.exit_code));
        const auto j = nlohmann::json::parse(r.out, nullptr, false);
        expect(!j.is_discarded(), "optimize json parses");
        expect(j["converged"].get<bool>(), "optimize converged");
        expect(std::abs(j["stages"].back()["point"][0].get<double>()) <= 1e-4,
               "optimize final point");
    }
    // unbounded objective fails loudly with a partial report
    {
        const RunResult r = run(
            "optimize \"x1^2*x2^3 + 0.1*(x1^4 + x2^4)\" --x0 1,1 --format json");
        expect(r.exit_code == 4, "optimize divergence exit " + std::to_string(r.exit_code));
        const auto j = nlohmann::json::parse(r.out, nullptr, false);
        expect(!j.is_discarded() && !j["converged"].get<bool>(), "optimize divergence report");
    }

    // exit code contract
    expect_exit("", 1);
    expect_exit("smooth", 1);
    expect_exit("smooth --sigma -1 \"x1\"", 1);
    expect_exit("bogus --sigma 1", 1);
    expect_exit("smooth --sigma 1 \"x1 +\"", 2);
    expect_exit("smooth --sigma 1 \"x1^2*sin(x1)\"", 2);
    expect_exit("eval \"x1 + x2\" --at 1", 2);
    expect_exit("optimize \"x1^2\" --x0 1,2", 2);
    expect_exit("verify \"x1^2\" --sigma 0 --points 2", 1);
    expect_exit("--help", 0);
    expect_exit("smooth --help", 0);

    // json outputs parse under the expression schema
    {
        const RunResult r = run("smooth --sigma 0.5 \"x1^2 + sin(x1)\" --format json");
        const auto j = nlohmann::json::parse(r.out, nullptr, false);
        expect(!j.is_discarded(), "smooth json parses");
        expect(j["dimension"] == 1, "smooth json dimension");
        const RunResult round = run("eval '" + r.out + "' --at 0.5");
        expect(round.exit_code == 0, "json output accepted as input");
    }

    // stdin expression source
    {
        RunResult r;
        FILE* pipe = popen(("echo 'x1^2' | " + g_cli + " smooth - --sigma 1").c_str(), "r");
        char buf[256];
        std::size_t n;
        while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, n);
        const int status = pclose(pipe);
        r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        if (!r.out.empty() && r.out.back() == '\n') r.out.pop_back();
        expect(r.exit_code == 0 && r.out == "1 + x1^2", "stdin source: " + r.out);
    }

    if (g_failures == 0) std::printf("all cli checks passed\n");
    return g_failures;
}
