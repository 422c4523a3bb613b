#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gsmooth/expression.hpp"
#include "gsmooth/homotopy.hpp"
#include "gsmooth/numeric.hpp"
#include "gsmooth/oracle.hpp"
#include "gsmooth/parser.hpp"
#include "gsmooth/smoothing.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitParse = 2;
constexpr int kExitOracle = 3;
constexpr int kExitNoConverge = 4;

struct CommonOptions {
    std::string format = "text";
    bool full_precision = false;
    int digits() const { return full_precision ? 0 : 12; }
};

std::string read_source(const std::string& arg) {
    if (arg != "-") return arg;
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
}

// Exits the process on parse failure; the caller only sees a valid expression.
gsmooth::Expression parse_or_exit(const std::string& source) {
    gsmooth::ParseResult r = gsmooth::parse(source);
    if (auto* err = std::get_if<gsmooth::ParseError>(&r)) {
        std::cerr << gsmooth::render_error(source, *err) << "\n";
        std::exit(kExitParse);
    }
    return std::move(std::get<gsmooth::Expression>(r));
}

std::vector<double> parse_number_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            std::cerr << "error: invalid " << what << " entry '" << item << "'\n";
            std::exit(kExitUsage);
        }
    }
    if (out.empty()) {
        std::cerr << "error: empty " << what << " list\n";
        std::exit(kExitUsage);
    }
    return out;
}

bool contains_kink(const gsmooth::Expression& e) {
    for (const gsmooth::Term& t : e.terms())
        if (const auto* l = std::get_if<gsmooth::LinearArgTerm>(&t))
            if (l->activation == gsmooth::Activation::Sign ||
                l->activation == gsmooth::Activation::Relu)
                return true;
    return false;
}

int run_smooth(const std::string& source, double sigma, const CommonOptions& common) {
    const gsmooth::Expression e = parse_or_exit(source);
    const gsmooth::Expression smoothed = gsmooth::smooth(e, gsmooth::SmoothSigma(sigma));
    if (common.format == "json")
        std::cout << gsmooth::to_json_string(smoothed) << "\n";
    else
        std::cout << gsmooth::print(smoothed, common.digits()) << "\n";
    return kExitOk;
}

int run_eval(const std::string& source, const std::string& at, double sigma,
             const CommonOptions& common) {
    const gsmooth::Expression e = parse_or_exit(source);
    gsmooth::EvalPoint p{parse_number_list(at, "--at")};
    try {
        const gsmooth::Expression target =
            sigma > 0.0 ? gsmooth::smooth(e, gsmooth::SmoothSigma(sigma)) : e;
        const double v = gsmooth::eval(target, p);
        if (common.format == "json") {
            ordered_json j;
            j["value"] = v;
            std::cout << j.dump() << "\n";
        } else {
            std::cout << gsmooth::format_double(v, common.digits()) << "\n";
        }
    } catch (const gsmooth::DimensionMismatch& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitParse;
    }
    return kExitOk;
}

int run_verify(const std::string& source, double sigma, int points, std::uint64_t seed,
               double tol_flag, const CommonOptions& common) {
    const gsmooth::Expression e = parse_or_exit(source);
    const double tol = tol_flag > 0.0 ? tol_flag : (contains_kink(e) ? 1e-6 : 1e-8);
    const gsmooth::Expression smoothed = gsmooth::smooth(e, gsmooth::SmoothSigma(sigma));
    gsmooth::SplitMix64 rng(seed);
    gsmooth::OracleConfig cfg;

    ordered_json rows = ordered_json::array();
    double max_err = 0.0;
    for (int i = 0; i < points; ++i) {
        gsmooth::EvalPoint p;
        p.coords.resize(e.dimension());
        for (double& c : p.coords) c = rng.next_in(-2.0, 2.0);
        double closed = 0.0, oracle_value = 0.0, estimate = 0.0;
        try {
            closed = gsmooth::eval(smoothed, p);
            const gsmooth::OracleResult o = gsmooth::oracle_convolve(e, gsmooth::SmoothSigma(sigma), p, cfg);
            oracle_value = o.value;
            estimate = o.error_estimate;
        } catch (const std::exception& ex) {
            std::cerr << "error: oracle failure: " << ex.what() << "\n";
            return kExitOracle;
        }
        const double err = std::abs(closed - oracle_value);
        max_err = std::max(max_err, err);
        ordered_json row;
        row["point"] = p.coords;
        row["closed_form"] = closed;
        row["oracle"] = oracle_value;
        row["abs_error"] = err;
        row["error_estimate"] = estimate;
        rows.push_back(std::move(row));
    }

    const bool pass = max_err <= tol;
    if (common.format == "json") {
        ordered_json j;
        j["sigma"] = sigma;
        j["tolerance"] = tol;
        j["points"] = std::move(rows);
        j["max_abs_error"] = max_err;
        j["pass"] = pass;
        std::cout << j.dump() << "\n";
    } else {
        std::printf("%-4s %-22s %-22s %-12s\n", "i", "closed form", "oracle", "abs error");
        for (std::size_t i = 0; i < rows.size(); ++i) {
            std::printf("%-4zu %-22s %-22s %-12.3e\n", i,
                        gsmooth::format_double(rows[i]["closed_form"].get<double>(), common.digits()).c_str(),
                        gsmooth::format_double(rows[i]["oracle"].get<double>(), common.digits()).c_str(),
                        rows[i]["abs_error"].get<double>());
        }
        std::printf("max abs error %.3e vs tolerance %.3e: %s\n", max_err, tol,
                    pass ? "PASS" : "FAIL");
    }
    return pass ? kExitOk : kExitOracle;
}

int run_table(int pmax, const CommonOptions& common) {
    std::vector<gsmooth::SigmaPolynomial> table;
    try {
        table = gsmooth::monomial_table(pmax);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitUsage;
    }
    if (common.format == "json") {
        ordered_json j = ordered_json::array();
        for (const gsmooth::SigmaPolynomial& sp : table) {
            ordered_json row;
            row["p"] = sp.degree;
            row["terms"] = ordered_json::array();
            for (const auto& en : sp.entries) {
                ordered_json term;
                term["coeff"] = en.coeff;
                term["sigma_power"] = en.sigma_power;
                term["x_power"] = en.x_power;
                row["terms"].push_back(std::move(term));
            }
            j.push_back(std::move(row));
        }
        std::cout << j.dump() << "\n";
    } else {
        std::printf("%-4s %s\n", "p", "u(x,p,sigma)");
        for (const gsmooth::SigmaPolynomial& sp : table)
            std::printf("%-4d %s\n", sp.degree, gsmooth::sigma_polynomial_to_string(sp).c_str());
    }
    return kExitOk;
}

int run_optimize(const std::string& source, const std::string& x0_text, double sigma_max,
                 double sigma_min, int steps, double tol, int max_iter,
                 const CommonOptions& common) {
    const gsmooth::Expression e = parse_or_exit(source);
    gsmooth::EvalPoint x0{parse_number_list(x0_text, "--x0")};
    if (x0.coords.size() != static_cast<std::size_t>(e.dimension())) {
        std::cerr << "error: dimension mismatch: --x0 has " << x0.coords.size()
                  << " entries but the expression has dimension " << e.dimension() << "\n";
        return kExitParse;
    }
    gsmooth::SolveReport report;
    try {
        const gsmooth::Schedule sched = gsmooth::Schedule::geometric(sigma_max, sigma_min, steps);
        report = gsmooth::minimize_homotopy(e, sched, x0, gsmooth::SolveOptions{tol, max_iter});
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitUsage;
    }

    if (common.format == "json") {
        std::cout << gsmooth::report_to_json(report) << "\n";
    } else {
        std::printf("%-6s %-14s %-6s %-22s %-12s\n", "stage", "sigma", "iters", "value", "grad norm");
        for (std::size_t i = 0; i < report.stages.size(); ++i) {
            const gsmooth::StageResult& s = report.stages[i];
            std::printf("%-6zu %-14s %-6d %-22s %-12.3e\n", i + 1,
                        gsmooth::format_double(s.sigma, common.digits()).c_str(), s.iterations,
                        gsmooth::format_double(s.value, common.digits()).c_str(), s.gradient_norm);
        }
        const gsmooth::StageResult& last = report.stages.back();
        std::printf("final point: [");
        for (std::size_t d = 0; d < last.point.size(); ++d)
            std::printf("%s%s", d ? ", " : "",
                        gsmooth::format_double(last.point[d], common.digits()).c_str());
        std::printf("]\nconverged: %s\ntotal function evaluations: %ld\n",
                    report.converged ? "yes" : "no", report.total_function_evaluations);
    }
    return report.converged ? kExitOk : kExitNoConverge;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "gsmooth: closed-form Gaussian smoothing of polynomials, Gaussian RBF sums,\n"
        "harmonics, and sign/relu/sin of linear arguments, with a numerical-convolution\n"
        "verifier and a graduated-optimization solver.\n\n"
        "Expressions use variables x1, x2, ...; pass '-' to read the expression from\n"
        "standard input. sign/relu take pure linear arguments; model a bias by\n"
        "appending a fixed variable held at 1 in the evaluation point."};
    app.require_subcommand(1);

    CommonOptions common;
    std::string source;
    double sigma = 0.0;
    std::string at_text, x0_text;
    int points = 20;
    std::uint64_t seed = 42;
    double tol_flag = 0.0;
    int pmax = 10;
    double sigma_max = 2.0, sigma_min = 0.01, opt_tol = 1e-6;
    int steps = 8, max_iter = 1000;

    auto add_common = [&common](CLI::App* sub) {
        sub->add_option("--format", common.format, "output format")
            ->check(CLI::IsMember({"text", "json"}));
        sub->add_flag("--full-precision", common.full_precision,
                      "print shortest round-trip numbers instead of 12 significant digits");
    };

    CLI::App* sm = app.add_subcommand("smooth", "print the closed-form smoothed expression");
    sm->add_option("expr", source, "expression or '-' for stdin")->required();
    sm->add_option("--sigma", sigma, "smoothing scale")->required()->check(CLI::NonNegativeNumber);
    add_common(sm);

    CLI::App* ev = app.add_subcommand("eval", "evaluate an expression at a point");
    ev->add_option("expr", source, "expression or '-' for stdin")->required();
    ev->add_option("--at", at_text, "comma-separated coordinates")->required();
    ev->add_option("--sigma", sigma, "smooth before evaluating")->check(CLI::NonNegativeNumber);
    add_common(ev);

    CLI::App* vf = app.add_subcommand("verify",
                                      "compare the closed form against numerical convolution");
    vf->add_option("expr", source, "expression or '-' for stdin")->required();
    vf->add_option("--sigma", sigma, "smoothing scale")->required()->check(CLI::PositiveNumber);
    vf->add_option("--points", points, "number of sample points")->check(CLI::PositiveNumber);
    vf->add_option("--seed", seed, "sample seed");
    vf->add_option("--tol", tol_flag,
                   "max abs error tolerance (default 1e-8, or 1e-6 with sign/relu terms)")
        ->check(CLI::PositiveNumber);
    add_common(vf);

    CLI::App* tb = app.add_subcommand("table", "print the smoothed-monomial table");
    tb->add_option("--pmax", pmax, "largest degree")->required()->check(CLI::Range(0, 64));
    add_common(tb);

    CLI::App* op = app.add_subcommand("optimize", "graduated optimization over a sigma schedule");
    op->add_option("expr", source, "expression or '-' for stdin")->required();
    op->add_option("--x0", x0_text, "comma-separated start point")->required();
    op->add_option("--sigma-max", sigma_max, "largest smoothing scale")->check(CLI::PositiveNumber);
    op->add_option("--sigma-min", sigma_min, "smallest nonzero smoothing scale")
        ->check(CLI::PositiveNumber);
    op->add_option("--steps", steps, "number of nonzero schedule stages")->check(CLI::PositiveNumber);
    op->add_option("--tol", opt_tol, "gradient norm tolerance")->check(CLI::PositiveNumber);
    op->add_option("--max-iter", max_iter, "iteration cap per stage")->check(CLI::PositiveNumber);
    add_common(op);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (sm->parsed()) return run_smooth(read_source(source), sigma, common);
        if (ev->parsed()) return run_eval(read_source(source), at_text, sigma, common);
        if (vf->parsed()) return run_verify(read_source(source), sigma, points, seed, tol_flag, common);
        if (tb->parsed()) return run_table(pmax, common);
        if (op->parsed())
            return run_optimize(read_source(source), x0_text, sigma_max, sigma_min, steps, opt_tol,
                                max_iter, common);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
