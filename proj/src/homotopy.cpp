#include "gsmooth/homotopy.hpp"

#include <cmath>
#include <stdexcept>

#include "gsmooth/numeric.hpp"
#include "json.hpp"

namespace gsmooth {
namespace {

constexpr double kArmijoC = 1e-4;
constexpr double kShrink = 0.5;
constexpr double kInitialStep = 1.0;
constexpr double kMinStep = 1e-18;
constexpr double kDivergenceRadius = 1e6;

}  // namespace

Schedule Schedule::geometric(double sigma_max, double sigma_min, int steps) {
    if (!(sigma_max > sigma_min) || !(sigma_min > 0.0))
        throw std::invalid_argument("schedule requires sigma_max > sigma_min > 0");
    if (steps < 1) throw std::invalid_argument("schedule requires at least one step");
    Schedule s;
    s.sigmas.reserve(steps + 1);
    if (steps == 1) {
        s.sigmas.push_back(sigma_max);
    } else {
        const double ratio = std::pow(sigma_min / sigma_max, 1.0 / (steps - 1));
        double v = sigma_max;
        for (int i = 0; i < steps; ++i) {
            s.sigmas.push_back(i + 1 == steps ? sigma_min : v);
            v *= ratio;
        }
    }
    s.sigmas.push_back(0.0);
    return s;
}

void Schedule::validate() const {
    if (sigmas.empty()) throw std::invalid_argument("schedule must be nonempty");
    for (std::size_t i = 0; i < sigmas.size(); ++i) {
        if (!(sigmas[i] >= 0.0) || !std::isfinite(sigmas[i]))
            throw std::invalid_argument("schedule sigmas must be finite and nonnegative");
        if (i > 0 && !(sigmas[i] < sigmas[i - 1]))
            throw std::invalid_argument("schedule sigmas must be strictly decreasing");
    }
}

const char* stage_status_name(StageStatus s) {
    switch (s) {
        case StageStatus::Converged: return "converged";
        case StageStatus::IterationLimit: return "iteration_limit";
        case StageStatus::LineSearchStall: return "line_search_stall";
        case StageStatus::Diverged: return "diverged";
        case StageStatus::NonFinite: return "nonfinite";
    }
    return "unknown";
}

StageResult minimize_stage(const Expression& e, SmoothSigma sigma, const EvalPoint& x0,
                           const SolveOptions& opts) {
    if (!(opts.tol > 0.0)) throw std::invalid_argument("tol must be positive");
    if (opts.max_iter < 1) throw std::invalid_argument("max_iter must be positive");

    const Expression surrogate = smooth(e, sigma);
    StageResult r;
    r.sigma = sigma.value;
    r.point = x0.coords;

    EvalPoint x{r.point};
    double fx = eval(surrogate, x);
    ++r.function_evaluations;
    if (!std::isfinite(fx)) {
        r.status = StageStatus::NonFinite;
        r.value = fx;
        return r;
    }
    r.accepted_values.push_back(fx);

    r.status = StageStatus::IterationLimit;
    for (int it = 0; it < opts.max_iter; ++it) {
        const std::vector<double> g = gradient(surrogate, x);
        ++r.function_evaluations;
        const double gnorm = l2_norm(g);
        r.gradient_norm = gnorm;
        if (!std::isfinite(gnorm)) {
            r.status = StageStatus::NonFinite;
            break;
        }
        if (gnorm <= opts.tol) {
            r.status = StageStatus::Converged;
            break;
        }

        double step = kInitialStep;
        const double g2 = gnorm * gnorm;
        bool accepted = false;
        EvalPoint trial = x;
        while (step >= kMinStep) {
            for (std::size_t d = 0; d < trial.coords.size(); ++d)
                trial.coords[d] = x.coords[d] - step * g[d];
            const double ft = eval(surrogate, trial);
            ++r.function_evaluations;
            if (std::isfinite(ft) && ft <= fx - kArmijoC * step * g2) {
                accepted = true;
                break;
            }
            step *= kShrink;
        }
        if (!accepted) {
            r.status = StageStatus::LineSearchStall;
            break;
        }

        x = trial;
        fx = eval(surrogate, x);
        ++r.function_evaluations;
        r.accepted_values.push_back(fx);
        ++r.iterations;
        if (l2_norm(x.coords) > kDivergenceRadius) {
            r.status = StageStatus::Diverged;
            break;
        }
    }

    r.point = x.coords;
    r.value = fx;
    if (r.status != StageStatus::NonFinite) {
        r.gradient_norm = l2_norm(gradient(surrogate, x));
        ++r.function_evaluations;
    }
    return r;
}

SolveReport minimize_homotopy(const Expression& e, const Schedule& sched, const EvalPoint& x0,
                              const SolveOptions& opts) {
    sched.validate();
    std::vector<double> sigmas = sched.sigmas;
    if (sigmas.back() != 0.0) sigmas.push_back(0.0);  // always finish on the true objective

    SolveReport report;
    EvalPoint x = x0;
    for (double s : sigmas) {
        StageResult stage = minimize_stage(e, SmoothSigma(s), x, opts);
        x.coords = stage.point;
        const StageStatus status = stage.status;
        report.total_function_evaluations += stage.function_evaluations;
        report.stages.push_back(std::move(stage));
        if (status == StageStatus::Diverged || status == StageStatus::NonFinite) {
            report.converged = false;
            return report;
        }
    }
    report.converged = report.stages.back().status == StageStatus::Converged;
    return report;
}

std::string report_to_json(const SolveReport& report) {
    nlohmann::ordered_json j;
    j["converged"] = report.converged;
    j["total_function_evaluations"] = report.total_function_evaluations;
    j["stages"] = nlohmann::ordered_json::array();
    for (const StageResult& s : report.stages) {
        nlohmann::ordered_json js;
        js["sigma"] = s.sigma;
        js["iterations"] = s.iterations;
        js["point"] = s.point;
        js["value"] = s.value;
        js["gradient_norm"] = s.gradient_norm;
        j["stages"].push_back(std::move(js));
    }
    return j.dump();
}

}  // namespace gsmooth
