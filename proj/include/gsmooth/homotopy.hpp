#pragma once

#include <string>
#include <vector>

#include "gsmooth/expression.hpp"
#include "gsmooth/smoothing.hpp"

namespace gsmooth {

// Decreasing smoothing schedule. Solves always finish on the unsmoothed
// objective, so minimize_homotopy appends a final sigma = 0 stage when the
// schedule does not already end there.
struct Schedule {
    std::vector<double> sigmas;

    // sigma_max down to sigma_min geometrically over `steps` stages, then 0.
    static Schedule geometric(double sigma_max = 2.0, double sigma_min = 0.01, int steps = 8);

    void validate() const;  // strictly decreasing, nonnegative, nonempty
};

enum class StageStatus { Converged, IterationLimit, LineSearchStall, Diverged, NonFinite };

const char* stage_status_name(StageStatus s);

struct StageResult {
    double sigma = 0.0;
    int iterations = 0;
    std::vector<double> point;
    double value = 0.0;
    double gradient_norm = 0.0;
    StageStatus status = StageStatus::Converged;
    long function_evaluations = 0;
    std::vector<double> accepted_values;  // objective after each accepted step
};

struct SolveOptions {
    double tol = 1e-6;
    int max_iter = 1000;
};

struct SolveReport {
    std::vector<StageResult> stages;
    bool converged = false;
    long total_function_evaluations = 0;
};

// Gradient descent with Armijo backtracking (c = 1e-4, shrink 0.5, initial
// step 1.0) on the sigma-smoothed surrogate of e. Iterates with |x| > 1e6
// abort the stage; a nonfinite objective stops at the last finite iterate.
StageResult minimize_stage(const Expression& e, SmoothSigma sigma, const EvalPoint& x0,
                           const SolveOptions& opts = {});

// Runs minimize_stage per schedule entry, warm-starting each stage from the
// previous result; converged means the final sigma = 0 stage reached the
// gradient tolerance. Hard stage failures stop the continuation but the
// completed stages are still reported.
SolveReport minimize_homotopy(const Expression& e, const Schedule& sched, const EvalPoint& x0,
                              const SolveOptions& opts = {});

std::string report_to_json(const SolveReport& report);

}  // namespace gsmooth
