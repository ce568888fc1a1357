#pragma once

#include <functional>
#include <vector>

namespace qsemis {

struct MinimizeOptions {
    double tolerance = 1e-8;  // stop when the per-step cost improvement falls below this
    double grad_step = 1e-6;  // central-difference step
    int max_evals = 200;      // function-evaluation budget
};

struct MinimizeResult {
    std::vector<double> x;
    double value = 0.0;
    int evals = 0;
};

// Box-constrained quasi-Newton descent: BFGS on the inverse Hessian with
// projection onto [lower, upper] and an Armijo backtracking line search.
// Gradients use central differences and may probe just outside the box, so
// the objective must be evaluable there.  Throws NumericalError if the
// objective ever returns a non-finite value.
MinimizeResult minimize_bounded(const std::function<double(const std::vector<double>&)>& f,
                                std::vector<double> x0, const std::vector<double>& lower,
                                const std::vector<double>& upper, const MinimizeOptions& opt);

}  // namespace qsemis
