#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace cogrelay::quad {

struct Options {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_subdivisions = 2000;
};

struct Result {
    double value = 0.0;
    double error = 0.0;        // estimated absolute error
    int subdivisions = 0;
    bool converged = false;
};

// Thrown by integrate_or_throw when the requested tolerance was not reached.
// Carries the best estimate so callers can still report it.
struct NonConvergence : std::runtime_error {
    NonConvergence(const std::string& what, Result partial_)
        : std::runtime_error(what), partial(partial_) {}
    Result partial;
};

// Globally adaptive Gauss-Kronrod 7-15 on a finite interval: the interval with
// the largest error estimate is bisected until the summed error drops below
// max(abs_tol, rel_tol * |integral|) or max_subdivisions is exhausted.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& opt = {});

double integrate_or_throw(const std::function<double(double)>& f, double a, double b,
                          const Options& opt = {});

} // namespace cogrelay::quad
