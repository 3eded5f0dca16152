// Times the tree kernels against the serial literal-definition reference on
// a few mesh sizes and prints a table with speedups.  Outputs are compared
// cellwise first; a mismatch aborts the run.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <vector>

#include "dyadic/experiments.hpp"
#include "dyadic/reference.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double time_ms(const std::function<void()>& fn, int reps) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = Clock::now();
        fn();
        const auto t1 = Clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

double max_abs_diff(const dyadic::StepFunction& a, const dyadic::StepFunction& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i)
        m = std::max(m, std::fabs(a.values()[i] - b.values()[i]));
    return m;
}

} // namespace

int main() {
    std::printf("%-28s %10s %12s %12s %9s\n", "kernel", "cells", "tree (ms)", "serial (ms)", "speedup");
    for (int depth : {8, 10, 12}) {
        dyadic::MeshSpec mesh{1, 0, -depth};
        dyadic::Rng rng(7);
        const dyadic::StepFunction f = dyadic::random_step_function(rng, mesh, 0.0, 10.0);
        const dyadic::SparseFamily family = dyadic::random_sparse_family(rng, mesh, 2.0);
        const dyadic::Measure mu = dyadic::Measure::weighted(dyadic::random_step_weight(rng, mesh));

        const dyadic::OperatorSpec ops[] = {
            dyadic::OperatorSpec::frac_dyadic(0.5, mesh),
            dyadic::OperatorSpec::frac_sparse(family, 0.5, mesh),
            dyadic::OperatorSpec::maximal(0.5, mu, mesh),
        };
        const char* names[] = {"frac_dyadic alpha=1/2", "frac_sparse alpha=1/2", "maximal alpha=1/2"};

        for (int k = 0; k < 3; ++k) {
            const dyadic::StepFunction fast = dyadic::apply(ops[k], f);
            const dyadic::StepFunction slow = dyadic::reference::apply(ops[k], f);
            const double diff = max_abs_diff(fast, slow);
            if (diff > 1e-9) {
                std::fprintf(stderr, "kernel mismatch (%s, depth %d): max diff %g\n", names[k], depth, diff);
                return 1;
            }
            dyadic::StepFunction sink = fast;
            const double t_fast = time_ms([&] { sink = dyadic::apply(ops[k], f); }, 5);
            const double t_slow = time_ms([&] { sink = dyadic::reference::apply(ops[k], f); }, 3);
            std::printf("%-28s %10lld %12.3f %12.3f %8.1fx\n", names[k],
                        static_cast<long long>(mesh.total_cells()), t_fast, t_slow, t_slow / t_fast);
        }
    }
    return 0;
}
