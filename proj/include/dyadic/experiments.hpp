#ifndef DYADIC_EXPERIMENTS_HPP
#define DYADIC_EXPERIMENTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "dyadic/norm_estimation.hpp"
#include "dyadic/rng.hpp"

namespace dyadic {

/// Parameters shared by the experiment drivers; a value of 0 for p means
/// the command default (verify-maximal randomizes p per trial at alpha = 0,
/// verify-cz cycles {1.5, 2, 3}).
struct ExperimentConfig {
    double p = 0.0;
    double q = 0.0; // 0 = derived from 1/q = 1/p - alpha/n
    double alpha = 0.0;
    int n = 1;
    int root_level = 0;
    int resolution_level = -8;
    int trials = 100;
    std::uint64_t seed = 42;
    int restarts = 8;
    std::vector<double> deltas; // sharpness; empty = {2^-2 .. 2^-7}
    int depth = 64;             // sharpness tower shells
    double stopping_factor = 2.0;
    std::string input; // sparse-decompose: step function file
    std::string out;   // output path; "" = stdout only

    MeshSpec mesh() const;
};

struct ExperimentResult {
    bool ok = false;
    std::string json;
    std::string csv;
};

ExperimentResult run_verify_maximal(const ExperimentConfig& cfg);
ExperimentResult run_verify_cz(const ExperimentConfig& cfg);
ExperimentResult run_verify_frac(const ExperimentConfig& cfg);
ExperimentResult run_sharpness(const ExperimentConfig& cfg);
ExperimentResult run_sparse_decompose(const ExperimentConfig& cfg);

/// Uniform cell values in [lo, hi).
StepFunction random_step_function(Rng& rng, const MeshSpec& mesh, double lo, double hi);
/// Log-uniform positive cell values in [0.1, 10).
Weight random_step_weight(Rng& rng, const MeshSpec& mesh);
/// Mostly random step weights, occasionally Lebesgue.
Measure random_measure(Rng& rng, const MeshSpec& mesh);
/// Stopping-cube family of a fresh random function.
SparseFamily random_sparse_family(Rng& rng, const MeshSpec& mesh, double a = 2.0);

struct DominationResult {
    bool pointwise_ok = false; // I_alpha^S f <= I_alpha^D f on every cell
    double max_ratio = 0.0;    // max over cells of I^D / I^S
    double candidate_bound = 0.0; // a / (1 - 2^{-alpha}) for the family factor 1/a
};

/// Compares the sparse and full dyadic fractional sums for the family built
/// from f itself.
DominationResult domination_check(const StepFunction& f, const SparseFamily& family, double alpha);

/// One sharpness row: the power weight x^{(1-delta)(p-1)} on the dyadic
/// tower of the given depth, with the witness x^{delta-1} evaluated per
/// shell in closed form.  Throws DepthInsufficientError when the witness
/// norm has not settled to 1% between depth and depth + 8.
struct SharpnessRow {
    double delta = 0.0;
    double weight_constant = 0.0; // [w]_{A_p(S)}
    double norm_lower_bound = 0.0;
    double ratio = 0.0; // norm / [w]^{max(1, p'/p)}
};

SharpnessRow sharpness_row(double p, double delta, int depth);

/// Witness ratio ||T^S f||_{L^p(w)} / ||f||_{L^p(w)} alone, no convergence check.
double sharpness_witness_ratio(double p, double delta, int depth);

/// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace dyadic

#endif
