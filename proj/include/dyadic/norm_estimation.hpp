#ifndef DYADIC_NORM_ESTIMATION_HPP
#define DYADIC_NORM_ESTIMATION_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dyadic/operators.hpp"

namespace dyadic {

/// A certified lower bound on a weighted operator norm: the value is the
/// Rayleigh-type ratio of the stored witness, so it can always be reproduced.
struct NormEstimate {
    double value = 0.0;
    StepFunction witness; // normalized in L^p(source measure)
    double source_exponent = 0.0;
    double target_exponent = 0.0;
    std::string source_measure;
    std::string target_measure;
    int iterations = 0;
    int restarts = 0;
    bool converged = false;
};

/// Recomputes ||op(witness * sigma)||_{L^q(target)} / ||witness||_{L^p(sigma)}
/// for the weight convention of the given operator kind.
double witness_ratio(const OperatorSpec& op, const Weight& w, double p, double q,
                     const StepFunction& witness);

/// Fixed-point iteration for positive operators with random restarts.
/// cz_sparse ops take q == p and test L^p(w); frac_sparse ops test
/// L^p(w^p) -> L^q(w^q).  Step weights only; the analytic power-weight
/// towers go through the sharpness driver instead.
NormEstimate estimate_norm(const OperatorSpec& op, const Weight& w, double p, double q,
                           int trials = 8, double tol = 1e-11, std::uint64_t seed = 0);

/// c_p = p p' 2^{max(p/p', p'/p)}.
double cz_constant(double p);
/// max(1, p'/p), the exponent on the A_p constant.
double cz_weight_exponent(double p);

/// q with 1/q = 1/p - alpha/n; requires 1 < p < n/alpha.
double frac_q(double p, double alpha, int n);
/// The admissibility condition min(p'/q, q/p') <= 1 - alpha/n.
bool frac_admissible(double p, double alpha, int n);
/// c_{p,alpha} = p' (1 + q/p')^{1-alpha/n} 2^{(1-alpha/n) max(q/p', p'/q)}.
double frac_constant(double p, double alpha, int n);
/// (1 - alpha/n) max(1, p'/q), the exponent on the A_{p,q} constant.
double frac_weight_exponent(double p, double alpha, int n);

struct BoundCheckReport {
    std::string theorem; // "cz" | "frac"
    double p = 0.0;
    double q = 0.0;
    double alpha = 0.0;
    int n = 1;
    double constant = 0.0;       // c_p or c_{p,alpha}
    double weight_exponent = 0.0;
    WeightConstantReport weight_constant;        // restricted to the family
    WeightConstantReport weight_constant_dyadic; // context: every mesh cube
    NormEstimate estimate;
    double bound = 0.0;
    double ratio = 0.0; // estimate.value / bound
    bool ok = false;
};

/// ||T^S||_{L^p(w)} lower bound against c_p [w]_{A_p(S)}^{max(1,p'/p)}.
BoundCheckReport bound_check_cz(const SparseFamily& family, const Weight& w, double p,
                                int trials = 8, std::uint64_t seed = 0);

/// Fractional analogue under the admissibility condition; rejects
/// inadmissible (p, alpha, n) with a PreconditionError naming the inequality.
BoundCheckReport bound_check_frac(const SparseFamily& family, const Weight& w, double p,
                                  double alpha, int n, int trials = 8, std::uint64_t seed = 0);

/// Labeled chain of intermediate quantities; monotone means each step is
/// >= the previous one within 1e-10 relative slack.
struct ChainReport {
    std::vector<std::pair<std::string, double>> quantities;
    bool monotone = false;
    bool dual_run = false; // fractional chain executed on the swapped data
};

/// Executable replay of the sparse Calderon-Zygmund estimate for p >= 2.
ChainReport proof_chain_cz(const SparseFamily& family, const Weight& w, double p,
                           const StepFunction& f, const StepFunction& g);

/// Executable replay of the fractional estimate; the case q/p' <= 1 - alpha/n
/// runs on the dual data (f and g swapped, weight inverted).
ChainReport proof_chain_frac(const SparseFamily& family, const Weight& w, double p, double alpha,
                             int n, const StepFunction& f, const StepFunction& g);

struct DualityResult {
    double n1 = 0.0; // estimated ||T^S||_{L^p(w)}
    double n2 = 0.0; // estimated ||T^S||_{L^{p'}(sigma)}
    bool ok = false; // within 5% of each other
};

/// Both sides estimate the same true norm.
DualityResult duality_check(const SparseFamily& family, const Weight& w, double p,
                            int trials = 8, std::uint64_t seed = 0);

} // namespace dyadic

#endif
