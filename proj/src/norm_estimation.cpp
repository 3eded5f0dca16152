#include "dyadic/norm_estimation.hpp"

#include <cmath>

#include "dyadic/errors.hpp"
#include "dyadic/rng.hpp"

namespace dyadic {

namespace {

constexpr int kMaxIterations = 500;

struct TestingPair {
    StepFunction sigma;   // source density
    StepFunction target;  // target density
    Measure sigma_measure;
    Measure target_measure;
    std::string sigma_name;
    std::string target_name;
};

// weight convention of the theorem being tested
TestingPair testing_pair(const OperatorSpec& op, const Weight& w, double p, double q) {
    if (!op.is_sparse_kind())
        throw InputError("estimate_norm: operator must be a sparse summation kind");
    if (w.kind() != Weight::Kind::step)
        throw InputError("estimate_norm: step weights only; power-weight towers use the closed-form driver");
    if (w.step().mesh() != op.mesh) throw InputError("estimate_norm: weight mesh mismatch");
    TestingPair pair;
    if (op.kind == OperatorSpec::Kind::cz_sparse) {
        if (std::fabs(q - p) > 1e-12)
            throw InputError("estimate_norm: the cz operator is tested on L^p(w), so q must equal p");
        pair.sigma = dual_weight(w, p).step();
        pair.target = w.step();
        pair.sigma_name = "w^(1-p')";
        pair.target_name = "w";
    } else {
        pair.sigma = weight_pow(w, -conjugate(p)).step();
        pair.target = weight_pow(w, q).step();
        pair.sigma_name = "w^(-p')";
        pair.target_name = "w^q";
    }
    pair.sigma_measure = Measure::weighted(Weight::from_step(pair.sigma));
    pair.target_measure = Measure::weighted(Weight::from_step(pair.target));
    return pair;
}

} // namespace

double witness_ratio(const OperatorSpec& op, const Weight& w, double p, double q,
                     const StepFunction& witness) {
    const TestingPair pair = testing_pair(op, w, p, q);
    std::vector<double> fsigma(witness.values().size());
    for (std::size_t i = 0; i < fsigma.size(); ++i)
        fsigma[i] = witness.values()[i] * pair.sigma.values()[i];
    const StepFunction tf = apply(op, StepFunction(op.mesh, std::move(fsigma)));
    const double den = lp_norm(witness, p, pair.sigma_measure);
    if (!(den > 0.0)) throw DegenerateInputError("witness_ratio: witness has zero norm");
    return lp_norm(tf, q, pair.target_measure) / den;
}

NormEstimate estimate_norm(const OperatorSpec& op, const Weight& w, double p, double q,
                           int trials, double tol, std::uint64_t seed) {
    if (trials < 1) throw InputError("estimate_norm: need at least one restart");
    const TestingPair pair = testing_pair(op, w, p, q);
    const MeshSpec& mesh = op.mesh;
    const std::size_t cells = pair.sigma.values().size();

    const auto normalize = [&](std::vector<double>& f) -> bool {
        const double norm = lp_norm(StepFunction(mesh, f, true), p, pair.sigma_measure);
        if (!(norm > 0.0)) return false;
        for (double& v : f) v /= norm;
        return true;
    };

    NormEstimate best;
    best.source_exponent = p;
    best.target_exponent = q;
    best.source_measure = pair.sigma_name;
    best.target_measure = pair.target_name;
    best.restarts = trials;
    best.converged = true;

    for (int restart = 0; restart < trials; ++restart) {
        Rng rng = Rng::for_trial(seed, static_cast<std::uint64_t>(restart));
        std::vector<double> f(cells, 1.0);
        if (restart > 0) {
            for (double& v : f) {
                const double u = rng.uniform();
                v = u * u + 1e-6;
            }
        }
        if (!normalize(f)) throw DegenerateInputError("estimate_norm: start has zero norm");

        double prev = -1.0;
        bool restart_converged = false;
        for (int iter = 0; iter < kMaxIterations; ++iter) {
            ++best.iterations;
            std::vector<double> fsigma(cells);
            for (std::size_t i = 0; i < cells; ++i) fsigma[i] = f[i] * pair.sigma.values()[i];
            const StepFunction tf = apply(op, StepFunction(mesh, std::move(fsigma), true));
            const double ratio = lp_norm(tf, q, pair.target_measure);
            if (ratio > best.value) {
                best.value = ratio;
                best.witness = StepFunction(mesh, f, true);
            }
            if (prev >= 0.0 && std::fabs(ratio - prev) <= tol * std::max(ratio, 1e-300)) {
                restart_converged = true;
                break;
            }
            prev = ratio;

            std::vector<double> h(cells);
            for (std::size_t i = 0; i < cells; ++i)
                h[i] = std::pow(tf.values()[i], q - 1.0) * pair.target.values()[i];
            const StepFunction th = apply(op, StepFunction(mesh, std::move(h), true));
            for (std::size_t i = 0; i < cells; ++i) f[i] = std::pow(th.values()[i], 1.0 / (p - 1.0));
            if (!normalize(f)) break; // operator annihilates the iterate; keep best so far
        }
        best.converged = best.converged && restart_converged;
    }
    return best;
}

double cz_constant(double p) {
    const double pp = conjugate(p);
    return p * pp * std::pow(2.0, std::max(p / pp, pp / p));
}

double cz_weight_exponent(double p) {
    return std::max(1.0, conjugate(p) / p);
}

double frac_q(double p, double alpha, int n) {
    if (!(alpha > 0.0) || alpha >= n) throw InputError("fractional exponents need 0 < alpha < n");
    if (!(p > 1.0) || !(p < n / alpha))
        throw InputError("fractional exponents need 1 < p < n/alpha");
    return 1.0 / (1.0 / p - alpha / n);
}

bool frac_admissible(double p, double alpha, int n) {
    const double q = frac_q(p, alpha, n);
    const double pp = conjugate(p);
    return std::min(pp / q, q / pp) <= 1.0 - alpha / n + 1e-12;
}

double frac_constant(double p, double alpha, int n) {
    const double q = frac_q(p, alpha, n);
    const double pp = conjugate(p);
    const double beta = 1.0 - alpha / static_cast<double>(n);
    return pp * std::pow(1.0 + q / pp, beta) * std::pow(2.0, beta * std::max(q / pp, pp / q));
}

double frac_weight_exponent(double p, double alpha, int n) {
    const double q = frac_q(p, alpha, n);
    const double beta = 1.0 - alpha / static_cast<double>(n);
    return beta * std::max(1.0, conjugate(p) / q);
}

BoundCheckReport bound_check_cz(const SparseFamily& family, const Weight& w, double p,
                                int trials, std::uint64_t seed) {
    if (!(p > 1.0)) throw InputError("bound_check_cz: p must exceed 1");
    const MeshSpec mesh = w.step().mesh();
    BoundCheckReport report;
    report.theorem = "cz";
    report.p = p;
    report.q = p;
    report.n = mesh.dim;
    report.constant = cz_constant(p);
    report.weight_exponent = cz_weight_exponent(p);
    report.weight_constant = ap_constant(w, p, family.cubes, "sparse");
    report.weight_constant_dyadic = ap_constant(w, p, all_mesh_cubes(mesh), "dyadic");
    const OperatorSpec op = OperatorSpec::cz(family, mesh);
    report.estimate = estimate_norm(op, w, p, p, trials, 1e-11, seed);
    report.bound = report.constant * std::pow(report.weight_constant.value, report.weight_exponent);
    report.ratio = report.estimate.value / report.bound;
    report.ok = report.estimate.value <= report.bound * (1.0 + 1e-9);
    return report;
}

BoundCheckReport bound_check_frac(const SparseFamily& family, const Weight& w, double p,
                                  double alpha, int n, int trials, std::uint64_t seed) {
    const double q = frac_q(p, alpha, n);
    const double pp = conjugate(p);
    if (!frac_admissible(p, alpha, n)) {
        throw PreconditionError("bound_check_frac: admissibility fails: min(p'/q, q/p') = " +
                                std::to_string(std::min(pp / q, q / pp)) + " > 1 - alpha/n = " +
                                std::to_string(1.0 - alpha / n));
    }
    const MeshSpec mesh = w.step().mesh();
    if (mesh.dim != n) throw InputError("bound_check_frac: weight mesh dimension differs from n");
    BoundCheckReport report;
    report.theorem = "frac";
    report.p = p;
    report.q = q;
    report.alpha = alpha;
    report.n = n;
    report.constant = frac_constant(p, alpha, n);
    report.weight_exponent = frac_weight_exponent(p, alpha, n);
    report.weight_constant = apq_constant(w, p, q, family.cubes, "sparse");
    report.weight_constant_dyadic = apq_constant(w, p, q, all_mesh_cubes(mesh), "dyadic");
    const OperatorSpec op = OperatorSpec::frac_sparse(family, alpha, mesh);
    report.estimate = estimate_norm(op, w, p, q, trials, 1e-11, seed);
    report.bound = report.constant * std::pow(report.weight_constant.value, report.weight_exponent);
    report.ratio = report.estimate.value / report.bound;
    report.ok = report.estimate.value <= report.bound * (1.0 + 1e-9);
    return report;
}

namespace {

bool chain_monotone(const std::vector<std::pair<std::string, double>>& q) {
    for (std::size_t i = 0; i + 1 < q.size(); ++i) {
        const double a = q[i].second;
        const double b = q[i + 1].second;
        if (b < a - 1e-10 * std::max({std::fabs(a), std::fabs(b), 1e-300})) return false;
    }
    return true;
}

void require_nonneg(const StepFunction& f, const char* who) {
    for (double v : f.values()) {
        if (!(v >= 0.0)) throw InputError(std::string(who) + ": chain inputs must be nonnegative");
    }
}

// per-cube data shared by both chains
struct CubeData {
    double vol = 0.0;
    double f_int = 0.0;   // int_Q f dsigma
    double g_int = 0.0;   // int_Q g dtarget
    double sigma = 0.0;   // sigma(Q)
    double target = 0.0;  // target(Q)
    double e_vol = 0.0;   // |E(Q)|
    double e_sigma = 0.0; // sigma(E(Q))
    double e_target = 0.0;
};

std::vector<CubeData> collect_cube_data(const SparseFamily& family, const MeshSpec& mesh,
                                        const StepFunction& f, const StepFunction& g,
                                        const Measure& sigma_m, const Measure& target_m) {
    const std::vector<double> sigma_mass = sigma_m.cell_masses(mesh);
    const std::vector<double> target_mass = target_m.cell_masses(mesh);

    std::vector<double> f_massed(sigma_mass.size()), g_massed(sigma_mass.size());
    for (std::size_t i = 0; i < sigma_mass.size(); ++i) {
        f_massed[i] = f.values()[i] * sigma_mass[i];
        g_massed[i] = g.values()[i] * target_mass[i];
    }
    const LevelTree ftree = build_level_tree(mesh, f_massed);
    const LevelTree gtree = build_level_tree(mesh, g_massed);
    const LevelTree stree = build_level_tree(mesh, sigma_mass);
    const LevelTree ttree = build_level_tree(mesh, target_mass);

    const auto exceptional = exceptional_sets(family, mesh);
    const double cell_vol = mesh.cell_volume();

    std::vector<CubeData> data(family.cubes.size());
    for (std::size_t i = 0; i < family.cubes.size(); ++i) {
        const MeshCubeRef ref = locate_cube(mesh, family.cubes[i]);
        CubeData& d = data[i];
        d.vol = std::ldexp(1.0, mesh.dim * (mesh.resolution_level + ref.level_idx));
        d.f_int = ftree.at(ref);
        d.g_int = gtree.at(ref);
        d.sigma = stree.at(ref);
        d.target = ttree.at(ref);
        d.e_vol = static_cast<double>(exceptional[i].size()) * cell_vol;
        double es = 0.0, et = 0.0;
        for (std::int64_t cell : exceptional[i]) {
            es += sigma_mass[static_cast<std::size_t>(cell)];
            et += target_mass[static_cast<std::size_t>(cell)];
        }
        d.e_sigma = es;
        d.e_target = et;
        if (!(d.sigma > 0.0) || !(d.target > 0.0))
            throw DegenerateMeasureError("proof chain: a family cube carries no weight mass");
    }
    return data;
}

} // namespace

ChainReport proof_chain_cz(const SparseFamily& family, const Weight& w, double p,
                           const StepFunction& f, const StepFunction& g) {
    if (!(p >= 2.0)) throw InputError("proof_chain_cz: the direct argument needs p >= 2; use duality below");
    require_nonneg(f, "proof_chain_cz");
    require_nonneg(g, "proof_chain_cz");
    const MeshSpec mesh = f.mesh();
    const double pp = conjugate(p);

    const Weight sigma = dual_weight(w, p);
    const Measure sigma_m = Measure::weighted(sigma);
    const Measure w_m = Measure::weighted(w);
    const auto data = collect_cube_data(family, mesh, f, g, sigma_m, w_m);
    const double ap = ap_constant(w, p, family.cubes, "sparse").value;
    const double two = std::pow(2.0, p - 1.0);

    std::vector<double> t0, t1, t2, t3;
    for (const CubeData& d : data) {
        const double a_sigma = d.f_int / d.sigma;
        const double a_w = d.g_int / d.target;
        t0.push_back(d.f_int * d.g_int / d.vol);
        t1.push_back(a_sigma * a_w * std::pow(d.vol, p - 1.0) * std::pow(d.sigma, 2.0 - p));
        t2.push_back(a_sigma * a_w * std::pow(d.e_vol, p - 1.0) * std::pow(d.e_sigma, 2.0 - p));
        t3.push_back(a_sigma * a_w * std::pow(d.e_sigma, 1.0 / p) * std::pow(d.e_target, 1.0 / pp));
    }

    const OperatorSpec m_sigma = OperatorSpec::maximal(0.0, sigma_m, mesh);
    const OperatorSpec m_w = OperatorSpec::maximal(0.0, w_m, mesh);
    const double max_part =
        lp_norm(apply(m_sigma, f), p, sigma_m) * lp_norm(apply(m_w, g), pp, w_m);

    ChainReport report;
    report.quantities = {
        {"pairing", pairwise_sum(t0)},
        {"weight_product_inserted", ap * pairwise_sum(t1)},
        {"exceptional_sets", two * ap * pairwise_sum(t2)},
        {"holder_on_exceptional", two * ap * pairwise_sum(t3)},
        {"discrete_holder_maximal", two * ap * max_part},
        {"maximal_theorem_bound", cz_constant(p) * std::pow(ap, cz_weight_exponent(p)) *
                                      lp_norm(f, p, sigma_m) * lp_norm(g, pp, w_m)},
    };
    report.monotone = chain_monotone(report.quantities);
    return report;
}

namespace {

ChainReport frac_chain_direct(const SparseFamily& family, const Weight& w, double p, double q,
                              double alpha, int n, const StepFunction& f, const StepFunction& g) {
    const MeshSpec mesh = f.mesh();
    const double pp = conjugate(p);
    const double beta = 1.0 - alpha / n;
    const double s = (q / pp) * beta; // >= 1 exactly when p'/q <= 1 - alpha/n

    const Weight sigma = weight_pow(w, -pp);
    const Weight u = weight_pow(w, q);
    const Measure sigma_m = Measure::weighted(sigma);
    const Measure u_m = Measure::weighted(u);
    const auto data = collect_cube_data(family, mesh, f, g, sigma_m, u_m);
    const double apq = apq_constant(w, p, q, family.cubes, "sparse").value;
    const double apq_beta = std::pow(apq, beta);
    const double two = std::pow(2.0, s);

    std::vector<double> t0, t1, t2, t3;
    for (const CubeData& d : data) {
        const double a_sigma = d.f_int / d.sigma;
        const double a_u_alpha = std::pow(d.target, alpha / n - 1.0) * d.g_int;
        t0.push_back(std::pow(d.vol, alpha / n - 1.0) * d.f_int * d.g_int);
        t1.push_back(a_sigma * a_u_alpha * std::pow(d.vol, s) * std::pow(d.sigma, 1.0 - s));
        t2.push_back(a_sigma * a_u_alpha * std::pow(d.e_vol, s) * std::pow(d.e_sigma, 1.0 - s));
        t3.push_back(a_sigma * a_u_alpha * std::pow(d.e_target, 1.0 / pp) *
                     std::pow(d.e_sigma, 1.0 / p));
    }

    const OperatorSpec m_sigma = OperatorSpec::maximal(0.0, sigma_m, mesh);
    const OperatorSpec m_u = OperatorSpec::maximal(alpha, u_m, mesh);
    const double max_part =
        lp_norm(apply(m_sigma, f), p, sigma_m) * lp_norm(apply(m_u, g), pp, u_m);

    const double qq = conjugate(q);
    ChainReport report;
    report.quantities = {
        {"pairing", pairwise_sum(t0)},
        {"weight_product_inserted", apq_beta * pairwise_sum(t1)},
        {"exceptional_sets", two * apq_beta * pairwise_sum(t2)},
        {"holder_on_exceptional", two * apq_beta * pairwise_sum(t3)},
        {"discrete_holder_maximal", two * apq_beta * max_part},
        {"maximal_theorem_bound", frac_constant(p, alpha, n) *
                                      std::pow(apq, frac_weight_exponent(p, alpha, n)) *
                                      lp_norm(f, p, sigma_m) * lp_norm(g, qq, u_m)},
    };
    report.monotone = chain_monotone(report.quantities);
    return report;
}

} // namespace

ChainReport proof_chain_frac(const SparseFamily& family, const Weight& w, double p, double alpha,
                             int n, const StepFunction& f, const StepFunction& g) {
    require_nonneg(f, "proof_chain_frac");
    require_nonneg(g, "proof_chain_frac");
    const double q = frac_q(p, alpha, n);
    const double pp = conjugate(p);
    const double beta = 1.0 - alpha / n;
    if (pp / q <= beta + 1e-12) {
        return frac_chain_direct(family, w, p, q, alpha, n, f, g);
    }
    if (q / pp <= beta + 1e-12) {
        // swap roles through the symmetric pairing: sides trade places, the
        // weight inverts, and the dual data satisfies the direct condition
        ChainReport report =
            frac_chain_direct(family, weight_pow(w, -1.0), conjugate(q), pp, alpha, n, g, f);
        report.dual_run = true;
        return report;
    }
    throw PreconditionError("proof_chain_frac: admissibility fails: min(p'/q, q/p') = " +
                            std::to_string(std::min(pp / q, q / pp)) + " > 1 - alpha/n = " +
                            std::to_string(beta));
}

DualityResult duality_check(const SparseFamily& family, const Weight& w, double p,
                            int trials, std::uint64_t seed) {
    if (!(p > 1.0)) throw InputError("duality_check: p must exceed 1");
    const MeshSpec mesh = w.step().mesh();
    const OperatorSpec op = OperatorSpec::cz(family, mesh);
    DualityResult res;
    res.n1 = estimate_norm(op, w, p, p, trials, 1e-11, seed).value;
    res.n2 = estimate_norm(op, dual_weight(w, p), conjugate(p), conjugate(p), trials, 1e-11,
                           seed + 0x9e3779b97f4a7c15ULL)
                 .value;
    res.ok = std::fabs(res.n1 - res.n2) <= 0.05 * std::max(res.n1, res.n2);
    return res;
}

} // namespace dyadic
