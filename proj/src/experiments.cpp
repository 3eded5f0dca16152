#include "dyadic/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "dyadic/errors.hpp"
#include "dyadic/reference.hpp"

namespace dyadic {

namespace {

using nlohmann::json;

json params_json(const ExperimentConfig& cfg) {
    json j;
    j["alpha"] = cfg.alpha;
    j["n"] = cfg.n;
    j["root_level"] = cfg.root_level;
    j["resolution_level"] = cfg.resolution_level;
    j["trials"] = cfg.trials;
    j["seed"] = cfg.seed;
    j["restarts"] = cfg.restarts;
    return j;
}

void write_if_requested(const std::string& path, const std::string& text) {
    if (path.empty()) return;
    std::ofstream os(path);
    if (!os) throw InputError("experiment: cannot open " + path + " for writing");
    os << text << '\n';
}

json bound_report_json(const BoundCheckReport& r) {
    json j;
    j["theorem"] = r.theorem;
    j["params"] = {{"p", r.p}, {"q", r.q}, {"alpha", r.alpha}, {"n", r.n}};
    j["constant"] = r.constant;
    j["weight_constant"] = {{"value", r.weight_constant.value}, {"cube_set", "sparse"}};
    j["weight_constant_dyadic"] = {{"value", r.weight_constant_dyadic.value}, {"cube_set", "dyadic"}};
    j["norm_estimate"] = r.estimate.value;
    j["bound"] = r.bound;
    j["ratio"] = r.ratio;
    j["ok"] = r.ok;
    j["witness_file"] = nullptr;
    return j;
}

} // namespace

MeshSpec ExperimentConfig::mesh() const {
    MeshSpec m;
    m.dim = n;
    m.root_level = root_level;
    m.resolution_level = resolution_level;
    m.validate();
    return m;
}

namespace {

// an explicit --q must agree with 1/q = 1/p - alpha/n
void check_q_consistency(const ExperimentConfig& cfg) {
    if (cfg.q == 0.0) return;
    if (cfg.p <= 0.0) throw InputError("q given without p");
    const double derived = 1.0 / cfg.p - cfg.alpha / cfg.n;
    if (std::fabs(1.0 / cfg.q - derived) > 1e-9)
        throw InputError("q = " + std::to_string(cfg.q) + " violates 1/q = 1/p - alpha/n");
}

} // namespace

StepFunction random_step_function(Rng& rng, const MeshSpec& mesh, double lo, double hi) {
    std::vector<double> vals(static_cast<std::size_t>(mesh.total_cells()));
    for (double& v : vals) v = rng.uniform(lo, hi);
    return StepFunction(mesh, std::move(vals), lo >= 0.0);
}

Weight random_step_weight(Rng& rng, const MeshSpec& mesh) {
    std::vector<double> vals(static_cast<std::size_t>(mesh.total_cells()));
    for (double& v : vals) v = std::pow(10.0, rng.uniform(-1.0, 1.0));
    return Weight::from_step(StepFunction(mesh, std::move(vals), true));
}

Measure random_measure(Rng& rng, const MeshSpec& mesh) {
    if (rng.below(8) == 0) return Measure::lebesgue();
    return Measure::weighted(random_step_weight(rng, mesh));
}

SparseFamily random_sparse_family(Rng& rng, const MeshSpec& mesh, double a) {
    for (int attempt = 0; attempt < 8; ++attempt) {
        StepFunction f = random_step_function(rng, mesh, 0.0, 10.0);
        double total = 0.0;
        for (double v : f.values()) total += v;
        if (total <= 0.0) continue;
        return sparse_from_function(f, mesh_root(mesh), a);
    }
    throw DegenerateInputError("random_sparse_family: random draws kept vanishing");
}

DominationResult domination_check(const StepFunction& f, const SparseFamily& family, double alpha) {
    if (!(alpha > 0.0)) throw InputError("domination_check: alpha must be positive");
    const MeshSpec& mesh = f.mesh();
    const StepFunction sparse = apply(OperatorSpec::frac_sparse(family, alpha, mesh), f);
    const StepFunction dyadic = apply(OperatorSpec::frac_dyadic(alpha, mesh), f);

    DominationResult res;
    res.pointwise_ok = true;
    res.candidate_bound = (1.0 / family.factor) / (1.0 - std::pow(2.0, -alpha));
    for (std::size_t i = 0; i < sparse.values().size(); ++i) {
        const double s = sparse.values()[i];
        const double d = dyadic.values()[i];
        if (s > d) res.pointwise_ok = false;
        if (d > 0.0) {
            const double ratio = (s > 0.0) ? d / s : std::numeric_limits<double>::infinity();
            res.max_ratio = std::max(res.max_ratio, ratio);
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// verify-maximal

ExperimentResult run_verify_maximal(const ExperimentConfig& cfg) {
    if (cfg.p != 0.0 && !(cfg.p > 1.0))
        throw InputError("verify-maximal: p must exceed 1");
    check_q_consistency(cfg);
    if (cfg.alpha > 0.0) {
        if (cfg.p == 0.0) throw InputError("verify-maximal: alpha > 0 needs an explicit p");
        if (!(cfg.p < cfg.n / cfg.alpha))
            throw InputError("verify-maximal: p must stay below n/alpha");
    }
    const MeshSpec mesh = cfg.mesh();
    if (cfg.alpha >= mesh.dim) throw InputError("verify-maximal: alpha must lie in [0, n)");

    struct Trial {
        double p = 0.0;
        double strong_ratio = 0.0;
        double strong_bound = 0.0;
        bool strong_ok = false;
        bool weak_ok = false;
    };
    std::vector<Trial> rows(static_cast<std::size_t>(cfg.trials));

#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < cfg.trials; ++t) {
        Rng rng = Rng::for_trial(cfg.seed, static_cast<std::uint64_t>(t));
        const StepFunction f = random_step_function(rng, mesh, 0.0, 10.0);
        const Measure mu = random_measure(rng, mesh);
        const double p = (cfg.p > 0.0) ? cfg.p : rng.uniform(1.05, 4.0);
        const OperatorSpec op = OperatorSpec::maximal(cfg.alpha, mu, mesh);

        Trial row;
        row.p = p;
        const MaximalBoundResult strong = maximal_bound_check(op, f, p);
        row.strong_ratio = strong.ratio;
        row.strong_bound = strong.bound;
        row.strong_ok = strong.ok;

        row.weak_ok = true;
        const StepFunction mf = apply(op, f);
        double max_m = 0.0;
        for (double v : mf.values()) max_m = std::max(max_m, v);
        if (max_m > 0.0) {
            for (int i = 0; i < 50; ++i) {
                const double lambda =
                    max_m * std::pow(10.0, -5.0 + (5.0 + 0.01) * (static_cast<double>(i) / 49.0));
                row.weak_ok = row.weak_ok && weak_type_check(op, f, lambda).ok;
            }
        }
        rows[static_cast<std::size_t>(t)] = row;
    }

    int violations = 0;
    double worst = 0.0;
    std::ostringstream csv;
    csv << "trial,p,strong_ratio,strong_bound,strong_ok,weak_ok\n";
    for (std::size_t t = 0; t < rows.size(); ++t) {
        const Trial& row = rows[t];
        if (!row.strong_ok || !row.weak_ok) ++violations;
        worst = std::max(worst, row.strong_ratio / row.strong_bound);
        csv << t << ',' << row.p << ',' << row.strong_ratio << ',' << row.strong_bound << ','
            << row.strong_ok << ',' << row.weak_ok << '\n';
    }

    json j;
    j["theorem"] = "maximal";
    j["params"] = params_json(cfg);
    j["params"]["p"] = (cfg.p > 0.0) ? json(cfg.p) : json("random[1.05,4)");
    if (cfg.p > 0.0) {
        const double q = (cfg.alpha > 0.0) ? frac_q(cfg.p, cfg.alpha, cfg.n) : cfg.p;
        j["bound_constant"] =
            std::pow(1.0 + conjugate(cfg.p) / q, 1.0 - cfg.alpha / cfg.n);
    }
    j["violations"] = violations;
    j["worst_ratio_over_bound"] = worst;
    j["ok"] = violations == 0;

    ExperimentResult res;
    res.ok = violations == 0;
    res.json = j.dump(2);
    res.csv = csv.str();
    write_if_requested(cfg.out, res.json);
    return res;
}

// ---------------------------------------------------------------------------
// verify-cz / verify-frac

ExperimentResult run_verify_cz(const ExperimentConfig& cfg) {
    if (cfg.p != 0.0 && !(cfg.p > 1.0)) throw InputError("verify-cz: p must exceed 1");
    check_q_consistency(cfg);
    const MeshSpec mesh = cfg.mesh();
    const std::vector<double> p_cycle =
        (cfg.p > 0.0) ? std::vector<double>{cfg.p} : std::vector<double>{1.5, 2.0, 3.0};

    struct Trial {
        BoundCheckReport report;
        bool chain_ok = true;
        bool chain_ran = false;
    };
    std::vector<Trial> rows(static_cast<std::size_t>(cfg.trials));

#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < cfg.trials; ++t) {
        Rng rng = Rng::for_trial(cfg.seed, static_cast<std::uint64_t>(t));
        const double p = p_cycle[static_cast<std::size_t>(t) % p_cycle.size()];
        const SparseFamily family = random_sparse_family(rng, mesh, cfg.stopping_factor);
        const Weight w = random_step_weight(rng, mesh);

        Trial row;
        row.report = bound_check_cz(family, w, p, cfg.restarts, rng.next_u64());
        if (p >= 2.0) {
            const StepFunction f = random_step_function(rng, mesh, 0.0, 10.0);
            const StepFunction g = random_step_function(rng, mesh, 0.0, 10.0);
            row.chain_ran = true;
            row.chain_ok = proof_chain_cz(family, w, p, f, g).monotone;
        }
        rows[static_cast<std::size_t>(t)] = row;
    }

    int violations = 0;
    int chain_failures = 0;
    double worst = 0.0;
    double gap = 0.0;
    std::size_t worst_idx = 0;
    json trials_json = json::array();
    std::ostringstream csv;
    csv << "trial,p,norm_estimate,weight_constant,bound,ratio,ok,chain_monotone\n";
    for (std::size_t t = 0; t < rows.size(); ++t) {
        const BoundCheckReport& r = rows[t].report;
        if (!r.ok) ++violations;
        if (rows[t].chain_ran && !rows[t].chain_ok) ++chain_failures;
        if (r.ratio > worst) {
            worst = r.ratio;
            worst_idx = t;
        }
        gap = std::max(gap, r.weight_constant_dyadic.value / r.weight_constant.value);
        trials_json.push_back(bound_report_json(r));
        csv << t << ',' << r.p << ',' << r.estimate.value << ',' << r.weight_constant.value << ','
            << r.bound << ',' << r.ratio << ',' << r.ok << ','
            << (rows[t].chain_ran ? (rows[t].chain_ok ? "1" : "0") : "-") << '\n';
    }
    if (!cfg.out.empty() && !rows.empty()) {
        const std::string witness_path = cfg.out + ".witness.json";
        save_step_function(rows[worst_idx].report.estimate.witness, witness_path);
        trials_json[worst_idx]["witness_file"] = witness_path;
    }

    json j;
    j["theorem"] = "cz";
    j["params"] = params_json(cfg);
    j["params"]["p"] = (cfg.p > 0.0) ? json(cfg.p) : json(p_cycle);
    if (cfg.p > 0.0) j["params"]["weight_exponent"] = cz_weight_exponent(cfg.p);
    j["violations"] = violations;
    j["chain_failures"] = chain_failures;
    j["worst_ratio"] = worst;
    j["max_dyadic_to_sparse_constant_gap"] = gap;
    j["trials_detail"] = std::move(trials_json);
    j["ok"] = violations == 0 && chain_failures == 0;

    ExperimentResult res;
    res.ok = violations == 0 && chain_failures == 0;
    res.json = j.dump(2);
    res.csv = csv.str();
    write_if_requested(cfg.out, res.json);
    return res;
}

ExperimentResult run_verify_frac(const ExperimentConfig& cfg) {
    if (!(cfg.p > 1.0)) throw InputError("verify-frac: p must exceed 1");
    check_q_consistency(cfg);
    const MeshSpec mesh = cfg.mesh();
    const double q = frac_q(cfg.p, cfg.alpha, cfg.n); // validates the exponent window
    if (!frac_admissible(cfg.p, cfg.alpha, cfg.n)) {
        const double pp = conjugate(cfg.p);
        throw PreconditionError(
            "verify-frac: parameters rejected: min(p'/q, q/p') = " +
            std::to_string(std::min(pp / q, q / pp)) + " exceeds 1 - alpha/n = " +
            std::to_string(1.0 - cfg.alpha / cfg.n));
    }

    struct Trial {
        BoundCheckReport report;
        bool chain_ok = false;
    };
    std::vector<Trial> rows(static_cast<std::size_t>(cfg.trials));

#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < cfg.trials; ++t) {
        Rng rng = Rng::for_trial(cfg.seed, static_cast<std::uint64_t>(t));
        const SparseFamily family = random_sparse_family(rng, mesh, cfg.stopping_factor);
        const Weight w = random_step_weight(rng, mesh);

        Trial row;
        row.report = bound_check_frac(family, w, cfg.p, cfg.alpha, cfg.n, cfg.restarts, rng.next_u64());
        const StepFunction f = random_step_function(rng, mesh, 0.0, 10.0);
        const StepFunction g = random_step_function(rng, mesh, 0.0, 10.0);
        row.chain_ok = proof_chain_frac(family, w, cfg.p, cfg.alpha, cfg.n, f, g).monotone;
        rows[static_cast<std::size_t>(t)] = row;
    }

    int violations = 0;
    int chain_failures = 0;
    double worst = 0.0;
    std::size_t worst_idx = 0;
    json trials_json = json::array();
    std::ostringstream csv;
    csv << "trial,p,q,norm_estimate,weight_constant,bound,ratio,ok,chain_monotone\n";
    for (std::size_t t = 0; t < rows.size(); ++t) {
        const BoundCheckReport& r = rows[t].report;
        if (!r.ok) ++violations;
        if (!rows[t].chain_ok) ++chain_failures;
        if (r.ratio > worst) {
            worst = r.ratio;
            worst_idx = t;
        }
        trials_json.push_back(bound_report_json(r));
        csv << t << ',' << r.p << ',' << r.q << ',' << r.estimate.value << ','
            << r.weight_constant.value << ',' << r.bound << ',' << r.ratio << ',' << r.ok << ','
            << rows[t].chain_ok << '\n';
    }
    if (!cfg.out.empty() && !rows.empty()) {
        const std::string witness_path = cfg.out + ".witness.json";
        save_step_function(rows[worst_idx].report.estimate.witness, witness_path);
        trials_json[worst_idx]["witness_file"] = witness_path;
    }

    json j;
    j["theorem"] = "frac";
    j["params"] = params_json(cfg);
    j["params"]["p"] = cfg.p;
    j["params"]["q"] = q;
    j["constant"] = frac_constant(cfg.p, cfg.alpha, cfg.n);
    j["violations"] = violations;
    j["chain_failures"] = chain_failures;
    j["worst_ratio"] = worst;
    j["trials_detail"] = std::move(trials_json);
    j["ok"] = violations == 0 && chain_failures == 0;

    ExperimentResult res;
    res.ok = violations == 0 && chain_failures == 0;
    res.json = j.dump(2);
    res.csv = csv.str();
    write_if_requested(cfg.out, res.json);
    return res;
}

// ---------------------------------------------------------------------------
// sharpness

namespace {

// log2 of G(m) = (r^{m+1} - 1) / ((r - 1) delta) with r = 2^{1-delta}:
// the value of T^S(x^{delta-1}) on the shell [2^{-m-1}, 2^{-m})
double log2_partial(double delta, long m) {
    const double lr = 1.0 - delta; // log2 r
    if (lr < 1e-9) return std::log2(static_cast<double>(m + 1) / delta);
    const double e = static_cast<double>(m + 1) * lr;
    const double log2_num = e + std::log2(1.0 - std::exp2(-e));
    const double log2_den = std::log2((std::exp2(lr) - 1.0) * delta);
    return log2_num - log2_den;
}

// log2 of ||T^S f||_{L^p(w)}^p for the depth-d tower, evaluated shell by
// shell in log space so deep towers neither overflow nor underflow
double log2_image_norm_p(double p, double delta, int depth) {
    const double b1 = (1.0 - delta) * (p - 1.0) + 1.0; // b + 1
    std::vector<double> log2_terms;
    log2_terms.reserve(static_cast<std::size_t>(depth) + 1);
    for (long j = 0; j < depth; ++j) {
        const double log2_shell_mass =
            -static_cast<double>(j) * b1 + std::log2(1.0 - std::exp2(-b1)) - std::log2(b1);
        log2_terms.push_back(p * log2_partial(delta, j) + log2_shell_mass);
    }
    log2_terms.push_back(p * log2_partial(delta, depth) -
                         static_cast<double>(depth) * b1 - std::log2(b1));
    const double peak = *std::max_element(log2_terms.begin(), log2_terms.end());
    double sum = 0.0;
    for (double t : log2_terms) sum += std::exp2(t - peak);
    return peak + std::log2(sum);
}

} // namespace

double sharpness_witness_ratio(double p, double delta, int depth) {
    const double log2_image = log2_image_norm_p(p, delta, depth) / p;
    const double log2_source = -std::log2(delta) / p; // ||f||_{L^p(w)} = delta^{-1/p}
    return std::exp2(log2_image - log2_source);
}

SharpnessRow sharpness_row(double p, double delta, int depth) {
    if (!(delta > 0.0) || delta > 1.0) throw InputError("sharpness: delta must lie in (0, 1]");
    if (depth < 8) throw InputError("sharpness: depth must be at least 8");

    SharpnessRow row;
    row.delta = delta;
    row.norm_lower_bound = sharpness_witness_ratio(p, delta, depth);
    const double deeper = sharpness_witness_ratio(p, delta, depth + 8);
    if (std::fabs(deeper - row.norm_lower_bound) > 0.01 * deeper)
        throw DepthInsufficientError("sharpness: witness norm not converged at depth " +
                                     std::to_string(depth) + " for delta = " + std::to_string(delta));

    // the per-cube product is scale invariant on the tower, so listing the
    // first cubes is enough and keeps s^{b+1} above the double underflow line
    const Weight w = Weight::power((1.0 - delta) * (p - 1.0), 0);
    std::vector<DyadicCube> tower;
    const DyadicGrid grid{1, 0u, true};
    for (int k = 0; k <= std::min(depth, 300); ++k) tower.push_back(cube(grid, -k, {0}));
    row.weight_constant = ap_constant(w, p, tower, "sparse").value;
    row.ratio = row.norm_lower_bound / std::pow(row.weight_constant, std::max(1.0, conjugate(p) / p));
    return row;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw InputError("fit_slope: need two points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        num += (x[i] - mx) * (y[i] - my);
        den += (x[i] - mx) * (x[i] - mx);
    }
    if (den == 0.0) throw InputError("fit_slope: degenerate abscissae");
    return num / den;
}

ExperimentResult run_sharpness(const ExperimentConfig& cfg) {
    const double p = (cfg.p > 0.0) ? cfg.p : 1.5;
    if (!(p > 1.0) || p > 2.0)
        throw InputError("sharpness: p must lie in (1, 2]; the blow-up family targets max(1, p'/p)");
    std::vector<double> deltas = cfg.deltas;
    if (deltas.empty()) {
        for (int k = 2; k <= 7; ++k) deltas.push_back(std::ldexp(1.0, -k));
    }
    std::sort(deltas.begin(), deltas.end(), std::greater<double>());

    std::vector<SharpnessRow> rows;
    rows.reserve(deltas.size());
    for (double d : deltas) rows.push_back(sharpness_row(p, d, cfg.depth));

    std::vector<double> lx, ly;
    for (const SharpnessRow& r : rows) {
        lx.push_back(std::log(r.weight_constant));
        ly.push_back(std::log(r.norm_lower_bound));
    }
    const double slope = fit_slope(lx, ly);
    const double target = std::max(1.0, conjugate(p) / p);
    const bool ok = (slope <= target * 1.15) && (p < 2.0 ? slope >= target * 0.85 : true);

    json j;
    j["theorem"] = "sharpness";
    j["params"] = {{"p", p}, {"depth", cfg.depth}, {"deltas", deltas}};
    json jrows = json::array();
    std::ostringstream csv;
    csv << "delta,weight_constant,norm_lower_bound,ratio\n";
    for (const SharpnessRow& r : rows) {
        jrows.push_back({{"delta", r.delta},
                         {"weight_constant", r.weight_constant},
                         {"norm_lower_bound", r.norm_lower_bound},
                         {"ratio", r.ratio}});
        csv << r.delta << ',' << r.weight_constant << ',' << r.norm_lower_bound << ',' << r.ratio
            << '\n';
    }
    j["rows"] = std::move(jrows);
    j["slope"] = slope;
    j["target_exponent"] = target;
    j["ok"] = ok;

    ExperimentResult res;
    res.ok = ok;
    res.json = j.dump(2);
    res.csv = csv.str();
    write_if_requested(cfg.out, res.json);
    return res;
}

// ---------------------------------------------------------------------------
// sparse-decompose

ExperimentResult run_sparse_decompose(const ExperimentConfig& cfg) {
    if (cfg.input.empty()) throw InputError("sparse-decompose: an input step function file is required");
    const StepFunction f = load_step_function(cfg.input);
    const MeshSpec mesh = f.mesh();
    const SparseFamily family = sparse_from_function(f, mesh_root(mesh), cfg.stopping_factor);

    const bool sparse_ok = is_sparse(family);
    const auto exceptional = exceptional_sets(family, mesh);

    bool exceptional_ok = true;
    double min_ratio = 1.0;
    std::vector<char> seen(static_cast<std::size_t>(mesh.total_cells()), 0);
    for (std::size_t i = 0; i < exceptional.size(); ++i) {
        const MeshCubeRef ref = locate_cube(mesh, family.cubes[i]);
        const std::int64_t cube_cell_count = static_cast<std::int64_t>(cube_cells(mesh, ref).size());
        const std::int64_t e_count = static_cast<std::int64_t>(exceptional[i].size());
        if (cube_cell_count > 2 * e_count) exceptional_ok = false;
        min_ratio = std::min(min_ratio, static_cast<double>(e_count) / static_cast<double>(cube_cell_count));
        for (std::int64_t cell : exceptional[i]) {
            if (seen[static_cast<std::size_t>(cell)]) exceptional_ok = false; // disjointness
            seen[static_cast<std::size_t>(cell)] = 1;
        }
    }

    json verification;
    verification["is_sparse"] = sparse_ok;
    verification["exceptional"] = {{"disjoint_and_large", exceptional_ok},
                                   {"min_e_to_cube_ratio", min_ratio}};
    bool ok = sparse_ok && exceptional_ok;
    if (cfg.alpha > 0.0) {
        const DominationResult dom = domination_check(f, family, cfg.alpha);
        verification["domination"] = {{"alpha", cfg.alpha},
                                      {"pointwise_sparse_le_dyadic", dom.pointwise_ok},
                                      {"max_dyadic_to_sparse_ratio", dom.max_ratio},
                                      {"candidate_bound", dom.candidate_bound}};
        ok = ok && dom.pointwise_ok && dom.max_ratio <= dom.candidate_bound * (1.0 + 1e-9);
    }

    json j = json::parse(sparse_family_to_json(family));
    j["verification"] = std::move(verification);

    std::ostringstream csv;
    csv << "level,index\n";
    for (const DyadicCube& q : family.cubes) {
        csv << q.level << ',';
        for (std::size_t a = 0; a < q.index.size(); ++a) {
            if (a) csv << ' ';
            csv << q.index[a];
        }
        csv << '\n';
    }

    ExperimentResult res;
    res.ok = ok;
    res.json = j.dump(2);
    res.csv = csv.str();
    write_if_requested(cfg.out, res.json);
    return res;
}

} // namespace dyadic
