#include "dyadic/operators.hpp"

#include <cmath>
#include <limits>

#include "dyadic/errors.hpp"

namespace dyadic {

namespace {

void check_alpha(double alpha, int n) {
    if (!(alpha >= 0.0) || alpha >= static_cast<double>(n))
        throw InputError("operator: alpha must lie in [0, n)");
}

// per-level family membership masks
std::vector<std::vector<char>> family_masks(const MeshSpec& mesh, const SparseFamily& family) {
    std::vector<std::vector<char>> masks(mesh.levels());
    for (int li = 0; li < mesh.levels(); ++li)
        masks[li].assign(static_cast<std::size_t>(mesh.cubes_at_level(li)), 0);
    for (const DyadicCube& q : family.cubes) {
        const MeshCubeRef ref = locate_cube(mesh, q);
        masks[ref.level_idx][static_cast<std::size_t>(ref.linear)] = 1;
    }
    return masks;
}

std::int64_t parent_linear(std::int64_t lin, std::int64_t per_axis, int dim) {
    std::int64_t offsets[4];
    for (int a = dim - 1; a >= 0; --a) {
        offsets[a] = lin % per_axis;
        lin /= per_axis;
    }
    const std::int64_t parent_per_axis = per_axis / 2;
    std::int64_t p = 0;
    for (int a = 0; a < dim; ++a) p = p * parent_per_axis + (offsets[a] >> 1);
    return p;
}

// sum_{Q in mask} coef(Q) avg_Q(f) chi_Q via one downward accumulation
StepFunction apply_summation(const OperatorSpec& op, const StepFunction& f) {
    const MeshSpec& mesh = op.mesh;
    const int n = mesh.dim;
    const int top = mesh.depth();

    std::vector<double> massed(f.values().size());
    const double vol = mesh.cell_volume();
    for (std::size_t i = 0; i < massed.size(); ++i) massed[i] = f.values()[i] * vol;
    const LevelTree tree = build_level_tree(mesh, massed);

    std::vector<std::vector<char>> masks;
    if (op.kind != OperatorSpec::Kind::frac_dyadic) masks = family_masks(mesh, op.family);

    const auto term = [&](int li, std::int64_t lin) -> double {
        if (op.kind != OperatorSpec::Kind::frac_dyadic && !masks[li][static_cast<std::size_t>(lin)])
            return 0.0;
        const int level = mesh.resolution_level + li;
        const double inv_vol = std::ldexp(1.0, -n * level);
        const double coef = (op.kind == OperatorSpec::Kind::cz_sparse)
                                ? 1.0
                                : std::pow(std::ldexp(1.0, level), op.alpha);
        return coef * tree.level[li][static_cast<std::size_t>(lin)] * inv_vol;
    };

    std::vector<std::vector<double>> acc(mesh.levels());
    acc[top].assign(1, term(top, 0));
    for (int li = top - 1; li >= 0; --li) {
        const std::int64_t count = mesh.cubes_at_level(li);
        const std::int64_t per_axis = mesh.cubes_per_axis(li);
        acc[li].assign(static_cast<std::size_t>(count), 0.0);
        const std::vector<double>& up = acc[li + 1];
#pragma omp parallel for schedule(static) if (count > 4096)
        for (std::int64_t lin = 0; lin < count; ++lin) {
            acc[li][static_cast<std::size_t>(lin)] =
                up[static_cast<std::size_t>(parent_linear(lin, per_axis, n))] + term(li, lin);
        }
    }
    return StepFunction(mesh, std::move(acc[0]), f.nonneg());
}

StepFunction apply_maximal(const OperatorSpec& op, const StepFunction& f) {
    const MeshSpec& mesh = op.mesh;
    const int n = mesh.dim;
    const int top = mesh.depth();
    const double expo = op.alpha / n - 1.0;

    const std::vector<double> masses = op.measure.cell_masses(mesh);
    std::vector<double> abs_massed(masses.size());
    for (std::size_t i = 0; i < masses.size(); ++i)
        abs_massed[i] = std::fabs(f.values()[i]) * masses[i];
    const LevelTree num = build_level_tree(mesh, abs_massed);
    const LevelTree den = build_level_tree(mesh, masses);

    constexpr double kNone = -std::numeric_limits<double>::infinity();
    const auto value = [&](int li, std::int64_t lin) -> double {
        const double mass = den.level[li][static_cast<std::size_t>(lin)];
        if (!(mass > 0.0)) return kNone; // mass-zero cubes do not compete
        return std::pow(mass, expo) * num.level[li][static_cast<std::size_t>(lin)];
    };

    std::vector<std::vector<double>> acc(mesh.levels());
    acc[top].assign(1, value(top, 0));
    for (int li = top - 1; li >= 0; --li) {
        const std::int64_t count = mesh.cubes_at_level(li);
        const std::int64_t per_axis = mesh.cubes_per_axis(li);
        acc[li].assign(static_cast<std::size_t>(count), kNone);
        const std::vector<double>& up = acc[li + 1];
#pragma omp parallel for schedule(static) if (count > 4096)
        for (std::int64_t lin = 0; lin < count; ++lin) {
            acc[li][static_cast<std::size_t>(lin)] =
                std::max(up[static_cast<std::size_t>(parent_linear(lin, per_axis, n))], value(li, lin));
        }
    }
    std::vector<double>& cells = acc[0];
    for (double& v : cells) {
        if (v == kNone) v = 0.0;
    }
    return StepFunction(mesh, std::move(cells), true);
}

} // namespace

OperatorSpec OperatorSpec::cz(SparseFamily family, const MeshSpec& mesh) {
    mesh.validate();
    OperatorSpec op;
    op.kind = Kind::cz_sparse;
    op.mesh = mesh;
    op.family = std::move(family);
    family_masks(mesh, op.family); // validates every cube sits in the mesh
    return op;
}

OperatorSpec OperatorSpec::frac_sparse(SparseFamily family, double alpha, const MeshSpec& mesh) {
    mesh.validate();
    check_alpha(alpha, mesh.dim);
    OperatorSpec op;
    op.kind = Kind::frac_sparse;
    op.alpha = alpha;
    op.mesh = mesh;
    op.family = std::move(family);
    family_masks(mesh, op.family);
    return op;
}

OperatorSpec OperatorSpec::frac_dyadic(double alpha, const MeshSpec& mesh) {
    mesh.validate();
    check_alpha(alpha, mesh.dim);
    OperatorSpec op;
    op.kind = Kind::frac_dyadic;
    op.alpha = alpha;
    op.mesh = mesh;
    return op;
}

OperatorSpec OperatorSpec::maximal(double alpha, Measure mu, const MeshSpec& mesh) {
    mesh.validate();
    check_alpha(alpha, mesh.dim);
    OperatorSpec op;
    op.kind = Kind::maximal;
    op.alpha = alpha;
    op.mesh = mesh;
    op.measure = std::move(mu);
    return op;
}

StepFunction apply(const OperatorSpec& op, const StepFunction& f) {
    if (f.mesh() != op.mesh) throw InputError("apply: function mesh differs from operator mesh");
    if (op.kind == OperatorSpec::Kind::maximal) return apply_maximal(op, f);
    return apply_summation(op, f);
}

namespace {

std::vector<double> cube_sum_terms(const OperatorSpec& op, const StepFunction& f,
                                   const StepFunction& g, const Measure& rho) {
    if (!op.is_sparse_kind()) throw InputError("bilinear cube sum: sparse kinds only");
    if (f.mesh() != op.mesh || g.mesh() != op.mesh)
        throw InputError("bilinear form: mesh mismatch");
    const MeshSpec& mesh = op.mesh;

    std::vector<double> f_massed(f.values().size());
    const double vol = mesh.cell_volume();
    for (std::size_t i = 0; i < f_massed.size(); ++i) f_massed[i] = f.values()[i] * vol;
    const LevelTree ftree = build_level_tree(mesh, f_massed);

    const std::vector<double> rho_masses = rho.cell_masses(mesh);
    std::vector<double> g_massed(g.values().size());
    for (std::size_t i = 0; i < g_massed.size(); ++i) g_massed[i] = g.values()[i] * rho_masses[i];
    const LevelTree gtree = build_level_tree(mesh, g_massed);

    std::vector<double> terms;
    terms.reserve(op.family.cubes.size());
    for (const DyadicCube& q : op.family.cubes) {
        const MeshCubeRef ref = locate_cube(mesh, q);
        const int level = mesh.resolution_level + ref.level_idx;
        const double coef = (op.kind == OperatorSpec::Kind::cz_sparse)
                                ? 1.0
                                : std::pow(std::ldexp(1.0, level), op.alpha);
        const double avg = ftree.at(ref) * std::ldexp(1.0, -mesh.dim * level);
        terms.push_back(coef * avg * gtree.at(ref));
    }
    return terms;
}

} // namespace

double bilinear_form_cube_sum(const OperatorSpec& op, const StepFunction& f,
                              const StepFunction& g, const Measure& rho) {
    return pairwise_sum(cube_sum_terms(op, f, g, rho));
}

double bilinear_form(const OperatorSpec& op, const StepFunction& f, const StepFunction& g,
                     const Measure& rho) {
    if (f.mesh() != op.mesh || g.mesh() != op.mesh)
        throw InputError("bilinear form: mesh mismatch");
    const StepFunction tf = apply(op, f);
    const std::vector<double> rho_masses = rho.cell_masses(op.mesh);
    std::vector<double> terms(tf.values().size());
    for (std::size_t i = 0; i < terms.size(); ++i)
        terms[i] = tf.values()[i] * g.values()[i] * rho_masses[i];
    const double pointwise = pairwise_sum(terms);

    if (op.is_sparse_kind()) {
        const std::vector<double> cube_terms = cube_sum_terms(op, f, g, rho);
        const double cube_sum = pairwise_sum(cube_terms);
        // compare against a cancellation-free magnitude so signed inputs
        // cannot fake a relative failure
        double scale = 0.0;
        for (double t : terms) scale += std::fabs(t);
        double cube_scale = 0.0;
        for (double t : cube_terms) cube_scale += std::fabs(t);
        scale = std::max({scale, cube_scale, std::fabs(pointwise), std::fabs(cube_sum)});
        if (std::fabs(pointwise - cube_sum) > 1e-10 * std::max(scale, 1e-300))
            throw Error("bilinear form: dual evaluations disagree beyond 1e-10");
    }
    return pointwise;
}

WeakTypeResult weak_type_check(const OperatorSpec& op, const StepFunction& f, double lambda) {
    if (op.kind != OperatorSpec::Kind::maximal)
        throw InputError("weak_type_check: operator must be the maximal kind");
    if (!(lambda > 0.0)) throw InputError("weak_type_check: lambda must be positive");
    const StepFunction mf = apply(op, f);
    const std::vector<double> masses = op.measure.cell_masses(op.mesh);

    std::vector<double> level_mass, level_int;
    for (std::size_t i = 0; i < masses.size(); ++i) {
        if (mf.values()[i] > lambda) {
            level_mass.push_back(masses[i]);
            level_int.push_back(std::fabs(f.values()[i]) * masses[i]);
        }
    }
    WeakTypeResult res;
    res.lhs = pairwise_sum(level_mass);
    const double q0 = op.mesh.dim / (op.mesh.dim - op.alpha);
    res.rhs = std::pow(pairwise_sum(level_int) / lambda, q0);
    res.ok = res.lhs <= res.rhs * (1.0 + 1e-12);
    return res;
}

MaximalBoundResult maximal_bound_check(const OperatorSpec& op, const StepFunction& f, double p) {
    if (op.kind != OperatorSpec::Kind::maximal)
        throw InputError("maximal_bound_check: operator must be the maximal kind");
    const double n = op.mesh.dim;
    if (!(p > 1.0)) throw InputError("maximal_bound_check: p must exceed 1");
    if (op.alpha > 0.0 && p > n / op.alpha + 1e-15)
        throw InputError("maximal_bound_check: p must not exceed n/alpha");

    const double inv_q = 1.0 / p - op.alpha / n;
    const double q = (inv_q > 1e-15) ? 1.0 / inv_q : std::numeric_limits<double>::infinity();
    const double pp = conjugate(p);
    const double beta = 1.0 - op.alpha / n;

    MaximalBoundResult res;
    res.bound = std::pow(1.0 + (std::isinf(q) ? 0.0 : pp / q), beta);
    const StepFunction mf = apply(op, f);
    const double fn = lp_norm(f, p, op.measure);
    const double mn = lp_norm(mf, q, op.measure);
    res.ratio = (fn > 0.0) ? mn / fn : 0.0;
    res.ok = res.ratio <= res.bound * (1.0 + 1e-10);
    return res;
}

} // namespace dyadic
