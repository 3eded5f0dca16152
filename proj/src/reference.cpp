#include "dyadic/reference.hpp"

#include <cmath>

#include "dyadic/errors.hpp"

namespace dyadic {
namespace reference {

namespace {

double cube_average(const StepFunction& f, const MeshCubeRef& ref) {
    const auto cells = cube_cells(f.mesh(), ref);
    double sum = 0.0;
    for (std::int64_t c : cells) sum += f[c];
    return sum / static_cast<double>(cells.size());
}

StepFunction apply_summation(const OperatorSpec& op, const StepFunction& f) {
    const MeshSpec& mesh = op.mesh;
    std::vector<double> out(static_cast<std::size_t>(mesh.total_cells()), 0.0);

    std::vector<DyadicCube> cubes;
    if (op.kind == OperatorSpec::Kind::frac_dyadic) {
        cubes = all_mesh_cubes(mesh);
    } else {
        cubes = op.family.cubes;
    }
    for (const DyadicCube& q : cubes) {
        const MeshCubeRef ref = locate_cube(mesh, q);
        const double coef = (op.kind == OperatorSpec::Kind::cz_sparse)
                                ? 1.0
                                : std::pow(std::ldexp(1.0, q.level), op.alpha);
        const double add = coef * cube_average(f, ref);
        for (std::int64_t c : cube_cells(mesh, ref)) out[static_cast<std::size_t>(c)] += add;
    }
    return StepFunction(mesh, std::move(out), f.nonneg());
}

StepFunction apply_maximal(const OperatorSpec& op, const StepFunction& f) {
    const MeshSpec& mesh = op.mesh;
    const double expo = op.alpha / mesh.dim - 1.0;
    const std::vector<double> masses = op.measure.cell_masses(mesh);
    const std::int64_t total = mesh.total_cells();
    std::vector<double> out(static_cast<std::size_t>(total), 0.0);

    const std::int64_t cells_pa = mesh.cells_per_axis();
    for (std::int64_t cell = 0; cell < total; ++cell) {
        const auto multi = from_linear(cell, cells_pa, mesh.dim);
        double best = 0.0;
        for (int li = 0; li <= mesh.depth(); ++li) {
            std::vector<std::int64_t> offsets(mesh.dim);
            for (int a = 0; a < mesh.dim; ++a) offsets[a] = multi[a] >> li;
            const MeshCubeRef ref{li, to_linear(offsets, mesh.cubes_per_axis(li))};
            double mass = 0.0;
            double num = 0.0;
            for (std::int64_t c : cube_cells(mesh, ref)) {
                mass += masses[static_cast<std::size_t>(c)];
                num += std::fabs(f[c]) * masses[static_cast<std::size_t>(c)];
            }
            if (mass > 0.0) best = std::max(best, std::pow(mass, expo) * num);
        }
        out[static_cast<std::size_t>(cell)] = best;
    }
    return StepFunction(mesh, std::move(out), true);
}

} // namespace

StepFunction apply(const OperatorSpec& op, const StepFunction& f) {
    if (f.mesh() != op.mesh) throw InputError("reference apply: mesh mismatch");
    if (op.kind == OperatorSpec::Kind::maximal) return apply_maximal(op, f);
    return apply_summation(op, f);
}

} // namespace reference
} // namespace dyadic
