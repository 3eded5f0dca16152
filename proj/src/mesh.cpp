#include "dyadic/mesh.hpp"

#include <cmath>

#include "dyadic/errors.hpp"

namespace dyadic {

std::int64_t MeshSpec::total_cells() const {
    std::int64_t t = 1;
    for (int a = 0; a < dim; ++a) t *= cells_per_axis();
    return t;
}

std::int64_t MeshSpec::cubes_at_level(int level_idx) const {
    std::int64_t t = 1;
    for (int a = 0; a < dim; ++a) t *= cubes_per_axis(level_idx);
    return t;
}

double MeshSpec::cell_volume() const {
    return std::ldexp(1.0, dim * resolution_level);
}

double MeshSpec::root_volume() const {
    return std::ldexp(1.0, dim * root_level);
}

void MeshSpec::validate() const {
    if (dim < 1 || dim > 4) throw InputError("mesh: dim must be in 1..4");
    if (resolution_level > root_level) throw InputError("mesh: resolution level above root level");
    if (dim * depth() > 30) throw InputError("mesh: too many cells");
}

std::int64_t to_linear(const std::vector<std::int64_t>& multi, std::int64_t per_axis) {
    std::int64_t lin = 0;
    for (std::int64_t m : multi) lin = lin * per_axis + m;
    return lin;
}

std::vector<std::int64_t> from_linear(std::int64_t linear, std::int64_t per_axis, int dim) {
    std::vector<std::int64_t> multi(dim);
    for (int a = dim - 1; a >= 0; --a) {
        multi[a] = linear % per_axis;
        linear /= per_axis;
    }
    return multi;
}

DyadicCube mesh_cube(const MeshSpec& mesh, int level_idx, const std::vector<std::int64_t>& offsets) {
    DyadicCube c;
    c.grid = DyadicGrid{mesh.dim, 0u, true};
    c.level = mesh.resolution_level + level_idx;
    c.index = offsets;
    return c;
}

DyadicCube mesh_root(const MeshSpec& mesh) {
    return mesh_cube(mesh, mesh.depth(), std::vector<std::int64_t>(mesh.dim, 0));
}

bool cube_in_mesh(const MeshSpec& mesh, const DyadicCube& c) {
    if (c.grid.shift_bits != 0 || c.grid.dim != mesh.dim) return false;
    if (c.level < mesh.resolution_level || c.level > mesh.root_level) return false;
    const std::int64_t per_axis = std::int64_t{1} << (mesh.root_level - c.level);
    for (std::int64_t m : c.index) {
        if (m < 0 || m >= per_axis) return false;
    }
    return true;
}

MeshCubeRef locate_cube(const MeshSpec& mesh, const DyadicCube& c) {
    if (!cube_in_mesh(mesh, c))
        throw InputError("mesh: cube is outside the root, below resolution, or not on the t=0 grid");
    MeshCubeRef ref;
    ref.level_idx = c.level - mesh.resolution_level;
    ref.linear = to_linear(c.index, mesh.cubes_per_axis(ref.level_idx));
    return ref;
}

std::vector<DyadicCube> all_mesh_cubes(const MeshSpec& mesh) {
    std::vector<DyadicCube> out;
    for (int li = mesh.depth(); li >= 0; --li) {
        const std::int64_t count = mesh.cubes_at_level(li);
        const std::int64_t per_axis = mesh.cubes_per_axis(li);
        for (std::int64_t lin = 0; lin < count; ++lin) {
            out.push_back(mesh_cube(mesh, li, from_linear(lin, per_axis, mesh.dim)));
        }
    }
    return out;
}

std::vector<std::int64_t> cube_cells(const MeshSpec& mesh, const MeshCubeRef& ref) {
    const int span_log = ref.level_idx;
    const std::int64_t span = std::int64_t{1} << span_log;
    const std::int64_t per_axis = mesh.cells_per_axis();
    const auto offsets = from_linear(ref.linear, mesh.cubes_per_axis(ref.level_idx), mesh.dim);

    std::vector<std::int64_t> cells;
    cells.reserve(static_cast<std::size_t>(1) << (mesh.dim * span_log));
    std::vector<std::int64_t> rel(mesh.dim, 0);
    while (true) {
        std::int64_t lin = 0;
        for (int a = 0; a < mesh.dim; ++a) lin = lin * per_axis + (offsets[a] * span + rel[a]);
        cells.push_back(lin);
        int a = mesh.dim - 1;
        while (a >= 0 && ++rel[a] == span) rel[a--] = 0;
        if (a < 0) break;
    }
    return cells;
}

LevelTree build_level_tree(const MeshSpec& mesh, const std::vector<double>& cells) {
    if (static_cast<std::int64_t>(cells.size()) != mesh.total_cells())
        throw InputError("level tree: cell array length mismatch");
    LevelTree tree;
    tree.mesh = mesh;
    tree.level.resize(mesh.levels());
    tree.level[0] = cells;
    for (int li = 1; li <= mesh.depth(); ++li) {
        const std::int64_t count = mesh.cubes_at_level(li);
        const std::int64_t per_axis = mesh.cubes_per_axis(li);
        const std::int64_t child_per_axis = mesh.cubes_per_axis(li - 1);
        const std::vector<double>& fine = tree.level[li - 1];
        std::vector<double>& coarse = tree.level[li];
        coarse.assign(count, 0.0);
        const int n = mesh.dim;
#pragma omp parallel for schedule(static) if (count > 4096)
        for (std::int64_t lin = 0; lin < count; ++lin) {
            std::int64_t offsets[4];
            std::int64_t rest = lin;
            for (int a = n - 1; a >= 0; --a) {
                offsets[a] = rest % per_axis;
                rest /= per_axis;
            }
            double sum = 0.0;
            for (std::uint32_t bits = 0; bits < (1u << n); ++bits) {
                std::int64_t child = 0;
                for (int a = 0; a < n; ++a)
                    child = child * child_per_axis + (2 * offsets[a] + ((bits >> a) & 1u));
                sum += fine[child];
            }
            coarse[lin] = sum;
        }
    }
    return tree;
}

double pairwise_sum(const double* data, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += data[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

double pairwise_sum(const std::vector<double>& v) {
    return pairwise_sum(v.data(), v.size());
}

} // namespace dyadic
