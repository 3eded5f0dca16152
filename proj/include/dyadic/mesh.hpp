#ifndef DYADIC_MESH_HPP
#define DYADIC_MESH_HPP

#include <cstdint>
#include <vector>

#include "dyadic/geometry.hpp"

namespace dyadic {

/// Uniform dyadic mesh: cells of side 2^resolution_level tiling the root
/// cube [0, 2^root_level)^dim of the unshifted grid.
struct MeshSpec {
    int dim = 1;
    int root_level = 0;       // K
    int resolution_level = 0; // L <= K

    int depth() const { return root_level - resolution_level; }
    int levels() const { return depth() + 1; }
    std::int64_t cells_per_axis() const { return std::int64_t{1} << depth(); }
    std::int64_t total_cells() const;
    /// Cubes per axis at mesh level index li (li = 0 is the cell level).
    std::int64_t cubes_per_axis(int level_idx) const { return std::int64_t{1} << (depth() - level_idx); }
    std::int64_t cubes_at_level(int level_idx) const;
    /// Exact cell volume 2^{dim*resolution_level}.
    double cell_volume() const;
    double root_volume() const;

    void validate() const;
    bool operator==(const MeshSpec& o) const {
        return dim == o.dim && root_level == o.root_level && resolution_level == o.resolution_level;
    }
    bool operator!=(const MeshSpec& o) const { return !(*this == o); }
};

/// Row-major linear index (axis 0 slowest) of a multi-index with the given
/// per-axis count.
std::int64_t to_linear(const std::vector<std::int64_t>& multi, std::int64_t per_axis);
std::vector<std::int64_t> from_linear(std::int64_t linear, std::int64_t per_axis, int dim);

/// The t=0 grid cube at mesh level index li with per-axis offsets.
DyadicCube mesh_cube(const MeshSpec& mesh, int level_idx, const std::vector<std::int64_t>& offsets);
DyadicCube mesh_root(const MeshSpec& mesh);

/// Position of a cube inside the mesh.
struct MeshCubeRef {
    int level_idx = 0;      // 0 = cell level
    std::int64_t linear = 0;
};

/// Checks the cube belongs to the t=0 grid, sits inside the root and is not
/// finer than the mesh; throws InputError otherwise.
MeshCubeRef locate_cube(const MeshSpec& mesh, const DyadicCube& c);
bool cube_in_mesh(const MeshSpec& mesh, const DyadicCube& c);

/// All mesh cubes (levels resolution..root inside the root), canonical order.
std::vector<DyadicCube> all_mesh_cubes(const MeshSpec& mesh);

/// Linear cell indices covered by a mesh cube, ascending.
std::vector<std::int64_t> cube_cells(const MeshSpec& mesh, const MeshCubeRef& ref);

/// Per-level cube aggregates of a cell array: level[0] is the input, each
/// coarser entry is the fixed-order sum of its 2^n children.  This is the
/// shared engine behind cube integrals, sparse operator application and the
/// maximal operator.
struct LevelTree {
    MeshSpec mesh;
    std::vector<std::vector<double>> level;

    double at(const MeshCubeRef& ref) const { return level[ref.level_idx][ref.linear]; }
};

LevelTree build_level_tree(const MeshSpec& mesh, const std::vector<double>& cells);

/// Deterministic pairwise summation (fixed association independent of the
/// platform or thread count).
double pairwise_sum(const double* data, std::size_t n);
double pairwise_sum(const std::vector<double>& v);

} // namespace dyadic

#endif
