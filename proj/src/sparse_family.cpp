#include "dyadic/sparse_family.hpp"

#include <algorithm>
#include <deque>
#include <fstream>

#include <json.hpp>

#include "dyadic/errors.hpp"

namespace dyadic {

namespace {

// containment within one grid without rational endpoints: ancestors have
// index floor-shifted for t=0 grids, and are reachable via parent() otherwise
bool contains_in_grid(const DyadicCube& big, const DyadicCube& small) {
    if (big.level < small.level) return false;
    if (big.level == small.level) return big.index == small.index;
    if (big.grid.shift_bits == 0) {
        const int shift = big.level - small.level;
        for (int a = 0; a < big.grid.dim; ++a) {
            const std::int64_t anc = small.index[a] >> shift; // arithmetic shift: floor division
            if (anc != big.index[a]) return false;
        }
        return true;
    }
    DyadicCube walk = small;
    while (walk.level < big.level) walk = parent(walk);
    return walk.index == big.index;
}

void check_single_grid(const std::vector<DyadicCube>& cubes) {
    for (const DyadicCube& c : cubes) {
        if (!(c.grid == cubes.front().grid)) throw InputError("sparse family: cubes from mixed grids");
    }
}

} // namespace

SparseFamily make_sparse_family(std::vector<DyadicCube> cubes, double factor) {
    if (cubes.empty()) throw InputError("sparse family: empty cube set");
    if (!(factor > 0.0) || factor > 1.0) throw InputError("sparse family: factor must lie in (0, 1]");
    check_single_grid(cubes);
    std::sort(cubes.begin(), cubes.end(), cube_canonical_less);
    cubes.erase(std::unique(cubes.begin(), cubes.end()), cubes.end());
    SparseFamily family;
    family.grid = cubes.front().grid;
    family.cubes = std::move(cubes);
    family.factor = factor;
    return family;
}

bool is_sparse(const std::vector<DyadicCube>& cubes, double factor) {
    if (cubes.empty()) throw InputError("is_sparse: empty cube set");
    check_single_grid(cubes);
    const std::size_t m = cubes.size();

    // minimal strict ancestor within the set; the cubes whose minimal
    // ancestor is Q are exactly the maximal strict subcubes of Q
    std::vector<int> anc(m, -1);
    for (std::size_t j = 0; j < m; ++j) {
        int best = -1;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == j || cubes[i] == cubes[j]) continue;
            if (!contains_in_grid(cubes[i], cubes[j])) continue;
            if (best < 0 || cubes[i].level < cubes[static_cast<std::size_t>(best)].level)
                best = static_cast<int>(i);
        }
        anc[j] = best;
    }

    std::vector<Rational> covered(m, Rational(0));
    for (std::size_t j = 0; j < m; ++j) {
        if (anc[j] >= 0) covered[static_cast<std::size_t>(anc[j])] += cubes[j].volume();
    }
    const Rational f = Rational::from_double(factor);
    for (std::size_t i = 0; i < m; ++i) {
        if (covered[i] > f * cubes[i].volume()) return false;
    }
    return true;
}

bool is_sparse(const SparseFamily& family) {
    return is_sparse(family.cubes, family.factor);
}

std::vector<std::vector<std::int64_t>> exceptional_sets(const SparseFamily& family,
                                                        const MeshSpec& mesh) {
    const std::size_t m = family.cubes.size();
    std::vector<MeshCubeRef> refs;
    refs.reserve(m);
    for (const DyadicCube& q : family.cubes) refs.push_back(locate_cube(mesh, q));

    // owner of a cell = smallest family cube containing it; iterating the
    // canonical (coarse to fine) order lets finer cubes overwrite
    std::vector<std::int64_t> owner(static_cast<std::size_t>(mesh.total_cells()), -1);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::int64_t cell : cube_cells(mesh, refs[i]))
            owner[static_cast<std::size_t>(cell)] = static_cast<std::int64_t>(i);
    }

    std::vector<std::vector<std::int64_t>> exceptional(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::int64_t cell : cube_cells(mesh, refs[i])) {
            if (owner[static_cast<std::size_t>(cell)] == static_cast<std::int64_t>(i))
                exceptional[i].push_back(cell);
        }
    }
    return exceptional;
}

SparseFamily sparse_from_function(const StepFunction& f, const DyadicCube& root, double a) {
    if (!(a > 1.0)) throw InputError("sparse_from_function: stopping factor must exceed 1");
    for (double v : f.values()) {
        if (!(v >= 0.0)) throw InputError("sparse_from_function: f must be nonnegative");
    }
    const MeshSpec& mesh = f.mesh();
    const MeshCubeRef root_ref = locate_cube(mesh, root);

    // per-cube integrals of f, one aggregation pass
    std::vector<double> massed(f.values().size());
    const double vol = mesh.cell_volume();
    for (std::size_t i = 0; i < massed.size(); ++i) massed[i] = f.values()[i] * vol;
    const LevelTree tree = build_level_tree(mesh, massed);

    const auto cube_avg = [&](const MeshCubeRef& ref) {
        return tree.at(ref) / std::ldexp(1.0, mesh.dim * (mesh.resolution_level + ref.level_idx));
    };
    if (!(cube_avg(root_ref) > 0.0))
        throw DegenerateInputError("sparse_from_function: f vanishes on the root");

    const auto children_of = [&](const MeshCubeRef& ref) {
        std::vector<MeshCubeRef> kids;
        const auto offsets = from_linear(ref.linear, mesh.cubes_per_axis(ref.level_idx), mesh.dim);
        const std::int64_t child_per_axis = mesh.cubes_per_axis(ref.level_idx - 1);
        for (std::uint32_t bits = 0; bits < (1u << mesh.dim); ++bits) {
            std::int64_t lin = 0;
            for (int axis = 0; axis < mesh.dim; ++axis)
                lin = lin * child_per_axis + (2 * offsets[axis] + ((bits >> axis) & 1u));
            kids.push_back(MeshCubeRef{ref.level_idx - 1, lin});
        }
        return kids;
    };

    std::vector<DyadicCube> result;
    std::deque<MeshCubeRef> stopping{root_ref};
    while (!stopping.empty()) {
        const MeshCubeRef top = stopping.front();
        stopping.pop_front();
        result.push_back(
            mesh_cube(mesh, top.level_idx, from_linear(top.linear, mesh.cubes_per_axis(top.level_idx), mesh.dim)));
        if (top.level_idx == 0) continue;
        const double threshold = a * cube_avg(top);
        const auto first_kids = children_of(top);
        std::deque<MeshCubeRef> scan(first_kids.begin(), first_kids.end());
        while (!scan.empty()) {
            const MeshCubeRef q = scan.front();
            scan.pop_front();
            if (cube_avg(q) >= threshold) {
                stopping.push_back(q); // maximal: descendants handled in its own pass
            } else if (q.level_idx > 0) {
                for (const MeshCubeRef& kid : children_of(q)) scan.push_back(kid);
            }
        }
    }
    return make_sparse_family(std::move(result), 1.0 / a);
}

std::string sparse_family_to_json(const SparseFamily& family) {
    nlohmann::json j;
    j["grid"] = "t0";
    j["factor"] = family.factor;
    nlohmann::json cubes = nlohmann::json::array();
    for (const DyadicCube& q : family.cubes) {
        cubes.push_back({{"level", q.level}, {"index", q.index}});
    }
    j["cubes"] = std::move(cubes);
    return j.dump();
}

SparseFamily sparse_family_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("sparse family: bad JSON: ") + e.what());
    }
    try {
        if (j.at("grid").get<std::string>() != "t0")
            throw InputError("sparse family: only the t=0 grid is supported in files");
        const double factor = j.value("factor", 0.5);
        std::vector<DyadicCube> cubes;
        for (const auto& jc : j.at("cubes")) {
            auto index = jc.at("index").get<std::vector<std::int64_t>>();
            if (index.empty()) throw InputError("sparse family: empty cube index");
            DyadicGrid grid{static_cast<int>(index.size()), 0u, true};
            cubes.push_back(cube(grid, jc.at("level").get<int>(), std::move(index)));
        }
        return make_sparse_family(std::move(cubes), factor);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("sparse family: missing or mistyped field: ") + e.what());
    }
}

void save_sparse_family(const SparseFamily& family, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw InputError("sparse family: cannot open " + path + " for writing");
    os << sparse_family_to_json(family) << '\n';
}

SparseFamily load_sparse_family(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw InputError("sparse family: cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return sparse_family_from_json(text);
}

} // namespace dyadic
