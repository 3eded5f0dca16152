#ifndef DYADIC_SPARSE_FAMILY_HPP
#define DYADIC_SPARSE_FAMILY_HPP

#include <string>
#include <vector>

#include "dyadic/step_function.hpp"

namespace dyadic {

/// A finite family of cubes from one dyadic grid, carrying the sparseness
/// factor it is supposed to satisfy (1/2 unless stated otherwise).
struct SparseFamily {
    DyadicGrid grid;
    std::vector<DyadicCube> cubes; // canonical order, no duplicates
    double factor = 0.5;
};

/// Normalizes (sorts, dedupes) and checks all cubes share one grid.
SparseFamily make_sparse_family(std::vector<DyadicCube> cubes, double factor = 0.5);

/// Exact check of the sparseness condition: for every Q the union of its
/// strict subcubes in the family has measure at most factor * |Q|.
/// The union is a disjoint union of the maximal strict subcubes, so the
/// measure is an exact rational sum.
bool is_sparse(const std::vector<DyadicCube>& cubes, double factor);
bool is_sparse(const SparseFamily& family);

/// E(Q) = Q minus the union of strict subcubes in the family, returned as
/// lists of mesh cell indices aligned with family.cubes.
std::vector<std::vector<std::int64_t>> exceptional_sets(const SparseFamily& family,
                                                        const MeshSpec& mesh);

/// Stopping-cube construction: the family children of Q are the maximal
/// strict subcubes whose average reaches a times the average over Q;
/// recursion stops at the mesh resolution.  The result is 1/a-sparse.
SparseFamily sparse_from_function(const StepFunction& f, const DyadicCube& root, double a = 2.0);

/// JSON form {"grid":"t0","cubes":[{"level":k,"index":[...]}...],"factor":x}.
std::string sparse_family_to_json(const SparseFamily& family);
SparseFamily sparse_family_from_json(const std::string& text);
void save_sparse_family(const SparseFamily& family, const std::string& path);
SparseFamily load_sparse_family(const std::string& path);

} // namespace dyadic

#endif
