#ifndef DYADIC_GEOMETRY_HPP
#define DYADIC_GEOMETRY_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "dyadic/rational.hpp"

namespace dyadic {

/// A translated dyadic grid 2^k([0,1)^n + m + (-1)^k t), t in {0, 1/3}^n.
///
/// Each coordinate shift is 0 or 1/3 (bit i of shift_bits set means 1/3 on
/// axis i).  With sign_rule on, the shift direction alternates with the level
/// parity; that alternation is what keeps cubes of different levels nested.
struct DyadicGrid {
    int dim = 1;
    std::uint32_t shift_bits = 0;
    bool sign_rule = true;

    /// +1 or -1: the factor multiplying t at the given level.
    int level_sign(int level) const {
        if (!sign_rule) return 1;
        return (level % 2 == 0) ? 1 : -1;
    }
    /// Numerator of the shift on one axis, in thirds (0 or 1).
    int shift_third(int axis) const { return (shift_bits >> axis) & 1u; }

    bool operator==(const DyadicGrid& o) const {
        return dim == o.dim && shift_bits == o.shift_bits && sign_rule == o.sign_rule;
    }
};

/// One cube of a dyadic grid: side 2^level, integer index per axis.
struct DyadicCube {
    DyadicGrid grid;
    int level = 0;
    std::vector<std::int64_t> index;

    /// Exact left endpoint on one axis: 2^level * (index + sign*shift).
    Rational low(int axis) const;
    /// Exact right endpoint (low + side).
    Rational high(int axis) const;
    Rational side() const { return Rational::pow2(level); }
    /// |Q| = 2^{n*level}, exact.
    Rational volume() const { return Rational::pow2(level * grid.dim); }
    /// |Q| as a double (exact for any representable level, deep towers included).
    double volume_double() const;

    bool contains_point(const std::vector<Rational>& x) const;
    bool contains_cube(const DyadicCube& other) const;

    bool operator==(const DyadicCube& o) const {
        return grid == o.grid && level == o.level && index == o.index;
    }
    bool operator!=(const DyadicCube& o) const { return !(*this == o); }
};

/// Ordering used wherever cube lists need a canonical order:
/// larger cubes first, then lexicographic index, then grid shift.
bool cube_canonical_less(const DyadicCube& a, const DyadicCube& b);

std::ostream& operator<<(std::ostream& os, const DyadicCube& c);

/// The cube of `grid` at `level` with the given integer index.
DyadicCube cube(const DyadicGrid& grid, int level, std::vector<std::int64_t> index);

/// The unique cube one level up containing c.
DyadicCube parent(const DyadicCube& c);

/// The 2^n cubes one level down partitioning c, in lexicographic index order.
std::vector<DyadicCube> children(const DyadicCube& c);

/// The 2^n grids with shifts t in {0,1/3}^n under the alternating sign rule.
std::vector<DyadicGrid> shifted_grids(int n);

/// Smallest-effort cover of an axis-parallel rational cube by a shifted
/// dyadic cube with side at most 6x the query side.  Scans the levels with
/// 2^k in (3*side, 6*side] across all 2^n shifted grids.
DyadicCube covering_cube(const std::vector<Rational>& q_lo, const Rational& q_side);

} // namespace dyadic

#endif
