#include "dyadic/geometry.hpp"

#include <cmath>
#include <ostream>

#include "dyadic/errors.hpp"

namespace dyadic {

namespace {

// floor((a + b)/2) with exact integer arithmetic
std::int64_t floor_half(std::int64_t v) {
    return (v >= 0) ? v / 2 : (v - 1) / 2;
}

} // namespace

Rational DyadicCube::low(int axis) const {
    if (axis < 0 || axis >= grid.dim) throw InputError("cube: axis out of range");
    Rational shifted(3 * index[axis] + grid.level_sign(level) * grid.shift_third(axis), 3);
    return Rational::pow2(level) * shifted;
}

Rational DyadicCube::high(int axis) const {
    return low(axis) + side();
}

double DyadicCube::volume_double() const {
    return std::ldexp(1.0, level * grid.dim);
}

bool DyadicCube::contains_point(const std::vector<Rational>& x) const {
    if (static_cast<int>(x.size()) != grid.dim) throw InputError("cube: point dimension mismatch");
    for (int a = 0; a < grid.dim; ++a) {
        if (x[a] < low(a) || !(x[a] < high(a))) return false;
    }
    return true;
}

bool DyadicCube::contains_cube(const DyadicCube& other) const {
    if (grid.dim != other.grid.dim) throw InputError("cube: dimension mismatch");
    for (int a = 0; a < grid.dim; ++a) {
        if (other.low(a) < low(a) || high(a) < other.high(a)) return false;
    }
    return true;
}

bool cube_canonical_less(const DyadicCube& a, const DyadicCube& b) {
    if (a.level != b.level) return a.level > b.level;
    if (a.index != b.index) return a.index < b.index;
    return a.grid.shift_bits < b.grid.shift_bits;
}

std::ostream& operator<<(std::ostream& os, const DyadicCube& c) {
    os << "Q(level=" << c.level << ", index=[";
    for (std::size_t i = 0; i < c.index.size(); ++i) {
        if (i) os << ',';
        os << c.index[i];
    }
    os << "], shift=" << c.grid.shift_bits << ")";
    return os;
}

DyadicCube cube(const DyadicGrid& grid, int level, std::vector<std::int64_t> index) {
    if (static_cast<int>(index.size()) != grid.dim)
        throw InputError("cube: index length does not match grid dimension");
    DyadicCube c;
    c.grid = grid;
    c.level = level;
    c.index = std::move(index);
    return c;
}

DyadicCube parent(const DyadicCube& c) {
    DyadicCube p;
    p.grid = c.grid;
    p.level = c.level + 1;
    p.index.resize(c.index.size());
    const int sign = c.grid.level_sign(c.level);
    for (int a = 0; a < c.grid.dim; ++a) {
        p.index[a] = floor_half(c.index[a] + sign * c.grid.shift_third(a));
    }
    return p;
}

std::vector<DyadicCube> children(const DyadicCube& c) {
    const int n = c.grid.dim;
    const int sign = c.grid.level_sign(c.level); // sign at the parent level
    std::vector<DyadicCube> out;
    out.reserve(std::size_t{1} << n);
    for (std::uint32_t bits = 0; bits < (1u << n); ++bits) {
        DyadicCube ch;
        ch.grid = c.grid;
        ch.level = c.level - 1;
        ch.index.resize(n);
        for (int a = 0; a < n; ++a) {
            std::int64_t base = 2 * c.index[a] + sign * c.grid.shift_third(a);
            ch.index[a] = base + ((bits >> a) & 1u);
        }
        out.push_back(std::move(ch));
    }
    return out;
}

std::vector<DyadicGrid> shifted_grids(int n) {
    if (n < 1) throw InputError("shifted_grids: dimension must be >= 1");
    std::vector<DyadicGrid> grids;
    grids.reserve(std::size_t{1} << n);
    for (std::uint32_t bits = 0; bits < (1u << n); ++bits) {
        grids.push_back(DyadicGrid{n, bits, true});
    }
    return grids;
}

DyadicCube covering_cube(const std::vector<Rational>& q_lo, const Rational& q_side) {
    if (q_side.sign() <= 0) throw InputError("covering_cube: side must be positive");
    const int n = static_cast<int>(q_lo.size());
    if (n < 1) throw InputError("covering_cube: empty query");

    // a query that already is a grid cube covers itself
    for (int k = -62; k <= 62; ++k) {
        const Rational side = Rational::pow2(k);
        if (side < q_side) continue;
        if (q_side < side) break;
        for (const DyadicGrid& g : shifted_grids(n)) {
            DyadicCube cand;
            cand.grid = g;
            cand.level = k;
            cand.index.resize(n);
            bool match = true;
            for (int a = 0; a < n; ++a) {
                Rational t(g.level_sign(k) * g.shift_third(a), 3);
                cand.index[a] = ((q_lo[a] / side) - t).floor();
                if (!(cand.low(a) == q_lo[a])) {
                    match = false;
                    break;
                }
            }
            if (match) return cand;
        }
        break;
    }

    // levels with 2^k in (3*side, 6*side]; the half-open ratio-2 window
    // holds exactly one power of two
    int k_lo = -62;
    while (!(Rational(3) * q_side < Rational::pow2(k_lo))) ++k_lo;
    int k_hi = k_lo;
    while (Rational::pow2(k_hi + 1) <= Rational(6) * q_side) ++k_hi;

    for (int k = k_lo; k <= k_hi; ++k) {
        const Rational side = Rational::pow2(k);
        for (const DyadicGrid& g : shifted_grids(n)) {
            DyadicCube cand;
            cand.grid = g;
            cand.level = k;
            cand.index.resize(n);
            bool fits = true;
            for (int a = 0; a < n; ++a) {
                // index from floor((lo - 2^k*sign*t)/2^k)
                Rational t(g.level_sign(k) * g.shift_third(a), 3);
                cand.index[a] = ((q_lo[a] / side) - t).floor();
                if (q_lo[a] < cand.low(a) || cand.high(a) < q_lo[a] + q_side) {
                    fits = false;
                    break;
                }
            }
            if (fits) return cand;
        }
    }
    throw FalsifiedLemmaError("covering_cube: no shifted dyadic cube of side <= 6x covers the query");
}

} // namespace dyadic
