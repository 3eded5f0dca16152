#ifndef DYADIC_OPERATORS_HPP
#define DYADIC_OPERATORS_HPP

#include "dyadic/sparse_family.hpp"
#include "dyadic/weight.hpp"

namespace dyadic {

/// A positive dyadic operator on the mesh.
///
/// cz_sparse:   f -> sum_{Q in S} avg_Q(f) chi_Q
/// frac_sparse: f -> sum_{Q in S} |Q|^{alpha/n} avg_Q(f) chi_Q
/// frac_dyadic: same sum over every mesh cube (the truncated dyadic
///              fractional integral)
/// maximal:     f -> sup over mesh cubes of mu(Q)^{alpha/n-1} int_Q |f| dmu
struct OperatorSpec {
    enum class Kind { cz_sparse, frac_sparse, frac_dyadic, maximal };

    Kind kind = Kind::cz_sparse;
    double alpha = 0.0;
    MeshSpec mesh;
    SparseFamily family; // sparse kinds only
    Measure measure;     // maximal kind only

    static OperatorSpec cz(SparseFamily family, const MeshSpec& mesh);
    static OperatorSpec frac_sparse(SparseFamily family, double alpha, const MeshSpec& mesh);
    static OperatorSpec frac_dyadic(double alpha, const MeshSpec& mesh);
    static OperatorSpec maximal(double alpha, Measure mu, const MeshSpec& mesh);

    bool is_sparse_kind() const { return kind == Kind::cz_sparse || kind == Kind::frac_sparse; }
};

/// Applies the operator.  Summation kinds run one downward accumulation over
/// the cube tree, so a family evaluation and the full dyadic evaluation see
/// their shared terms in the same floating-point order; the maximal kind
/// replaces the running sum by a running max.
StepFunction apply(const OperatorSpec& op, const StepFunction& f);

/// int (op f) g drho.  For sparse kinds the cube-sum evaluation
/// sum_Q coef(Q) avg_Q(f) int_Q g drho must agree to 1e-10 relative; a
/// disagreement means a broken invariant and throws.
double bilinear_form(const OperatorSpec& op, const StepFunction& f, const StepFunction& g,
                     const Measure& rho);

/// The cube-sum route alone (sparse kinds only).
double bilinear_form_cube_sum(const OperatorSpec& op, const StepFunction& f,
                              const StepFunction& g, const Measure& rho);

struct WeakTypeResult {
    double lhs = 0.0; // mu({Mf > lambda})
    double rhs = 0.0; // (lambda^{-1} int_{{Mf > lambda}} |f| dmu)^{n/(n-alpha)}
    bool ok = false;
};

/// Level-set inequality behind the maximal bound.
WeakTypeResult weak_type_check(const OperatorSpec& op, const StepFunction& f, double lambda);

struct MaximalBoundResult {
    double ratio = 0.0; // ||Mf||_{L^q(mu)} / ||f||_{L^p(mu)}
    double bound = 0.0; // (1 + p'/q)^{1-alpha/n}
    bool ok = false;
};

/// Strong-type bound for the universal maximal operator; q solves
/// 1/q = 1/p - alpha/n.
MaximalBoundResult maximal_bound_check(const OperatorSpec& op, const StepFunction& f, double p);

} // namespace dyadic

#endif
