#ifndef DYADIC_WEIGHT_HPP
#define DYADIC_WEIGHT_HPP

#include <memory>
#include <string>
#include <vector>

#include "dyadic/step_function.hpp"

namespace dyadic {

/// A weight: either a strictly positive step function, or the 1-D power
/// weight x^a on [0, 2^root_level) with closed-form interval integrals.
class Weight {
public:
    enum class Kind { step, power };

    static Weight from_step(StepFunction w);
    static Weight power(double exponent, int root_level);

    Kind kind() const { return kind_; }
    const StepFunction& step() const;
    double power_exponent() const;
    int power_root_level() const;

    /// w(Q) for a dyadic cube; step weights require a mesh cube, power
    /// weights use the closed form s^{a+1}/(a+1) on [lo, hi) >= 0.
    double cube_mass(const DyadicCube& q) const;
    /// Closed-form integral over [lo, hi), power kind only.
    double interval_integral(double lo, double hi) const;

private:
    Kind kind_ = Kind::step;
    StepFunction step_;
    double power_a_ = 0.0;
    int power_root_ = 0;
};

/// Weight raised to a pointwise power; power weights map exponents in closed
/// form.  Throws NonIntegrableDualError when the result fails integrability.
Weight weight_pow(const Weight& w, double exponent);

/// The dual weight sigma = w^{1-p'} for 1 < p < infinity.
Weight dual_weight(const Weight& w, double p);

/// A measure on the mesh: Lebesgue, induced by a Weight, or induced by an
/// arbitrary nonnegative step density (the latter allows mass-zero cubes,
/// which maximal operators skip).
class Measure {
public:
    Measure() = default; // Lebesgue
    static Measure lebesgue() { return Measure(); }
    static Measure weighted(Weight w);
    static Measure density(StepFunction d);

    bool is_lebesgue() const { return !weight_ && !density_; }
    const Weight* weight() const { return weight_.get(); }

    /// mu(cell) for every mesh cell, row-major.
    std::vector<double> cell_masses(const MeshSpec& mesh) const;
    double cube_mass(const MeshSpec& mesh, const DyadicCube& q) const;

    std::string describe() const;

private:
    std::shared_ptr<const Weight> weight_;
    std::shared_ptr<const StepFunction> density_;
};

/// integral of f over Q against mu.
double integral(const StepFunction& f, const DyadicCube& q, const Measure& mu);
/// mu-average over Q; throws DegenerateMeasureError when mu(Q) == 0.
double average(const StepFunction& f, const DyadicCube& q, const Measure& mu);
/// (sum |v|^p mu(cell))^{1/p}; p = infinity handled by max over mass-carrying cells.
double lp_norm(const StepFunction& f, double p, const Measure& mu);

/// Result of a weight-constant supremum over an explicit cube family.
struct WeightConstantReport {
    double value = 0.0;
    DyadicCube argmax_cube;
    std::string cube_set; // which family the supremum ranged over
};

/// [w]_{A_p} over the given cubes: sup w(Q) sigma(Q)^{p-1} / |Q|^p.
WeightConstantReport ap_constant(const Weight& w, double p, const std::vector<DyadicCube>& cubes,
                                 const std::string& cube_set = "custom");

/// [w]_{A_{p,q}} over the given cubes: sup u(Q) sigma(Q)^{q/p'} / |Q|^{1+q/p'}
/// with u = w^q and sigma = w^{-p'}.
WeightConstantReport apq_constant(const Weight& w, double p, double q,
                                  const std::vector<DyadicCube>& cubes,
                                  const std::string& cube_set = "custom");

/// Checks 1 + p'/q == p'(1 - alpha/n) to 1e-12 relative, given 1/q = 1/p - alpha/n.
bool constant_identity_check(double p, double q, double alpha, int n);

/// Conjugate exponent p' = p/(p-1).
double conjugate(double p);

std::string weight_to_json(const Weight& w);
Weight weight_from_json(const std::string& text);
void save_weight(const Weight& w, const std::string& path);
Weight load_weight(const std::string& path);

} // namespace dyadic

#endif
