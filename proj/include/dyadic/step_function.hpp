#ifndef DYADIC_STEP_FUNCTION_HPP
#define DYADIC_STEP_FUNCTION_HPP

#include <string>
#include <vector>

#include "dyadic/mesh.hpp"

namespace dyadic {

/// Piecewise-constant function on a uniform dyadic mesh, one value per cell,
/// row-major (axis 0 slowest).  Integrals against mesh cubes are plain cell
/// sums, so the only rounding is floating-point summation.
class StepFunction {
public:
    StepFunction() = default;
    StepFunction(MeshSpec mesh, std::vector<double> values, bool nonneg = false);

    static StepFunction constant(const MeshSpec& mesh, double value);
    /// Indicator of a mesh cube.
    static StepFunction indicator(const MeshSpec& mesh, const DyadicCube& q);

    const MeshSpec& mesh() const { return mesh_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }
    bool nonneg() const { return nonneg_; }

    double operator[](std::int64_t cell) const { return values_[static_cast<std::size_t>(cell)]; }

private:
    MeshSpec mesh_;
    std::vector<double> values_;
    bool nonneg_ = false;
};

/// Exact Lebesgue integral of f over a mesh cube.
double integral(const StepFunction& f, const DyadicCube& q);

/// Lebesgue average over a mesh cube.
double average(const StepFunction& f, const DyadicCube& q);

/// (sum |v|^p |cell|)^{1/p}, Lebesgue.
double lp_norm(const StepFunction& f, double p);

/// Cellwise power f^exponent; requires positive cells when exponent < 0.
StepFunction pointwise_map(const StepFunction& f, double exponent);

/// JSON form {"dim":n,"root_level":K,"resolution_level":L,"values":[...],"nonneg":b}.
std::string step_function_to_json(const StepFunction& f);
StepFunction step_function_from_json(const std::string& text);
void save_step_function(const StepFunction& f, const std::string& path);
StepFunction load_step_function(const std::string& path);

} // namespace dyadic

#endif
