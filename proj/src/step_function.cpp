#include "dyadic/step_function.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "dyadic/errors.hpp"

namespace dyadic {

StepFunction::StepFunction(MeshSpec mesh, std::vector<double> values, bool nonneg)
    : mesh_(mesh), values_(std::move(values)), nonneg_(nonneg) {
    mesh_.validate();
    if (static_cast<std::int64_t>(values_.size()) != mesh_.total_cells())
        throw InputError("step function: values length does not match the mesh");
    if (nonneg_) {
        for (double v : values_) {
            if (!(v >= 0.0)) throw InputError("step function: nonneg flag set but a value is negative");
        }
    }
}

StepFunction StepFunction::constant(const MeshSpec& mesh, double value) {
    return StepFunction(mesh, std::vector<double>(static_cast<std::size_t>(mesh.total_cells()), value),
                        value >= 0.0);
}

StepFunction StepFunction::indicator(const MeshSpec& mesh, const DyadicCube& q) {
    const MeshCubeRef ref = locate_cube(mesh, q);
    std::vector<double> vals(static_cast<std::size_t>(mesh.total_cells()), 0.0);
    for (std::int64_t cell : cube_cells(mesh, ref)) vals[static_cast<std::size_t>(cell)] = 1.0;
    return StepFunction(mesh, std::move(vals), true);
}

double integral(const StepFunction& f, const DyadicCube& q) {
    const MeshCubeRef ref = locate_cube(f.mesh(), q);
    const auto cells = cube_cells(f.mesh(), ref);
    std::vector<double> vals;
    vals.reserve(cells.size());
    for (std::int64_t c : cells) vals.push_back(f[c]);
    return pairwise_sum(vals) * f.mesh().cell_volume();
}

double average(const StepFunction& f, const DyadicCube& q) {
    return integral(f, q) / q.volume().to_double();
}

double lp_norm(const StepFunction& f, double p) {
    if (p < 1.0) throw InputError("lp_norm: p must be >= 1");
    std::vector<double> terms(f.values().size());
    for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = std::pow(std::fabs(f.values()[i]), p);
    return std::pow(pairwise_sum(terms) * f.mesh().cell_volume(), 1.0 / p);
}

StepFunction pointwise_map(const StepFunction& f, double exponent) {
    std::vector<double> out(f.values().size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double v = f.values()[i];
        if (exponent < 0.0 && v == 0.0)
            throw SingularityError("pointwise_map: zero cell with negative exponent");
        out[i] = std::pow(v, exponent);
    }
    return StepFunction(f.mesh(), std::move(out), f.nonneg());
}

std::string step_function_to_json(const StepFunction& f) {
    nlohmann::json j;
    j["dim"] = f.mesh().dim;
    j["root_level"] = f.mesh().root_level;
    j["resolution_level"] = f.mesh().resolution_level;
    j["values"] = f.values();
    j["nonneg"] = f.nonneg();
    return j.dump();
}

StepFunction step_function_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("step function: bad JSON: ") + e.what());
    }
    try {
        MeshSpec mesh;
        mesh.dim = j.at("dim").get<int>();
        mesh.root_level = j.at("root_level").get<int>();
        mesh.resolution_level = j.at("resolution_level").get<int>();
        auto values = j.at("values").get<std::vector<double>>();
        const bool nonneg = j.value("nonneg", false);
        return StepFunction(mesh, std::move(values), nonneg);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("step function: missing or mistyped field: ") + e.what());
    }
}

void save_step_function(const StepFunction& f, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw InputError("step function: cannot open " + path + " for writing");
    os << step_function_to_json(f) << '\n';
}

StepFunction load_step_function(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw InputError("step function: cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return step_function_from_json(text);
}

} // namespace dyadic
