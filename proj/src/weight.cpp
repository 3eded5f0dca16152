#include "dyadic/weight.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>

#include <json.hpp>

#include "dyadic/errors.hpp"

namespace dyadic {

double conjugate(double p) {
    if (!(p > 1.0)) throw InputError("conjugate exponent needs p > 1");
    return p / (p - 1.0);
}

Weight Weight::from_step(StepFunction w) {
    for (double v : w.values()) {
        if (!(v > 0.0)) throw InputError("weight: step weights must be strictly positive");
    }
    Weight out;
    out.kind_ = Kind::step;
    out.step_ = StepFunction(w.mesh(), w.values(), true);
    return out;
}

Weight Weight::power(double exponent, int root_level) {
    if (!(exponent > -1.0)) throw InputError("weight: power exponent must exceed -1 for local integrability");
    Weight out;
    out.kind_ = Kind::power;
    out.power_a_ = exponent;
    out.power_root_ = root_level;
    return out;
}

const StepFunction& Weight::step() const {
    if (kind_ != Kind::step) throw InputError("weight: not a step weight");
    return step_;
}

double Weight::power_exponent() const {
    if (kind_ != Kind::power) throw InputError("weight: not a power weight");
    return power_a_;
}

int Weight::power_root_level() const {
    if (kind_ != Kind::power) throw InputError("weight: not a power weight");
    return power_root_;
}

double Weight::interval_integral(double lo, double hi) const {
    if (kind_ != Kind::power) throw InputError("weight: interval integrals are closed-form for power weights only");
    if (lo < 0.0 || hi < lo) throw InputError("weight: bad interval for power weight");
    const double e = power_a_ + 1.0;
    return (std::pow(hi, e) - std::pow(lo, e)) / e;
}

double Weight::cube_mass(const DyadicCube& q) const {
    if (kind_ == Kind::step) return integral(step_, q);
    if (q.grid.dim != 1) throw InputError("weight: power weights are one-dimensional");
    const double lo = std::ldexp(static_cast<double>(q.index[0]), q.level);
    const double hi = std::ldexp(static_cast<double>(q.index[0] + 1), q.level);
    return interval_integral(lo, hi);
}

Weight weight_pow(const Weight& w, double exponent) {
    if (w.kind() == Weight::Kind::step) {
        return Weight::from_step(pointwise_map(w.step(), exponent));
    }
    const double a = w.power_exponent() * exponent;
    if (!(a > -1.0)) throw NonIntegrableDualError("weight: power " + std::to_string(a) +
                                                  " is not locally integrable");
    return Weight::power(a, w.power_root_level());
}

Weight dual_weight(const Weight& w, double p) {
    return weight_pow(w, 1.0 - conjugate(p));
}

Measure Measure::weighted(Weight w) {
    Measure m;
    m.weight_ = std::make_shared<Weight>(std::move(w));
    return m;
}

Measure Measure::density(StepFunction d) {
    for (double v : d.values()) {
        if (!(v >= 0.0)) throw InputError("measure: density must be nonnegative");
    }
    Measure m;
    m.density_ = std::make_shared<StepFunction>(d.mesh(), d.values(), true);
    return m;
}

std::vector<double> Measure::cell_masses(const MeshSpec& mesh) const {
    const std::int64_t total = mesh.total_cells();
    std::vector<double> masses(static_cast<std::size_t>(total));
    const double vol = mesh.cell_volume();
    if (is_lebesgue()) {
        for (auto& m : masses) m = vol;
        return masses;
    }
    if (density_) {
        if (density_->mesh() != mesh) throw InputError("measure: density lives on a different mesh");
        for (std::int64_t i = 0; i < total; ++i) masses[static_cast<std::size_t>(i)] = (*density_)[i] * vol;
        return masses;
    }
    if (weight_->kind() == Weight::Kind::step) {
        if (weight_->step().mesh() != mesh) throw InputError("measure: weight lives on a different mesh");
        for (std::int64_t i = 0; i < total; ++i)
            masses[static_cast<std::size_t>(i)] = weight_->step()[i] * vol;
        return masses;
    }
    if (mesh.dim != 1) throw InputError("measure: power weights are one-dimensional");
    for (std::int64_t i = 0; i < total; ++i) {
        const double lo = std::ldexp(static_cast<double>(i), mesh.resolution_level);
        const double hi = std::ldexp(static_cast<double>(i + 1), mesh.resolution_level);
        masses[static_cast<std::size_t>(i)] = weight_->interval_integral(lo, hi);
    }
    return masses;
}

double Measure::cube_mass(const MeshSpec& mesh, const DyadicCube& q) const {
    if (is_lebesgue()) return q.volume().to_double();
    if (density_) {
        (void)mesh;
        return integral(*density_, q);
    }
    return weight_->cube_mass(q);
}

std::string Measure::describe() const {
    if (is_lebesgue()) return "lebesgue";
    if (density_) return "density";
    return weight_->kind() == Weight::Kind::step ? "step-weight" : "power-weight";
}

double integral(const StepFunction& f, const DyadicCube& q, const Measure& mu) {
    const MeshCubeRef ref = locate_cube(f.mesh(), q);
    const auto cells = cube_cells(f.mesh(), ref);
    const auto masses = mu.cell_masses(f.mesh());
    std::vector<double> terms;
    terms.reserve(cells.size());
    for (std::int64_t c : cells) terms.push_back(f[c] * masses[static_cast<std::size_t>(c)]);
    return pairwise_sum(terms);
}

double average(const StepFunction& f, const DyadicCube& q, const Measure& mu) {
    const double mass = mu.cube_mass(f.mesh(), q);
    if (!(mass > 0.0)) throw DegenerateMeasureError("average: cube carries no mass");
    return integral(f, q, mu) / mass;
}

double lp_norm(const StepFunction& f, double p, const Measure& mu) {
    const auto masses = mu.cell_masses(f.mesh());
    if (std::isinf(p)) {
        double m = 0.0;
        for (std::size_t i = 0; i < masses.size(); ++i) {
            if (masses[i] > 0.0) m = std::max(m, std::fabs(f.values()[i]));
        }
        return m;
    }
    if (p < 1.0) throw InputError("lp_norm: p must be >= 1");
    std::vector<double> terms(masses.size());
    for (std::size_t i = 0; i < terms.size(); ++i)
        terms[i] = std::pow(std::fabs(f.values()[i]), p) * masses[i];
    return std::pow(pairwise_sum(terms), 1.0 / p);
}

namespace {

WeightConstantReport sup_over_cubes(const std::vector<DyadicCube>& cubes,
                                    const std::string& cube_set,
                                    const std::function<double(const DyadicCube&)>& product) {
    if (cubes.empty()) throw InputError("weight constant: empty cube set");
    std::vector<DyadicCube> ordered = cubes;
    std::sort(ordered.begin(), ordered.end(), cube_canonical_less);
    WeightConstantReport report;
    report.cube_set = cube_set;
    report.value = -std::numeric_limits<double>::infinity();
    for (const DyadicCube& q : ordered) {
        const double v = product(q);
        if (v > report.value) { // ties keep the earlier (larger) cube
            report.value = v;
            report.argmax_cube = q;
        }
    }
    return report;
}

} // namespace

WeightConstantReport ap_constant(const Weight& w, double p, const std::vector<DyadicCube>& cubes,
                                 const std::string& cube_set) {
    const Weight sigma = dual_weight(w, p);
    return sup_over_cubes(cubes, cube_set, [&](const DyadicCube& q) {
        const double wq = w.cube_mass(q);
        const double sq = sigma.cube_mass(q);
        if (!(wq > 0.0) || !(sq > 0.0))
            throw InputError("ap_constant: cube with vanishing weight mass");
        const double vol = q.volume_double();
        return wq * std::pow(sq, p - 1.0) / std::pow(vol, p);
    });
}

WeightConstantReport apq_constant(const Weight& w, double p, double q,
                                  const std::vector<DyadicCube>& cubes,
                                  const std::string& cube_set) {
    const double pp = conjugate(p);
    const Weight u = weight_pow(w, q);
    const Weight sigma = weight_pow(w, -pp);
    const double expo = q / pp;
    return sup_over_cubes(cubes, cube_set, [&](const DyadicCube& c) {
        const double uq = u.cube_mass(c);
        const double sq = sigma.cube_mass(c);
        if (!(uq > 0.0) || !(sq > 0.0))
            throw InputError("apq_constant: cube with vanishing weight mass");
        const double vol = c.volume_double();
        return uq * std::pow(sq, expo) / std::pow(vol, 1.0 + expo);
    });
}

bool constant_identity_check(double p, double q, double alpha, int n) {
    if (!(p > 1.0)) throw InputError("constant identity: p must exceed 1");
    if (alpha < 0.0 || alpha >= n) throw InputError("constant identity: alpha must lie in [0, n)");
    const double lhs_rel = 1.0 / q;
    const double rhs_rel = 1.0 / p - alpha / n;
    if (std::fabs(lhs_rel - rhs_rel) > 1e-12 * std::max(1.0, std::fabs(rhs_rel)))
        throw InputError("constant identity: exponents violate 1/q = 1/p - alpha/n");
    const double pp = conjugate(p);
    const double lhs = 1.0 + pp / q;
    const double rhs = pp * (1.0 - alpha / n);
    return std::fabs(lhs - rhs) <= 1e-12 * std::max(std::fabs(lhs), std::fabs(rhs));
}

std::string weight_to_json(const Weight& w) {
    if (w.kind() == Weight::Kind::step) return step_function_to_json(w.step());
    nlohmann::json j;
    j["kind"] = "power";
    j["a"] = w.power_exponent();
    j["root_level"] = w.power_root_level();
    return j.dump();
}

Weight weight_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("weight: bad JSON: ") + e.what());
    }
    if (j.contains("kind") && j["kind"] == "power") {
        try {
            return Weight::power(j.at("a").get<double>(), j.at("root_level").get<int>());
        } catch (const nlohmann::json::exception& e) {
            throw InputError(std::string("weight: missing power field: ") + e.what());
        }
    }
    return Weight::from_step(step_function_from_json(text));
}

void save_weight(const Weight& w, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw InputError("weight: cannot open " + path + " for writing");
    os << weight_to_json(w) << '\n';
}

Weight load_weight(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw InputError("weight: cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return weight_from_json(text);
}

} // namespace dyadic
