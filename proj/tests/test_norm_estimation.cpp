#include <doctest.h>

#include <cmath>

#include "dyadic/experiments.hpp"
#include "support/oracles.hpp"

using namespace dyadic;

namespace {

const DyadicGrid g0{1, 0u, true};

SparseFamily two_cube_tower() {
    return make_sparse_family({cube(g0, 0, {0}), cube(g0, -1, {0})});
}

Weight unit_weight(const MeshSpec& mesh) {
    return Weight::from_step(StepFunction::constant(mesh, 1.0));
}

} // namespace

TEST_SUITE_BEGIN("norm_estimation");

TEST_CASE("constants from the bound formulas") {
    CHECK(cz_constant(2.0) == doctest::Approx(8.0).epsilon(1e-15));
    CHECK(cz_constant(3.0) == doctest::Approx(18.0).epsilon(1e-13));
    CHECK(cz_constant(1.5) == doctest::Approx(18.0).epsilon(1e-13));
    CHECK(cz_weight_exponent(2.0) == doctest::Approx(1.0));
    CHECK(cz_weight_exponent(3.0) == doctest::Approx(1.0));
    CHECK(cz_weight_exponent(1.5) == doctest::Approx(2.0));

    // n=1, alpha=1/2, p=8/7: q=8/3, p'=8, min(p'/q, q/p') = 1/3 <= 1/2
    CHECK(frac_q(8.0 / 7.0, 0.5, 1) == doctest::Approx(8.0 / 3.0).epsilon(1e-13));
    CHECK(frac_admissible(8.0 / 7.0, 0.5, 1));
    CHECK(frac_constant(8.0 / 7.0, 0.5, 1) ==
          doctest::Approx(8.0 * std::sqrt(4.0 / 3.0) * std::pow(2.0, 1.5)).epsilon(1e-13));
    CHECK(frac_constant(8.0 / 7.0, 0.5, 1) == doctest::Approx(26.1279).epsilon(1e-4));
    CHECK(frac_weight_exponent(8.0 / 7.0, 0.5, 1) == doctest::Approx(1.5).epsilon(1e-13));

    // p=4/3: p'=4, q=4, min(1,1)=1 > 1/2: rejected
    CHECK_FALSE(frac_admissible(4.0 / 3.0, 0.5, 1));
    // alpha -> 0 never rejects: min(x, 1/x) <= 1
    CHECK(frac_admissible(1.7, 1e-9, 1));
}

TEST_CASE("estimate on the averaging projection") {
    const MeshSpec mesh{1, 0, -2};
    const OperatorSpec op = OperatorSpec::cz(make_sparse_family({cube(g0, 0, {0})}), mesh);
    const NormEstimate e = estimate_norm(op, unit_weight(mesh), 2.0, 2.0, 4, 1e-12, 1);
    CHECK(e.value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(e.converged);
}

TEST_CASE("two-cell tower matches the closed form and the dense oracle") {
    const MeshSpec mesh{1, 0, -1};
    const OperatorSpec op = OperatorSpec::cz(two_cube_tower(), mesh);
    const NormEstimate e = estimate_norm(op, unit_weight(mesh), 2.0, 2.0, 4, 1e-13, 2);
    const double expected = (1.0 + std::sqrt(2.0)) / std::sqrt(2.0);
    CHECK(e.value == doctest::Approx(expected).epsilon(1e-9));
    CHECK(oracle::l2_norm_dense(op) == doctest::Approx(expected).epsilon(1e-11));

    // certificate: the stored witness reproduces the value
    CHECK(witness_ratio(op, unit_weight(mesh), 2.0, 2.0, e.witness) ==
          doctest::Approx(e.value).epsilon(1e-10));
}

TEST_CASE("estimate agrees with the dense singular-value oracle") {
    Rng rng(83);
    const MeshSpec mesh{1, 0, -6}; // 64 cells
    for (int trial = 0; trial < 10; ++trial) {
        const SparseFamily family = random_sparse_family(rng, mesh, 2.0);
        const OperatorSpec op = (trial % 2 == 0)
                                    ? OperatorSpec::cz(family, mesh)
                                    : OperatorSpec::frac_sparse(family, 0.5, mesh);
        const NormEstimate e = estimate_norm(op, unit_weight(mesh), 2.0, 2.0, 6, 1e-13, 100 + trial);
        const double dense = oracle::l2_norm_dense(op);
        CHECK(e.value == doctest::Approx(dense).epsilon(1e-6));
        CHECK(e.value <= dense * (1.0 + 1e-9)); // always a lower bound
    }
}

TEST_CASE("more restarts never lower the estimate") {
    Rng rng(89);
    const MeshSpec mesh{1, 0, -5};
    const SparseFamily family = random_sparse_family(rng, mesh, 2.0);
    const Weight w = random_step_weight(rng, mesh);
    const OperatorSpec op = OperatorSpec::cz(family, mesh);
    const double few = estimate_norm(op, w, 3.0, 3.0, 2, 1e-11, 7).value;
    const double many = estimate_norm(op, w, 3.0, 3.0, 8, 1e-11, 7).value;
    CHECK(many >= few - 1e-15);
}

TEST_CASE("bound check cz") {
    const MeshSpec mesh{1, 0, -1};
    const BoundCheckReport r = bound_check_cz(two_cube_tower(), unit_weight(mesh), 2.0, 4, 3);
    CHECK(r.constant == doctest::Approx(8.0));
    CHECK(r.weight_constant.value == doctest::Approx(1.0));
    CHECK(r.estimate.value == doctest::Approx(1.70710678).epsilon(1e-6));
    CHECK(r.ok);

    Rng rng(97);
    const MeshSpec m8{1, 0, -6};
    for (double p : {1.5, 2.0, 3.0}) {
        const SparseFamily family = random_sparse_family(rng, m8, 2.0);
        const Weight w = random_step_weight(rng, m8);
        const BoundCheckReport rr = bound_check_cz(family, w, p, 6, rng.next_u64());
        CHECK(rr.ok);
        CHECK(rr.weight_constant.value <= rr.weight_constant_dyadic.value * (1.0 + 1e-12));
    }
}

TEST_CASE("bound check cz in two dimensions") {
    Rng rng(211);
    const MeshSpec mesh{2, 0, -3};
    for (double p : {1.5, 2.0}) {
        const SparseFamily family = random_sparse_family(rng, mesh, 2.0);
        std::vector<double> wv(static_cast<std::size_t>(mesh.total_cells()));
        for (double& v : wv) v = std::pow(10.0, rng.uniform(-1.0, 1.0));
        const Weight w = Weight::from_step(StepFunction(mesh, wv, true));
        const BoundCheckReport r = bound_check_cz(family, w, p, 4, rng.next_u64());
        CHECK(r.ok);
    }
}

TEST_CASE("fractional chain direct case runs unswapped") {
    // n=1, alpha=1/2, p=1.6: q=8, p'/q = 1/3 <= 1/2
    Rng rng(227);
    const MeshSpec mesh{1, 0, -6};
    CHECK(frac_q(1.6, 0.5, 1) == doctest::Approx(8.0).epsilon(1e-12));
    for (int trial = 0; trial < 5; ++trial) {
        const SparseFamily family = random_sparse_family(rng, mesh, 2.0);
        const Weight w = random_step_weight(rng, mesh);
        const StepFunction f = random_step_function(rng, mesh, 0.0, 10.0);
        const StepFunction g = random_step_function(rng, mesh, 0.0, 10.0);
        const ChainReport r = proof_chain_frac(family, w, 1.6, 0.5, 1, f, g);
        CHECK(r.monotone);
        CHECK_FALSE(r.dual_run);
        CHECK(bound_check_frac(family, w, 1.6, 0.5, 1, 4, rng.next_u64()).ok);
    }
}

TEST_CASE("bound check frac at a second admissible point") {
    // n=1, alpha=1/4, p=8/7: q=8/5, min(p'/q, q/p') = 1/5 <= 3/4
    Rng rng(223);
    const MeshSpec mesh{1, 0, -6};
    CHECK(frac_admissible(8.0 / 7.0, 0.25, 1));
    for (int trial = 0; trial < 3; ++trial) {
        const SparseFamily family = random_sparse_family(rng, mesh, 2.0);
        const Weight w = random_step_weight(rng, mesh);
        const BoundCheckReport r = bound_check_frac(family, w, 8.0 / 7.0, 0.25, 1, 4, rng.next_u64());
        CHECK(r.ok);
        CHECK(r.q == doctest::Approx(8.0 / 5.0));
        const StepFunction f = random_step_function(rng, mesh, 0.0, 10.0);
        const StepFunction g = random_step_function(rng, mesh, 0.0, 10.0);
        CHECK(proof_chain_frac(family, w, 8.0 / 7.0, 0.25, 1, f, g).monotone);
    }
}

TEST_CASE("bound check frac and the admissibility gate") {
    Rng rng(101);
    const MeshSpec mesh{1, 0, -6};
    for (int trial = 0; trial < 5; ++trial) {
        const SparseFamily family = random_sparse_family(rng, mesh, 2.0);
        const Weight w = random_step_weight(rng, mesh);
        const BoundCheckReport r = bound_check_frac(family, w, 8.0 / 7.0, 0.5, 1, 6, rng.next_u64());
        CHECK(r.ok);
        CHECK(r.q == doctest::Approx(8.0 / 3.0));
    }
    const SparseFamily family = random_sparse_family(rng, mesh, 2.0);
    CHECK_THROWS_AS(bound_check_frac(family, random_step_weight(rng, mesh), 4.0 / 3.0, 0.5, 1, 2, 1),
                    PreconditionError);
}

TEST_CASE("proof chain cz: hand examples") {
    const MeshSpec mesh{1, 0, -1};
    const StepFunction chi = StepFunction::constant(mesh, 1.0);

    const ChainReport two = proof_chain_cz(two_cube_tower(), unit_weight(mesh), 2.0, chi, chi);
    REQUIRE(two.quantities.size() == 6);
    const double expected_two[] = {1.5, 1.5, 2.0, 2.0, 2.0, 8.0};
    for (std::size_t i = 0; i < 6; ++i)
        CHECK(two.quantities[i].second == doctest::Approx(expected_two[i]).epsilon(1e-10));
    CHECK(two.monotone);

    const ChainReport root =
        proof_chain_cz(make_sparse_family({cube(g0, 0, {0})}), unit_weight(mesh), 2.0, chi, chi);
    const double expected_root[] = {1.0, 1.0, 2.0, 2.0, 2.0, 8.0};
    for (std::size_t i = 0; i < 6; ++i)
        CHECK(root.quantities[i].second == doctest::Approx(expected_root[i]).epsilon(1e-10));

    CHECK_THROWS_AS(proof_chain_cz(two_cube_tower(), unit_weight(mesh), 1.5, chi, chi), InputError);
}

TEST_CASE("proof chains monotone on random inputs") {
    Rng rng(103);
    const MeshSpec mesh{1, 0, -6};
    for (int trial = 0; trial < 25; ++trial) {
        const SparseFamily family = random_sparse_family(rng, mesh, 2.0);
        const Weight w = random_step_weight(rng, mesh);
        const StepFunction f = random_step_function(rng, mesh, 0.0, 10.0);
        const StepFunction g = random_step_function(rng, mesh, 0.0, 10.0);
        const double p = (trial % 2 == 0) ? 2.0 : 3.0;
        CHECK(proof_chain_cz(family, w, p, f, g).monotone);
        const ChainReport frac = proof_chain_frac(family, w, 8.0 / 7.0, 0.5, 1, f, g);
        CHECK(frac.monotone);
        CHECK(frac.dual_run); // p'/q = 3 > 2 at this exponent point
    }
}

TEST_CASE("proof chain frac: single cube and degenerate g") {
    const MeshSpec mesh{1, 0, -1};
    const StepFunction chi = StepFunction::constant(mesh, 1.0);
    const SparseFamily root_family = make_sparse_family({cube(g0, 0, {0})});
    const ChainReport r = proof_chain_frac(root_family, unit_weight(mesh), 8.0 / 7.0, 0.5, 1, chi, chi);
    CHECK(r.monotone);
    CHECK(r.quantities[0].second == doctest::Approx(1.0).epsilon(1e-12));

    const StepFunction zero = StepFunction::constant(mesh, 0.0);
    const ChainReport z = proof_chain_frac(root_family, unit_weight(mesh), 8.0 / 7.0, 0.5, 1, chi, zero);
    CHECK(z.monotone);
    CHECK(z.quantities[0].second == doctest::Approx(0.0));

    CHECK_THROWS_AS(proof_chain_frac(root_family, unit_weight(mesh), 4.0 / 3.0, 0.5, 1, chi, chi),
                    PreconditionError);
}

TEST_CASE("duality of estimated norms") {
    const MeshSpec mesh{1, 0, -1};
    const DualityResult self = duality_check(two_cube_tower(), unit_weight(mesh), 2.0, 4, 11);
    CHECK(self.ok);
    CHECK(self.n1 == doctest::Approx(self.n2).epsilon(1e-8)); // self-dual point

    const MeshSpec m6{1, 0, -5};
    const DualityResult rank_one =
        duality_check(make_sparse_family({mesh_root(m6)}), unit_weight(m6), 3.0, 4, 13);
    CHECK(rank_one.ok);
    CHECK(rank_one.n1 == doctest::Approx(1.0).epsilon(1e-6)); // averaging contraction

    Rng rng(107);
    for (int trial = 0; trial < 5; ++trial) {
        const SparseFamily family = random_sparse_family(rng, m6, 2.0);
        const Weight w = random_step_weight(rng, m6);
        CHECK(duality_check(family, w, 3.0, 8, rng.next_u64()).ok);
    }
}

TEST_SUITE_END();
