#include <doctest.h>

#include <cmath>

#include "dyadic/experiments.hpp"
#include "dyadic/reference.hpp"

using namespace dyadic;

namespace {

const DyadicGrid g0{1, 0u, true};

SparseFamily two_cube_tower() {
    return make_sparse_family({cube(g0, 0, {0}), cube(g0, -1, {0})});
}

} // namespace

TEST_SUITE_BEGIN("operators");

TEST_CASE("apply: sparse sums") {
    const MeshSpec mesh{1, 0, -2};
    const StepFunction chi = StepFunction::constant(mesh, 1.0);

    const StepFunction single =
        apply(OperatorSpec::cz(make_sparse_family({cube(g0, 0, {0})}), mesh), chi);
    for (double v : single.values()) CHECK(v == doctest::Approx(1.0).epsilon(1e-15));

    const StepFunction two = apply(OperatorSpec::cz(two_cube_tower(), mesh), chi);
    CHECK(two.values()[0] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(two.values()[1] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(two.values()[2] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(two.values()[3] == doctest::Approx(1.0).epsilon(1e-15));

    const StepFunction frac =
        apply(OperatorSpec::frac_sparse(two_cube_tower(), 0.5, mesh), chi);
    CHECK(frac.values()[0] == doctest::Approx(1.0 + std::pow(2.0, -0.5)).epsilon(1e-15));
    CHECK(frac.values()[3] == doctest::Approx(1.0).epsilon(1e-15));

    CHECK_THROWS_AS(apply(OperatorSpec::cz(two_cube_tower(), mesh),
                          StepFunction::constant(MeshSpec{1, 1, -1}, 1.0)),
                    InputError);
}

TEST_CASE("apply: maximal") {
    const MeshSpec mesh{1, 1, -2}; // root [0,2)
    StepFunction chi = StepFunction::indicator(mesh, cube(g0, 0, {0}));

    const StepFunction m0 = apply(OperatorSpec::maximal(0.0, Measure::lebesgue(), mesh), chi);
    for (std::size_t i = 0; i < 4; ++i) CHECK(m0.values()[i] == doctest::Approx(1.0).epsilon(1e-15));
    for (std::size_t i = 4; i < 8; ++i) CHECK(m0.values()[i] == doctest::Approx(0.5).epsilon(1e-15));

    const StepFunction m12 = apply(OperatorSpec::maximal(0.5, Measure::lebesgue(), mesh), chi);
    for (std::size_t i = 0; i < 4; ++i) CHECK(m12.values()[i] == doctest::Approx(1.0).epsilon(1e-15));
    for (std::size_t i = 4; i < 8; ++i)
        CHECK(m12.values()[i] == doctest::Approx(std::pow(2.0, -0.5)).epsilon(1e-15));

    // mass-zero cubes are skipped: density vanishing on [1,2) leaves the sup
    // over the surviving cubes
    std::vector<double> dens(8, 1.0);
    for (std::size_t i = 4; i < 8; ++i) dens[i] = 0.0;
    const Measure mu = Measure::density(StepFunction(mesh, dens, true));
    const StepFunction mz = apply(OperatorSpec::maximal(0.0, mu, mesh), chi);
    CHECK(mz.values()[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(mz.values()[7] == doctest::Approx(1.0).epsilon(1e-15)); // only [0,2) has mass and carries avg 1
}

TEST_CASE("tree kernels match the serial reference") {
    Rng rng(61);
    for (int n = 1; n <= 2; ++n) {
        const MeshSpec mesh{n, 0, (n == 1) ? -6 : -3};
        for (int trial = 0; trial < 10; ++trial) {
            StepFunction f = random_step_function(rng, mesh, 0.0, 10.0);
            const SparseFamily family = random_sparse_family(rng, mesh, 2.0);
            const Measure mu = random_measure(rng, mesh);
            const OperatorSpec specs[] = {
                OperatorSpec::cz(family, mesh),
                OperatorSpec::frac_sparse(family, 0.4, mesh),
                OperatorSpec::frac_dyadic(0.7, mesh),
                OperatorSpec::maximal(0.3, mu, mesh),
            };
            for (const OperatorSpec& op : specs) {
                const StepFunction fast = apply(op, f);
                const StepFunction slow = reference::apply(op, f);
                for (std::size_t i = 0; i < fast.values().size(); ++i) {
                    CHECK(fast.values()[i] ==
                          doctest::Approx(slow.values()[i]).epsilon(1e-12));
                }
            }
        }
    }
}

TEST_CASE("bilinear forms") {
    const MeshSpec mesh{1, 0, -2};
    const StepFunction chi = StepFunction::constant(mesh, 1.0);

    const OperatorSpec single = OperatorSpec::cz(make_sparse_family({cube(g0, 0, {0})}), mesh);
    CHECK(bilinear_form(single, chi, chi, Measure::lebesgue()) == doctest::Approx(1.0).epsilon(1e-14));

    const OperatorSpec two = OperatorSpec::cz(two_cube_tower(), mesh);
    CHECK(bilinear_form(two, chi, chi, Measure::lebesgue()) == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(bilinear_form_cube_sum(two, chi, chi, Measure::lebesgue()) ==
          doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("self-adjointness and linearity") {
    Rng rng(67);
    const MeshSpec mesh{1, 0, -5};
    for (int trial = 0; trial < 25; ++trial) {
        const SparseFamily family = random_sparse_family(rng, mesh, 2.0);
        const StepFunction f = random_step_function(rng, mesh, 0.0, 10.0);
        const StepFunction g = random_step_function(rng, mesh, 0.0, 10.0);
        for (double alpha : {0.0, 0.5}) {
            const OperatorSpec op = (alpha == 0.0)
                                        ? OperatorSpec::cz(family, mesh)
                                        : OperatorSpec::frac_sparse(family, alpha, mesh);
            const double fg = bilinear_form(op, f, g, Measure::lebesgue());
            const double gf = bilinear_form(op, g, f, Measure::lebesgue());
            CHECK(fg == doctest::Approx(gf).epsilon(1e-12));

            // linearity
            std::vector<double> combo(f.values().size());
            for (std::size_t i = 0; i < combo.size(); ++i)
                combo[i] = 2.0 * f.values()[i] + 3.0 * g.values()[i];
            const StepFunction tc = apply(op, StepFunction(mesh, combo, true));
            const StepFunction tf = apply(op, f);
            const StepFunction tg = apply(op, g);
            for (std::size_t i = 0; i < combo.size(); ++i) {
                CHECK(tc.values()[i] ==
                      doctest::Approx(2.0 * tf.values()[i] + 3.0 * tg.values()[i]).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("positivity, monotonicity, sublinearity") {
    Rng rng(71);
    const MeshSpec mesh{1, 0, -5};
    const SparseFamily family = random_sparse_family(rng, mesh, 2.0);
    const Measure mu = random_measure(rng, mesh);
    for (int trial = 0; trial < 10; ++trial) {
        StepFunction f = random_step_function(rng, mesh, 0.0, 5.0);
        std::vector<double> gv(f.values());
        for (double& v : gv) v += rng.uniform(0.0, 3.0);
        const StepFunction g(mesh, gv, true);
        const OperatorSpec specs[] = {
            OperatorSpec::cz(family, mesh),
            OperatorSpec::frac_dyadic(0.5, mesh),
            OperatorSpec::maximal(0.25, mu, mesh),
        };
        for (const OperatorSpec& op : specs) {
            const StepFunction tf = apply(op, f);
            const StepFunction tg = apply(op, g);
            for (std::size_t i = 0; i < tf.values().size(); ++i) {
                CHECK(tf.values()[i] >= 0.0);
                CHECK(tf.values()[i] <= tg.values()[i] * (1.0 + 1e-14));
            }
        }
        // maximal sublinearity: M(f+g) <= Mf + Mg cellwise
        const OperatorSpec m = OperatorSpec::maximal(0.25, mu, mesh);
        std::vector<double> sum(f.values());
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += g.values()[i];
        const StepFunction msum = apply(m, StepFunction(mesh, sum, true));
        const StepFunction mf = apply(m, f);
        const StepFunction mg = apply(m, g);
        for (std::size_t i = 0; i < sum.size(); ++i)
            CHECK(msum.values()[i] <= (mf.values()[i] + mg.values()[i]) * (1.0 + 1e-12));
    }
}

TEST_CASE("sparse sums never exceed the dyadic sum") {
    Rng rng(73);
    const MeshSpec mesh{1, 0, -7};
    for (int trial = 0; trial < 25; ++trial) {
        const StepFunction f = random_step_function(rng, mesh, 0.0, 10.0);
        const SparseFamily family = random_sparse_family(rng, mesh, 2.0);
        const StepFunction sparse = apply(OperatorSpec::frac_sparse(family, 0.5, mesh), f);
        const StepFunction dyadic = apply(OperatorSpec::frac_dyadic(0.5, mesh), f);
        for (std::size_t i = 0; i < sparse.values().size(); ++i) {
            CHECK(sparse.values()[i] <= dyadic.values()[i]); // exact: shared-term evaluation order
        }
    }
}

TEST_CASE("weak type examples") {
    const MeshSpec mesh{1, 1, -2};
    const StepFunction chi = StepFunction::indicator(mesh, cube(g0, 0, {0}));

    const OperatorSpec m0 = OperatorSpec::maximal(0.0, Measure::lebesgue(), mesh);
    const WeakTypeResult a = weak_type_check(m0, chi, 0.75);
    CHECK(a.lhs == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(a.rhs == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    CHECK(a.ok);

    const WeakTypeResult empty = weak_type_check(m0, chi, 2.0);
    CHECK(empty.lhs == 0.0);
    CHECK(empty.ok);

    const OperatorSpec m12 = OperatorSpec::maximal(0.5, Measure::lebesgue(), mesh);
    const WeakTypeResult b = weak_type_check(m12, chi, 0.9);
    CHECK(b.lhs == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(b.rhs == doctest::Approx(std::pow(1.0 / 0.9, 2.0)).epsilon(1e-12));
    CHECK(b.ok);

    CHECK_THROWS_AS(weak_type_check(m0, chi, -1.0), InputError);
    CHECK_THROWS_AS(weak_type_check(OperatorSpec::frac_dyadic(0.5, mesh), chi, 1.0), InputError);
}

TEST_CASE("maximal bound examples") {
    const MeshSpec mesh{1, 1, -2};
    const StepFunction chi = StepFunction::indicator(mesh, cube(g0, 0, {0}));

    const OperatorSpec m0 = OperatorSpec::maximal(0.0, Measure::lebesgue(), mesh);
    const MaximalBoundResult a = maximal_bound_check(m0, chi, 2.0);
    CHECK(a.bound == doctest::Approx(2.0).epsilon(1e-14)); // well known sharp bound p'
    CHECK(a.ratio == doctest::Approx(std::sqrt(1.25)).epsilon(1e-13));
    CHECK(a.ok);

    const OperatorSpec m12 = OperatorSpec::maximal(0.5, Measure::lebesgue(), mesh);
    const MaximalBoundResult b = maximal_bound_check(m12, chi, 8.0 / 7.0);
    CHECK(b.bound == doctest::Approx(2.0).epsilon(1e-14)); // (1 + p'/q)^{1/2} = 2
    CHECK(b.ok);

    // endpoint p = n/alpha gives q = infinity and bound 1
    const MaximalBoundResult c = maximal_bound_check(m12, chi, 2.0);
    CHECK(c.bound == doctest::Approx(1.0));
    CHECK(c.ok);

    CHECK_THROWS_AS(maximal_bound_check(m12, chi, 3.0), InputError); // p > n/alpha
    CHECK_THROWS_AS(maximal_bound_check(m0, chi, 1.0), InputError);
}

TEST_CASE("weak and strong type on random batches") {
    Rng rng(79);
    const MeshSpec mesh{1, 0, -6};
    for (int trial = 0; trial < 50; ++trial) {
        const StepFunction f = random_step_function(rng, mesh, 0.0, 10.0);
        const Measure mu = random_measure(rng, mesh);
        const double alpha = (trial % 2 == 0) ? 0.0 : 0.5;
        const double p = (trial % 2 == 0) ? rng.uniform(1.05, 4.0) : 8.0 / 7.0;
        const OperatorSpec op = OperatorSpec::maximal(alpha, mu, mesh);
        CHECK(maximal_bound_check(op, f, p).ok);

        const StepFunction mf = apply(op, f);
        double max_m = 0.0;
        for (double v : mf.values()) max_m = std::max(max_m, v);
        for (int i = 0; i < 10 && max_m > 0.0; ++i) {
            const double lambda = max_m * std::pow(10.0, -4.0 + 4.2 * i / 9.0);
            CHECK(weak_type_check(op, f, lambda).ok);
        }
    }
}

TEST_SUITE_END();
