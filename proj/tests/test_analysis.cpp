#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qdspin/analysis.hpp"
#include "test_util.hpp"

using namespace qdspin;
using namespace qdspin::analysis;
using doctest::Approx;

TEST_CASE("closed-form fidelity anchors") {
    CHECK(fidelity_formula_x(0.0) == Approx(1.0));
    CHECK(fidelity_formula_x(0.1) == Approx(0.990099071169114).epsilon(1e-14));
    CHECK(fidelity_formula_x(0.2) == Approx(10001.0 / 10401.0).epsilon(1e-14));
    CHECK(fidelity_formula_x(1.0) == Approx(17.0 / 33.0).epsilon(1e-14));

    CHECK(fidelity_formula_g(0.0) == Approx(1.0 / 3.0));
    CHECK(fidelity_formula_g(2.4) == Approx(0.9996987280297416).epsilon(1e-14));

    CHECK_THROWS_AS(fidelity_formula_x(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(fidelity_formula_g(-0.1), std::invalid_argument);
}

TEST_CASE("fidelity falls as leakage grows") {
    double previous = fidelity_formula_x(0.01);
    for (double x = 0.02; x < 1.995; x += 0.01) {
        const double current = fidelity_formula_x(x);
        CHECK(current < previous);
        previous = current;
    }
}

TEST_CASE("balanced coupling: values, domain, inverse") {
    CHECK(balanced_coupling(0.2) == Approx(0.7035623639735145).epsilon(1e-14));
    CHECK(balanced_coupling(0.1) == Approx(0.9987492177719089).epsilon(1e-14));

    CHECK_THROWS_AS(balanced_coupling(0.0), std::domain_error);
    CHECK_THROWS_AS(balanced_coupling(2.0), std::domain_error);
    CHECK_THROWS_AS(balanced_coupling(-1.0), std::domain_error);
    CHECK_THROWS_AS(balanced_coupling(2.5), std::domain_error);
    CHECK_THROWS_AS(balanced_leakage(0.0), std::domain_error);
    CHECK_THROWS_AS(balanced_leakage(-0.5), std::domain_error);

    for (double x : {0.05, 0.2, 1.0, 1.9}) {
        CHECK(balanced_leakage(balanced_coupling(x)) == Approx(x).epsilon(1e-12));
    }
    for (double y : {0.1, 0.7, 2.4}) {
        CHECK(balanced_coupling(balanced_leakage(y)) == Approx(y).epsilon(1e-12));
    }
}

TEST_CASE("the two fidelity parameterizations agree on the balanced curve") {
    for (int i = 0; i < 1000; ++i) {
        const double x = 0.001 + (1.998 - 0.001) * i / 999.0;
        const double via_g = fidelity_formula_g(balanced_coupling(x));
        CHECK(std::abs(via_g - fidelity_formula_x(x)) < 1e-12);
    }
}

TEST_CASE("dephasing adjustment") {
    CHECK(dephasing_adjustment(0.9, 0.0, 1.0) == Approx(0.9));
    CHECK(dephasing_adjustment(1.0, 1.0, 1.0) == Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(dephasing_adjustment(1.0, 0.1, 1.0) == Approx(0.9048374180359595).epsilon(1e-14));

    // Longer exposure can only lose fidelity.
    double previous = 1.0;
    for (double tau = 0.2; tau < 2.05; tau += 0.2) {
        const double current = dephasing_adjustment(1.0, tau, 1.0);
        CHECK(current < previous);
        previous = current;
    }

    CHECK_THROWS_AS(dephasing_adjustment(-0.1, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(dephasing_adjustment(1.1, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(dephasing_adjustment(0.5, -1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(dephasing_adjustment(0.5, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("input ensembles") {
    const std::vector<QuantumState> four = ensemble_inputs(Ensemble::FourBasis);
    REQUIRE(four.size() == 4);
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(four[k].amplitude(k) == Complex(1.0, 0.0));
        CHECK(four[k].norm() == Approx(1.0));
    }

    const std::vector<QuantumState> sup = ensemble_inputs(Ensemble::UniformSuperposition);
    REQUIRE(sup.size() == 2);
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(sup[0].amplitude(0).real() == Approx(s));
    CHECK(sup[0].amplitude(2).real() == Approx(s));
    CHECK(sup[1].amplitude(1).real() == Approx(s));
    CHECK(sup[1].amplitude(3).real() == Approx(s));

    const std::vector<QuantumState> combined = ensemble_inputs(Ensemble::Combined);
    REQUIRE(combined.size() == 6);
    for (const QuantumState& state : combined) {
        CHECK(state.norm() == Approx(1.0));
    }
    CHECK(testutil::max_amp_diff(combined[0], four[0]) == 0.0);
    CHECK(testutil::max_amp_diff(combined[4], sup[0]) == 0.0);
}

TEST_CASE("simulated gate fidelity approaches one without leakage") {
    const OperatingPoint point{0.0, 100.0, 0.1};
    const SimulationResult result =
        simulate_cnot_fidelity(point, SimulationOptions{Ensemble::FourBasis});
    CHECK(result.fidelity > 1.0 - 1e-6);
    CHECK(result.fidelity <= 1.0 + 1e-12);
    CHECK(result.success_probability > 0.999);
    CHECK(result.success_probability == Approx(0.999980000449991).epsilon(1e-9));
}

TEST_CASE("simulated fidelity at pinned operating points") {
    const auto run = [](double x, Ensemble ensemble) {
        const OperatingPoint point{x, balanced_coupling(x), 0.1};
        return simulate_cnot_fidelity(point, SimulationOptions{ensemble});
    };

    CHECK(run(0.1, Ensemble::FourBasis).fidelity == Approx(0.990147843917217).epsilon(1e-9));
    CHECK(run(0.2, Ensemble::FourBasis).fidelity == Approx(0.962267710593340).epsilon(1e-9));
    CHECK(run(0.1, Ensemble::FourBasis).success_probability ==
          Approx(0.697305419171848).epsilon(1e-9));
    CHECK(run(0.2, Ensemble::FourBasis).success_probability ==
          Approx(0.524266596633334).epsilon(1e-9));

    CHECK(run(0.1, Ensemble::Combined).fidelity == Approx(0.986896146882783).epsilon(1e-9));
    CHECK(run(0.1, Ensemble::UniformSuperposition).fidelity ==
          Approx(0.980392752813914).epsilon(1e-9));

    // Success probability is ensemble-independent here: every input loses
    // the same weight to leakage at a symmetric operating point.
    CHECK(run(0.1, Ensemble::Combined).success_probability ==
          Approx(run(0.1, Ensemble::FourBasis).success_probability).epsilon(1e-9));
}

TEST_CASE("simulated fidelity decreases with leakage") {
    double previous = 1.1;
    for (double x : {0.01, 0.05, 0.1, 0.2, 0.5, 1.0}) {
        const OperatingPoint point{x, balanced_coupling(x), 0.1};
        const double f =
            simulate_cnot_fidelity(point, SimulationOptions{Ensemble::FourBasis}).fidelity;
        CHECK(f < previous);
        previous = f;
    }
}

TEST_CASE("caller-supplied input lists") {
    const OperatingPoint point{0.1, balanced_coupling(0.1), 0.1};
    const std::vector<QuantumState> four = ensemble_inputs(Ensemble::FourBasis);

    const SimulationResult from_list = simulate_cnot_fidelity(point, four);
    const SimulationResult from_enum =
        simulate_cnot_fidelity(point, SimulationOptions{Ensemble::FourBasis});
    CHECK(from_list.fidelity == Approx(from_enum.fidelity).epsilon(1e-14));
    CHECK(from_list.success_probability ==
          Approx(from_enum.success_probability).epsilon(1e-14));

    const std::vector<QuantumState> empty;
    CHECK_THROWS_AS(simulate_cnot_fidelity(point, empty), std::invalid_argument);
}

TEST_CASE("operating point validation") {
    CHECK_THROWS_AS(simulate_cnot_fidelity(OperatingPoint{-0.1, 1.0, 0.1}),
                    std::invalid_argument);
    CHECK_THROWS_AS(simulate_cnot_fidelity(OperatingPoint{0.1, -1.0, 0.1}),
                    std::invalid_argument);
    CHECK_THROWS_AS(simulate_cnot_fidelity(OperatingPoint{0.1, 1.0, 0.0}),
                    std::invalid_argument);
}

TEST_CASE("sweep along the leakage axis") {
    SweepRequest request;
    request.axis = SweepAxis::KappaS;
    request.lo = 0.1;
    request.hi = 0.2;
    request.step = 0.1;

    const std::vector<SweepRow> rows = sweep(request);
    REQUIRE(rows.size() == 2);

    CHECK(rows[0].x == Approx(0.1).epsilon(1e-14));
    CHECK(rows[0].g_over_kappa == Approx(0.9987492177719089).epsilon(1e-12));
    CHECK(rows[0].f_formula == Approx(0.990099071169114).epsilon(1e-12));
    CHECK(rows[0].f_sim == Approx(0.986896146882783).epsilon(1e-9));
    CHECK(rows[0].success_prob == Approx(0.697305419171848).epsilon(1e-9));

    CHECK(rows[1].x == Approx(0.2).epsilon(1e-14));
    CHECK(rows[1].g_over_kappa == Approx(0.7035623639735145).epsilon(1e-12));
    CHECK(rows[1].f_formula == Approx(10001.0 / 10401.0).epsilon(1e-12));
    CHECK(rows[1].f_sim == Approx(0.950164856012410).epsilon(1e-9));
    CHECK(rows[1].success_prob == Approx(0.524266596633334).epsilon(1e-9));
}

TEST_CASE("sweep along the coupling axis") {
    SweepRequest request;
    request.axis = SweepAxis::G;
    request.lo = 2.4;
    request.hi = 2.4;
    request.step = 1.0;

    const std::vector<SweepRow> rows = sweep(request);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].g_over_kappa == Approx(2.4).epsilon(1e-14));
    CHECK(rows[0].x == Approx(balanced_leakage(2.4)).epsilon(1e-12));
    CHECK(rows[0].f_formula == Approx(fidelity_formula_g(2.4)).epsilon(1e-14));
    CHECK(rows[0].f_sim > 0.999);
}

TEST_CASE("sweep grid: counts, order, bad requests") {
    SweepRequest request;
    request.lo = 0.01;
    request.hi = 1.9;
    request.step = 0.01;
    const std::vector<SweepRow> rows = sweep(request);
    CHECK(rows.size() == 190);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i].x > rows[i - 1].x);
    }

    SweepRequest bad;
    bad.lo = 0.1;
    bad.hi = 0.2;
    bad.step = 0.0;
    CHECK_THROWS_AS(sweep(bad), std::invalid_argument);
    bad.step = -0.1;
    CHECK_THROWS_AS(sweep(bad), std::invalid_argument);
    bad = SweepRequest{};
    bad.lo = 0.3;
    bad.hi = 0.2;
    bad.step = 0.1;
    CHECK_THROWS_AS(sweep(bad), std::invalid_argument);
    bad = SweepRequest{};
    bad.lo = 0.1;
    bad.hi = 0.2;
    bad.step = 0.1;
    bad.gamma_over_kappa = 0.0;
    CHECK_THROWS_AS(sweep(bad), std::invalid_argument);
}

TEST_CASE("out-of-domain grid points become NaN rows") {
    SweepRequest request;
    request.axis = SweepAxis::KappaS;
    request.lo = 2.0;
    request.hi = 2.0;
    request.step = 1.0;

    const std::vector<SweepRow> rows = sweep(request);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].x == Approx(2.0));
    // The closed form is still defined at x = 2; the balanced coupling and
    // therefore the simulation are not.
    CHECK(rows[0].f_formula == Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(std::isnan(rows[0].g_over_kappa));
    CHECK(std::isnan(rows[0].f_sim));
    CHECK(std::isnan(rows[0].success_prob));
}
