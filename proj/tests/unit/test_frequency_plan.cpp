// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The rbisac Authors

#include "rbisac/config.hpp"
#include "rbisac/frequency_plan.hpp"

#include <doctest.h>

#include <numbers>

using namespace rbisac;

namespace {
constexpr double GHz = 1e9;
constexpr double pi = std::numbers::pi;
} // namespace

TEST_SUITE("frequency_plan") {

TEST_CASE("first intermediate frequency") {
    const PllPlan plan{28 * GHz, 1 * GHz, 4, 1, PlanSide::BS};
    CHECK(if1_frequency(plan, 31 * GHz) == 3 * GHz);
    CHECK(if1_frequency(PllPlan{28 * GHz, 1 * GHz, 4, 1, PlanSide::UE}, 29 * GHz) == 1 * GHz);
    CHECK_THROWS_AS(if1_frequency(plan, 28 * GHz), InfeasiblePlanError);
}

TEST_CASE("second intermediate frequency") {
    const PllPlan plan{28 * GHz, 1 * GHz, 4, 1, PlanSide::BS};
    CHECK(if2_frequency(plan, 29 * GHz, 31 * GHz) == 4 * GHz);
    CHECK_THROWS_AS(if2_frequency(plan, 28 * GHz, 28 * GHz), InfeasiblePlanError);
    CHECK(if2_frequency(PllPlan{29 * GHz, 1 * GHz, 1, 1, PlanSide::BS}, 30 * GHz, 30 * GHz) == 2 * GHz);
}

TEST_CASE("lock condition solves for the regenerated carrier") {
    CHECK(solve_downlink_frequency(PllPlan{28 * GHz, 1 * GHz, 4, 1, PlanSide::BS}, 31 * GHz) == 29 * GHz);
    const double f2 = 31 * GHz;
    CHECK(solve_downlink_frequency(PllPlan{f2 / 2, f2, 1, 1, PlanSide::BS}, f2) == f2);
    CHECK(solve_downlink_frequency(PllPlan{27 * GHz, 2 * GHz, 2, 1, PlanSide::BS}, 30 * GHz) == 28 * GHz);
    CHECK_THROWS_AS(solve_downlink_frequency(PllPlan{1 * GHz, 1 * GHz, 1, 1, PlanSide::BS}, 30 * GHz),
                    InfeasiblePlanError);
    CHECK_THROWS_AS(solve_downlink_frequency(PllPlan{28 * GHz, 1 * GHz, 0, 1, PlanSide::BS}, 30 * GHz),
                    InfeasiblePlanError);
}

TEST_CASE("phase conjugation and wrapping") {
    CHECK(conjugate_phase(0.0) == 0.0);
    CHECK(conjugate_phase(pi / 3) == doctest::Approx(-pi / 3));
    CHECK(conjugate_phase(3 * pi / 2) == doctest::Approx(pi / 2));
    CHECK(wrap_phase(pi) == pi);
    CHECK(wrap_phase(-pi) == pi);
    CHECK(wrap_phase(5 * pi) == doctest::Approx(pi));
    for (double phi = -10.0; phi <= 10.0; phi += 0.37) {
        const double twice = conjugate_phase(conjugate_phase(phi));
        CHECK(wrap_phase(twice - phi) == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("configured plan reproduces both carriers") {
    const auto check = check_frequency_plan(ScenarioConfig{});
    CHECK(check.ok);
    CHECK(check.predicted_hz == 29 * GHz);

    ScenarioConfig off;
    off.pll_d1 = 3;
    const auto bad = check_frequency_plan(off);
    CHECK_FALSE(bad.ok);
    CHECK_FALSE(bad.message.empty());

    ScenarioConfig infeasible;
    infeasible.pll_lo_freq = 40 * GHz;
    CHECK_FALSE(check_frequency_plan(infeasible).ok);
}

}
