// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The rbisac Authors

#include "rbisac/frequency_plan.hpp"

#include "rbisac/config.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rbisac {

double if1_frequency(const PllPlan& plan, double f_in) {
    const double f = f_in - plan.f_lo;
    if (!(f > 0.0)) {
        throw InfeasiblePlanError("IF1 = f_in - f_lo = " + std::to_string(f) + " Hz is not positive");
    }
    return f;
}

double if2_frequency(const PllPlan& plan, double f1, double f2) {
    const double f = f1 + f2 - 2.0 * plan.f_lo;
    if (!(f > 0.0)) {
        throw InfeasiblePlanError("IF2 = f1 + f2 - 2 f_lo = " + std::to_string(f) +
                                  " Hz is not positive");
    }
    return f;
}

double solve_downlink_frequency(const PllPlan& plan, double f2) {
    if (plan.d1 < 1 || plan.d2 < 1) throw InfeasiblePlanError("dividers must be >= 1");
    const double f1 =
        static_cast<double>(plan.d1) / static_cast<double>(plan.d2) * plan.f_ref + 2.0 * plan.f_lo - f2;
    if (!(f1 > 0.0)) {
        throw InfeasiblePlanError("plan locks to a non-positive carrier (" + std::to_string(f1) +
                                  " Hz)");
    }
    return f1;
}

double wrap_phase(double phi) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::remainder(phi, two_pi); // [-pi, pi]
    if (r <= -std::numbers::pi) r += two_pi;
    return r;
}

double conjugate_phase(double phi_in) { return wrap_phase(-phi_in); }

PllPlan plan_from_config(const ScenarioConfig& cfg, PlanSide side) {
    return PllPlan{cfg.pll_lo_freq, cfg.pll_ref_freq, cfg.pll_d1, cfg.pll_d2, side};
}

PlanCheck check_frequency_plan(const ScenarioConfig& cfg) {
    PlanCheck check;
    try {
        const PllPlan bs = plan_from_config(cfg, PlanSide::BS);
        const PllPlan ue = plan_from_config(cfg, PlanSide::UE);
        // BS receives f2 and must regenerate f1; the UE receives f1 and must
        // regenerate f2.
        if1_frequency(bs, cfg.f2);
        if1_frequency(ue, cfg.f1);
        check.predicted_hz = solve_downlink_frequency(bs, cfg.f2);
        check.expected_hz = cfg.f1;
        const double ue_out = solve_downlink_frequency(ue, cfg.f1);
        const double tol = 1e-9 * std::max(cfg.f1, cfg.f2);
        check.ok = std::abs(check.predicted_hz - cfg.f1) <= tol && std::abs(ue_out - cfg.f2) <= tol;
        if (!check.ok) {
            check.message = "frequency plan locks to " + std::to_string(check.predicted_hz) +
                            " Hz, scenario downlink is " + std::to_string(cfg.f1) + " Hz";
        }
    } catch (const InfeasiblePlanError& e) {
        check.ok = false;
        check.message = e.what();
    }
    return check;
}

} // namespace rbisac
