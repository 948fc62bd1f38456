// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The rbisac Authors

#pragma once

#include <stdexcept>
#include <string>

namespace rbisac {

struct ScenarioConfig;

class InfeasiblePlanError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class PlanSide { BS, UE };

/// Mixer/divider plan of one retrodirective element chain. The LO and
/// reference phases are taken as zero, which is what makes the locked output
/// the phase conjugate of the input.
struct PllPlan {
    double f_lo = 0.0;  // Hz
    double f_ref = 0.0; // Hz
    int d1 = 1;         // divider on the IF branch
    int d2 = 1;         // divider on the reference branch
    PlanSide side = PlanSide::BS;
};

/// First IF after down-conversion of the received carrier: f_in - f_lo.
double if1_frequency(const PllPlan& plan, double f_in);

/// IF fed back into the PLL after mixing the VCO output with IF1:
/// f1 + f2 - 2 f_lo.
double if2_frequency(const PllPlan& plan, double f1, double f2);

/// Carrier that satisfies the lock condition f_ref/d2 = IF2/d1 for a given
/// received carrier. On the BS side the input is the uplink f2 and the
/// result is the downlink f1; the UE uses the same relation with roles swapped.
double solve_downlink_frequency(const PllPlan& plan, double f2);

/// Wraps into (-pi, pi].
double wrap_phase(double phi);

/// Locked output phase: the negated input phase, wrapped.
double conjugate_phase(double phi_in);

/// Plan described by the scenario's pll_* keys.
PllPlan plan_from_config(const ScenarioConfig& cfg, PlanSide side);

struct PlanCheck {
    bool ok = false;
    double predicted_hz = 0.0; // carrier the plan locks to
    double expected_hz = 0.0;  // carrier the scenario configures
    std::string message;
};

/// Checks that both sides of the configured plan regenerate the scenario's
/// carriers. Never throws; an infeasible plan is reported through `message`.
PlanCheck check_frequency_plan(const ScenarioConfig& cfg);

} // namespace rbisac
