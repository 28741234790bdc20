// Closed-loop simulation: PLC hysteresis control, seeded noise, plant stepping,
// and the optional measurement-attack hook.
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "physguard/attack.hpp"
#include "physguard/detect.hpp"
#include "physguard/model.hpp"
#include "physguard/noise.hpp"

namespace physguard {

struct ControllerConfig {
    double low_setpoint = 0.0;
    double high_setpoint = 0.0;

    void validate(double level_min, double level_max) const {
        if (!(low_setpoint < high_setpoint)) {
            throw InvalidParameter("ControllerConfig: low_setpoint must be < high_setpoint");
        }
        if (!(low_setpoint >= level_min && high_setpoint <= level_max)) {
            throw InvalidParameter("ControllerConfig: setpoints must lie within the level bounds");
        }
    }
};

// Hysteresis relay: fill at or below the low setpoint, drain at or above the
// high setpoint, otherwise hold the previous command. A non-finite reading
// fails safe to the drain command.
inline Vector plc_control(double level_reading, const Vector& prev_command, const ControllerConfig& config) {
    if (!std::isfinite(level_reading) || level_reading >= config.high_setpoint) {
        return Vector{0.0, 1.0};
    }
    if (level_reading <= config.low_setpoint) {
        return Vector{1.0, 0.0};
    }
    return prev_command;
}

// Time-indexed record of one closed-loop run. All series share the same
// length; y_attacked equals y wherever attack_active is 0.
struct SimTrace {
    double sample_period = 0.0;
    std::vector<double> time;
    std::vector<Vector> x_true;
    std::vector<Vector> command;
    std::vector<Vector> y;
    std::vector<Vector> y_attacked;
    std::vector<std::uint8_t> attack_active;
    std::vector<std::uint8_t> saturated;      // plant step hit a level bound
    std::vector<std::uint8_t> control_fault;  // PLC saw a non-finite reading

    std::size_t size() const { return time.size(); }
    bool operator==(const SimTrace&) const = default;
};

struct SimConfig {
    ControllerConfig controller;
    NoiseSpec process_noise;
    NoiseSpec measurement_noise;
    std::size_t horizon = 0;
    double initial_level = 0.0;
    double level_min = 0.0;
    double level_max = 0.0;
    std::optional<AttackScenario> attack;
    // Prior variance of the in-loop estimator consulted by stealthy attacks;
    // must match the detector-side configuration for the replay to be exact.
    double estimator_initial_var = 1e-6;
};

// Runs the loop for k = 0..horizon-1. Per step: measure, apply the attack,
// control from the attacked reading, then step the plant and clamp the level
// to its physical bounds (recorded in the saturated flag of the same row).
// The PLC command recorded at row k drives the transition to row k+1.
inline SimTrace run_simulation(const StateSpaceModel& model, const SimConfig& config) {
    model.validate();
    if (model.state_dim() != 1 || model.output_dim() != 1 || model.input_dim() != 2) {
        throw InvalidParameter("run_simulation: expects the scalar tank model (n=1, p=1, u=[valve, pump])");
    }
    if (config.horizon < 1) throw InvalidParameter("run_simulation: horizon must be >= 1");
    if (!(config.level_min < config.level_max)) {
        throw InvalidParameter("run_simulation: level_min must be < level_max");
    }
    if (!(config.initial_level >= config.level_min && config.initial_level <= config.level_max)) {
        throw InvalidParameter("run_simulation: initial_level outside the level bounds");
    }
    config.controller.validate(config.level_min, config.level_max);
    config.process_noise.validate();
    config.measurement_noise.validate();
    if (config.attack) {
        config.attack->validate();
        if (config.attack->target_sensor >= model.output_dim()) {
            throw InvalidParameter("run_simulation: attack target_sensor out of range");
        }
    }

    NoiseStream process_stream(config.process_noise, kProcessNoiseStream);
    NoiseStream measurement_stream(config.measurement_noise, kMeasurementNoiseStream);
    AttackState attack_state;
    if (config.attack) attack_state = make_attack_state(*config.attack);

    const bool stealthy = config.attack && config.attack->kind == AttackKind::stealthy;
    const bool attacker_parallel =
        stealthy && config.attack->stealthy_knowledge == StealthyKnowledge::parallel_estimator;
    EstimatorState defender{Vector{config.initial_level}, Matrix{{config.estimator_initial_var}}};
    EstimatorState attacker;  // lazily initialized at the first attacked step
    bool attacker_ready = false;

    SimTrace trace;
    trace.sample_period = model.sample_period;
    trace.time.reserve(config.horizon);

    Vector x{config.initial_level};
    Vector u_prev{0.0, 0.0};

    for (std::size_t k = 0; k < config.horizon; ++k) {
        const Vector yv = measure(model, x, Vector{measurement_stream.next()});

        EstimatorState defender_prior;
        if (stealthy) {
            defender_prior = (k == 0) ? defender : kalman_predict(model, defender, u_prev);
        }

        const bool active = config.attack && config.attack->active_at(k);
        Vector yav = yv;
        if (config.attack) {
            std::optional<double> y_hat_for_attacker;
            EstimatorState attacker_prior;
            if (stealthy && active) {
                if (attacker_parallel) {
                    if (!attacker_ready) {
                        attacker = EstimatorState{Vector{yv[0]}, Matrix{{config.estimator_initial_var}}};
                        attacker_ready = true;
                        attacker_prior = attacker;
                    } else {
                        attacker_prior = kalman_predict(model, attacker, u_prev);
                    }
                    y_hat_for_attacker = predicted_measurement(model, attacker_prior)[0];
                } else {
                    y_hat_for_attacker = predicted_measurement(model, defender_prior)[0];
                }
            }
            const std::size_t target = config.attack->target_sensor;
            yav[target] = apply_attack(yv[target], y_hat_for_attacker, *config.attack, k, attack_state);
            if (attacker_parallel && active) {
                attacker = kalman_update(model, attacker_prior, yav).state;
            }
        }

        if (stealthy) {
            defender = kalman_update(model, defender_prior, yav).state;
        }

        const double reading = yav[0];
        const bool fault = !std::isfinite(reading);
        const Vector u = plc_control(reading, u_prev, config.controller);

        Vector x_next = step_dynamics(model, x, u, Vector{process_stream.next()});
        bool saturated = false;
        if (x_next[0] < config.level_min) {
            x_next[0] = config.level_min;
            saturated = true;
        } else if (x_next[0] > config.level_max) {
            x_next[0] = config.level_max;
            saturated = true;
        }

        trace.time.push_back(static_cast<double>(k) * model.sample_period);
        trace.x_true.push_back(x);
        trace.command.push_back(u);
        trace.y.push_back(yv);
        trace.y_attacked.push_back(yav);
        trace.attack_active.push_back(active ? 1 : 0);
        trace.saturated.push_back(saturated ? 1 : 0);
        trace.control_fault.push_back(fault ? 1 : 0);

        x = x_next;
        u_prev = u;
    }
    return trace;
}

}  // namespace physguard
