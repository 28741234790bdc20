// Measurement-side attack scenarios: bias, stealthy, replay, spoof, hold.
#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "physguard/errors.hpp"
#include "physguard/noise.hpp"

namespace physguard {

enum class AttackKind { bias, stealthy, replay, spoof, hold };

// Which y_hat the stealthy attacker crafts against: the defender's own
// estimate (worst case) or a parallel estimator the attacker runs itself.
enum class StealthyKnowledge { defender_estimate, parallel_estimator };

struct AttackScenario {
    AttackKind kind = AttackKind::bias;
    std::size_t target_sensor = 0;
    std::size_t window_start = 0;
    std::size_t window_end = 0;  // exclusive

    double bias_delta = 0.0;                 // bias
    double stealthy_tau = 0.0;               // stealthy
    int stealthy_direction = +1;             // +1 pins the residual at +tau, -1 at -tau
    StealthyKnowledge stealthy_knowledge = StealthyKnowledge::defender_estimate;
    std::vector<double> replay_source;       // replay
    double spoof_base = 0.0;                 // spoof
    NoiseSpec spoof_noise;                   // spoof

    bool active_at(std::size_t k) const { return k >= window_start && k < window_end; }

    void validate() const {
        if (!(window_start < window_end)) throw InvalidParameter("AttackScenario: window must be non-empty");
        switch (kind) {
            case AttackKind::bias:
                break;
            case AttackKind::stealthy:
                if (!(stealthy_tau > 0.0)) throw InvalidParameter("AttackScenario: stealthy tau must be > 0");
                if (stealthy_direction != 1 && stealthy_direction != -1) {
                    throw InvalidParameter("AttackScenario: stealthy direction must be +1 or -1");
                }
                break;
            case AttackKind::replay:
                if (replay_source.size() < window_end - window_start) {
                    throw InvalidParameter("AttackScenario: replay source shorter than window");
                }
                break;
            case AttackKind::spoof:
                spoof_noise.validate();
                break;
            case AttackKind::hold:
                break;
        }
    }
};

// Per-trace mutable attack state; applied sequentially in k.
struct AttackState {
    std::optional<double> last_honest;  // most recent honest value seen outside the window
    NoiseStream spoof_stream;
};

inline AttackState make_attack_state(const AttackScenario& scenario) {
    AttackState state;
    if (scenario.kind == AttackKind::spoof) {
        state.spoof_stream = NoiseStream(scenario.spoof_noise, kAttackNoiseStream);
    }
    return state;
}

// The residual magnitude a stealthy attack pins the detector at: exactly tau.
// With a strict |r| > tau rule the comparison "tau > tau" never fires.
inline double stealthy_residual_bound(double tau) {
    if (!(tau > 0.0)) throw InvalidParameter("stealthy_residual_bound: tau must be > 0");
    return tau;
}

// Transforms one honest measurement into the attacked value. Outside the
// window the measurement passes through unchanged. The stealthy kind needs
// the estimated measurement y_hat; the injected value is nudged down by ulps
// until the defender's recomputed |y_a - y_hat| cannot exceed tau in double
// arithmetic (in exact arithmetic it sits exactly at tau).
inline double apply_attack(double y, std::optional<double> y_hat, const AttackScenario& scenario, std::size_t k,
                           AttackState& state) {
    if (!scenario.active_at(k)) {
        state.last_honest = y;
        return y;
    }
    switch (scenario.kind) {
        case AttackKind::bias:
            return y + scenario.bias_delta;
        case AttackKind::stealthy: {
            if (!y_hat) throw MissingEstimate("apply_attack: stealthy attack requires y_hat");
            double attacked = *y_hat + static_cast<double>(scenario.stealthy_direction) * scenario.stealthy_tau;
            while (std::abs(attacked - *y_hat) > scenario.stealthy_tau) {
                attacked = std::nextafter(attacked, *y_hat);
            }
            return attacked;
        }
        case AttackKind::replay: {
            const std::size_t offset = k - scenario.window_start;
            if (offset >= scenario.replay_source.size()) {
                throw ReplayUnderflow("apply_attack: replay source exhausted");
            }
            return scenario.replay_source[offset];
        }
        case AttackKind::spoof:
            return scenario.spoof_base + state.spoof_stream.next();
        case AttackKind::hold:
            // No pre-window sample exists when the window opens at k = 0;
            // freeze the first in-window honest value instead.
            if (!state.last_honest) state.last_honest = y;
            return *state.last_honest;
    }
    throw InvalidParameter("apply_attack: unknown attack kind");
}

}  // namespace physguard
