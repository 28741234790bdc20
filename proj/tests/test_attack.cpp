// Attack construction tests, including the stealth guarantee end to end.
#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "physguard/attack.hpp"
#include "physguard/detect.hpp"
#include "physguard/sim.hpp"

using namespace physguard;

namespace {

AttackScenario bias_scenario(double delta, std::size_t start, std::size_t end) {
    AttackScenario sc;
    sc.kind = AttackKind::bias;
    sc.bias_delta = delta;
    sc.window_start = start;
    sc.window_end = end;
    return sc;
}

StateSpaceModel detection_model(double process_var, double meas_var) {
    StateSpaceModel model = build_tank_model(TankParams{.area = 1.0, .q_in = 0.002, .q_out = 0.001,
                                                        .level_min = 0.0, .level_max = 1.2,
                                                        .sample_period = 1.0});
    model.process_noise_cov(0, 0) = process_var;
    model.meas_noise_cov(0, 0) = meas_var;
    return model;
}

SimConfig base_sim_config(std::size_t horizon) {
    SimConfig config;
    config.controller = ControllerConfig{.low_setpoint = 0.3, .high_setpoint = 0.8};
    config.process_noise = NoiseSpec::gaussian(0.0, 0.0, 11);
    config.measurement_noise = NoiseSpec::gaussian(0.0, 0.0, 22);
    config.horizon = horizon;
    config.initial_level = 0.5;
    config.level_min = 0.0;
    config.level_max = 1.2;
    config.estimator_initial_var = 1e-4;
    return config;
}

std::vector<double> sensor_column(const SimTrace& trace) {
    std::vector<double> ys(trace.size());
    for (std::size_t k = 0; k < trace.size(); ++k) ys[k] = trace.y_attacked[k][0];
    return ys;
}

}  // namespace

TEST(StealthyAttack, MatchesHandAlgebra) {
    AttackScenario sc;
    sc.kind = AttackKind::stealthy;
    sc.stealthy_tau = 0.5;
    sc.window_start = 0;
    sc.window_end = 10;
    AttackState state = make_attack_state(sc);

    const double y = 10.0, y_hat = 10.2;
    const double attacked = apply_attack(y, y_hat, sc, 0, state);
    EXPECT_DOUBLE_EQ(attacked, 10.7);
    // delta = y_hat - y + tau = 0.7; the defender's residual sits exactly at tau.
    EXPECT_NEAR(attacked - y, 0.7, 1e-12);
    EXPECT_DOUBLE_EQ(attacked - y_hat, 0.5);
    EXPECT_FALSE(bad_data_detect(attacked - y_hat, sc.stealthy_tau).alarm);
}

TEST(StealthyAttack, PinnedResidualNeverExceedsTau) {
    AttackScenario sc;
    sc.kind = AttackKind::stealthy;
    sc.stealthy_tau = 0.05;
    sc.window_start = 0;
    sc.window_end = 1u << 20;
    AttackState state = make_attack_state(sc);
    rng::Stream stream(123, 0);
    for (int rep = 0; rep < 20000; ++rep) {
        const double y_hat = 0.3 + 0.5 * stream.next_unit();
        const double attacked = apply_attack(y_hat, y_hat, sc, rep, state);
        const double residual = attacked - y_hat;
        EXPECT_LE(residual, sc.stealthy_tau);
        EXPECT_GT(residual, sc.stealthy_tau * (1.0 - 1e-12));
    }
}

TEST(StealthyAttack, NegativeDirectionPinsMinusTau) {
    AttackScenario sc;
    sc.kind = AttackKind::stealthy;
    sc.stealthy_tau = 0.05;
    sc.stealthy_direction = -1;
    sc.window_start = 0;
    sc.window_end = 100;
    AttackState state = make_attack_state(sc);
    const double attacked = apply_attack(0.52, 0.52, sc, 3, state);
    EXPECT_LT(attacked, 0.52);
    EXPECT_LE(std::abs(attacked - 0.52), sc.stealthy_tau);
}

TEST(StealthyAttack, RequiresEstimate) {
    AttackScenario sc;
    sc.kind = AttackKind::stealthy;
    sc.stealthy_tau = 0.5;
    sc.window_start = 0;
    sc.window_end = 10;
    AttackState state = make_attack_state(sc);
    EXPECT_THROW(apply_attack(1.0, std::nullopt, sc, 0, state), MissingEstimate);
}

TEST(BiasAttack, ZeroBiasIsIdentity) {
    AttackScenario sc = bias_scenario(0.0, 0, 10);
    AttackState state = make_attack_state(sc);
    EXPECT_EQ(apply_attack(10.0, std::nullopt, sc, 5, state), 10.0);
}

TEST(AttackWindow, InactiveStepsPassThroughEveryKind) {
    for (AttackKind kind : {AttackKind::bias, AttackKind::stealthy, AttackKind::replay, AttackKind::spoof,
                            AttackKind::hold}) {
        AttackScenario sc;
        sc.kind = kind;
        sc.window_start = 100;
        sc.window_end = 200;
        sc.bias_delta = 5.0;
        sc.stealthy_tau = 1.0;
        sc.replay_source.assign(100, 42.0);
        sc.spoof_noise = NoiseSpec::gaussian(0.0, 1.0, 3);
        AttackState state = make_attack_state(sc);
        const double y = 0.731;
        EXPECT_EQ(apply_attack(y, 0.7, sc, 7, state), y);
    }
}

TEST(ReplayAttack, ReproducesSourceBitExactly) {
    AttackScenario sc;
    sc.kind = AttackKind::replay;
    sc.window_start = 10;
    sc.window_end = 15;
    sc.replay_source = {0.1, 0.2, 0.3, 0.4, 0.5};
    sc.validate();
    AttackState state = make_attack_state(sc);
    for (std::size_t k = 10; k < 15; ++k) {
        EXPECT_EQ(apply_attack(9.9, std::nullopt, sc, k, state), sc.replay_source[k - 10]);
    }
}

TEST(ReplayAttack, UnderflowAndShortSourceAreErrors) {
    AttackScenario sc;
    sc.kind = AttackKind::replay;
    sc.window_start = 0;
    sc.window_end = 10;
    sc.replay_source = {1.0, 2.0};
    EXPECT_THROW(sc.validate(), InvalidParameter);
    AttackState state = make_attack_state(sc);
    EXPECT_THROW(apply_attack(0.0, std::nullopt, sc, 5, state), ReplayUnderflow);
}

TEST(HoldAttack, FreezesLastPreWindowValue) {
    AttackScenario sc;
    sc.kind = AttackKind::hold;
    sc.window_start = 3;
    sc.window_end = 6;
    AttackState state = make_attack_state(sc);
    EXPECT_EQ(apply_attack(0.10, std::nullopt, sc, 0, state), 0.10);
    EXPECT_EQ(apply_attack(0.11, std::nullopt, sc, 1, state), 0.11);
    EXPECT_EQ(apply_attack(0.12, std::nullopt, sc, 2, state), 0.12);
    EXPECT_EQ(apply_attack(0.99, std::nullopt, sc, 3, state), 0.12);
    EXPECT_EQ(apply_attack(1.01, std::nullopt, sc, 4, state), 0.12);
    EXPECT_EQ(apply_attack(1.02, std::nullopt, sc, 5, state), 0.12);
}

TEST(HoldAttack, WindowAtZeroFreezesFirstValue) {
    AttackScenario sc;
    sc.kind = AttackKind::hold;
    sc.window_start = 0;
    sc.window_end = 3;
    AttackState state = make_attack_state(sc);
    EXPECT_EQ(apply_attack(0.5, std::nullopt, sc, 0, state), 0.5);
    EXPECT_EQ(apply_attack(0.6, std::nullopt, sc, 1, state), 0.5);
}

TEST(SpoofAttack, BasePlusSeededNoise) {
    AttackScenario sc;
    sc.kind = AttackKind::spoof;
    sc.window_start = 0;
    sc.window_end = 100;
    sc.spoof_base = 0.4;
    sc.spoof_noise = NoiseSpec::gaussian(0.0, 0.01, 77);
    AttackState a = make_attack_state(sc);
    AttackState b = make_attack_state(sc);
    NoiseStream reference(sc.spoof_noise, kAttackNoiseStream);
    for (std::size_t k = 0; k < 50; ++k) {
        const double expected = 0.4 + reference.next();
        EXPECT_EQ(apply_attack(1.23, std::nullopt, sc, k, a), expected);
        EXPECT_EQ(apply_attack(4.56, std::nullopt, sc, k, b), expected);
    }
}

TEST(StealthyResidualBound, EqualsTau) {
    EXPECT_DOUBLE_EQ(stealthy_residual_bound(0.5), 0.5);
    EXPECT_DOUBLE_EQ(stealthy_residual_bound(1e-9), 1e-9);
    EXPECT_THROW(stealthy_residual_bound(0.0), InvalidParameter);
    EXPECT_THROW(stealthy_residual_bound(-1.0), InvalidParameter);
}

TEST(ScenarioValidation, RejectsEmptyWindowAndBadFields) {
    AttackScenario sc = bias_scenario(1.0, 5, 5);
    EXPECT_THROW(sc.validate(), InvalidParameter);
    sc = bias_scenario(1.0, 6, 5);
    EXPECT_THROW(sc.validate(), InvalidParameter);

    AttackScenario st;
    st.kind = AttackKind::stealthy;
    st.window_start = 0;
    st.window_end = 1;
    st.stealthy_tau = 0.0;
    EXPECT_THROW(st.validate(), InvalidParameter);
    st.stealthy_tau = 0.1;
    st.stealthy_direction = 2;
    EXPECT_THROW(st.validate(), InvalidParameter);
}

// End-to-end stealth guarantee: with the defender's own estimate and the same
// tau, the bad-data detector stays silent for the whole window while the
// attacker keeps injecting a nonzero offset.
TEST(StealthGuarantee, ZeroAlarmsWithNonzeroInjection) {
    const double tau = 0.04;
    SimConfig config = base_sim_config(2000);
    config.measurement_noise = NoiseSpec::gaussian(0.0, 0.01, 5);
    AttackScenario sc;
    sc.kind = AttackKind::stealthy;
    sc.stealthy_tau = tau;
    sc.window_start = 0;
    sc.window_end = config.horizon;
    config.attack = sc;

    const StateSpaceModel model = detection_model(1e-10, 1e-4);
    const SimTrace trace = run_simulation(model, config);

    const EstimatorState init{Vector{config.initial_level}, Matrix{{config.estimator_initial_var}}};
    const DetectorConfig detector{.tau = tau, .cusum_bias = 0.5 * tau, .cusum_threshold = 5.0 * tau};
    const auto rows = run_detector(model, init, detector, trace.command, sensor_column(trace));

    double injected = 0.0;
    std::size_t alarms = 0;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        if (rows[k].bad_data.alarm) ++alarms;
        injected += std::abs(trace.y_attacked[k][0] - trace.y[k][0]);
    }
    EXPECT_EQ(alarms, 0u);
    EXPECT_GT(injected, 0.0);
}

// A parallel-estimator attacker no longer tracks the defender exactly, but the
// attack still applies and diverges the measurement.
TEST(StealthGuarantee, ParallelEstimatorVariantRuns) {
    SimConfig config = base_sim_config(500);
    config.measurement_noise = NoiseSpec::gaussian(0.0, 0.01, 5);
    AttackScenario sc;
    sc.kind = AttackKind::stealthy;
    sc.stealthy_tau = 0.04;
    sc.stealthy_knowledge = StealthyKnowledge::parallel_estimator;
    sc.window_start = 100;
    sc.window_end = 500;
    config.attack = sc;

    const StateSpaceModel model = detection_model(1e-10, 1e-4);
    const SimTrace trace = run_simulation(model, config);
    double injected = 0.0;
    for (std::size_t k = 100; k < 500; ++k) injected += std::abs(trace.y_attacked[k][0] - trace.y[k][0]);
    EXPECT_GT(injected, 0.0);
    for (std::size_t k = 0; k < 100; ++k) EXPECT_EQ(trace.y_attacked[k][0], trace.y[k][0]);
}

// Deterministic bias detection: |delta| > 2 tau fires at the first attacked
// step when the honest residual is within tau there (zero noise: it is 0).
TEST(BiasDetection, AlarmAtFirstAttackedStep) {
    const double tau = 0.05;
    for (double delta : {3.0 * tau, -2.5 * tau, 10.0 * tau}) {
        SimConfig config = base_sim_config(400);
        config.attack = bias_scenario(delta, 150, 300);
        const StateSpaceModel model = detection_model(1e-10, 1e-4);
        const SimTrace trace = run_simulation(model, config);

        const EstimatorState init{Vector{config.initial_level}, Matrix{{config.estimator_initial_var}}};
        const DetectorConfig detector{.tau = tau, .cusum_bias = 0.5 * tau, .cusum_threshold = 5.0 * tau};
        const auto rows = run_detector(model, init, detector, trace.command, sensor_column(trace));

        std::size_t first_alarm = rows.size();
        for (std::size_t k = 0; k < rows.size(); ++k) {
            if (rows[k].bad_data.alarm) {
                first_alarm = k;
                break;
            }
        }
        EXPECT_EQ(first_alarm, 150u) << "delta=" << delta;
    }
}
