// State estimation, residual generation, and the statistical detectors.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "physguard/matrix.hpp"
#include "physguard/model.hpp"
#include "physguard/numeric.hpp"

namespace physguard {

// State estimate with error covariance. Holds the posterior between steps and
// the prior during the predict half-step.
struct EstimatorState {
    Vector x_hat;
    Matrix p_cov;
};

struct DetectorConfig {
    double tau = 0.0;              // bad-data threshold
    double cusum_bias = 0.0;       // drift allowance b
    double cusum_threshold = 0.0;  // decision threshold h

    void validate() const {
        if (!(tau > 0.0)) throw InvalidParameter("DetectorConfig: tau must be > 0");
        if (!(cusum_bias >= 0.0)) throw InvalidParameter("DetectorConfig: cusum_bias must be >= 0");
        if (!(cusum_threshold > 0.0)) throw InvalidParameter("DetectorConfig: cusum_threshold must be > 0");
    }
};

// Common CUSUM tuning relative to the attack-free residual std.
inline DetectorConfig cusum_defaults(double tau, double sigma_r) {
    if (!(sigma_r > 0.0)) throw InvalidParameter("cusum_defaults: sigma_r must be > 0");
    return DetectorConfig{.tau = tau, .cusum_bias = 0.5 * sigma_r, .cusum_threshold = 5.0 * sigma_r};
}

struct Verdict {
    bool alarm = false;
    double statistic = 0.0;
    bool non_finite = false;  // residual was NaN/inf; alarm raised fail-loud
};

struct CusumState {
    double s_plus = 0.0;
    double s_minus = 0.0;
};

struct ResidualStats {
    Vector mean;
    Matrix covariance;  // unbiased, divisor count - 1
    std::size_t sample_count = 0;
};

struct KalmanUpdate {
    EstimatorState state;  // posterior
    Vector y_hat;          // C x_prior (prediction-form estimate)
    Vector residual;       // y - y_hat (innovation)
};

// Predict half-step: x <- A x + B u, P <- A P A^T + Q.
inline EstimatorState kalman_predict(const StateSpaceModel& model, const EstimatorState& state, const Vector& u) {
    EstimatorState prior;
    prior.x_hat = step_dynamics(model, state.x_hat, u, Vector(model.state_dim(), 0.0));
    prior.p_cov = model.a_matrix * state.p_cov * transpose(model.a_matrix) + model.process_noise_cov;
    return prior;
}

// Predicted measurement of a prior state: y_hat = C x_prior.
inline Vector predicted_measurement(const StateSpaceModel& model, const EstimatorState& prior) {
    return mat_vec(model.c_matrix, prior.x_hat);
}

// Measurement update: gain K = P C^T (C P C^T + R)^-1, innovation-form output.
inline KalmanUpdate kalman_update(const StateSpaceModel& model, const EstimatorState& prior, const Vector& y) {
    if (y.size() != model.output_dim()) throw DimensionMismatch("kalman_update: measurement length differs from model");
    if (prior.x_hat.size() != model.state_dim()) throw DimensionMismatch("kalman_update: state length differs from model");

    KalmanUpdate out;
    out.y_hat = predicted_measurement(model, prior);
    out.residual = vec_sub(y, out.y_hat);

    // An exactly-zero prior covariance means the prior is already exact and
    // the optimal gain is zero; skip the update so noise-free perfect-model
    // configurations (Q = R = 0) keep running.
    bool zero_prior = true;
    for (double v : prior.p_cov.data()) {
        if (v != 0.0) {
            zero_prior = false;
            break;
        }
    }
    if (zero_prior) {
        out.state = prior;
        return out;
    }

    const Matrix cp = model.c_matrix * prior.p_cov;                       // p x n
    const Matrix s = cp * transpose(model.c_matrix) + model.meas_noise_cov;  // p x p
    const auto solved = solve(s, cp);                                     // S^-1 C P = K^T
    if (!solved) {
        throw SingularInnovationCovariance("kalman_update: C P C^T + R is not invertible");
    }
    const Matrix gain = transpose(*solved);  // n x p

    out.state.x_hat = vec_add(prior.x_hat, mat_vec(gain, out.residual));
    Matrix p = (Matrix::identity(model.state_dim()) - gain * model.c_matrix) * prior.p_cov;
    // Keep the covariance symmetric against roundoff drift.
    for (std::size_t i = 0; i < p.rows(); ++i) {
        for (std::size_t j = i + 1; j < p.cols(); ++j) {
            const double avg = 0.5 * (p(i, j) + p(j, i));
            p(i, j) = avg;
            p(j, i) = avg;
        }
    }
    out.state.p_cov = p;
    return out;
}

// One filter step: predict through command u, then update with measurement y.
// The returned y_hat is the one-step prediction C x_prior, so the residual is
// the innovation and is available before y is incorporated.
inline KalmanUpdate kalman_step(const StateSpaceModel& model, const EstimatorState& state, const Vector& u,
                                const Vector& y) {
    return kalman_update(model, kalman_predict(model, state, u), y);
}

inline Vector residual(const Vector& y, const Vector& y_hat) {
    if (y.size() != y_hat.size()) throw DimensionMismatch("residual: lengths differ");
    return vec_sub(y, y_hat);
}

// Stateless bad-data detector: alarm iff |r| > tau, strictly.
inline Verdict bad_data_detect(double r, double tau) {
    if (!(tau > 0.0)) throw InvalidParameter("bad_data_detect: tau must be > 0");
    if (!std::isfinite(r)) {
        return Verdict{.alarm = true, .statistic = std::numeric_limits<double>::infinity(), .non_finite = true};
    }
    const double mag = std::abs(r);
    return Verdict{.alarm = mag > tau, .statistic = mag};
}

// Two-sided CUSUM with reset-on-alarm:
//   s+ <- max(0, s+ + r - b), s- <- max(0, s- - r - b), alarm iff max > h.
inline Verdict cusum_step(CusumState& state, double r, const DetectorConfig& config) {
    config.validate();
    if (!std::isfinite(r)) {
        return Verdict{.alarm = true, .statistic = std::numeric_limits<double>::infinity(), .non_finite = true};
    }
    state.s_plus = std::max(0.0, state.s_plus + r - config.cusum_bias);
    state.s_minus = std::max(0.0, state.s_minus - r - config.cusum_bias);
    const double stat = std::max(state.s_plus, state.s_minus);
    const bool alarm = stat > config.cusum_threshold;
    if (alarm) state = CusumState{};
    return Verdict{.alarm = alarm, .statistic = stat};
}

// Empirical threshold for a target false-alarm rate: the (1 - target_far)
// quantile of |r| over attack-free samples (linear interpolation between
// order statistics). Requires at least 10 / target_far samples.
inline double tune_threshold(std::span<const double> residual_samples, double target_far) {
    if (!(target_far > 0.0 && target_far < 1.0)) {
        throw InvalidParameter("tune_threshold: target_far must lie in (0, 1)");
    }
    if (static_cast<double>(residual_samples.size()) < 10.0 / target_far) {
        throw InsufficientData("tune_threshold: need at least 10 / target_far samples");
    }
    std::vector<double> mags(residual_samples.size());
    std::transform(residual_samples.begin(), residual_samples.end(), mags.begin(),
                   [](double r) { return std::abs(r); });
    std::sort(mags.begin(), mags.end());
    return numeric::quantile_sorted(mags, 1.0 - target_far);
}

inline ResidualStats residual_stats(const std::vector<Vector>& samples) {
    if (samples.size() < 2) throw InsufficientData("residual_stats: need at least 2 samples");
    const std::size_t p = samples.front().size();
    for (const auto& s : samples) {
        if (s.size() != p) throw DimensionMismatch("residual_stats: mixed sample lengths");
    }
    ResidualStats stats;
    stats.sample_count = samples.size();
    stats.mean.assign(p, 0.0);
    for (const auto& s : samples) {
        for (std::size_t i = 0; i < p; ++i) stats.mean[i] += s[i];
    }
    for (std::size_t i = 0; i < p; ++i) stats.mean[i] /= static_cast<double>(samples.size());
    stats.covariance = Matrix(p, p);
    for (const auto& s : samples) {
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t j = 0; j < p; ++j) {
                stats.covariance(i, j) += (s[i] - stats.mean[i]) * (s[j] - stats.mean[j]);
            }
        }
    }
    const double divisor = static_cast<double>(samples.size() - 1);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < p; ++j) stats.covariance(i, j) /= divisor;
    }
    return stats;
}

inline ResidualStats residual_stats(std::span<const double> samples) {
    std::vector<Vector> rows;
    rows.reserve(samples.size());
    for (double s : samples) rows.push_back(Vector{s});
    return residual_stats(rows);
}

struct DetectionRow {
    double y_hat = 0.0;
    double residual = 0.0;
    Verdict bad_data;
    Verdict cusum;
};

// Streams a recorded scalar-sensor trace through the estimator and both
// detectors. Row 0 is a measurement update of the initial prior; each later
// row k first predicts through the row k-1 command.
inline std::vector<DetectionRow> run_detector(const StateSpaceModel& model, const EstimatorState& init,
                                              const DetectorConfig& config, std::span<const Vector> commands,
                                              std::span<const double> measurements) {
    if (model.output_dim() != 1) {
        throw DimensionMismatch("run_detector: detectors are scalar per sensor; model must have p = 1");
    }
    if (commands.size() != measurements.size()) {
        throw DimensionMismatch("run_detector: command/measurement lengths differ");
    }
    config.validate();
    std::vector<DetectionRow> rows;
    rows.reserve(measurements.size());
    EstimatorState state = init;
    CusumState cusum;
    for (std::size_t k = 0; k < measurements.size(); ++k) {
        const EstimatorState prior = (k == 0) ? state : kalman_predict(model, state, commands[k - 1]);
        const KalmanUpdate update = kalman_update(model, prior, Vector{measurements[k]});
        state = update.state;
        DetectionRow row;
        row.y_hat = update.y_hat[0];
        row.residual = update.residual[0];
        row.bad_data = bad_data_detect(row.residual, config.tau);
        row.cusum = cusum_step(cusum, row.residual, config);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace physguard
