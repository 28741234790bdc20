// Discrete LTI plant types and the sensing-physics formulas.
#pragma once

#include <cmath>
#include <cstddef>
#include <string>

#include "physguard/errors.hpp"
#include "physguard/matrix.hpp"

namespace physguard {

// Physical parameters of a single water tank with an inlet valve and an
// outlet pump. Flows are the rates that apply while the actuator is on.
struct TankParams {
    double area = 0.0;           // cross-section [m^2]
    double q_in = 0.0;           // inflow with valve open [m^3/s]
    double q_out = 0.0;          // outflow with pump on [m^3/s]
    double level_min = 0.0;      // [m]
    double level_max = 0.0;      // [m]
    double sample_period = 0.0;  // [s]

    void validate() const {
        if (!(area > 0.0)) throw InvalidParameter("TankParams: area must be > 0");
        if (!(q_in >= 0.0)) throw InvalidParameter("TankParams: q_in must be >= 0");
        if (!(q_out >= 0.0)) throw InvalidParameter("TankParams: q_out must be >= 0");
        if (!(level_min < level_max)) throw InvalidParameter("TankParams: level_min must be < level_max");
        if (!(sample_period > 0.0)) throw InvalidParameter("TankParams: sample_period must be > 0");
    }
};

// Discrete-time LTI model
//   x_{k+1} = A x_k + B u_k + v_k
//   y_k     = C x_k + eta_k
// with v ~ (0, Q) and eta ~ (0, R).
struct StateSpaceModel {
    Matrix a_matrix;           // n x n
    Matrix b_matrix;           // n x m
    Matrix c_matrix;           // p x n
    Matrix process_noise_cov;  // n x n
    Matrix meas_noise_cov;     // p x p
    double sample_period = 0.0;

    std::size_t state_dim() const { return a_matrix.rows(); }
    std::size_t input_dim() const { return b_matrix.cols(); }
    std::size_t output_dim() const { return c_matrix.rows(); }

    void validate() const {
        const std::size_t n = state_dim();
        if (n == 0 || a_matrix.cols() != n) throw InvalidParameter("StateSpaceModel: A must be square and non-empty");
        if (b_matrix.rows() != n) throw InvalidParameter("StateSpaceModel: B row count must equal state dim");
        if (c_matrix.cols() != n) throw InvalidParameter("StateSpaceModel: C column count must equal state dim");
        if (process_noise_cov.rows() != n || process_noise_cov.cols() != n) {
            throw InvalidParameter("StateSpaceModel: process noise covariance must be n x n");
        }
        const std::size_t p = output_dim();
        if (meas_noise_cov.rows() != p || meas_noise_cov.cols() != p) {
            throw InvalidParameter("StateSpaceModel: measurement noise covariance must be p x p");
        }
        if (!is_symmetric(process_noise_cov) || !is_symmetric(meas_noise_cov)) {
            throw InvalidParameter("StateSpaceModel: noise covariances must be symmetric");
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (!(process_noise_cov(i, i) >= 0.0)) {
                throw InvalidParameter("StateSpaceModel: process noise variance must be >= 0");
            }
        }
        for (std::size_t i = 0; i < p; ++i) {
            if (!(meas_noise_cov(i, i) >= 0.0)) {
                throw InvalidParameter("StateSpaceModel: measurement noise variance must be >= 0");
            }
        }
        if (!(sample_period > 0.0)) throw InvalidParameter("StateSpaceModel: sample_period must be > 0");
    }
};

// Electromagnetic flow meter: U = K * B * V * D.
struct FlowMeterParams {
    double instrument_constant = 0.0;  // K, dimensionless
    double field_strength = 0.0;       // B [T]
    double pipe_cross_section = 0.0;   // D [m]

    void validate() const {
        if (!(instrument_constant > 0.0)) throw InvalidParameter("FlowMeterParams: instrument_constant must be > 0");
        if (!(field_strength >= 0.0)) throw InvalidParameter("FlowMeterParams: field_strength must be >= 0");
        if (!(pipe_cross_section > 0.0)) throw InvalidParameter("FlowMeterParams: pipe_cross_section must be > 0");
    }
};

// Forward-Euler discretization of the tank mass balance dh/dt = (Qin - Qout)/A.
// Commands are u = [valve, pump] with entries in {0, 1}; one step moves the
// level by Ts*q_in/area (fill) and -Ts*q_out/area (drain).
inline StateSpaceModel build_tank_model(const TankParams& params) {
    params.validate();
    StateSpaceModel model;
    model.a_matrix = Matrix{{1.0}};
    model.b_matrix = Matrix(1, 2);
    model.b_matrix(0, 0) = params.sample_period * params.q_in / params.area;
    model.b_matrix(0, 1) = -params.sample_period * params.q_out / params.area;
    model.c_matrix = Matrix{{1.0}};
    model.process_noise_cov = Matrix(1, 1);
    model.meas_noise_cov = Matrix(1, 1);
    model.sample_period = params.sample_period;
    return model;
}

// x_{k+1} = A x + B u + v, evaluated exactly in that order.
inline Vector step_dynamics(const StateSpaceModel& model, const Vector& x, const Vector& u, const Vector& v) {
    if (x.size() != model.state_dim()) throw DimensionMismatch("step_dynamics: state length differs from model");
    if (u.size() != model.input_dim()) throw DimensionMismatch("step_dynamics: command length differs from model");
    if (v.size() != model.state_dim()) throw DimensionMismatch("step_dynamics: noise length differs from model");
    return vec_add(vec_add(mat_vec(model.a_matrix, x), mat_vec(model.b_matrix, u)), v);
}

// y = C x + eta.
inline Vector measure(const StateSpaceModel& model, const Vector& x, const Vector& eta) {
    if (x.size() != model.state_dim()) throw DimensionMismatch("measure: state length differs from model");
    if (eta.size() != model.output_dim()) throw DimensionMismatch("measure: noise length differs from model");
    return vec_add(mat_vec(model.c_matrix, x), eta);
}

inline constexpr double kSpeedOfSoundAt0C = 331.45;   // [m/s]
inline constexpr double kSpeedOfSoundSlope = 0.607;   // [m/s per degree C]

// Speed of sound in air as a linear function of temperature.
inline double speed_of_sound(double temp_c) {
    return kSpeedOfSoundAt0C + kSpeedOfSoundSlope * temp_c;
}

// Induced voltage of an electromagnetic flow meter at the given mean fluid velocity.
inline double flowmeter_voltage(const FlowMeterParams& params, double velocity) {
    params.validate();
    if (!(velocity >= 0.0)) throw InvalidParameter("flowmeter_voltage: velocity must be >= 0");
    return params.instrument_constant * params.field_strength * velocity * params.pipe_cross_section;
}

}  // namespace physguard
