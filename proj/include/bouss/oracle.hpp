/**
 * @file oracle.hpp
 * @brief Independent low-tech integrators used only to cross-validate the
 *        main solver. Shares no machinery with the Newton path beyond
 *        primitive arithmetic.
 *
 * The stationary system is integrated as a 4-dimensional first-order ODE by
 * classical fixed-step RK4; a bisection wrapper tunes the crest values along
 * the relation u0 = -+ sqrt2 eta0 until the trajectory lands on the decaying
 * tail.
 */

#pragma once

#include "bouss/model.hpp"

namespace bouss {

struct ShootingState {
    double u = 0.0;
    double du = 0.0;
    double eta = 0.0;
    double deta = 0.0;
};

struct ShootingTrajectory {
    double step = 0.0;
    std::vector<double> x;
    std::vector<ShootingState> states;
    double tail_norm = 0.0;  // |(u, eta)| at the last stored point
    bool blew_up = false;    // |state| exceeded the blowup guard

    WaveProfile to_profile(double beta) const;
};

/// Integrate the stationary system from (u0, 0, eta0, 0) with fixed step.
/// Stops early when the state norm exceeds 1e6 (bad guess).
ShootingTrajectory shoot_stationary(double beta, double u0, double eta0, double x_max,
                                    double step = 1e-3);

struct ShootingResult {
    ShootingTrajectory trajectory;
    double u0 = 0.0;
    double eta0 = 0.0;
    int bisection_iters = 0;
};

/// Bisection on eta0 (with u0 = -+ sqrt2 eta0) driving the tail norm to zero.
ShootingResult shoot_stationary_tuned(double beta, Sign branch, double x_max,
                                      double step = 1e-3);

/// Sup-norm difference over the common domain, cubic interpolation of the
/// second profile onto the first profile's nodes.
double cross_validate(const WaveProfile& main, const WaveProfile& oracle);

/// Stationary first-integral value along a trajectory state.
double shooting_first_integral(const ShootingState& s, double beta);

}  // namespace bouss
