#pragma once

#include <vector>

#include <Eigen/Dense>

#include "data.hpp"
#include "forecaster.hpp"
#include "tensor.hpp"

namespace voltcast {

struct KalmanConfig {
  double sigma2 = 1e-2;         // observation noise variance
  std::vector<double> q_diag;   // process noise diagonal, length D+1
  double p0 = 10.0;             // initial covariance scale
  int delay_days = 2;           // observation availability lag

  static KalmanConfig uniform(double sigma2, double q_scale, std::size_t d, double p0,
                              int delay_days);
};

// Gaussian posterior over the multiplicative state on the final layer's
// per-feature contributions (bias included as an extra regressor).
struct KalmanState {
  Eigen::VectorXd theta_hat;   // D+1
  Eigen::MatrixXd covariance;  // (D+1) x (D+1)

  std::size_t dim() const { return static_cast<std::size_t>(theta_hat.size()); }
};

// theta starts at ones so the initial recalibrated forecast equals the
// static one; P starts at p0 * I.
KalmanState init_kalman(std::size_t d, const KalmanConfig& cfg);

// Phi[d] = A_F[d] * hidden[d] for d < D, Phi[D] = b_F, so that
// theta^T Phi recovers the static forecast at theta = ones.
Eigen::VectorXd design_row(const Eigen::VectorXd& hidden_instant,
                           const Eigen::VectorXd& final_weights, double final_bias);

// One day: predict (P += Q), then a joint update with the H-instant
// observation vector. P is re-symmetrized after the update.
void kalman_step(KalmanState& state, const Eigen::MatrixXd& phi_day,
                 const Eigen::VectorXd& y_day, const KalmanConfig& cfg);

struct RecalibrationResult {
  DayRange range;
  Tensor recalibrated_mw;  // |range| x H
  Tensor static_mw;        // |range| x H
  Tensor recalibrated_scaled;
  Tensor static_scaled;
  std::vector<std::vector<double>> theta_trajectory;  // per day, state used for that forecast
  std::vector<std::vector<double>> p_diag_trajectory;
};

// Daily recalibration over `range`: forecast each day with the current
// state, then (delayed) update with the observation from delay_days earlier
// when it falls inside the window. Filtering runs in scaled load space.
RecalibrationResult run_online(const ForecastModel& model, const Dataset& ds,
                               const DayRange& range, const KalmanConfig& cfg);

}  // namespace voltcast
