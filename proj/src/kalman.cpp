#include "kalman.hpp"

#include <cmath>

#include "errors.hpp"

namespace voltcast {

KalmanConfig KalmanConfig::uniform(double sigma2, double q_scale, std::size_t d, double p0,
                                   int delay_days) {
  KalmanConfig cfg;
  cfg.sigma2 = sigma2;
  cfg.q_diag.assign(d + 1, q_scale);
  cfg.p0 = p0;
  cfg.delay_days = delay_days;
  return cfg;
}

namespace {

void validate_config(const KalmanConfig& cfg, std::size_t state_dim) {
  if (!(cfg.sigma2 > 0.0)) throw ValidationError("kalman: sigma2 must be > 0");
  if (cfg.p0 < 0.0) throw ValidationError("kalman: p0 must be >= 0");
  if (cfg.delay_days < 1) throw ValidationError("kalman: delay_days must be >= 1");
  if (cfg.q_diag.size() != state_dim) {
    throw ValidationError("kalman: q_diag must have length D+1");
  }
  for (double q : cfg.q_diag) {
    if (q < 0.0) throw ValidationError("kalman: q_diag entries must be >= 0");
  }
}

}  // namespace

KalmanState init_kalman(std::size_t d, const KalmanConfig& cfg) {
  if (d < 1) throw ValidationError("init_kalman: d must be >= 1");
  validate_config(cfg, d + 1);
  KalmanState state;
  state.theta_hat = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(d + 1));
  state.covariance =
      cfg.p0 * Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(d + 1),
                                         static_cast<Eigen::Index>(d + 1));
  return state;
}

Eigen::VectorXd design_row(const Eigen::VectorXd& hidden_instant,
                           const Eigen::VectorXd& final_weights, double final_bias) {
  if (hidden_instant.size() != final_weights.size()) {
    throw ValidationError("design_row: hidden and final weights must have equal length");
  }
  Eigen::VectorXd phi(hidden_instant.size() + 1);
  for (Eigen::Index d = 0; d < hidden_instant.size(); ++d) {
    phi[d] = final_weights[d] * hidden_instant[d];
  }
  phi[hidden_instant.size()] = final_bias;
  return phi;
}

void kalman_step(KalmanState& state, const Eigen::MatrixXd& phi_day,
                 const Eigen::VectorXd& y_day, const KalmanConfig& cfg) {
  const Eigen::Index dim = state.theta_hat.size();
  if (phi_day.cols() != dim || phi_day.rows() != y_day.size()) {
    throw ValidationError("kalman_step: design/observation shape mismatch");
  }
  validate_config(cfg, static_cast<std::size_t>(dim));

  // predict: random-walk state, theta unchanged
  for (Eigen::Index d = 0; d < dim; ++d) state.covariance(d, d) += cfg.q_diag[d];

  const Eigen::Index h = phi_day.rows();
  Eigen::MatrixXd pht = state.covariance * phi_day.transpose();          // (D+1) x H
  Eigen::MatrixXd innovation = phi_day * pht;                            // H x H
  innovation += cfg.sigma2 * Eigen::MatrixXd::Identity(h, h);
  Eigen::LDLT<Eigen::MatrixXd> solver(innovation);
  if (solver.info() != Eigen::Success) {
    throw NumericError("kalman_step: innovation matrix solve failed");
  }
  Eigen::MatrixXd gain = solver.solve(pht.transpose()).transpose();      // (D+1) x H
  if (!gain.allFinite()) throw NumericError("kalman_step: non-finite Kalman gain");

  const Eigen::VectorXd residual = y_day - phi_day * state.theta_hat;
  state.theta_hat += gain * residual;
  const Eigen::MatrixXd correction = gain * phi_day * state.covariance;
  state.covariance -= correction;
  state.covariance = 0.5 * (state.covariance + state.covariance.transpose()).eval();
  if (!state.theta_hat.allFinite() || !state.covariance.allFinite()) {
    throw NumericError("kalman_step: non-finite state after update");
  }
}

RecalibrationResult run_online(const ForecastModel& model, const Dataset& ds,
                               const DayRange& range, const KalmanConfig& cfg) {
  const std::size_t d_n = model.hidden_width();
  validate_config(cfg, d_n + 1);

  PredictResult base = predict(model, ds, range);
  const std::size_t h_n = ds.instants();
  const std::size_t n_days = range.length();

  Eigen::VectorXd final_weights(static_cast<Eigen::Index>(d_n));
  for (std::size_t d = 0; d < d_n; ++d) final_weights[static_cast<Eigen::Index>(d)] =
      model.final_weights(d);
  const double final_bias = model.bias();

  // design matrices for every day in the window
  std::vector<Eigen::MatrixXd> phi(n_days);
  for (std::size_t t = 0; t < n_days; ++t) {
    phi[t] = Eigen::MatrixXd(static_cast<Eigen::Index>(h_n), static_cast<Eigen::Index>(d_n + 1));
    for (std::size_t h = 0; h < h_n; ++h) {
      Eigen::VectorXd hidden(static_cast<Eigen::Index>(d_n));
      for (std::size_t d = 0; d < d_n; ++d) hidden[static_cast<Eigen::Index>(d)] =
          base.hidden(t, h, d);
      phi[t].row(static_cast<Eigen::Index>(h)) = design_row(hidden, final_weights, final_bias);
    }
  }

  KalmanState state = init_kalman(d_n, cfg);
  RecalibrationResult result;
  result.range = range;
  result.recalibrated_mw = Tensor({n_days, h_n});
  result.static_mw = base.forecasts_mw;
  result.recalibrated_scaled = Tensor({n_days, h_n});
  result.static_scaled = base.forecasts_scaled;
  result.theta_trajectory.reserve(n_days);
  result.p_diag_trajectory.reserve(n_days);

  for (std::size_t t = 0; t < n_days; ++t) {
    result.theta_trajectory.emplace_back(state.theta_hat.data(),
                                         state.theta_hat.data() + state.theta_hat.size());
    std::vector<double> p_diag(d_n + 1);
    for (std::size_t d = 0; d <= d_n; ++d) p_diag[d] = state.covariance(
        static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    result.p_diag_trajectory.push_back(std::move(p_diag));

    // forecast with the current state
    for (std::size_t h = 0; h < h_n; ++h) {
      const double scaled = phi[t].row(static_cast<Eigen::Index>(h)).dot(state.theta_hat);
      result.recalibrated_scaled(t, h) = scaled;
      result.recalibrated_mw(t, h) = ds.scaler.unscale_load(scaled);
    }

    // delayed update with the observation from delay_days ago, when it falls
    // inside the window
    const std::int64_t obs_day = static_cast<std::int64_t>(range.begin + t) - cfg.delay_days;
    if (obs_day >= static_cast<std::int64_t>(range.begin)) {
      const std::size_t rel = static_cast<std::size_t>(obs_day) - range.begin;
      Eigen::VectorXd y(static_cast<Eigen::Index>(h_n));
      for (std::size_t h = 0; h < h_n; ++h) {
        y[static_cast<Eigen::Index>(h)] =
            ds.scaler.scale_load(ds.load.values(static_cast<std::size_t>(obs_day), h));
      }
      kalman_step(state, phi[rel], y, cfg);
    }
  }
  return result;
}

}  // namespace voltcast
