#pragma once

// Random inputs shared by the unit tests and the acceptance runner.

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "dsirp/instance.hpp"
#include "dsirp/mdp.hpp"
#include "dsirp/prize_model.hpp"
#include "dsirp/rng.hpp"

namespace fixtures {

// State at t = 0 with uniform inventories, a sampled history and, for
// contextual instances, a sampled context window.
inline dsirp::State random_state(const dsirp::Instance& inst, std::uint64_t seed, int window = 50) {
  dsirp::Rng rng(seed);
  const auto hist = dsirp::sample_history(inst, window, dsirp::derive_seed(seed, {1}));
  const auto ep = dsirp::sample_episode(inst, 1, dsirp::derive_seed(seed, {2}));
  dsirp::State s = dsirp::initial_state(inst, hist, ep);
  for (int i = 0; i < inst.n; ++i) s.inventory[i] = rng.uniform(0.0, inst.capacity[i]);
  return s;
}

// Parameters drawn around the default initialisation.
inline dsirp::ModelParams random_params(const dsirp::QuantileConfig& cfg, int features, std::uint64_t seed,
                                        double feature_scale = 0.05) {
  dsirp::Rng rng(seed);
  dsirp::ModelParams w = dsirp::init_params(cfg, features);
  for (auto& x : w.w1) x = rng.uniform(-feature_scale, feature_scale);
  for (auto& x : w.w2_upper) x = rng.uniform(-feature_scale, feature_scale) * 0.1;
  for (auto& r : w.w3)
    for (auto& x : r) x = rng.uniform(-1.0, 0.5);
  for (auto& r : w.w4)
    for (auto& x : r) x = rng.uniform(-0.5, 1.0);
  return w;
}

inline double dot(const dsirp::Vector& a, const dsirp::Vector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Norm-wise relative error between analytic and central-difference
// gradients of theta' dtheta, with the given step.
inline double gradient_error(const dsirp::State& s, const dsirp::Instance& inst, const dsirp::ModelParams& w,
                             const dsirp::QuantileConfig& cfg, const dsirp::Vector& dtheta, double step = 1e-6) {
  const auto analytic = dsirp::prize_backward(s, inst, w, cfg, dtheta).flatten();
  const auto base = w.flatten();
  double diff = 0.0, norm = 0.0;
  for (std::size_t k = 0; k < base.size(); ++k) {
    auto up = base, down = base;
    up[k] += step;
    down[k] -= step;
    dsirp::ModelParams wu = w, wd = w;
    wu.assign(up);
    wd.assign(down);
    const double fd = (dot(dsirp::prize_forward(s, inst, wu, cfg), dtheta) -
                       dot(dsirp::prize_forward(s, inst, wd, cfg), dtheta)) /
                      (2.0 * step);
    diff += (fd - analytic[k]) * (fd - analytic[k]);
    norm += std::max(fd * fd, analytic[k] * analytic[k]);
  }
  return norm == 0.0 ? std::sqrt(diff) : std::sqrt(diff / norm);
}

}  // namespace fixtures
