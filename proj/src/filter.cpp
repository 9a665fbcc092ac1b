#include "seqloc/filter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace seqloc {

namespace {

// Compensated sum keeps normalization error well under the 1e-9 contract
// even for large particle counts.
double kahan_sum(const std::vector<double>& xs) {
  double sum = 0.0;
  double comp = 0.0;
  for (double x : xs) {
    const double y = x - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

double gaussian(std::mt19937_64& rng, double sigma) {
  if (sigma <= 0.0) return 0.0;
  std::normal_distribution<double> dist(0.0, sigma);
  return dist(rng);
}

}  // namespace

std::vector<std::size_t> systematic_resample_indices(const std::vector<double>& weights,
                                                     std::size_t n_out, double offset) {
  if (weights.empty() || n_out == 0) {
    throw DomainError("systematic resample needs weights and n_out >= 1");
  }
  if (offset < 0.0 || offset >= 1.0 / static_cast<double>(n_out)) {
    throw DomainError("resample offset must lie in [0, 1/n)");
  }
  std::vector<double> cum(weights.size());
  double running = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    running += weights[i];
    cum[i] = running;
  }
  // The selection grid tops out below 1; pin the last edge so rounding in
  // the cumulative sum cannot strand a selection past it.
  cum.back() = std::max(cum.back(), 1.0);

  std::vector<std::size_t> indices;
  indices.reserve(n_out);
  std::size_t i = 0;
  for (std::size_t m = 0; m < n_out; ++m) {
    const double u = offset + static_cast<double>(m) / static_cast<double>(n_out);
    while (u >= cum[i] && i + 1 < cum.size()) ++i;
    indices.push_back(i);
  }
  return indices;
}

Tracker::Tracker(const FilterConfig& filter_cfg, const MotionConfig& motion_cfg,
                 std::shared_ptr<const ObservationModel> model, std::uint64_t seed)
    : filter_cfg_(filter_cfg),
      motion_cfg_(motion_cfg),
      model_(std::move(model)),
      state_time_(std::numeric_limits<double>::quiet_NaN()),
      last_input_time_(-std::numeric_limits<double>::infinity()),
      rng_(seed) {
  if (filter_cfg_.n_particles == 0) {
    throw ConfigError("n_particles must be at least 1");
  }
  if (!(filter_cfg_.resample_threshold > 0.0) || filter_cfg_.resample_threshold > 1.0) {
    throw ConfigError("resample_threshold must lie in (0, 1]");
  }

  particles_.resize(filter_cfg_.n_particles);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double w0 = 1.0 / static_cast<double>(particles_.size());
  for (auto& p : particles_) {
    if (const auto* rect = std::get_if<Rect>(&filter_cfg_.init_region)) {
      if (rect->width() < 0.0 || rect->height() < 0.0) {
        throw ConfigError("init region rectangle is empty");
      }
      p.pose.x = rect->min_x + unit(rng_) * rect->width();
      p.pose.y = rect->min_y + unit(rng_) * rect->height();
    } else {
      const auto& disc = std::get<Disc>(filter_cfg_.init_region);
      if (disc.radius < 0.0) {
        throw ConfigError("init region radius is negative");
      }
      if (disc.radius == 0.0) {
        p.pose.x = disc.center.x;
        p.pose.y = disc.center.y;
      } else {
        const double r = disc.radius * std::sqrt(unit(rng_));
        const double phi = unit(rng_) * 2.0 * M_PI;
        p.pose.x = disc.center.x + r * std::cos(phi);
        p.pose.y = disc.center.y + r * std::sin(phi);
      }
    }
    p.pose.theta = wrap_angle(unit(rng_) * 2.0 * M_PI - M_PI);
    p.weight = w0;
  }
}

void Tracker::check_order(double timestamp, const char* what) {
  if (timestamp < last_input_time_) {
    throw LogError(std::string(what) + " at t=" + std::to_string(timestamp) +
                   " arrived after t=" + std::to_string(last_input_time_));
  }
  last_input_time_ = timestamp;
}

void Tracker::predict(const DeadReckoningInput& u) {
  check_order(u.timestamp, "step sample");
  if (!last_dr_) {
    // First heading sample: tighten the uniform heading prior around it.
    for (auto& p : particles_) {
      p.pose.theta = wrap_angle(u.heading + gaussian(rng_, filter_cfg_.init_heading_std));
    }
    last_dr_ = u;
    state_time_ = u.timestamp;
    return;
  }
  for (auto& p : particles_) {
    p.pose = propagate(p.pose, *last_dr_, u, motion_cfg_, rng_);
  }
  last_dr_ = u;
  state_time_ = u.timestamp;
}

void Tracker::reset_uniform_weights() {
  const double w = 1.0 / static_cast<double>(particles_.size());
  for (auto& p : particles_) p.weight = w;
}

CorrectionOutcome Tracker::correct(const WifiScan& scan) {
  check_order(scan.timestamp, "wifi scan");
  if (std::isnan(state_time_)) state_time_ = scan.timestamp;
  if (!model_) {
    ++skipped_scans_;
    return CorrectionOutcome::Skipped;
  }
  const auto anchors = model_->scan_anchors(scan);
  if (!anchors) {
    ++skipped_scans_;
    return CorrectionOutcome::Skipped;
  }
  ++corrections_;

  const double lambda = model_->lambda();
  std::vector<double> raw(particles_.size());
  bool any_above_floor = false;
  for (std::size_t i = 0; i < particles_.size(); ++i) {
    const double like = wknn_likelihood(particles_[i].pose, *anchors, lambda);
    if (like > kLikelihoodFloor) any_above_floor = true;
    raw[i] = particles_[i].weight * like;
  }
  const double total = kahan_sum(raw);
  if (!any_above_floor || !(total > 0.0) || !std::isfinite(total)) {
    // Every particle underflowed the kernel: the scan carries no usable
    // gradient, so restart from an uninformed posterior.
    reset_uniform_weights();
    ++divergence_resets_;
    return CorrectionOutcome::Reset;
  }
  for (std::size_t i = 0; i < particles_.size(); ++i) {
    particles_[i].weight = raw[i] / total;
  }
  return CorrectionOutcome::Applied;
}

double Tracker::effective_sample_size() const {
  double sum_sq = 0.0;
  for (const auto& p : particles_) sum_sq += p.weight * p.weight;
  return sum_sq > 0.0 ? 1.0 / sum_sq : 0.0;
}

bool Tracker::maybe_resample() {
  const double n = static_cast<double>(particles_.size());
  if (effective_sample_size() >= filter_cfg_.resample_threshold * n) {
    return false;
  }
  std::vector<double> weights(particles_.size());
  for (std::size_t i = 0; i < particles_.size(); ++i) weights[i] = particles_[i].weight;

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double offset = unit(rng_) / n;
  const auto indices = systematic_resample_indices(weights, particles_.size(), offset);

  std::vector<Particle> next;
  next.reserve(particles_.size());
  const double w = 1.0 / n;
  for (std::size_t idx : indices) {
    next.push_back({particles_[idx].pose, w});
  }
  particles_ = std::move(next);
  ++resamples_;
  return true;
}

Pose Tracker::estimate() const {
  double sum_w = 0.0;
  double sum_x = 0.0;
  double sum_y = 0.0;
  double sum_sin = 0.0;
  double sum_cos = 0.0;
  for (const auto& p : particles_) {
    sum_w += p.weight;
    sum_x += p.weight * p.pose.x;
    sum_y += p.weight * p.pose.y;
    sum_sin += p.weight * std::sin(p.pose.theta);
    sum_cos += p.weight * std::cos(p.pose.theta);
  }
  Pose est;
  est.x = sum_x / sum_w;
  est.y = sum_y / sum_w;
  est.theta = std::atan2(sum_sin, sum_cos);
  return est;
}

std::optional<Pose> Tracker::step(const Measurement& m) {
  if (std::holds_alternative<GroundTruthFix>(m)) {
    return std::nullopt;
  }
  if (const auto* dr = std::get_if<DeadReckoningInput>(&m)) {
    predict(*dr);
    return estimate();
  }
  const auto& scan = std::get<WifiScan>(m);
  correct(scan);
  // The pre-resampling weights carry the correction; read the estimate
  // before replacement flattens them.
  const Pose est = estimate();
  maybe_resample();
  return est;
}

void Tracker::diffuse(double sigma_m, double timestamp) {
  check_order(timestamp, "diffusion step");
  for (auto& p : particles_) {
    p.pose.x += gaussian(rng_, sigma_m);
    p.pose.y += gaussian(rng_, sigma_m);
  }
  state_time_ = timestamp;
}

}  // namespace seqloc
