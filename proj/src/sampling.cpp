#include "invsched/sampling.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "invsched/errors.hpp"

namespace invsched {

HitAndRunSampler::HitAndRunSampler(HPolytope polytope, std::uint64_t seed, int burn_in)
    : polytope_(std::move(polytope)), rng_(seed) {
  const std::optional<Ball> ball = chebyshev_ball(polytope_, 1e6);
  if (!ball) throw EmptySet("cannot sample an empty polytope");
  if (ball->radius <= 1e-9) {
    throw std::invalid_argument("hit-and-run needs a full-dimensional polytope");
  }
  center_ = ball->center;
  current_ = center_;
  for (int k = 0; k < burn_in; ++k) next();
}

Eigen::VectorXd HitAndRunSampler::random_direction() {
  std::normal_distribution<double> normal;
  Eigen::VectorXd d(polytope_.dim());
  do {
    for (Eigen::Index i = 0; i < d.size(); ++i) d[i] = normal(rng_);
  } while (d.norm() < 1e-12);
  return d.normalized();
}

std::pair<double, double> HitAndRunSampler::chord(const Eigen::VectorXd& x,
                                                  const Eigen::VectorXd& d) const {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  const Eigen::VectorXd slack = polytope_.h() - polytope_.H() * x;
  const Eigen::VectorXd rate = polytope_.H() * d;
  for (Eigen::Index i = 0; i < rate.size(); ++i) {
    const double s = std::max(slack[i], 0.0);
    if (rate[i] > 1e-14) {
      hi = std::min(hi, s / rate[i]);
    } else if (rate[i] < -1e-14) {
      lo = std::max(lo, s / rate[i]);
    }
  }
  if (std::isinf(lo) || std::isinf(hi)) {
    throw std::invalid_argument("hit-and-run needs a bounded polytope");
  }
  return {lo, hi};
}

Eigen::VectorXd HitAndRunSampler::next() {
  const Eigen::VectorXd d = random_direction();
  const auto [lo, hi] = chord(current_, d);
  std::uniform_real_distribution<double> uniform(lo, hi);
  current_ += uniform(rng_) * d;
  return current_;
}

std::vector<Eigen::VectorXd> HitAndRunSampler::draw(int count) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) out.push_back(next());
  return out;
}

std::vector<Eigen::VectorXd> boundary_samples(const HPolytope& polytope, int count,
                                              std::uint64_t seed, double gap) {
  HitAndRunSampler sampler(polytope, seed);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> normal;
  std::vector<Eigen::VectorXd> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    const Eigen::VectorXd x = sampler.next();
    Eigen::VectorXd d(polytope.dim());
    for (Eigen::Index i = 0; i < d.size(); ++i) d[i] = normal(rng);
    d.normalize();
    double hi = std::numeric_limits<double>::infinity();
    const Eigen::VectorXd slack = polytope.h() - polytope.H() * x;
    const Eigen::VectorXd rate = polytope.H() * d;
    for (Eigen::Index i = 0; i < rate.size(); ++i) {
      if (rate[i] > 1e-14) hi = std::min(hi, std::max(slack[i], 0.0) / rate[i]);
    }
    out.push_back(x + (1.0 - gap) * hi * d);
  }
  return out;
}

}  // namespace invsched
