#include "wordbias/logistic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "wordbias/common.hpp"

namespace wordbias {

namespace {

// log(1 + exp(z)) without overflow.
double softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

struct Objective {
  std::span<const double> x;
  std::size_t dim;
  std::span<const int> y;
  double reg;
  std::vector<std::size_t> order;

  double loss(const std::vector<double>& w, double b) const {
    const double n = static_cast<double>(y.size());
    double total = 0.0;
    for (std::size_t i : order) {
      const double z = dot(w, x.subspan(i * dim, dim)) + b;
      // -log sigmoid(z) for y = 1, -log(1 - sigmoid(z)) for y = 0
      total += y[i] ? softplus(-z) : softplus(z);
    }
    return total / n + reg / (2.0 * n) * dot(w, w);
  }

  void gradient(const std::vector<double>& w, double b, std::vector<double>& gw,
                double& gb) const {
    const double n = static_cast<double>(y.size());
    std::fill(gw.begin(), gw.end(), 0.0);
    gb = 0.0;
    for (std::size_t i : order) {
      auto xi = x.subspan(i * dim, dim);
      const double r = sigmoid(dot(w, xi) + b) - static_cast<double>(y[i]);
      for (std::size_t d = 0; d < dim; ++d) gw[d] += r * xi[d];
      gb += r;
    }
    for (std::size_t d = 0; d < dim; ++d) gw[d] = gw[d] / n + reg / n * w[d];
    gb /= n;
  }
};

}  // namespace

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double ez = std::exp(z);
  return ez / (1.0 + ez);
}

double LogisticModel::predict_probability(std::span<const double> x) const {
  const double p = sigmoid(dot(weights, x) + bias);
  constexpr double lo = std::numeric_limits<double>::min();
  return std::clamp(p, lo, std::nextafter(1.0, 0.0));
}

LogisticModel train_logistic(std::span<const double> features, std::size_t dim,
                             std::span<const int> labels, double regularization,
                             std::uint64_t seed, const LogisticOptions& options) {
  if (labels.empty()) throw InvalidArgument("logistic regression needs at least one example");
  if (features.size() != labels.size() * dim) {
    throw InvalidArgument("logistic regression: feature matrix does not match label count");
  }
  if (!(regularization > 0.0)) {
    throw InvalidArgument("logistic regression: regularization must be positive");
  }
  for (int y : labels) {
    if (y != 0 && y != 1) throw InvalidArgument("logistic regression: labels must be 0 or 1");
  }

  Objective obj{features, dim, labels, regularization, {}};
  obj.order.resize(labels.size());
  std::iota(obj.order.begin(), obj.order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(obj.order);

  LogisticModel model;
  model.weights.assign(dim, 0.0);
  model.regularization = regularization;
  model.seed = seed;

  std::vector<double> gw(dim);
  std::vector<double> trial_w(dim);
  double gb = 0.0;
  double step = options.step;
  double current = obj.loss(model.weights, model.bias);
  if (!std::isfinite(current)) throw Error("logistic regression: non-finite loss");
  if (options.record_loss) model.loss_history.push_back(current);

  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    obj.gradient(model.weights, model.bias, gw, gb);
    double gmax = std::abs(gb);
    for (double g : gw) gmax = std::max(gmax, std::abs(g));
    if (gmax < options.tolerance) {
      model.converged = true;
      break;
    }
    // Backtrack until the loss does not increase.
    while (true) {
      for (std::size_t d = 0; d < dim; ++d) trial_w[d] = model.weights[d] - step * gw[d];
      const double trial_b = model.bias - step * gb;
      const double trial = obj.loss(trial_w, trial_b);
      if (!std::isfinite(trial)) throw Error("logistic regression: non-finite loss");
      if (trial <= current) {
        model.weights.swap(trial_w);
        model.bias = trial_b;
        current = trial;
        break;
      }
      step *= 0.5;
      if (step < 1e-300) break;
    }
    model.iterations = it + 1;
    if (options.record_loss) model.loss_history.push_back(current);
  }
  return model;
}

}  // namespace wordbias
