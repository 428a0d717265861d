#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace wordbias {

struct LogisticOptions {
  double step = 0.1;          // initial step; halved whenever a step would raise the loss
  double tolerance = 1e-6;    // stop when the max-norm of the gradient falls below this
  std::size_t max_iterations = 10000;
  bool record_loss = false;
};

// Binary L2-regularized logistic regression fitted by full-batch gradient
// descent on
//   J(w, b) = (1/n) sum_i logloss(y_i, sigmoid(w.x_i + b)) + reg / (2n) * |w|^2
// which has the same minimizer as the C = 1/reg convention. The intercept is not
// regularized. Weights start at zero; the seed fixes the order in which examples
// are accumulated into the gradient.
struct LogisticModel {
  std::vector<double> weights;
  double bias = 0.0;
  double regularization = 1.0;
  std::uint64_t seed = 0;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> loss_history;

  // P(y = 1 | x), clamped into the open interval (0, 1).
  double predict_probability(std::span<const double> x) const;
};

// `features` is row-major with labels.size() rows of `dim` values each.
LogisticModel train_logistic(std::span<const double> features, std::size_t dim,
                             std::span<const int> labels, double regularization,
                             std::uint64_t seed, const LogisticOptions& options = {});

double sigmoid(double z);

}  // namespace wordbias
