#include "clustab/classification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace clustab {

std::string to_string(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::knn: return "knn";
    case ClassifierKind::logreg: return "logreg";
  }
  throw std::logic_error("unknown classifier kind");
}

ClassifierKind classifier_kind_from_string(const std::string& name) {
  if (name == "knn") return ClassifierKind::knn;
  if (name == "logreg") return ClassifierKind::logreg;
  throw std::invalid_argument("unknown classifier kind: " + name);
}

namespace {

double sq_dist(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

std::vector<int> distinct_sorted(const LabelVector& labels) {
  std::set<int> seen(labels.begin(), labels.end());
  return {seen.begin(), seen.end()};
}

// --- multinomial logistic regression, full-batch gradient descent ---------

struct LogregProblem {
  const Dataset& data;
  const std::vector<std::size_t>& class_index;  // per-sample class position
  std::size_t n_classes;
  double l2;

  std::size_t dim() const { return data.n_features + 1; }  // bias last

  // Row-major weights (n_classes x dim). Returns loss; fills probs if given.
  double loss(const std::vector<double>& w,
              std::vector<double>* probs_out) const {
    const std::size_t n = data.n_samples;
    const std::size_t d = data.n_features;
    double total = 0.0;
    std::vector<double> logits(n_classes);
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = data.row(i);
      double max_logit = -std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < n_classes; ++c) {
        double z = w[c * dim() + d];  // bias
        for (std::size_t f = 0; f < d; ++f) z += w[c * dim() + f] * row[f];
        logits[c] = z;
        max_logit = std::max(max_logit, z);
      }
      double denom = 0.0;
      for (std::size_t c = 0; c < n_classes; ++c) {
        logits[c] = std::exp(logits[c] - max_logit);
        denom += logits[c];
      }
      for (std::size_t c = 0; c < n_classes; ++c) {
        const double p = logits[c] / denom;
        if (probs_out) (*probs_out)[i * n_classes + c] = p;
        if (c == class_index[i]) total -= std::log(std::max(p, 1e-300));
      }
    }
    total /= static_cast<double>(n);
    for (std::size_t c = 0; c < n_classes; ++c) {
      for (std::size_t f = 0; f < d; ++f) {  // bias excluded from the penalty
        total += 0.5 * l2 * w[c * dim() + f] * w[c * dim() + f];
      }
    }
    return total;
  }

  std::vector<double> gradient(const std::vector<double>& w,
                               const std::vector<double>& probs) const {
    const std::size_t n = data.n_samples;
    const std::size_t d = data.n_features;
    std::vector<double> grad(w.size(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = data.row(i);
      for (std::size_t c = 0; c < n_classes; ++c) {
        const double delta =
            probs[i * n_classes + c] - (class_index[i] == c ? 1.0 : 0.0);
        double* dst = grad.data() + c * dim();
        for (std::size_t f = 0; f < d; ++f) dst[f] += delta * row[f];
        dst[d] += delta;
      }
    }
    for (double& g : grad) g /= static_cast<double>(n);
    for (std::size_t c = 0; c < n_classes; ++c) {
      for (std::size_t f = 0; f < d; ++f) {
        grad[c * dim() + f] += l2 * w[c * dim() + f];
      }
    }
    return grad;
  }
};

std::vector<double> fit_logreg_weights(const Dataset& data,
                                       const std::vector<std::size_t>& class_index,
                                       std::size_t n_classes,
                                       const LogregParams& params) {
  LogregProblem problem{data, class_index, n_classes, params.l2};
  std::vector<double> w(n_classes * problem.dim(), 0.0);
  if (n_classes < 2) return w;  // constant predictor

  std::vector<double> probs(data.n_samples * n_classes, 0.0);
  double loss = problem.loss(w, &probs);
  for (int iter = 0; iter < params.max_iter; ++iter) {
    const auto grad = problem.gradient(w, probs);
    double grad_norm2 = 0.0;
    for (double g : grad) grad_norm2 += g * g;
    if (std::sqrt(grad_norm2) < params.tol) break;

    // Backtracking line search with the Armijo condition.
    double step = params.step0;
    std::vector<double> candidate(w.size());
    while (true) {
      for (std::size_t j = 0; j < w.size(); ++j) {
        candidate[j] = w[j] - step * grad[j];
      }
      const double candidate_loss = problem.loss(candidate, &probs);
      if (candidate_loss <= loss - 1e-4 * step * grad_norm2 ||
          step < 1e-12) {
        w = candidate;
        loss = candidate_loss;
        break;
      }
      step *= params.backtrack;
    }
  }
  return w;
}

}  // namespace

std::pair<double, std::vector<double>> logreg_objective(
    const Dataset& data, const LabelVector& labels,
    const LogregParams& params, const std::vector<double>& weights) {
  std::vector<int> classes = distinct_sorted(labels);
  std::map<int, std::size_t> position;
  for (std::size_t c = 0; c < classes.size(); ++c) position[classes[c]] = c;
  std::vector<std::size_t> class_index(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    class_index[i] = position[labels[i]];
  }
  LogregProblem problem{data, class_index, classes.size(), params.l2};
  if (weights.size() != classes.size() * problem.dim()) {
    throw std::invalid_argument("logreg_objective: weight shape mismatch");
  }
  std::vector<double> probs(data.n_samples * classes.size(), 0.0);
  const double loss = problem.loss(weights, &probs);
  return {loss, problem.gradient(weights, probs)};
}

TrainedClassifier fit_classifier(const ClassifierConfig& config,
                                 const Dataset& data,
                                 const LabelVector& labels) {
  if (data.n_samples == 0) {
    throw std::invalid_argument("classifier fit: empty training set");
  }
  if (labels.size() != data.n_samples) {
    throw std::invalid_argument("classifier fit: label count mismatch");
  }
  for (int label : labels) {
    if (label < 0) {
      throw std::invalid_argument(
          "classifier fit: negative label (strip noise before fitting)");
    }
  }

  TrainedClassifier model;
  model.kind = config.kind;
  model.class_ids = distinct_sorted(labels);
  model.n_features = data.n_features;

  if (config.kind == ClassifierKind::knn) {
    if (config.knn.n_neighbors < 1 ||
        static_cast<std::size_t>(config.knn.n_neighbors) > data.n_samples) {
      throw std::invalid_argument(
          "knn: n_neighbors must be in [1, n_samples]");
    }
    model.train_values = data.values;
    model.train_labels = labels;
    model.n_train = data.n_samples;
    model.n_neighbors = config.knn.n_neighbors;
    return model;
  }

  // logreg: map labels onto class positions 0..k-1
  std::map<int, std::size_t> position;
  for (std::size_t c = 0; c < model.class_ids.size(); ++c) {
    position[model.class_ids[c]] = c;
  }
  std::vector<std::size_t> class_index(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    class_index[i] = position[labels[i]];
  }
  model.weights = fit_logreg_weights(data, class_index,
                                     model.class_ids.size(), config.logreg);
  return model;
}

namespace {

int knn_predict_one(const TrainedClassifier& model,
                    std::span<const double> query) {
  const std::size_t n = model.n_train;
  const std::size_t d = model.n_features;
  std::vector<std::pair<double, std::size_t>> order(n);
  for (std::size_t j = 0; j < n; ++j) {
    order[j] = {sq_dist(query, {model.train_values.data() + j * d, d}), j};
  }
  const std::size_t kk = static_cast<std::size_t>(model.n_neighbors);
  std::partial_sort(order.begin(), order.begin() + kk, order.end());

  // Tally the neighborhood; per class remember the closest member, with
  // distance ties already resolved by lower training index via the sort key.
  std::map<int, int> votes;
  std::map<int, std::pair<double, std::size_t>> closest;
  for (std::size_t r = 0; r < kk; ++r) {
    const int label = model.train_labels[order[r].second];
    ++votes[label];
    const auto it = closest.find(label);
    if (it == closest.end()) closest[label] = order[r];
  }
  int best_label = -1;
  int best_votes = -1;
  std::pair<double, std::size_t> best_closest{0.0, 0};
  for (const auto& [label, count] : votes) {
    const auto& near = closest[label];
    // Rank by votes, then by nearer closest member, then by lower class id
    // (map order already ascends by label).
    const bool wins =
        count > best_votes ||
        (count == best_votes && near.first < best_closest.first);
    if (wins) {
      best_label = label;
      best_votes = count;
      best_closest = near;
    }
  }
  return best_label;
}

}  // namespace

LabelVector predict(const TrainedClassifier& model, const Dataset& data) {
  if (data.n_features != model.n_features) {
    throw std::invalid_argument("predict: feature count mismatch");
  }
  LabelVector out;
  out.reserve(data.n_samples);
  if (model.class_ids.size() == 1) {
    out.assign(data.n_samples, model.class_ids.front());
    return out;
  }
  if (model.kind == ClassifierKind::knn) {
    for (std::size_t i = 0; i < data.n_samples; ++i) {
      out.push_back(knn_predict_one(model, data.row(i)));
    }
    return out;
  }
  const std::size_t d = model.n_features;
  const std::size_t dim = d + 1;
  for (std::size_t i = 0; i < data.n_samples; ++i) {
    const auto row = data.row(i);
    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_c = 0;
    for (std::size_t c = 0; c < model.class_ids.size(); ++c) {
      double z = model.weights[c * dim + d];
      for (std::size_t f = 0; f < d; ++f) z += model.weights[c * dim + f] * row[f];
      if (z > best) {
        best = z;
        best_c = c;
      }
    }
    out.push_back(model.class_ids[best_c]);
  }
  return out;
}

}  // namespace clustab
