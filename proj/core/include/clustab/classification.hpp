#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "clustab/dataset.hpp"

namespace clustab {

enum class ClassifierKind { knn, logreg };

std::string to_string(ClassifierKind kind);
ClassifierKind classifier_kind_from_string(const std::string& name);

struct KnnParams {
  int n_neighbors = 15;
};

struct LogregParams {
  double l2 = 1e-4;    // ridge strength on non-bias weights
  int max_iter = 500;
  double tol = 1e-6;   // gradient Frobenius norm
  double step0 = 1.0;  // initial step for backtracking line search
  double backtrack = 0.5;
};

struct ClassifierConfig {
  ClassifierKind kind = ClassifierKind::knn;
  KnnParams knn;
  LogregParams logreg;
};

struct TrainedClassifier {
  ClassifierKind kind = ClassifierKind::knn;
  std::vector<int> class_ids;  // distinct fit labels, ascending
  std::size_t n_features = 0;
  // knn: stored training set
  std::vector<double> train_values;
  std::vector<int> train_labels;
  std::size_t n_train = 0;
  int n_neighbors = 0;
  // logreg: class_ids.size() rows of (n_features + 1) weights, bias last
  std::vector<double> weights;
};

/// Train on cluster-derived labels. Labels must be >= 0 (callers strip
/// density noise first) and non-empty; a single class yields a constant
/// predictor. knn requires n_neighbors <= n_samples.
TrainedClassifier fit_classifier(const ClassifierConfig& config,
                                 const Dataset& data,
                                 const LabelVector& labels);

/// One label per row, always drawn from class_ids; deterministic. knn votes
/// among the n_neighbors closest samples, ties resolved by the nearest
/// member, then by lower class id.
LabelVector predict(const TrainedClassifier& model, const Dataset& data);

/// Regularized multinomial cross-entropy and its analytic gradient at the
/// given flat weights (n_classes x (n_features+1), bias last). Diagnostics
/// hook; the fit path uses the same objective.
std::pair<double, std::vector<double>> logreg_objective(
    const Dataset& data, const LabelVector& labels,
    const LogregParams& params, const std::vector<double>& weights);

}  // namespace clustab
