#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "clustab/assignment.hpp"
#include "clustab/metrics.hpp"
#include "clustab/rng.hpp"
#include "support/oracles.hpp"

using namespace clustab;

namespace {

LabelVector random_label_vector(Rng& rng, std::size_t n, int k) {
  LabelVector out(n);
  for (auto& label : out) label = static_cast<int>(rng.below(k));
  return out;
}

Dataset random_dataset(Rng& rng, std::size_t n, std::size_t d) {
  Dataset data;
  data.n_samples = n;
  data.n_features = d;
  for (std::size_t i = 0; i < n * d; ++i) data.values.push_back(rng.normal());
  return data;
}

}  // namespace

// --- MCC --------------------------------------------------------------------

TEST_CASE("mcc of identical vectors is exactly one") {
  const LabelVector v{0, 1, 2, 1, 0, 2};
  CHECK(mcc(v, v).value == 1.0);
}

TEST_CASE("mcc matches the binary hand calculation TP2 TN2 FP1 FN1") {
  const LabelVector truth{1, 1, 0, 0, 1, 0};
  const LabelVector pred{1, 1, 0, 0, 0, 1};
  CHECK(mcc(truth, pred).value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("mcc degenerates to zero for constant sides, flagged") {
  const MetricValue result = mcc({0, 0, 0}, {0, 1, 2});
  CHECK(result.value == 0.0);
  CHECK(result.flagged);
}

TEST_CASE("mcc matches the one-hot Pearson oracle") {
  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 5 + rng.below(46);
    const int k = 2 + static_cast<int>(rng.below(4));
    const LabelVector a = random_label_vector(rng, n, k);
    const LabelVector b = random_label_vector(rng, n, k);
    CHECK(mcc(a, b).value ==
          doctest::Approx(oracles::mcc(a, b)).epsilon(1e-10));
  }
}

// --- precision / recall / F1 -------------------------------------------------

TEST_CASE("prf of identical vectors is all ones") {
  const LabelVector v{0, 1, 1, 2};
  const PRF result = precision_recall_f1(v, v);
  CHECK(result.precision_macro == 1.0);
  CHECK(result.recall_macro == 1.0);
  CHECK(result.f1_macro == 1.0);
}

TEST_CASE("constant predictions on balanced binary truth give recall 0.5") {
  const LabelVector truth{0, 0, 1, 1};
  const LabelVector pred{0, 0, 0, 0};
  CHECK(precision_recall_f1(truth, pred).recall_macro == doctest::Approx(0.5));
}

TEST_CASE("prf matches the enumerated confusion cells") {
  const LabelVector truth{0, 0, 1, 1};
  const LabelVector pred{0, 1, 1, 1};
  // class 0: TP=1 FP=0 FN=1 -> P=1, R=.5, F1=2/3
  // class 1: TP=2 FP=1 FN=0 -> P=2/3, R=1, F1=0.8
  const PRF result = precision_recall_f1(truth, pred);
  CHECK(result.precision_macro == doctest::Approx((1.0 + 2.0 / 3.0) / 2));
  CHECK(result.recall_macro == doctest::Approx(0.75));
  CHECK(result.f1_macro == doctest::Approx((2.0 / 3.0 + 0.8) / 2));
}

// --- AMI ---------------------------------------------------------------------

TEST_CASE("ami of identical partitions is exactly one") {
  const LabelVector v{0, 0, 1, 1, 2, 2};
  CHECK(ami(v, v).value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ami is invariant under relabeling") {
  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const int k = 2 + static_cast<int>(rng.below(4));
    const LabelVector a = random_label_vector(rng, 60, k);
    const LabelVector b = random_label_vector(rng, 60, k);
    std::vector<int> mapping(k);
    std::iota(mapping.begin(), mapping.end(), 0);
    rng.shuffle(mapping);
    const double before = ami(a, b).value;
    const double after = ami(relabel(a, Permutation{mapping}), b).value;
    CHECK(before == doctest::Approx(after).epsilon(1e-12));
  }
}

TEST_CASE("ami of independent labelings concentrates near zero") {
  Rng rng(24);
  const LabelVector a = random_label_vector(rng, 10000, 3);
  const LabelVector b = random_label_vector(rng, 10000, 3);
  CHECK(std::abs(ami(a, b).value) < 0.02);
}

TEST_CASE("ami matches the exact-binomial oracle") {
  Rng rng(25);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 6 + rng.below(45);
    const int k = 2 + static_cast<int>(rng.below(4));
    const LabelVector a = random_label_vector(rng, n, k);
    const LabelVector b = random_label_vector(rng, n, k);
    CHECK(ami(a, b).value ==
          doctest::Approx(oracles::ami(a, b)).epsilon(1e-10));
  }
}

TEST_CASE("ami single-cluster conventions") {
  // Both sides single cluster: zero-information partitions that agree.
  CHECK(ami({0, 0, 0}, {0, 0, 0}).value == 1.0);
  CHECK(ami({2, 2, 2}, {7, 7, 7}).value == 1.0);
  // One informative side keeps the normalizer positive: plain zero score.
  const MetricValue mixed = ami({0, 0, 0}, {0, 1, 2});
  CHECK(mixed.value == 0.0);
  CHECK_FALSE(mixed.flagged);
}

// --- silhouette ---------------------------------------------------------------

TEST_CASE("silhouette of two tight 1-D pairs") {
  Dataset data;
  data.n_samples = 4;
  data.n_features = 1;
  data.values = {0.0, 0.1, 10.0, 10.1};
  const LabelVector labels{0, 0, 1, 1};
  // Hand computation: two points score 9.95/10.05, two score 9.85/9.95.
  const double expected =
      (2 * (9.95 / 10.05) + 2 * (9.85 / 9.95)) / 4.0;
  CHECK(silhouette(data, labels).value ==
        doctest::Approx(expected).epsilon(1e-12));
  CHECK(silhouette(data, labels).value == doctest::Approx(0.990).epsilon(1e-3));
}

TEST_CASE("silhouette of interleaved identical structures is near zero") {
  Dataset data;
  data.n_samples = 100;
  data.n_features = 1;
  LabelVector labels;
  for (int i = 0; i < 100; ++i) {
    data.values.push_back(static_cast<double>(i));
    labels.push_back(i % 2);
  }
  CHECK(std::abs(silhouette(data, labels).value) < 0.05);
}

TEST_CASE("singleton clusters score zero by convention") {
  Dataset data;
  data.n_samples = 3;
  data.n_features = 1;
  data.values = {0.0, 0.2, 9.0};
  const LabelVector labels{0, 0, 1};
  const double expected =
      ((9.0 - 0.2) / 9.0 + (8.8 - 0.2) / 8.8 + 0.0) / 3.0;
  CHECK(silhouette(data, labels).value == doctest::Approx(expected));
}

TEST_CASE("silhouette requires two clusters and stays in [-1, 1]") {
  Rng rng(26);
  CHECK_THROWS_AS(silhouette(random_dataset(rng, 5, 2), {0, 0, 0, 0, 0}),
                  std::invalid_argument);
  for (int trial = 0; trial < 20; ++trial) {
    const Dataset data = random_dataset(rng, 30, 2);
    const LabelVector labels = random_label_vector(rng, 30, 3);
    const double value = silhouette(data, labels).value;
    CHECK(value >= -1.0);
    CHECK(value <= 1.0);
  }
}

TEST_CASE("silhouette matches the naive per-point oracle") {
  Rng rng(27);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 8 + rng.below(40);
    const Dataset data = random_dataset(rng, n, 1 + rng.below(3));
    const LabelVector labels =
        random_label_vector(rng, n, 2 + static_cast<int>(rng.below(3)));
    CHECK(silhouette(data, labels).value ==
          doctest::Approx(oracles::silhouette(data, labels)).epsilon(1e-10));
  }
}

// --- Davies-Bouldin -------------------------------------------------------------

TEST_CASE("davies_bouldin of two tight far clusters is 0.02") {
  Dataset data;
  data.n_samples = 4;
  data.n_features = 1;
  data.values = {-1.0, 1.0, 99.0, 101.0};
  const LabelVector labels{0, 0, 1, 1};
  CHECK(davies_bouldin(data, labels).value ==
        doctest::Approx(0.02).epsilon(1e-12));
}

TEST_CASE("davies_bouldin decreases when within-cluster spread shrinks") {
  Dataset tight;
  tight.n_samples = 4;
  tight.n_features = 1;
  tight.values = {-0.5, 0.5, 99.5, 100.5};
  Dataset wide;
  wide.n_samples = 4;
  wide.n_features = 1;
  wide.values = {-1.0, 1.0, 99.0, 101.0};
  const LabelVector labels{0, 0, 1, 1};
  CHECK(davies_bouldin(tight, labels).value <
        davies_bouldin(wide, labels).value);
}

TEST_CASE("davies_bouldin flags coincident centroids as infinite") {
  Dataset data;
  data.n_samples = 4;
  data.n_features = 1;
  data.values = {-1.0, 1.0, -1.0, 1.0};
  const LabelVector labels{0, 0, 1, 1};
  const MetricValue result = davies_bouldin(data, labels);
  CHECK(std::isinf(result.value));
  CHECK(result.flagged);
}

TEST_CASE("davies_bouldin matches the naive oracle and is non-negative") {
  Rng rng(28);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 8 + rng.below(40);
    const Dataset data = random_dataset(rng, n, 1 + rng.below(3));
    const LabelVector labels =
        random_label_vector(rng, n, 2 + static_cast<int>(rng.below(3)));
    const double value = davies_bouldin(data, labels).value;
    CHECK(value >= 0.0);
    CHECK(value == doctest::Approx(oracles::davies_bouldin(data, labels)).epsilon(1e-10));
  }
}

// --- cross-metric invariants -----------------------------------------------------

TEST_CASE("external metrics are invariant under a common relabeling") {
  Rng rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const int k = 2 + static_cast<int>(rng.below(3));
    const LabelVector a = random_label_vector(rng, 40, k);
    const LabelVector b = random_label_vector(rng, 40, k);
    std::vector<int> mapping(k);
    std::iota(mapping.begin(), mapping.end(), 0);
    rng.shuffle(mapping);
    const Permutation sigma{mapping};
    const LabelVector ra = relabel(a, sigma);
    const LabelVector rb = relabel(b, sigma);
    CHECK(mcc(a, b).value == doctest::Approx(mcc(ra, rb).value));
    const PRF p1 = precision_recall_f1(a, b);
    const PRF p2 = precision_recall_f1(ra, rb);
    CHECK(p1.f1_macro == doctest::Approx(p2.f1_macro));
    CHECK(ami(a, b).value == doctest::Approx(ami(ra, rb).value));
  }
}

TEST_CASE("internal_sweep with a singleton k list returns that k") {
  const Dataset data = make_blobs(60, 2, 3, 0.5, 31);
  ClustererConfig clusterer;
  clusterer.kind = ClustererKind::kmeans;
  const InternalSweep sweep = internal_sweep(data, clusterer, {3}, 1);
  CHECK(sweep.best_silhouette_k == 3);
  CHECK(sweep.best_db_k == 3);
  CHECK(sweep.per_k.size() == 1);
}
