#include <doctest.h>

#include <cmath>

#include "mhg/errors.hpp"
#include "mhg/numerics.hpp"
#include "mhg/rng.hpp"

#include "oracles.hpp"

using namespace mhg;

namespace {

std::vector<std::vector<double>> random_rows(int n, int d, Rng& rng) {
  std::vector<std::vector<double>> rows(n, std::vector<double>(d));
  for (auto& row : rows) {
    for (double& x : row) x = rng.unit() * 4.0 - 2.0;
  }
  return rows;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) total += a[i] * b[i];
  return total;
}

double dist2(const std::vector<double>& a, const std::vector<double>& b) {
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    total += (a[i] - b[i]) * (a[i] - b[i]);
  }
  return total;
}

}  // namespace

TEST_CASE("pca components are orthonormal and deterministically signed") {
  Rng rng(11);
  auto rows = random_rows(40, 6, rng);
  PcaModel model = pca_fit(rows, 6);
  REQUIRE(model.dim == 6);
  for (int i = 0; i < model.dim; ++i) {
    for (int j = 0; j < model.dim; ++j) {
      double expected = i == j ? 1.0 : 0.0;
      CHECK(dot(model.components[i], model.components[j]) ==
            doctest::Approx(expected).epsilon(1e-8));
    }
  }
  for (const auto& component : model.components) {
    double best = 0.0;
    for (double x : component) {
      if (std::abs(x) > std::abs(best)) best = x;
    }
    CHECK(best > 0.0);
  }
}

TEST_CASE("full-dimensional pca preserves pairwise distances") {
  Rng rng(12);
  auto rows = random_rows(25, 5, rng);
  PcaModel model = pca_fit(rows, 5);
  REQUIRE(model.dim == 5);
  for (int a = 0; a < 10; ++a) {
    for (int b = a + 1; b < 10; ++b) {
      double raw = dist2(rows[a], rows[b]);
      double projected =
          dist2(pca_project(model, rows[a]), pca_project(model, rows[b]));
      CHECK(projected == doctest::Approx(raw).epsilon(1e-8));
    }
  }
}

TEST_CASE("pca agrees with a Jacobi eigendecomposition oracle") {
  Rng rng(13);
  auto rows = random_rows(30, 5, rng);
  PcaModel model = pca_fit(rows, 5);

  std::vector<double> mean(5, 0.0);
  for (const auto& row : rows) {
    for (int j = 0; j < 5; ++j) mean[j] += row[j];
  }
  for (double& m : mean) m /= rows.size();
  std::vector<std::vector<double>> cov(5, std::vector<double>(5, 0.0));
  for (const auto& row : rows) {
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 5; ++j) {
        cov[i][j] += (row[i] - mean[i]) * (row[j] - mean[j]);
      }
    }
  }
  for (auto& r : cov) {
    for (double& x : r) x /= (rows.size() - 1);
  }
  auto [eigenvalues, eigenvectors] = oracles::jacobi_eigen(cov);
  for (int k = 0; k < 5; ++k) {
    double same = 0.0, flipped = 0.0;
    for (int j = 0; j < 5; ++j) {
      same += std::abs(model.components[k][j] - eigenvectors[k][j]);
      flipped += std::abs(model.components[k][j] + eigenvectors[k][j]);
    }
    CHECK(std::min(same, flipped) < 1e-6);
    std::vector<double> cv(5, 0.0);
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 5; ++j) cv[i] += cov[i][j] * model.components[k][j];
    }
    CHECK(dot(cv, model.components[k]) ==
          doctest::Approx(eigenvalues[k]).epsilon(1e-8));
  }
}

TEST_CASE("pca separates two clusters along its first component") {
  Rng rng(14);
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 20; ++i) {
    std::vector<double> row(5);
    for (int j = 0; j < 5; ++j) row[j] = rng.unit() * 0.1;
    row[2] += (i < 10) ? 0.0 : 5.0;  // two clusters along axis 2
    rows.push_back(row);
  }
  PcaModel model = pca_fit(rows, 1);
  double mean_a = 0.0, mean_b = 0.0;
  for (int i = 0; i < 10; ++i) mean_a += pca_project(model, rows[i])[0];
  for (int i = 10; i < 20; ++i) mean_b += pca_project(model, rows[i])[0];
  mean_a /= 10.0;
  mean_b /= 10.0;
  CHECK(std::abs(mean_a - mean_b) >= 5.0 * 0.99);
}

TEST_CASE("rank-deficient data reduces the dimension with a warning flag") {
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 10; ++i) {
    double t = i;
    rows.push_back({t, 2.0 * t, -t});  // a 1-D line in 3-D space
  }
  PcaModel model = pca_fit(rows, 3);
  CHECK(model.dim == 1);
  CHECK(model.reduced);
}

TEST_CASE("noiseless gp interpolates its training targets") {
  Rng rng(15);
  auto inputs = random_rows(12, 3, rng);
  std::vector<double> targets;
  for (const auto& x : inputs) {
    targets.push_back(std::sin(x[0]) + 0.5 * x[1] - x[2] * x[2]);
  }
  GpHyper hyper;
  hyper.noise_variance = 0.0;  // the jitter ladder handles conditioning
  GpModel model = gp_fit(inputs, targets, hyper);
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    GpPrediction pred = gp_predict(model, inputs[i]);
    CHECK(std::abs(pred.mean - targets[i]) < 1e-6);
    CHECK(pred.variance >= 0.0);
  }
}

TEST_CASE("gp reverts to the prior far from all data") {
  Rng rng(16);
  auto inputs = random_rows(8, 2, rng);
  std::vector<double> targets(8, 1.0);
  GpHyper hyper;
  GpModel model = gp_fit(inputs, targets, hyper);
  GpPrediction pred = gp_predict(model, {500.0, -500.0});
  CHECK(std::abs(pred.variance - hyper.signal_variance) < 1e-6);
  CHECK(std::abs(pred.mean) < 1e-6);
}

TEST_CASE("gp predictions match a dense-solve oracle") {
  Rng rng(17);
  auto inputs = random_rows(15, 2, rng);
  std::vector<double> targets;
  for (const auto& x : inputs) targets.push_back(std::cos(x[0] * 2.0) + x[1]);
  GpHyper hyper;
  hyper.length_scale = 0.8;
  hyper.signal_variance = 1.3;
  hyper.noise_variance = 1e-3;
  GpModel model = gp_fit(inputs, targets, hyper);

  auto kernel = [&](const std::vector<double>& a,
                    const std::vector<double>& b) {
    return hyper.signal_variance *
           std::exp(-dist2(a, b) /
                    (2.0 * hyper.length_scale * hyper.length_scale));
  };
  std::vector<std::vector<double>> k(15, std::vector<double>(15));
  for (int i = 0; i < 15; ++i) {
    for (int j = 0; j < 15; ++j) k[i][j] = kernel(inputs[i], inputs[j]);
    k[i][i] += hyper.noise_variance;
  }
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> x = {rng.unit() * 4 - 2, rng.unit() * 4 - 2};
    std::vector<double> k_star(15);
    for (int i = 0; i < 15; ++i) k_star[i] = kernel(inputs[i], x);
    std::vector<double> alpha = oracles::dense_solve(k, targets);
    double mean = dot(k_star, alpha);
    std::vector<double> v = oracles::dense_solve(k, k_star);
    double variance = hyper.signal_variance - dot(k_star, v);
    GpPrediction pred = gp_predict(model, x);
    CHECK(pred.mean == doctest::Approx(mean).epsilon(1e-7));
    CHECK(pred.variance == doctest::Approx(variance).epsilon(1e-6));
  }
}

TEST_CASE("gp regression fits a 1-D sine accurately") {
  std::vector<std::vector<double>> inputs;
  std::vector<double> targets;
  for (int i = 0; i < 20; ++i) {
    double x = i * (6.28 / 19.0);
    inputs.push_back({x});
    targets.push_back(std::sin(x));
  }
  GpHyper hyper;
  hyper.noise_variance = 1e-6;
  GpModel model = gp_fit(inputs, targets, hyper);
  double rmse = 0.0;
  int count = 0;
  for (double x = 0.1; x < 6.2; x += 0.13) {
    double err = gp_predict(model, {x}).mean - std::sin(x);
    rmse += err * err;
    ++count;
  }
  rmse = std::sqrt(rmse / count);
  CHECK(rmse < 0.1);
}

TEST_CASE("expected improvement closed form") {
  CHECK(expected_improvement(1.0, 0.0, 1.0) == 0.0);
  CHECK(expected_improvement(0.5, 0.0, 1.0) == 0.0);
  CHECK(expected_improvement(2.0, 0.0, 1.0) == doctest::Approx(1.0));
  // mean == best, sigma = 1: EI = phi(0) = 1/sqrt(2*pi).
  CHECK(expected_improvement(1.0, 1.0, 1.0) ==
        doctest::Approx(0.3989422804).epsilon(1e-9));
  double previous = -1.0;
  for (double mean = -2.0; mean <= 2.0; mean += 0.25) {
    double ei = expected_improvement(mean, 0.5, 0.0);
    CHECK(ei >= previous);  // monotone in the mean
    previous = ei;
  }
  // Continuous at sigma -> 0.
  CHECK(std::abs(expected_improvement(0.3, 1e-24, 1.0) -
                 expected_improvement(0.3, 0.0, 1.0)) < 1e-6);
  CHECK(std::abs(expected_improvement(1.7, 1e-24, 1.0) -
                 expected_improvement(1.7, 0.0, 1.0)) < 1e-6);
}

TEST_CASE("gp_fit failure and recovery paths") {
  CHECK_THROWS_AS(gp_fit({}, {}, GpHyper{}), Error);
  // Duplicate rows with zero noise still factor via jitter.
  std::vector<std::vector<double>> inputs = {{1.0, 2.0}, {1.0, 2.0}};
  std::vector<double> targets = {0.5, 0.5};
  GpHyper hyper;
  hyper.noise_variance = 0.0;
  GpModel model = gp_fit(inputs, targets, hyper);
  CHECK(std::abs(gp_predict(model, {1.0, 2.0}).mean - 0.5) < 1e-5);
}
