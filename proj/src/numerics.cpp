#include "mhg/numerics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "mhg/errors.hpp"

namespace mhg {

namespace {

Eigen::MatrixXd to_matrix(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return Eigen::MatrixXd(0, 0);
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size()) {
      throw Error("ragged input matrix");
    }
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

double squared_distance(const std::vector<double>& a,
                        const std::vector<double>& b) {
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    total += d * d;
  }
  return total;
}

double rbf(const GpHyper& hyper, double sq_dist) {
  return hyper.signal_variance *
         std::exp(-sq_dist / (2.0 * hyper.length_scale * hyper.length_scale));
}

}  // namespace

PcaModel pca_fit(const std::vector<std::vector<double>>& rows, int dim) {
  if (rows.empty()) throw Error("pca_fit needs at least one row");
  const int cols = static_cast<int>(rows.front().size());
  if (dim < 1 || dim > std::min<int>(static_cast<int>(rows.size()), cols)) {
    throw Error("pca dimension out of range");
  }
  Eigen::MatrixXd x = to_matrix(rows);
  Eigen::RowVectorXd mean = x.colwise().mean();
  Eigen::MatrixXd centered = x.rowwise() - mean;
  double denom = std::max<double>(1.0, static_cast<double>(rows.size() - 1));
  Eigen::MatrixXd cov = centered.transpose() * centered / denom;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw Error("eigendecomposition failed");
  Eigen::VectorXd eigenvalues = solver.eigenvalues();   // ascending
  Eigen::MatrixXd eigenvectors = solver.eigenvectors();

  double max_eigenvalue = eigenvalues.cwiseAbs().maxCoeff();
  double tolerance = std::max(1e-12, 1e-10 * max_eigenvalue);

  PcaModel model;
  model.input_dim = cols;
  model.mean.assign(mean.data(), mean.data() + cols);
  for (int k = cols - 1; k >= 0 && static_cast<int>(model.components.size()) <
                                       dim; --k) {
    if (eigenvalues(k) <= tolerance) break;  // numeric rank exhausted
    Eigen::VectorXd component = eigenvectors.col(k);
    // Deterministic sign: the largest-magnitude entry is positive.
    int arg = 0;
    for (int j = 1; j < cols; ++j) {
      if (std::abs(component(j)) > std::abs(component(arg))) arg = j;
    }
    if (component(arg) < 0) component = -component;
    model.components.emplace_back(component.data(), component.data() + cols);
  }
  model.dim = static_cast<int>(model.components.size());
  model.reduced = model.dim < dim;
  if (model.dim == 0) {
    // Degenerate data; keep one zero component so projections are defined.
    model.components.emplace_back(cols, 0.0);
    model.dim = 1;
    model.reduced = true;
  }
  return model;
}

std::vector<double> pca_project(const PcaModel& model,
                                const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != model.input_dim) {
    throw Error("pca_project input dimension mismatch");
  }
  std::vector<double> out(model.dim, 0.0);
  for (int k = 0; k < model.dim; ++k) {
    double dot = 0.0;
    for (int j = 0; j < model.input_dim; ++j) {
      dot += (x[j] - model.mean[j]) * model.components[k][j];
    }
    out[k] = dot;
  }
  return out;
}

GpModel gp_fit(const std::vector<std::vector<double>>& inputs,
               const std::vector<double>& targets, const GpHyper& hyper) {
  const int n = static_cast<int>(inputs.size());
  if (n == 0 || targets.size() != inputs.size()) {
    throw Error("gp_fit needs matching non-empty inputs and targets");
  }
  Eigen::MatrixXd kernel(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double k = rbf(hyper, squared_distance(inputs[i], inputs[j]));
      kernel(i, j) = k;
      kernel(j, i) = k;
    }
    kernel(i, i) += hyper.noise_variance;
  }

  Eigen::LLT<Eigen::MatrixXd> llt;
  double jitter = 0.0;
  for (double attempt = 1e-12; ; attempt *= 10.0) {
    llt.compute(kernel + jitter * Eigen::MatrixXd::Identity(n, n));
    if (llt.info() == Eigen::Success) break;
    if (attempt > 1e-6) {
      throw NotPositiveDefinite(
          "kernel matrix is not positive definite even with 1e-6 jitter");
    }
    jitter = attempt;
  }

  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) y(i) = targets[i];
  Eigen::VectorXd alpha = llt.solve(y);
  Eigen::MatrixXd lower = llt.matrixL();

  GpModel model;
  model.hyper = hyper;
  model.inputs = inputs;
  model.size = n;
  model.alpha.assign(alpha.data(), alpha.data() + n);
  model.chol.resize(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      model.chol[static_cast<std::size_t>(i) * n + j] = lower(i, j);
    }
  }
  return model;
}

GpPrediction gp_predict(const GpModel& model, const std::vector<double>& x) {
  const int n = model.size;
  std::vector<double> k_star(n);
  for (int i = 0; i < n; ++i) {
    k_star[i] = rbf(model.hyper, squared_distance(model.inputs[i], x));
  }
  GpPrediction pred;
  for (int i = 0; i < n; ++i) pred.mean += k_star[i] * model.alpha[i];
  // v = L^-1 k*, variance = s^2 - v.v
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) {
    double sum = k_star[i];
    for (int j = 0; j < i; ++j) {
      sum -= model.chol[static_cast<std::size_t>(i) * n + j] * v[j];
    }
    v[i] = sum / model.chol[static_cast<std::size_t>(i) * n + i];
  }
  double reduction = 0.0;
  for (int i = 0; i < n; ++i) reduction += v[i] * v[i];
  pred.variance = model.hyper.signal_variance - reduction;
  if (pred.variance < 0.0) {
    if (pred.variance < -1e-9) {
      // Larger negative values indicate a numerical problem worth surfacing.
      throw Error("gp_predict produced variance " +
                  std::to_string(pred.variance));
    }
    pred.variance = 0.0;
  }
  return pred;
}

double expected_improvement(double mean, double variance, double best_so_far) {
  double sigma = variance > 0.0 ? std::sqrt(variance) : 0.0;
  double delta = mean - best_so_far;
  if (sigma == 0.0) return delta > 0.0 ? delta : 0.0;
  double u = delta / sigma;
  double cdf = 0.5 * std::erfc(-u / std::sqrt(2.0));
  double pdf = std::exp(-0.5 * u * u) / std::sqrt(2.0 * M_PI);
  double ei = delta * cdf + sigma * pdf;
  return ei > 0.0 ? ei : 0.0;
}

}  // namespace mhg
