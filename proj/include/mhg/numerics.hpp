#ifndef MHG_NUMERICS_HPP
#define MHG_NUMERICS_HPP

#include <vector>

namespace mhg {

// PCA by eigendecomposition of the sample covariance. Components are
// orthonormal rows, ordered by descending eigenvalue, with the
// largest-magnitude entry of each made positive.
struct PcaModel {
  int input_dim = 0;
  int dim = 0;       // effective projected dimension
  bool reduced = false;  // true when the requested dim exceeded numeric rank
  std::vector<double> mean;
  std::vector<std::vector<double>> components;  // dim rows of input_dim
};

PcaModel pca_fit(const std::vector<std::vector<double>>& rows, int dim);
std::vector<double> pca_project(const PcaModel& model,
                                const std::vector<double>& x);

struct GpHyper {
  double length_scale = 1.0;
  double signal_variance = 1.0;
  double noise_variance = 1e-4;
};

// Exact GP regression with an RBF kernel via Cholesky factorization.
struct GpModel {
  GpHyper hyper;
  std::vector<std::vector<double>> inputs;
  std::vector<double> alpha;     // (K + sigma_n^2 I)^-1 y
  std::vector<double> chol;      // row-major lower factor L
  int size = 0;
};

// Throws NotPositiveDefinite when the factorization fails even with jitter
// up to 1e-6.
GpModel gp_fit(const std::vector<std::vector<double>>& inputs,
               const std::vector<double>& targets, const GpHyper& hyper);

struct GpPrediction {
  double mean = 0.0;
  double variance = 0.0;  // latent-function variance, clamped at 0
};

GpPrediction gp_predict(const GpModel& model, const std::vector<double>& x);

// (mean-best)*Phi(u) + sigma*phi(u) with u = (mean-best)/sigma;
// max(mean-best, 0) when sigma == 0.
double expected_improvement(double mean, double variance, double best_so_far);

}  // namespace mhg

#endif  // MHG_NUMERICS_HPP
