#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace hamlink {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using Complex = std::complex<double>;

// Compensated (Kahan) accumulator for long quadrature sums.
class KahanSum {
 public:
  void add(double x) {
    double y = x - comp_;
    double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Global worker count for data-parallel loops. Defaults to 1.
int worker_threads();
void set_worker_threads(int n);

// Runs fn(i) for i in [0, n). Work items must write only to their own
// slots; all reductions happen serially afterwards, so results do not
// depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

std::vector<double> logspace(double lo, double hi, int n);
std::vector<double> linspace(double lo, double hi, int n);

Vec gaussian_vector(std::mt19937_64& rng, int dim);
// Uniform direction on the unit sphere.
Vec unit_direction(std::mt19937_64& rng, int dim);

}  // namespace hamlink
