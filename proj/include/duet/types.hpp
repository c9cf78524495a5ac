#pragma once

#include <Eigen/Dense>
#include <complex>
#include <initializer_list>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace duet {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr Complex iu{0.0, 1.0};

// Ordered tensor-factor dimensions. Factor order is fixed project-wide:
// qubit first (basis index 0 = upper level, 1 = lower level), then ensemble
// mode 1, then ensemble mode 2 when present, cavity always last when present.
// Flat indices are row-major: the first factor varies slowest.
struct HilbertSpace {
  std::vector<int> dims;

  HilbertSpace() = default;
  HilbertSpace(std::initializer_list<int> d) : dims(d) { validate(); }
  explicit HilbertSpace(std::vector<int> d) : dims(std::move(d)) { validate(); }

  void validate() const {
    if (dims.empty()) throw std::invalid_argument("HilbertSpace: no factors");
    for (int d : dims)
      if (d < 1) throw std::invalid_argument("HilbertSpace: factor dim < 1");
  }

  int factors() const { return static_cast<int>(dims.size()); }

  int dim() const {
    return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<>());
  }

  int index(const std::vector<int>& idx) const {
    if (idx.size() != dims.size())
      throw std::invalid_argument("HilbertSpace::index: rank mismatch");
    int flat = 0;
    for (size_t k = 0; k < dims.size(); ++k) {
      if (idx[k] < 0 || idx[k] >= dims[k])
        throw std::out_of_range("HilbertSpace::index: factor index out of range");
      flat = flat * dims[k] + idx[k];
    }
    return flat;
  }

  int index(std::initializer_list<int> idx) const {
    return index(std::vector<int>(idx));
  }

  std::vector<int> unravel(int flat) const {
    std::vector<int> idx(dims.size());
    for (int k = factors() - 1; k >= 0; --k) {
      idx[k] = flat % dims[k];
      flat /= dims[k];
    }
    return idx;
  }

  bool operator==(const HilbertSpace& o) const { return dims == o.dims; }
};

inline double hermiticity_defect(const Matrix& m) {
  double scale = m.norm();
  if (scale == 0.0) return 0.0;
  return (m - m.adjoint()).norm() / scale;
}

inline void require_hermitian(const Matrix& m, const char* who,
                              double tol = 1e-12) {
  if (m.rows() != m.cols())
    throw std::invalid_argument(std::string(who) + ": not square");
  if (hermiticity_defect(m) > tol)
    throw std::invalid_argument(std::string(who) + ": not Hermitian");
}

// Norm-1 amplitude vector. Construction rejects vectors off the unit sphere
// by more than 1e-9; callers that build states incrementally work on raw
// vectors and wrap at the boundary.
class StateVector {
 public:
  explicit StateVector(Vector v, double tol = 1e-9) : v_(std::move(v)) {
    double n = v_.norm();
    if (std::abs(n - 1.0) > tol)
      throw std::invalid_argument("StateVector: norm " + std::to_string(n) +
                                  " outside unit tolerance");
  }
  const Vector& vec() const { return v_; }
  int dim() const { return static_cast<int>(v_.size()); }

 private:
  Vector v_;
};

// Density operator. Hermitian within 1e-12 (relative Frobenius), unit trace
// within 1e-9, eigenvalues above -1e-9.
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix m) : m_(std::move(m)) {
    require_hermitian(m_, "DensityMatrix");
    double tr = m_.trace().real();
    if (std::abs(tr - 1.0) > 1e-9)
      throw std::invalid_argument("DensityMatrix: trace " + std::to_string(tr));
    Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9)
      throw std::invalid_argument("DensityMatrix: negative eigenvalue " +
                                  std::to_string(es.eigenvalues().minCoeff()));
  }
  const Matrix& mat() const { return m_; }

 private:
  Matrix m_;
};

}  // namespace duet
