#pragma once

#include <duet/types.hpp>

namespace duet {

inline Matrix identity(int d) { return Matrix::Identity(d, d); }

// Truncated lowering operator, entries (n-1, n) = sqrt(n).
inline Matrix annihilation(int d) {
  Matrix a = Matrix::Zero(d, d);
  for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

inline Matrix number_op(int d) {
  Matrix n = Matrix::Zero(d, d);
  for (int k = 0; k < d; ++k) n(k, k) = double(k);
  return n;
}

inline Matrix tensor(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Matrix tensor(const std::vector<Matrix>& ms) {
  if (ms.empty()) throw std::invalid_argument("tensor: empty factor list");
  Matrix out = ms.front();
  for (size_t k = 1; k < ms.size(); ++k) out = tensor(out, ms[k]);
  return out;
}

// Places op on the given factor, identity elsewhere.
inline Matrix embed(const Matrix& op, const HilbertSpace& space, int factor) {
  if (factor < 0 || factor >= space.factors())
    throw std::invalid_argument("embed: factor out of range");
  if (op.rows() != space.dims[factor] || op.cols() != space.dims[factor])
    throw std::invalid_argument("embed: operator does not fit factor");
  std::vector<Matrix> ms;
  for (int k = 0; k < space.factors(); ++k)
    ms.push_back(k == factor ? op : identity(space.dims[k]));
  return tensor(ms);
}

inline Vector basis_state(const HilbertSpace& space, std::vector<int> idx) {
  Vector v = Vector::Zero(space.dim());
  v(space.index(idx)) = 1.0;
  return v;
}

inline Vector basis_state(const HilbertSpace& space,
                          std::initializer_list<int> idx) {
  return basis_state(space, std::vector<int>(idx));
}

// exp(-i H t) through the spectral decomposition. H must be Hermitian; the
// result is unitary to the solver's accuracy, which the tests pin at 1e-10.
inline Matrix propagator_exact(const Matrix& h, double t) {
  require_hermitian(h, "propagator_exact");
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  Vector phases(h.rows());
  for (int k = 0; k < h.rows(); ++k)
    phases(k) = std::exp(Complex(0.0, -es.eigenvalues()(k) * t));
  return es.eigenvectors() * phases.asDiagonal() *
         es.eigenvectors().adjoint();
}

inline Complex expectation(const Matrix& op, const Vector& psi) {
  return psi.dot(op * psi);  // Eigen dot conjugates the left argument
}

inline Complex expectation(const Matrix& op, const Matrix& rho) {
  return (op * rho).trace();
}

// Reduced density matrix over the kept factors, in their original order.
inline Matrix partial_trace(const Matrix& rho, const HilbertSpace& space,
                            const std::vector<int>& keep) {
  if (rho.rows() != space.dim() || rho.cols() != space.dim())
    throw std::invalid_argument("partial_trace: operator does not fit space");
  std::vector<bool> kept(space.factors(), false);
  for (int f : keep) {
    if (f < 0 || f >= space.factors())
      throw std::invalid_argument("partial_trace: factor out of range");
    if (kept[f]) throw std::invalid_argument("partial_trace: repeated factor");
    kept[f] = true;
  }
  std::vector<int> keep_sorted;
  for (int f = 0; f < space.factors(); ++f)
    if (kept[f]) keep_sorted.push_back(f);

  int dk = 1;
  for (int f : keep_sorted) dk *= space.dims[f];
  Matrix out = Matrix::Zero(dk, dk);

  const int dim = space.dim();
  std::vector<int> row(space.factors()), col(space.factors());
  for (int i = 0; i < dim; ++i) {
    row = space.unravel(i);
    for (int j = 0; j < dim; ++j) {
      col = space.unravel(j);
      bool diag_elsewhere = true;
      for (int f = 0; f < space.factors(); ++f)
        if (!kept[f] && row[f] != col[f]) { diag_elsewhere = false; break; }
      if (!diag_elsewhere) continue;
      int ik = 0, jk = 0;
      for (int f : keep_sorted) {
        ik = ik * space.dims[f] + row[f];
        jk = jk * space.dims[f] + col[f];
      }
      out(ik, jk) += rho(i, j);
    }
  }
  return out;
}

}  // namespace duet
