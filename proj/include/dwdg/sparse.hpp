// Thin wrapper around a compressed sparse matrix that is symmetric by
// contract; assembly code symmetrizes explicitly where products could leave
// roundoff-level asymmetry.
#pragma once

#include <Eigen/Sparse>
#include <stdexcept>

namespace dwdg {

using SparseMatrix = Eigen::SparseMatrix<double>;

class SparseSymMatrix {
 public:
  SparseSymMatrix() = default;
  explicit SparseSymMatrix(SparseMatrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols())
      throw std::invalid_argument("SparseSymMatrix: matrix must be square");
    m_.makeCompressed();
  }

  int dim() const { return static_cast<int>(m_.rows()); }
  std::ptrdiff_t nonzeros() const { return m_.nonZeros(); }
  const SparseMatrix& matrix() const { return m_; }

  double quadratic_form(const Eigen::VectorXd& v) const { return v.dot(m_ * v); }

  // max-norm asymmetry relative to the max entry
  double symmetry_defect() const {
    SparseMatrix d = SparseMatrix(m_.transpose()) - m_;
    double maxabs = 0.0;
    for (int k = 0; k < m_.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(m_, k); it; ++it)
        maxabs = std::max(maxabs, std::abs(it.value()));
    double defect = 0.0;
    for (int k = 0; k < d.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(d, k); it; ++it)
        defect = std::max(defect, std::abs(it.value()));
    return maxabs > 0.0 ? defect / maxabs : 0.0;
  }

 private:
  SparseMatrix m_;
};

inline SparseSymMatrix symmetrized(const SparseMatrix& m) {
  SparseMatrix s = 0.5 * (SparseMatrix(m.transpose()) + m);
  return SparseSymMatrix(std::move(s));
}

}  // namespace dwdg
