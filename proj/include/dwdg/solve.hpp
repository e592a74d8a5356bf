// Symmetric sparse factorization with residual verification, and the
// standalone dual-wind Poisson solver built on it.
#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "dwdg/forms.hpp"

namespace dwdg {

struct FactorizationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// LDLT of the (quasi-definite) system matrix, reusable across right sides.
// Falls back to sparse LU when LDLT hits a zero pivot; every solve is
// residual-verified against the stored matrix with one refinement step.
class Factorization {
 public:
  explicit Factorization(SparseSymMatrix a) : a_(std::move(a)) {
    ldlt_ = std::make_unique<Eigen::SimplicialLDLT<SparseMatrix>>();
    ldlt_->compute(a_.matrix());
    bool ldlt_ok = ldlt_->info() == Eigen::Success;
    int bad_pivot = -1;
    if (ldlt_ok) {
      const auto d = ldlt_->vectorD();
      const double scale = d.cwiseAbs().maxCoeff();
      for (int i = 0; i < d.size(); ++i)
        if (std::abs(d[i]) <= 1e-14 * std::max(1.0, scale)) {
          ldlt_ok = false;
          bad_pivot = i;
          break;
        }
    }
    if (!ldlt_ok) {
      ldlt_.reset();
      lu_ = std::make_unique<Eigen::SparseLU<SparseMatrix>>();
      lu_->compute(a_.matrix());
      if (lu_->info() != Eigen::Success) {
        std::ostringstream msg;
        msg << "factor: breakdown";
        if (bad_pivot >= 0) msg << " at pivot " << bad_pivot;
        msg << " (dim " << a_.dim()
            << "); matrix is numerically singular for this penalty";
        throw FactorizationError(msg.str());
      }
    }
  }

  int dim() const { return a_.dim(); }
  const SparseSymMatrix& matrix() const { return a_; }

  Eigen::VectorXd solve(const Eigen::VectorXd& b) const {
    Eigen::VectorXd x = backsolve(b);
    const double bnorm = b.norm();
    double res = (a_.matrix() * x - b).norm();
    if (res > 1e-10 * std::max(1.0, bnorm)) {
      const Eigen::VectorXd r = b - a_.matrix() * x;
      x += backsolve(r);
      res = (a_.matrix() * x - b).norm();
      if (res > 1e-10 * std::max(1.0, bnorm)) {
        std::ostringstream msg;
        msg << "solve: residual " << res << " exceeds tolerance for |b| = " << bnorm;
        throw FactorizationError(msg.str());
      }
    }
    return x;
  }

 private:
  Eigen::VectorXd backsolve(const Eigen::VectorXd& b) const {
    if (ldlt_) return ldlt_->solve(b);
    return lu_->solve(b);
  }

  SparseSymMatrix a_;
  std::unique_ptr<Eigen::SimplicialLDLT<SparseMatrix>> ldlt_;
  std::unique_ptr<Eigen::SparseLU<SparseMatrix>> lu_;
};

inline Factorization factor(SparseSymMatrix a) { return Factorization(std::move(a)); }

// Everything fixed by (mesh, gamma): the lifting operators, the assembled
// bilinear form, and its factorization. Shared by Poisson and PDAS solves.
struct AssembledForms {
  LiftingSet lifting;
  PenaltyConfig penalty;
  SparseSymMatrix a;
  std::unique_ptr<Factorization> factorization;
};

inline AssembledForms assemble_forms(const Mesh& mesh, double gamma) {
  AssembledForms f;
  f.lifting = build_lifting(mesh, make_dofmap(mesh, SpaceKind::p1dg), /*bc_zero=*/true);
  f.penalty = PenaltyConfig{gamma};
  f.a = assemble_ah(mesh, f.lifting, f.penalty);
  f.factorization = std::make_unique<Factorization>(f.a);
  return f;
}

// y_h with a_h(y_h, v_h) = (f, v_h) for all v_h
inline DGFunction poisson_solve(const Mesh& mesh, const AssembledForms& forms,
                                const ScalarField& f, int degree = 7) {
  const DofMap map = make_dofmap(mesh, SpaceKind::p1dg);
  const Eigen::VectorXd b = load_vector(mesh, f, map, degree);
  return DGFunction(map, forms.factorization->solve(b));
}

inline DGFunction poisson_solve(const Mesh& mesh, const ScalarField& f, double gamma,
                                int degree = 7) {
  const AssembledForms forms = assemble_forms(mesh, gamma);
  return poisson_solve(mesh, forms, f, degree);
}

}  // namespace dwdg
