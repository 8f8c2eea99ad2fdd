#pragma once

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include "tec/core.hpp"
#include "tec/fem.hpp"

namespace tec {

// SPD solve: direct Cholesky up to 1e5 unknowns, diagonally preconditioned
// CG beyond that.
inline Vector solve_spd(const SpMat& A, const Vector& b, double tol = 1e-12,
                        double* residual_out = nullptr) {
  Vector x;
  if (A.rows() <= 100000) {
    Eigen::SimplicialLDLT<SpMat> solver;
    solver.compute(A);
    if (solver.info() != Eigen::Success)
      throw AssemblyError("sparse factorization failed (singular system?)");
    x = solver.solve(b);
  } else {
    Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper,
                             Eigen::DiagonalPreconditioner<double>>
        cg;
    cg.setTolerance(tol);
    cg.setMaxIterations(20 * A.rows());
    cg.compute(A);
    x = cg.solve(b);
    if (cg.info() != Eigen::Success) throw AssemblyError("conjugate gradient did not converge");
  }
  if (residual_out) {
    const double bn = b.norm();
    *residual_out = bn > 0.0 ? (A * x - b).norm() / bn : (A * x - b).norm();
  }
  return x;
}

}  // namespace tec
