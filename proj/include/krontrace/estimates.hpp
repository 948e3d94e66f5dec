#pragma once
#include <Eigen/Dense>

#include "krontrace/besov.hpp"
#include "krontrace/generators.hpp"
#include "krontrace/potential.hpp"
#include "krontrace/report.hpp"
#include "krontrace/trace.hpp"

namespace kt {

// omega(B(x,2r))/omega(B(x,r)) over boundary centers, poles x0, and radii
// with r < rho(x0,x)/4; boundary-metric balls.
Report hm_doubling_report(const GeneratedDomain& dom,
                          const std::vector<int>& poles, int max_centers = 32,
                          SolverConfig cfg = {});

// Cap(B(x,2r) cap boundary, B(x,4r)) / Cap(B(x,r) cap boundary, B(x,4r));
// ambient graph balls, shared outer conductor.
Report cap_doubling_report(const GeneratedDomain& dom, int max_centers = 16,
                           SolverConfig cfg = {});

// Cap(B(x,r) cap boundary, B(x,2r)) * Psi(r) / m0(B(x,r)); the report's
// minimum is the capacity-density constant.
Report cap_density_report(const GeneratedDomain& dom, const ScaleFunction& psi,
                          int max_centers = 16, SolverConfig cfg = {});

// Theta(x,r) / green(x0, y) with a witness y in B(x,r) at depth near r/2;
// th must be built with sigma = omega_{x0}.
Report green_hm_report(const GeneratedDomain& dom, const ThetaField& th,
                       int x0, int max_centers = 16, SolverConfig cfg = {});

// R(x,y) = (chat/2) omega(B(x,d)) Theta(x,d) / (omega_x omega_y) over
// ordered pairs, plus the log-log fit of chat against distance.
Report jump_kernel_report(const TraceForm& tf, const ThetaField& th);

// Ghost-free: records kappa and fails the report if any exceeds
// 1e-10 * diag scale. Otherwise records kappa_x omega(bd) / (omega_x
// sum kappa) and its spread.
Report killing_report(const TraceForm& tf, const VertexMeasure& omega);

// Mean exit time from boundary-metric balls: solve L|_B u = omega|_B,
// value = u(x)/Theta(x,r).
Report exit_time_report(const TraceForm& tf, const ThetaField& th,
                        const std::vector<double>& radii,
                        int max_centers = 32);

// Generalized eigenpairs L phi = lambda D_omega phi, phi omega-orthonormal.
struct SpectralData {
  int b = 0;
  Eigen::VectorXd lambda;   // ascending
  Eigen::MatrixXd phi;      // columns
  std::vector<double> omega;
  double omega_total = 0;
};

SpectralData trace_spectrum(const TraceForm& tf, const VertexMeasure& omega);

// p(t,x,y) = sum_k exp(-lambda_k t) phi_k(x) phi_k(y)
Eigen::MatrixXd heat_kernel(const SpectralData& sd, double t);

// Kernel against the two-branch estimate over a time grid inside the
// resolvable window; fit.exponent = mean on-diagonal log-log slope.
Report hk_report(const TraceForm& tf, const ThetaField& th,
                 const std::vector<double>& radii, int max_centers = 12,
                 int t_points = 10);

}  // namespace kt
