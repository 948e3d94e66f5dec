#pragma once
#include <Eigen/Dense>

#include "krontrace/generators.hpp"
#include "krontrace/network.hpp"
#include "krontrace/report.hpp"
#include "krontrace/trace.hpp"

namespace kt {

// Psi(r): power law, or a table interpolated log-log (tests use tables to
// pin exact values at specific radii).
class ScaleFunction {
 public:
  static ScaleFunction power(double beta);
  static ScaleFunction tabulated(std::vector<double> r, std::vector<double> v);
  double operator()(double r) const;
  double exponent_hint() const { return beta_; }

 private:
  ScaleFunction() = default;
  bool is_power_ = true;
  double beta_ = 1.0;
  std::vector<double> r_, v_;  // ascending radii, positive values
};

// Theta(x, r) = Psi(r) sigma(B(x,r)) / m0(B(x,r)), closed balls: sigma over
// the boundary metric, m0 over vertex-to-boundary distances. Sorted
// distance plus prefix mass tables make each query a binary search.
// Holds a reference to the geometry; keep it alive.
class ThetaField {
 public:
  ThetaField(const BoundaryGeometry& g, ScaleFunction psi,
             const VertexMeasure& sigma, const std::vector<double>& m0_vertex);

  int b() const { return b_; }
  double psi(double r) const { return psi_(r); }
  double sigma_ball(int bpos, double r) const;
  double m0_ball(int bpos, double r) const;
  double theta(int bpos, double r) const;
  double sigma_total() const { return sigma_total_; }
  const std::vector<double>& sigma() const { return sigma_; }
  const BoundaryGeometry& geometry() const { return *geom_; }

 private:
  const BoundaryGeometry* geom_;
  ScaleFunction psi_;
  int b_;
  std::vector<double> sigma_;
  double sigma_total_;
  // per boundary position: distances ascending, prefix[k] = mass within
  // the k smallest distances
  std::vector<std::vector<double>> bdist_, bpre_;
  std::vector<std::vector<double>> vdist_, vpre_;
};

// Ordered-pair weights w(i,j) = sigma_i sigma_j /
// (sigma(B(x_i,d)) Theta(x_i, d)), d = rho(x_i, x_j). Row i is centered
// at x_i, so w is not symmetric.
struct BesovKernel {
  int b = 0;
  Eigen::MatrixXd w;
};

BesovKernel besov_kernel(const ThetaField& th);

// sum over ordered pairs w(i,j) (u_i - u_j)^2
double besov_seminorm(const BesovKernel& k, const std::vector<double>& u);

// same quantity by direct linear scans, no tables or kernel matrix
double besov_seminorm_reference(const BoundaryGeometry& g,
                                const ScaleFunction& psi,
                                const std::vector<double>& sigma,
                                const std::vector<double>& m0_vertex,
                                const std::vector<double>& u);

// sigma(B(x,2r)) / sigma(B(x,r)) across centers and admissible radii
Report vd_report(const GeneratedDomain& dom, const VertexMeasure& sigma,
                 int max_centers = 64);

// Theta(x, r) sampled across centers and radii; fit = pooled log-log
// slope, note records the worst-pair lower-scaling constant
Report theta_scaling_report(const GeneratedDomain& dom, const ThetaField& th,
                            int max_centers = 64);

// trace energy / seminorm, with the L2(sigma) term added to the
// denominator when the trace kills mass
Report comparability_report(const TraceForm& tf, const BesovKernel& kernel,
                            const std::vector<double>& sigma,
                            const std::vector<std::vector<double>>& fields);

// L2(sigma) norm of the boundary restriction over energy + L2(m0) norm
Report l2_restriction_report(const ResistanceNetwork& net,
                             const std::vector<double>& sigma,
                             const std::vector<std::vector<double>>& fields);

}  // namespace kt
