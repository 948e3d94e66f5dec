#pragma once
#include "krontrace/besov.hpp"
#include "krontrace/generators.hpp"
#include "krontrace/network.hpp"
#include "krontrace/report.hpp"

namespace kt {

// Interior cover adapted to the boundary distance: center x_i gets radius
// r_i = eps/(1+eps) d_D(x_i). Greedy admission in descending d_D order with
// pairwise disjoint balls; every interior vertex above the floor then lies
// within 2(1+eps) r_i of some admitted center.
struct WhitneyCover {
  double epsilon = 0.125;
  double floor_dD = 0;                   // 4 edge lengths
  std::vector<int> centers;              // vertex indices, admission order
  std::vector<double> radii;
  std::vector<std::vector<int>> patches; // boundary positions per center
  // graph distance from each center to every vertex (row per center)
  std::vector<std::vector<double>> center_dist;
};

// eps <= 1/8 keeps the tent supports inside B(x_i, d_D(x_i)/2)
WhitneyCover build_cover(const GeneratedDomain& dom, double eps = 0.125);

struct CoverStats {
  int center_count = 0;
  double min_radius = 0, max_radius = 0;
  double lambda = 0;
  int max_overlap = 0;            // lambda-dilated balls meeting one of them
  double neighbor_ratio = 0;      // max r_i/r_j over lambda-overlapping pairs
  double neighbor_ratio_bound = 0;  // (1+e+e*lambda)/(1+e-e*lambda)
  int uncovered_above_floor = 0;  // must be 0
};

// lambda must stay below (1+eps)/eps for the ratio bound to make sense
CoverStats cover_stats(const GeneratedDomain& dom, const WhitneyCover& cov,
                       double lambda = 2.0);
Report cover_stats_report(const GeneratedDomain& dom, const WhitneyCover& cov,
                          double lambda = 2.0);

// Tents clamp(2 - rho(v,x_i) / (2(1+eps) r_i), 0, 1), equal to 1 on the
// dilated ball, normalized where the raw sum is positive.
struct PartitionOfUnity {
  // per center: (vertex, normalized value), vertices ascending
  std::vector<std::vector<std::pair<int, double>>> psi;
  std::vector<double> coverage;    // per vertex, raw tent sum
  std::vector<double> hat_energy;  // per center, energy of the raw tent
};

// throws UncoveredVertex if the raw sum vanishes above the floor
PartitionOfUnity partition_of_unity(const GeneratedDomain& dom,
                                    const WhitneyCover& cov);

// Boundary field to full vertex function: boundary keeps u, covered interior
// blends sigma-averages of u over the patches, uncovered interior copies the
// nearest center's average.
std::vector<double> extend(const GeneratedDomain& dom, const WhitneyCover& cov,
                           const PartitionOfUnity& pou,
                           const std::vector<double>& u,
                           const std::vector<double>& sigma);

// ambient energy of the extension / seminorm, constants skipped
Report extension_report(const GeneratedDomain& dom, const WhitneyCover& cov,
                        const PartitionOfUnity& pou, const BesovKernel& kernel,
                        const std::vector<double>& sigma,
                        const std::vector<std::vector<double>>& fields);

// seminorm of the boundary restriction / ambient energy
Report restriction_report(const ResistanceNetwork& net,
                          const BesovKernel& kernel,
                          const std::vector<std::vector<double>>& fields);

}  // namespace kt
