#pragma once
#include <cstdint>
#include <vector>

#include "krontrace/generators.hpp"
#include "krontrace/potential.hpp"

namespace kt {

// Boundary test fields: iid Gaussians, boundary-ball indicators, and smooth
// bumps, cycled in that order. Deterministic for a given seed.
std::vector<std::vector<double>> boundary_fields(const GeneratedDomain& dom,
                                                 int count,
                                                 std::uint64_t seed);

// Full-domain test fields: harmonic extensions of boundary fields, interior
// bumps vanishing on the boundary, and iid fields.
std::vector<std::vector<double>> interior_fields(const GeneratedDomain& dom,
                                                 int count, std::uint64_t seed,
                                                 SolverConfig cfg = {});

}  // namespace kt
