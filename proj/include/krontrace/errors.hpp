#pragma once
#include <stdexcept>
#include <string>

namespace kt {

struct Error : std::runtime_error {
  explicit Error(const std::string& w) : std::runtime_error(w) {}
};

#define KT_DEFINE_ERROR(Name)                                       \
  struct Name : Error {                                             \
    explicit Name(const std::string& w) : Error(#Name ": " + w) {}  \
  }

// network
KT_DEFINE_ERROR(DisconnectedGraph);
KT_DEFINE_ERROR(NonpositiveConductance);
KT_DEFINE_ERROR(DuplicateEdge);
KT_DEFINE_ERROR(EmptyInterior);
KT_DEFINE_ERROR(DimensionMismatch);
KT_DEFINE_ERROR(InvalidNetwork);

// generators
KT_DEFINE_ERROR(LevelOutOfRange);
KT_DEFINE_ERROR(BadDimensions);

// potential
KT_DEFINE_ERROR(SolverFailure);
KT_DEFINE_ERROR(NotInterior);
KT_DEFINE_ERROR(BadSet);
KT_DEFINE_ERROR(SingularRestriction);
KT_DEFINE_ERROR(ZeroCapacity);

// trace
KT_DEFINE_ERROR(NegativeOffDiagonal);
KT_DEFINE_ERROR(ZeroMass);

// besov
KT_DEFINE_ERROR(EmptyBall);
KT_DEFINE_ERROR(InsufficientScales);
KT_DEFINE_ERROR(DegenerateSample);

// whitney
KT_DEFINE_ERROR(ResolutionTooCoarse);
KT_DEFINE_ERROR(UncoveredVertex);
KT_DEFINE_ERROR(EmptyPatch);

// estimates
KT_DEFINE_ERROR(NoAdmissibleScales);
KT_DEFINE_ERROR(NoWitness);
KT_DEFINE_ERROR(SingularBallSystem);
KT_DEFINE_ERROR(EigenFailure);
KT_DEFINE_ERROR(WindowEmpty);
KT_DEFINE_ERROR(DegenerateFit);

// io / cli
KT_DEFINE_ERROR(DataError);
KT_DEFINE_ERROR(UsageError);

#undef KT_DEFINE_ERROR

}  // namespace kt
