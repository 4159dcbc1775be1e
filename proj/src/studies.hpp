#pragma once

#include <span>
#include <string>
#include <vector>

#include "checkerboard/continuum.hpp"

namespace checkerboard {

// The named refinement studies behind the converge command.
//   transport_lattice: causal evolution from Gaussian-modulated data, weighted
//                      chiral fields against the coupled transport stencil
//   zzb_lattice:       same runs, unweighted differences against their stencil
//   transport_free:    manufactured translating profiles at zero rates
//   zzb_free:          manufactured translating forward/backward pairs
//   exact:             constrained zero-rate evolution; the chiral fields
//                      collapse to exact zeros and the ladder carries no slope
enum class StudyKind { transport_lattice, zzb_lattice, transport_free, zzb_free, exact };

StudyKind parse_study(const std::string& name);  // throws on unknown names
std::string study_name(StudyKind kind);

struct StudyResult {
  std::vector<ResidualEntry> ladder;
  OrderFit fit;
};

// Runs the study over the step-size ladder (>= 3 sizes, defaults to
// {0.1, 0.05, 0.025, 0.0125}).
StudyResult run_study(StudyKind kind, std::span<const double> ladder = {});

}  // namespace checkerboard
