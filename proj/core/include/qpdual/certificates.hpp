#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qpdual/qp_model.hpp"

namespace qpdual {

enum class CertificateKind {
  hqp_strong_convexifiable,
  uniform_strong_convexifiable,
  regularity_RA,
  thm31_cone,
  thm41_cone,
  none_applicable,
};

enum class CertificateVerdict { holds, fails, undecided };

struct Certificate {
  CertificateKind kind = CertificateKind::none_applicable;
  CertificateVerdict verdict = CertificateVerdict::undecided;
  std::vector<std::string> evidence;
  Vector witness;  // eigenvector / cone direction when relevant
};

// Proposition: (HQP) is strongly convexifiable iff B is strictly
// copositive (sufficient direction certified here).
Certificate check_hqp(const HQPInstance& h);

// Uniform QPs: the scalar strict-copositivity premise plus one of the
// three eigenvector conditions.
Certificate check_uniform(const UniformQPInstance& p);

// (RA): every nonnegative solution of the equality system has its
// binary-indexed coordinates in [0, 1].
Certificate check_RA(const MixedIntegerQP& p);

// {d >= 0, a_j^T d = 0, d^T A d <= 0, d_i = 0 (i < s)} = {0}.
Certificate check_thm31_cone(const MixedIntegerQP& p);

// Linear-only cone condition; equivalent to compactness of the feasible
// set of the robust problem.
Certificate check_thm41_cone(const RobustMIQP& p);
inline Certificate check_compactness_condition(const RobustMIQP& p) {
  return check_thm41_cone(p);
}

enum class ConvexifiabilityDiagnosis {
  consistent_with_convexifiable,
  counterexample_found,
  inconclusive,
};

struct ConvexifiabilitySample {
  ConvexifiabilityDiagnosis diagnosis = ConvexifiabilityDiagnosis::inconclusive;
  // Lowest objective value on the hull's axis slice vs. the lowest value
  // reachable by actual membership.
  double hull_slice_min = 0.0;
  double membership_slice_min = 0.0;
  std::string note;
};

struct SampleBudget {
  double box_radius = 16.0;
  std::size_t points_per_dim = 200;
};

// Dense-sampling falsifier for Definition 2.1; diagnostic only, never a
// proof. Requires m + 2 <= 3.
ConvexifiabilitySample sample_convexifiability(const QPInstance& p,
                                               const SampleBudget& budget = {});

}  // namespace qpdual
