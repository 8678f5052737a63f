#pragma once

#include <map>
#include <random>
#include <vector>

#include "picomm/behavior.hpp"

namespace picomm {

/// Explicit d-dimensional states and POVMs for a task. povms[b][k] is the
/// effect for the k-th outcome of measurement b (outcomes ascending).
struct QuantumModel {
  TaskSpec task{3, 1};
  int dimension = 1;
  std::map<IndexSet, CMatrix> states;
  std::map<IndexSet, std::vector<CMatrix>> povms;

  /// Throws ModelValidationError if a state is not a unit-trace PSD Hermitian
  /// matrix, an effect is not PSD, or a POVM does not sum to the identity.
  void validate(double eigen_tolerance = tol::kStateEigenvalue, double entry_tolerance = tol::kPovmEntry) const;
};

/// (H + H^*)/2; throws ModelValidationError if H deviates from Hermitian by
/// more than `tolerance` in any entry.
CMatrix hermitize(const CMatrix& h, double tolerance = tol::kHermitian);

/// p(k | a, b) = Re tr(rho_a M_b(k)) for every label of the model. Validates
/// the model first; imaginary parts above tol::kImaginaryPart are rejected.
Behavior behavior_of(const QuantumModel& model);

/// True iff sum_a w_a X_a equals sum_b w_b X_b entrywise within `tolerance`.
bool check_equivalence(const QuantumModel& model, const PreparationEquivalence& eq, double tolerance);
bool check_equivalence(const QuantumModel& model, const EffectEquivalence& eq, double tolerance);

/// |v><v| for a (not necessarily normalized) vector.
CMatrix projector(const CVector& v);

/// Haar-random unit vector in C^d.
CVector haar_vector(int d, std::mt19937_64& rng);

/// Random model: every state and every unnormalized effect is a mixture of d
/// Haar-random projectors with exponential weights; POVMs are then brought to
/// sum to the identity by S^{-1/2} normalization.
QuantumModel random_model(const TaskSpec& task, int dimension, std::mt19937_64& rng);

/// Renormalizes states to unit trace and POVMs to sum exactly to the identity
/// (M_k -> S^{-1/2} M_k S^{-1/2}, S = sum_k M_k). Used to clean solver output.
void normalize_model(QuantumModel& model);

}  // namespace picomm
