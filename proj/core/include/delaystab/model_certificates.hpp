#pragma once

// Model-level certificates: the matrices M (Hopfield), P (BAM) and the
// high-order comparison matrix, their witness vectors, and the combined
// route search used by the CLI.

#include <optional>
#include <string>
#include <vector>

#include "delaystab/certificates.hpp"
#include "delaystab/models.hpp"

namespace delaystab {

/// I - diag(c+) - [sum_k b+_ijk F_ijk]. With constant coefficients this is the
/// matrix of the autonomous corollary (sup of a constant is its modulus).
Matrix<Rational> hopfield_m_matrix(const HopfieldSpec& spec);

/// [[I - C^, -U], [-S, I - C~]], U_ij = (a^+_ij + b^+_ij) F_j, S_ji = (a~+_ji + b~+_ji) G_i.
Matrix<Rational> bam_p_matrix(const BAMSpec& spec);

/// Q with (Q d)_i equal to the high-order margin at d:
/// Q = diag(1 - c+) - W, W_ik = F_k a+_ik + G_k (sum_j b+_ijk m_j + sum_l b+_ikl m_l).
Matrix<Rational> high_order_comparison_matrix(const HighOrderSpec& spec);

/// margin_i = d_i (1 - c+_i) - sum_j (d_j F_j a+_ij + sum_l b+_ijl (m_j d_l G_l + m_l d_j G_j)).
/// Throws DomainError unless d > 0.
std::vector<Rational> high_order_condition(const HighOrderSpec& spec, const std::vector<Rational>& d);

/// Witness d = Q^-1 1 when Q is a nonsingular M-matrix and the margins at d
/// are positive.
std::optional<std::vector<Rational>> high_order_witness(const HighOrderSpec& spec);

struct ModelCertificate {
  StabilityCertificate certificate;
  /// "M", "P" or "Q".
  std::string matrix_name;
  Matrix<Rational> matrix;
  MMatrixReport<Rational> matrix_report;
  /// Lipschitz data in original coordinates.
  LipschitzData<Rational> lipschitz;
  /// Exact witness when the verdict came from a witness route.
  std::optional<std::vector<Rational>> witness;
  Step tau = 0;
  Step window_start = 0;
  std::optional<Step> period;
};

/// Tries raw row dominance first, then the model's matrix route (rescale by
/// the witness, then row dominance). The matrix report is always filled in.
ModelCertificate certify_model(const ModelSpec& spec);

}  // namespace delaystab
