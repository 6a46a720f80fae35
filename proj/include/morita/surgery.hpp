#pragma once

#include "morita/context.hpp"

namespace morita {

/// Composition of a classical context into a generalised one at corner t
/// (0-based): A'_t = S, M'_it = M_it (x)_R N, M'_tj = L (x)_R M_tj, all other
/// blocks unchanged, with the multiplication maps rebuilt case by case.
/// Throws CornerMismatch when c.R differs from g.A_t, ContextInvalid when an
/// input fails verification.
ContextPtr compose(const ClassicalContext& c, const ContextPtr& g, std::size_t t);

/// Column excision: column t of [A_i; M_ij] tensored with N, including the
/// literal block N_tt = R (x)_R N. A matrix bimodule between [A_i; M_ij] and
/// the composed ring.
MatrixBimodule column_excision(const ContextPtr& g, const ClassicalContext& c, std::size_t t);

/// Row excision: row t tensored with L on the left, including L_tt = L (x) R.
/// A matrix bimodule between the composed ring and [A_i; M_ij].
MatrixBimodule row_excision(const ContextPtr& g, const ClassicalContext& c, std::size_t t);

/// The blockwise pairings of the two ligations.
using PairingGrid = std::vector<std::vector<std::vector<BilinearBlockMap>>>;

/// Everything corner replacement produces: the composed context, both
/// excisions, both ligations (blockwise and factored through the tensor
/// product of the flattened bimodules), the assembled classical Morita
/// context between the two matrix rings, and the full verification report.
struct SurgeryResult {
    ContextPtr original;
    ContextPtr composed;
    std::size_t t = 0;
    ClassicalContext classical;

    MatrixRing ring_original;
    MatrixRing ring_composed;
    MatrixBimodule column;  // N_m
    MatrixBimodule row;     // L_m
    PairingGrid alpha;        // [i][k][j]: N_ik x L_kj -> M_ij
    PairingGrid alpha_prime;  // [i][k][j]: L_ik x N_kj -> M'_ij

    ClassicalContext assembled;  // ([A;M], [A';M']; flat N_m, flat L_m; |alpha|, |alpha'|)
    TensorSpace alpha_space;        // flat N_m (x)_{[A';M']} flat L_m
    TensorSpace alpha_prime_space;  // flat L_m (x)_{[A;M]} flat N_m
    Matrix alpha_factored;        // on alpha_space.quotient -> [A;M]
    Matrix alpha_prime_factored;  // on alpha_prime_space.quotient -> [A';M']

    VerificationReport report;
};

/// Column-row ligation |alpha|: phi_ikj away from column t, the zeta sandwich
/// phi_itj . (rho (x) 1) . (1 (x) zeta (x) 1) through it.
PairingGrid column_row_ligation(const ContextPtr& g, const ClassicalContext& c, std::size_t t,
                                const MatrixBimodule& n_m, const MatrixBimodule& l_m);

/// Row-column ligation |alpha'|, dual to the above with theta.
PairingGrid row_column_ligation(const ContextPtr& g, const ClassicalContext& c, std::size_t t,
                                const MatrixBimodule& l_m, const MatrixBimodule& n_m);

/// Runs the full pipeline and verifies every claim: the composed context, the
/// excisions as matrix bimodules, balance and bimodule-homomorphism squares
/// for both ligations, the mixed associativity equations of the pair, and the
/// assembled classical context between the two matrix rings. A failing report
/// indicates a bug, not bad input.
SurgeryResult corner_replace(const ContextPtr& g, const ClassicalContext& c, std::size_t t);

/// Recorded rank evidence that both factored ligation maps are surjective,
/// together with the sufficient conditions (unital blocks, surjective zeta
/// and theta). Refusal is a value: granted = false plus the failed
/// conditions.
struct EquivalenceCertificate {
    bool granted = false;
    std::vector<std::string> failed_conditions;
    std::map<std::string, std::string> evidence;

    std::string conclusion;  // human-readable verdict
};

EquivalenceCertificate certify_equivalence(const SurgeryResult& r);

/// Prop-style corner replacement inside a single unital algebra: Peirce
/// decomposition at e, then corner replacement of the eae block (t = 2 in
/// 1-based terms).
SurgeryResult corner_replace_idempotent(const AlgebraPtr& r, const Vec& e,
                                        const ClassicalContext& c);

std::size_t image_rank(const BilinearBlockMap& b);

}  // namespace morita
