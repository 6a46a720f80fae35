#pragma once

#include "morita/bimodule.hpp"
#include "morita/tensor_space.hpp"

namespace morita {

/// A generalised Morita context (A_i; M_ij; phi_ikj): n rings, an n x n grid
/// of bimodules whose diagonal is the rings themselves, and n^3 multiplication
/// maps phi_ikj : M_ik (x)_{A_k} M_kj -> M_ij subject to the unit-map
/// identities and the mixed associativity conditions.
struct GeneralisedContext {
    std::vector<AlgebraPtr> algebras;
    std::vector<std::vector<BimodulePtr>> blocks;            // [i][j]
    std::vector<std::vector<std::vector<BilinearBlockMap>>> maps;  // [i][k][j]
    std::string name;

    std::size_t n() const { return algebras.size(); }
    const BilinearBlockMap& phi(std::size_t i, std::size_t k, std::size_t j) const {
        return maps[i][k][j];
    }

    bool operator==(const GeneralisedContext& o) const;
};

using ContextPtr = std::shared_ptr<const GeneralisedContext>;

/// Builds the context frame: diagonal blocks are the regular bimodules (input
/// grids may not supply them), maps with a repeated index are the forced unit
/// maps (lambda, rho, mu), and the genuine maps (k distinct from i and j) are
/// zero-initialized for the caller to fill.
GeneralisedContext make_context_frame(std::vector<AlgebraPtr> algebras,
                                      std::vector<std::vector<BimodulePtr>> off_diagonal,
                                      std::string name);

/// Four-part verification mirroring the defining conditions: ring axioms,
/// bimodule axioms (with the diagonal pinned to the regular bimodules),
/// multiplication-map conditions (unit identities, balance, bimodule
/// homomorphism), and mixed associativity over all n^4 quadruples.
VerificationReport verify_generalised_context(const GeneralisedContext& g);

/// A classical Morita context (R, S; N, L; zeta, theta) with
/// zeta : N (x) L -> R and theta : L (x) N -> S.
struct ClassicalContext {
    AlgebraPtr R, S;
    BimodulePtr N;  // R-S
    BimodulePtr L;  // S-R
    BilinearBlockMap zeta;   // N x L -> regular(R)
    BilinearBlockMap theta;  // L x N -> regular(S)
    std::string name;
};

ClassicalContext make_classical(AlgebraPtr R, AlgebraPtr S, BimodulePtr N, BimodulePtr L,
                                std::vector<Scalar> zeta_tensor, std::vector<Scalar> theta_tensor,
                                std::string name);

/// The induced 2x2 generalised context (diagonal R, S; off-diagonal N, L).
GeneralisedContext to_generalised(const ClassicalContext& c);

VerificationReport verify_classical_context(const ClassicalContext& c);

/// The (R, S; N, L; zeta, theta) face of a 2x2 context, zeta = phi_121,
/// theta = phi_212. Throws WrongArity when n != 2.
ClassicalContext as_classical(const GeneralisedContext& g);

/// The generalised matrix ring [A_i; M_ij] on the concatenated block basis
/// (row-major block order, each block in its own canonical basis), with the
/// images of the 1_{A_i} as the distinguished idempotent set.
struct MatrixRing {
    AlgebraPtr ring;
    ContextPtr source;
    std::vector<std::vector<std::size_t>> offsets;  // [i][j] -> first global index

    std::size_t global_index(std::size_t i, std::size_t j, std::size_t local) const {
        return offsets[i][j] + local;
    }
};

enum class Checked { yes, no };
MatrixRing matrix_ring(const ContextPtr& g, Checked check = Checked::yes);

/// Reads the blocks and multiplication maps back out of a matrix ring;
/// inverse of the construction up to the algebras' metadata.
GeneralisedContext extract_context(const MatrixRing& ring);

/// Peirce decomposition along a partition of unity. `block_basis` has the
/// concatenated block bases (row-major block order) as columns, expressed in
/// the original algebra's coordinates; it is the explicit bijection under
/// which matrix_ring(context) reproduces the original structure constants.
struct PeirceDecomposition {
    ContextPtr context;
    Matrix block_basis;
};

/// Blocks (1-e)a(1-e), (1-e)ae, ea(1-e), eae with multiplication as the maps.
PeirceDecomposition peirce(const AlgebraPtr& a, const Vec& e);

/// General form: one group per supplied orthogonal idempotent, whose sum must
/// be the identity. Zero group idempotents give legal zero blocks.
PeirceDecomposition peirce_partition(const AlgebraPtr& a, const std::vector<Vec>& group_units);

/// Column collection (P_1, ..., P_n) for a context: left A_i-modules with
/// structure maps beta_ik : M_ik (x) P_k -> P_i, beta_ii the left action.
struct ColumnCollection {
    ContextPtr ctx;
    std::vector<BimodulePtr> entries;
    std::vector<std::vector<BilinearBlockMap>> structure;  // [i][k]
    std::string name;
};

/// Row collection: right A_i-modules with maps beta_ik : P_i (x) M_ik -> P_k.
struct RowCollection {
    ContextPtr ctx;
    std::vector<BimodulePtr> entries;
    std::vector<std::vector<BilinearBlockMap>> structure;  // [i][k]
    std::string name;
};

VerificationReport verify_column_collection(const ColumnCollection& p);
VerificationReport verify_row_collection(const RowCollection& p);

/// Column morphism (f_1, ..., f_n): each f_i left A_i-linear with
/// f_i . beta_ij = beta'_ij . (1 (x) f_j).
VerificationReport verify_column_morphism(const ColumnCollection& p, const ColumnCollection& p2,
                                          const std::vector<Matrix>& f);

/// Column j (resp. row i) of the regular module of the matrix ring.
ColumnCollection column_of_ring(const ContextPtr& g, std::size_t j);
RowCollection row_of_ring(const ContextPtr& g, std::size_t i);

/// A matrix bimodule (T_ij) over two matrix rings: columns are column
/// collections for the left context, rows are row collections for the right
/// context, and the two structures commute.
struct MatrixBimodule {
    ContextPtr row_ctx;  // acts on the left
    ContextPtr col_ctx;  // acts on the right
    std::vector<std::vector<BimodulePtr>> blocks;  // T_ij : A_i-A'_j
    std::vector<std::vector<std::vector<BilinearBlockMap>>> left_structure;   // [i][k][j]: M_ik x T_kj -> T_ij
    std::vector<std::vector<std::vector<BilinearBlockMap>>> right_structure;  // [i][k][j]: T_ik x M'_kj -> T_ij
    std::string name;
};

VerificationReport verify_matrix_bimodule(const MatrixBimodule& t);

/// The matrix ring as a matrix bimodule over itself.
MatrixBimodule regular_matrix_bimodule(const ContextPtr& g);

/// A matrix bimodule flattened to a single bimodule over the two matrix
/// rings, blocks in row-major order.
struct FlattenedGrid {
    BimodulePtr bim;
    std::vector<std::vector<std::size_t>> offsets;
};
FlattenedGrid flatten_matrix_bimodule(const MatrixBimodule& t, const MatrixRing& left_ring,
                                      const MatrixRing& right_ring);

/// Assembles blockwise pairings alpha_ikj : X_ik x Y_kj -> Z_ij into the
/// single bilinear map |alpha| on the flattened grids, with values in the
/// target matrix ring.
BilinearBlockMap flatten_pairing(
    const std::vector<std::vector<std::vector<BilinearBlockMap>>>& alphas, const FlattenedGrid& x,
    const FlattenedGrid& y, const MatrixRing& target);

/// The factored map of a blockwise balanced family alpha_k : P_k x Q_k -> Z
/// satisfying the compatibility alpha_i(1 (x) gamma_ij) = alpha_j(beta_ij (x) 1);
/// computed by building the tensor space over the assembled matrix ring.
struct BlockwiseFactored {
    MatrixRing ring;
    BimodulePtr flat_rows;
    BimodulePtr flat_cols;
    TensorSpace space;
    Matrix factored;
};
BlockwiseFactored factor_blockwise_balanced(const RowCollection& rows,
                                            const ColumnCollection& cols,
                                            const std::vector<BilinearBlockMap>& alphas,
                                            const BimodulePtr& target);

// -- standard classical contexts -------------------------------------------

/// (A, A; A, A; mu, mu) for unital A.
ClassicalContext identity_context(const AlgebraPtr& a);

/// The context induced by an algebra isomorphism a -> b (columns of `iso`
/// are the images of a's basis).
ClassicalContext iso_context(const AlgebraPtr& a, const AlgebraPtr& b, const Matrix& iso);

/// M_k(a) on the basis (block row, block column, element); E consists of the
/// diagonal images of a's idempotents.
Algebra matrix_over_algebra(const Algebra& a, std::size_t k);

/// Row vectors a^{1 x k} as an a-M_k(a)-bimodule, and columns dually.
BimodulePtr rows_bimodule(const AlgebraPtr& a, const AlgebraPtr& mk, std::size_t k);
BimodulePtr cols_bimodule(const AlgebraPtr& a, const AlgebraPtr& mk, std::size_t k);

/// a ~ M_k(a) via row and column vectors; both pairings are surjective for
/// unital a.
ClassicalContext amplification_context(const AlgebraPtr& a, std::size_t k);

// -- shared check helpers (used by the verification sweeps) ----------------

/// Checks outer1(x, inner1(y, z)) == outer2(inner2(x, y), z) on all basis
/// triples, reporting failures as label + "(x, y, z)" (1-based).
void check_mixed_triple(const BilinearBlockMap& outer1, const BilinearBlockMap& inner1,
                        const BilinearBlockMap& outer2, const BilinearBlockMap& inner2,
                        ReportSection& sec, const std::string& label);

void check_left_linear(const BilinearBlockMap& beta, ReportSection& sec, const std::string& label);
void check_right_linear(const BilinearBlockMap& beta, ReportSection& sec, const std::string& label);
void check_balanced_into(const BilinearBlockMap& beta, const Algebra& over, ReportSection& sec,
                         const std::string& label);

}  // namespace morita
