#pragma once

#include <random>
#include <utility>

#include "morita/context.hpp"

// Randomized algebraic structures for the property and acceptance suites.
// Contexts are generated as Peirce partitions of verified algebras (path
// algebras of small acyclic quivers, matrix algebras, direct sums, optionally
// transported through a random basis change), so they satisfy the axioms by
// construction and exercise the verifiers on genuinely varied data.
namespace morita::testsupport {

using Rng = std::mt19937_64;

FieldSpec random_field(Rng& rng);

/// Path algebra of a random acyclic quiver, possibly direct-summed with
/// M_2(f) and transported through a random basis change. dim <= max_dim.
AlgebraPtr random_algebra(Rng& rng, const FieldSpec& f, std::size_t max_dim);

/// Peirce-partition context with the requested arity; every block dimension
/// is at most max_block.
ContextPtr random_context(Rng& rng, const FieldSpec& f, std::size_t n, std::size_t max_block);

/// A corner index t plus a classical context on A_t with surjective zeta and
/// theta (identity, basis-change iso, M_2 amplification, or the classical
/// face of a Peirce decomposition of M_2(f) when A_t is one-dimensional).
std::pair<std::size_t, ClassicalContext> random_corner_choice(Rng& rng, const ContextPtr& g);

/// Zero-pairing classical context (R, S; N, 0; 0, 0) on the given corner,
/// with S and N derived from R; zeta is the zero map onto a nonzero target
/// whenever R is nonzero.
ClassicalContext zero_pairing_classical(const AlgebraPtr& corner);

/// Independent tensor-dimension oracle: assembles the full naive relation
/// matrix and ranks it by plain forward elimination (no echelon reuse).
std::size_t naive_tensor_dim(const Bimodule& m, const Bimodule& n);

struct BimodulePair {
    BimodulePtr m;  // C-A
    BimodulePtr n;  // A-D
};

/// Random bimodules over random corner algebras sharing the middle algebra;
/// both dimensions at most max_dim.
BimodulePair random_bimodule_pair(Rng& rng, const FieldSpec& f, std::size_t max_dim);

}  // namespace morita::testsupport
