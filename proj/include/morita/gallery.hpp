#pragma once

#include "morita/json_io.hpp"
#include "morita/surgery.hpp"

namespace morita {

/// A worked corner-replacement instance with a frozen expectation table.
/// Running the instance fills `actual`; it passes when every expected entry
/// matches, every verification report passed, and the certificate outcome is
/// as predicted.
struct GalleryInstance {
    std::string name;
    std::vector<std::pair<std::string, std::string>> expected;  // label -> value, fixed order
    std::map<std::string, std::string> actual;
    VerificationReport report;
    bool certificate_expected = true;
    bool certificate_granted = false;
    SpecFile inputs;  // the instance's inputs in spec-file form

    bool tables_match() const {
        for (const auto& [k, v] : expected) {
            auto it = actual.find(k);
            if (it == actual.end() || it->second != v) return false;
        }
        return true;
    }
    bool passed() const {
        return tables_match() && report.passed() && certificate_granted == certificate_expected;
    }
    std::string table() const;
};

/// Triangular matrix rings: (R, T; M, 0; 0, 0) with R ~ M_2 via row/column
/// vectors, corner-replaced at t = 1; the composed context is
/// (S, T; L (x) M, 0; 0, 0).
GalleryInstance triangular_instance(const FieldSpec& f);

/// Truncated tensor ring of an acyclic pro-species: blocks are path sums
/// of iterated tensor products. Throws CyclicProspecies when the species is
/// not strictly upper triangular.
ContextPtr tensor_ring_context(const std::vector<AlgebraPtr>& vertex_algebras,
                               const std::vector<std::vector<BimodulePtr>>& species,
                               const std::string& name);

/// Three-vertex chain species over f, corner-replaced at vertex 1 with an
/// amplification to M_2.
GalleryInstance prospecies_instance(const FieldSpec& f);

/// The semilinear clannish presentation over F_p (p = 1 mod 4): vertex rings
/// (L, E, F) = (F_{p^2}, F_{p^4}, F_p) with the displayed off-diagonal
/// bimodules, E (x)_F L cut by w = u (x) 1 +/- 1 (x) u. Corner-replaces twice:
/// the E-corner through its quadratic-extension presentation, then the
/// F-corner through F ~ M_2(F). `sign` is +1 or -1.
GalleryInstance clannish_instance(std::uint64_t p, int sign);

/// Ring with a complete orthogonal idempotent set, two-colored: builds the
/// 2x2 context (A_+, A_-; M_+-, M_-+), checks reassembly and the block-sum
/// tensor identity, then corner-replaces both corners with M_2
/// amplifications. `plus_side[i]` marks E[i] as belonging to the plus group.
GalleryInstance enough_idempotents_instance(const AlgebraPtr& a,
                                            const std::vector<bool>& plus_side);

}  // namespace morita
