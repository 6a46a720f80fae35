// Acceptance suite: one pass/fail line per criterion, exit 0 iff all pass.
// All arithmetic is exact, so every comparison is exact equality; the only
// tolerance anywhere is the wall-clock bound of the randomized axiom sweep.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "morita/gallery.hpp"
#include "morita/surgery.hpp"
#include "support/random_structures.hpp"

using namespace morita;
using testsupport::Rng;

namespace {

int failures = 0;

void outcome(int criterion, bool ok, const std::string& what, const std::string& detail = "") {
    std::printf("%s criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", criterion, what.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++failures;
}

FieldSpec field_cycle(std::size_t i) {
    switch (i % 3) {
        case 0: return prime_field(2);
        case 1: return prime_field(5);
        default: return rationals();
    }
}

// criterion 1: >= 500 randomized contexts, matrix_ring passes verify_algebra,
// zero failures, under 60 s
void criterion_1() {
    Rng rng(101);
    const int total = 500;
    int bad = 0;
    auto start = std::chrono::steady_clock::now();
    for (int i = 0; i < total; ++i) {
        FieldSpec f = field_cycle(static_cast<std::size_t>(i));
        std::size_t n = 1 + static_cast<std::size_t>(i) % 3;
        ContextPtr g = testsupport::random_context(rng, f, n, 2);
        MatrixRing ring = matrix_ring(g, Checked::no);
        if (!verify_algebra(*ring.ring).passed()) ++bad;
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    outcome(1, bad == 0 && secs < 60.0,
            "randomized axiom suite: " + std::to_string(total) + " matrix rings pass verify_algebra",
            std::to_string(bad) + " failures, " + std::to_string(secs) + " s");
}

// criteria 2-4 share one corpus of >= 200 randomized (g, c, t) with
// surjective zeta, theta
void criteria_2_3_4() {
    Rng rng(202);
    const int total = 200;
    int compose_bad = 0, unital_bad = 0, context_bad = 0, certify_bad = 0, refusal_bad = 0;
    for (int i = 0; i < total; ++i) {
        FieldSpec f = field_cycle(static_cast<std::size_t>(i));
        std::size_t n = 1 + static_cast<std::size_t>(i) % 3;
        ContextPtr g = testsupport::random_context(rng, f, n, 2);
        auto [t, c] = testsupport::random_corner_choice(rng, g);
        SurgeryResult res = corner_replace(g, c, t);

        // criterion 2: the composed context verifies and its blocks are unital
        bool compose_ok = true;
        for (const auto& section : res.report.sections)
            if (section.name.rfind("composition", 0) == 0 && !section.passed()) compose_ok = false;
        if (!compose_ok) ++compose_bad;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                if (!left_unital(*res.composed->blocks[a][b]) ||
                    !right_unital(*res.composed->blocks[a][b]))
                    ++unital_bad;

        // criterion 3: the assembled tuple passes classical verification,
        // including the mixed associativity equations (*) and (**)
        if (!res.report.passed()) ++context_bad;

        // criterion 4(a): surjective pairings and unital blocks => granted
        if (!certify_equivalence(res).granted) ++certify_bad;
    }
    // criterion 4(b): zeta = 0 with a nonzero target => refusal, exactly
    {
        Rng rng2(203);
        for (int i = 0; i < 25; ++i) {
            FieldSpec f = field_cycle(static_cast<std::size_t>(i));
            ContextPtr g = testsupport::random_context(rng2, f, 1 + i % 3, 2);
            std::size_t t = 0;
            while (t < g->n() && g->algebras[t]->dim == 0) ++t;
            if (t == g->n()) continue;
            ClassicalContext c = testsupport::zero_pairing_classical(g->algebras[t]);
            SurgeryResult res = corner_replace(g, c, t);
            EquivalenceCertificate cert = certify_equivalence(res);
            if (cert.granted) ++refusal_bad;
            bool zeta_named = false;
            for (const auto& reason : cert.failed_conditions)
                if (reason.find("zeta") != std::string::npos) zeta_named = true;
            if (!zeta_named) ++refusal_bad;
        }
    }
    outcome(2, compose_bad == 0 && unital_bad == 0,
            "composition oracle: 200 compositions verify with unital primed blocks",
            std::to_string(compose_bad) + " verification / " + std::to_string(unital_bad) +
                " unitality failures");
    outcome(3, context_bad == 0,
            "main-theorem suite: 200 assembled Morita contexts verify, including (*) and (**)",
            std::to_string(context_bad) + " failures");
    outcome(4, certify_bad == 0 && refusal_bad == 0,
            "surjectivity criterion: grants with surjective pairings, refuses zero pairings",
            std::to_string(certify_bad) + " wrong grants-expected / " +
                std::to_string(refusal_bad) + " wrong refusals");
}

// criterion 5: the Prop-style desk instance over F_5
void criterion_5() {
    const FieldSpec f5 = prime_field(5);
    Algebra ut;
    ut.field = f5;
    ut.dim = 3;
    ut.name = "UT2";
    ut.mul.assign(27, Scalar::zero(f5));
    ut.c(0, 0, 0) = Scalar::one(f5);
    ut.c(0, 1, 1) = Scalar::one(f5);
    ut.c(1, 2, 1) = Scalar::one(f5);
    ut.c(2, 2, 2) = Scalar::one(f5);
    ut.idempotents = {unit_vec(f5, 3, 0), unit_vec(f5, 3, 2)};
    Vec id = zero_vec(f5, 3);
    id[0] = Scalar::one(f5);
    id[2] = Scalar::one(f5);
    ut.identity = id;
    auto r = std::make_shared<Algebra>(std::move(ut));

    PeirceDecomposition pd = peirce(r, unit_vec(f5, 3, 2));
    ClassicalContext c = amplification_context(pd.context->algebras[1], 2);
    SurgeryResult res = corner_replace_idempotent(r, unit_vec(f5, 3, 2), c);
    EquivalenceCertificate cert = certify_equivalence(res);

    MatrixRing ring = matrix_ring(pd.context, Checked::no);
    Algebra transported = transported_algebra(*r, pd.block_basis);
    const bool reassembles = transported.mul == ring.ring->mul && ring.ring->dim == 3;

    outcome(5,
            res.report.passed() && res.ring_composed.ring->dim == 7 && cert.granted && reassembles,
            "desk instance: composed ring dim 7, certificate granted, Peirce reassembly exact",
            "composed dim " + std::to_string(res.ring_composed.ring->dim));
}

// criterion 6: the triangular instance composes to (S, T; L (x) M, 0; 0, 0)
void criterion_6() {
    GalleryInstance inst = triangular_instance(prime_field(5));
    bool ok = inst.passed() && inst.actual.at("dim L(x)M") == "2" &&
              inst.actual.at("composed lower-left dim") == "0" &&
              inst.actual.at("composed pairings zero") == "true";
    outcome(6, ok, "triangular instance: composed context is (S, T; L(x)M, 0; 0, 0), dim L(x)M = 2",
            ok ? "" : inst.table());
}

// criterion 7: the clannish instance at p = 5 and p = 13, both signs of w
void criterion_7() {
    bool ok = true;
    std::string detail;
    for (std::uint64_t p : {std::uint64_t{5}, std::uint64_t{13}})
        for (int sign : {+1, -1}) {
            GalleryInstance inst = clannish_instance(p, sign);
            if (!inst.passed()) {
                ok = false;
                detail += inst.name + " failed; ";
            }
        }
    outcome(7, ok, "clannish instance: dimension tables and certificates at p = 5, 13, both signs",
            detail);
}

// criterion 8: M_3(F_5) with partition 1|2
void criterion_8() {
    const FieldSpec f5 = prime_field(5);
    auto a = std::make_shared<Algebra>(matrix_algebra(f5, 3));
    GalleryInstance inst = enough_idempotents_instance(a, {true, false, false});
    inst.expected.emplace_back("partition dim[1][1]", "1");
    inst.expected.emplace_back("partition dim[1][2]", "2");
    inst.expected.emplace_back("partition dim[2][1]", "2");
    inst.expected.emplace_back("partition dim[2][2]", "4");
    inst.expected.emplace_back("partition ring dim", "9");
    outcome(8, inst.passed(),
            "enough-idempotents: M_3 partition 1|2 reassembles exactly, block-sum identity holds",
            inst.passed() ? "" : inst.table());
}

// criterion 9: >= 1000 random bimodule pairs, tensor dimension == naive oracle
void criterion_9() {
    Rng rng(909);
    const int total = 1000;
    int bad = 0;
    for (int i = 0; i < total; ++i) {
        FieldSpec f = field_cycle(static_cast<std::size_t>(i));
        testsupport::BimodulePair pair = testsupport::random_bimodule_pair(rng, f, 3);
        TensorSpace ts = tensor_over(pair.m, pair.n);
        if (ts.quotient->dim != testsupport::naive_tensor_dim(*pair.m, *pair.n)) ++bad;
    }
    outcome(9, bad == 0, "tensor oracle: 1000 tensor dimensions match the naive relation rank",
            std::to_string(bad) + " disagreements");
}

}  // namespace

int main() {
    criterion_1();
    criteria_2_3_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    if (failures == 0)
        std::printf("acceptance: all criteria passed\n");
    else
        std::printf("acceptance: %d criteria FAILED\n", failures);
    return failures == 0 ? 0 : 1;
}
