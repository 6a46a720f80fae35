#include <catch2/catch_amalgamated.hpp>

#include "morita/context.hpp"
#include "support/random_structures.hpp"

using namespace morita;

namespace {

AlgebraPtr upper_triangular_2(const FieldSpec& f) {
    Algebra a;
    a.field = f;
    a.dim = 3;  // e11, e12, e22
    a.name = "UT2";
    a.mul.assign(27, Scalar::zero(f));
    a.c(0, 0, 0) = Scalar::one(f);
    a.c(0, 1, 1) = Scalar::one(f);
    a.c(1, 2, 1) = Scalar::one(f);
    a.c(2, 2, 2) = Scalar::one(f);
    a.idempotents = {unit_vec(f, 3, 0), unit_vec(f, 3, 2)};
    Vec id = zero_vec(f, 3);
    id[0] = Scalar::one(f);
    id[2] = Scalar::one(f);
    a.identity = id;
    return std::make_shared<Algebra>(std::move(a));
}

}  // namespace

TEST_CASE("verify_algebra on the worked examples") {
    const FieldSpec f5 = prime_field(5);
    SECTION("the field as a one-dimensional algebra passes") {
        CHECK(verify_algebra(field_algebra(f5)).passed());
    }
    SECTION("M_2(F_5) with the matrix-unit idempotents passes") {
        CHECK(verify_algebra(matrix_algebra(f5, 2)).passed());
    }
    SECTION("a corrupted structure constant fails associativity with a witness") {
        Algebra bad = matrix_algebra(f5, 2);
        // e12 * e21 = e11 corrupted to 2 e11 (basis order e11, e12, e21, e22)
        bad.c(1, 2, 0) = Scalar::from_int(f5, 2);
        VerificationReport report = verify_algebra(bad);
        CHECK_FALSE(report.passed());
        bool found = false;
        for (const auto& s : report.sections)
            if (s.name == "associativity")
                for (const auto& w : s.witnesses)
                    if (w.find("(i=2, j=3, k=2)") != std::string::npos) found = true;
        // brute force over all 64 triples: the corrupted constant surfaces at
        // (e12, e21, e12) and (e21, e12, e21)
        CHECK(found);
        CHECK(report.total_failures() > 0);
    }
    SECTION("malformed tensors throw") {
        Algebra bad = field_algebra(f5);
        bad.mul.pop_back();
        CHECK_THROWS_AS(verify_algebra(bad), MalformedInput);
    }
}

TEST_CASE("find_identity") {
    const FieldSpec f5 = prime_field(5);
    const FieldSpec q = rationals();
    SECTION("M_2 has e11 + e22") {
        Algebra m2 = matrix_algebra(f5, 2);
        auto id = find_identity(m2);
        REQUIRE(id.has_value());
        CHECK(*id == *m2.identity);
    }
    SECTION("the one-dimensional zero-multiplication algebra has none") {
        Algebra z;
        z.field = f5;
        z.dim = 1;
        z.mul = {Scalar::zero(f5)};
        CHECK_FALSE(find_identity(z).has_value());
    }
    SECTION("upper-triangular 2x2 over Q has e11 + e22") {
        auto ut = upper_triangular_2(q);
        auto id = find_identity(*ut);
        REQUIRE(id.has_value());
        CHECK(*id == *ut->identity);
    }
    SECTION("find_identity returns the idempotent sum whenever E is complete") {
        testsupport::Rng rng(7);
        for (int trial = 0; trial < 25; ++trial) {
            AlgebraPtr a = testsupport::random_algebra(rng, testsupport::random_field(rng), 8);
            auto id = find_identity(*a);
            REQUIRE(id.has_value());
            Vec sum = zero_vec(a->field, a->dim);
            for (const Vec& e : a->idempotents)
                for (std::size_t x = 0; x < a->dim; ++x) sum[x] += e[x];
            CHECK(*id == sum);
        }
    }
}

TEST_CASE("matrix_algebra") {
    const FieldSpec f5 = prime_field(5);
    CHECK(matrix_algebra(f5, 1).dim == 1);
    CHECK(verify_algebra(matrix_algebra(f5, 1)).passed());
    Algebra m3q = matrix_algebra(rationals(), 3);
    CHECK(m3q.dim == 9);
    REQUIRE(m3q.identity.has_value());
    Vec id = zero_vec(rationals(), 9);
    for (std::size_t p = 0; p < 3; ++p) id[p * 3 + p] = Scalar::one(rationals());
    CHECK(*m3q.identity == id);
    CHECK_THROWS_AS(matrix_algebra(f5, 0), MalformedInput);
    for (std::size_t k = 1; k <= 4; ++k) {
        CHECK(verify_algebra(matrix_algebra(f5, k)).passed());
        CHECK(verify_algebra(matrix_algebra(rationals(), k)).passed());
    }
}

TEST_CASE("corner_subalgebra") {
    const FieldSpec f5 = prime_field(5);
    auto m2 = std::make_shared<Algebra>(matrix_algebra(f5, 2));
    SECTION("corner of M_2 at e11 is the field") {
        CornerAlgebra corner = corner_subalgebra(*m2, unit_vec(f5, 4, 0));
        CHECK(corner.algebra.dim == 1);
        CHECK(corner.algebra == field_algebra(f5));
    }
    SECTION("corner at the identity is the whole algebra") {
        CornerAlgebra corner = corner_subalgebra(*m2, *m2->identity);
        CHECK(corner.algebra.dim == 4);
        CHECK(corner.algebra.mul == m2->mul);
    }
    SECTION("corner of the upper-triangular algebra at e11") {
        auto ut = upper_triangular_2(f5);
        CornerAlgebra corner = corner_subalgebra(*ut, unit_vec(f5, 3, 0));
        CHECK(corner.algebra.dim == 1);
    }
    SECTION("non-idempotent input throws") {
        Vec e = unit_vec(f5, 4, 1);  // e12 squares to zero
        CHECK_THROWS_AS(corner_subalgebra(*m2, e), NotIdempotent);
    }
}

TEST_CASE("peirce decomposition") {
    const FieldSpec f5 = prime_field(5);
    auto m2 = std::make_shared<Algebra>(matrix_algebra(f5, 2));
    SECTION("M_2 at e11: four one-dimensional blocks") {
        PeirceDecomposition pd = peirce(m2, unit_vec(f5, 4, 0));
        REQUIRE(pd.context->n() == 2);
        CHECK(pd.context->blocks[0][0]->dim == 1);
        CHECK(pd.context->blocks[0][1]->dim == 1);
        CHECK(pd.context->blocks[1][0]->dim == 1);
        CHECK(pd.context->blocks[1][1]->dim == 1);
        CHECK(verify_generalised_context(*pd.context).passed());
        MatrixRing ring = matrix_ring(pd.context, Checked::no);
        CHECK(ring.ring->dim == 4);
    }
    SECTION("e = identity gives a degenerate zero block and still verifies") {
        PeirceDecomposition pd = peirce(m2, *m2->identity);
        CHECK(pd.context->blocks[0][0]->dim == 0);
        CHECK(pd.context->blocks[1][1]->dim == 4);
        CHECK(verify_generalised_context(*pd.context).passed());
    }
    SECTION("upper-triangular at e22: block dims (1, 1, 0, 1)") {
        auto ut = upper_triangular_2(f5);
        PeirceDecomposition pd = peirce(ut, unit_vec(f5, 3, 2));
        CHECK(pd.context->blocks[0][0]->dim == 1);
        CHECK(pd.context->blocks[0][1]->dim == 1);
        CHECK(pd.context->blocks[1][0]->dim == 0);
        CHECK(pd.context->blocks[1][1]->dim == 1);
        CHECK(verify_generalised_context(*pd.context).passed());
    }
    SECTION("non-idempotent element is rejected") {
        CHECK_THROWS_AS(peirce(m2, unit_vec(f5, 4, 1)), NotIdempotent);
    }
}

TEST_CASE("peirce reassembly reproduces the structure constants") {
    // matrix_ring(peirce(a, e)) equals a transported through the block basis
    testsupport::Rng rng(20240812);
    int done = 0;
    while (done < 20) {
        FieldSpec f = testsupport::random_field(rng);
        AlgebraPtr a = testsupport::random_algebra(rng, f, 8);
        if (a->idempotents.empty()) continue;
        // random idempotent: a partial sum of E
        Vec e = zero_vec(f, a->dim);
        bool any = false;
        for (const Vec& idem : a->idempotents)
            if (rng() % 2 == 0) {
                any = true;
                for (std::size_t x = 0; x < a->dim; ++x) e[x] += idem[x];
            }
        if (!any) e = a->idempotents[0];
        PeirceDecomposition pd = peirce(a, e);
        MatrixRing ring = matrix_ring(pd.context, Checked::no);
        REQUIRE(ring.ring->dim == a->dim);
        Algebra transported = transported_algebra(*a, pd.block_basis);
        CHECK(transported.mul == ring.ring->mul);
        ++done;
    }
}
