#include <catch2/catch_amalgamated.hpp>

#include "morita/context.hpp"
#include "support/random_structures.hpp"

using namespace morita;

namespace {

const FieldSpec f5 = prime_field(5);

ContextPtr triangular_context(const FieldSpec& f) {
    auto R = std::make_shared<Algebra>(field_algebra(f));
    auto T = std::make_shared<Algebra>(field_algebra(f));
    auto M = std::make_shared<Bimodule>();
    M->left = R;
    M->right = T;
    M->dim = 1;
    M->name = "M";
    M->left_action = {Scalar::one(f)};
    M->right_action = {Scalar::one(f)};
    std::vector<std::vector<BimodulePtr>> off(2, std::vector<BimodulePtr>(2));
    off[0][1] = M;
    off[1][0] = zero_bimodule(T, R);
    return std::make_shared<GeneralisedContext>(make_context_frame({R, T}, off, "triangular"));
}

// the 2x2 context with every block the field and every map multiplication:
// its matrix ring is M_2(f)
ContextPtr all_field_context(const FieldSpec& f) {
    auto m2 = std::make_shared<Algebra>(matrix_algebra(f, 2));
    return peirce(m2, unit_vec(f, 4, 0)).context;
}

}  // namespace

TEST_CASE("verify_generalised_context") {
    SECTION("arity one: a context is just a ring") {
        auto fld = std::make_shared<Algebra>(field_algebra(f5));
        GeneralisedContext g = make_context_frame(
            {fld}, std::vector<std::vector<BimodulePtr>>(1, std::vector<BimodulePtr>(1)), "F5");
        CHECK(verify_generalised_context(g).passed());
    }
    SECTION("the triangular context passes") {
        CHECK(verify_generalised_context(*triangular_context(f5)).passed());
    }
    SECTION("a corrupted multiplication map fails with the offending quadruple") {
        GeneralisedContext g = *all_field_context(f5);
        g.maps[0][1][0].t(0, 0, 0) = Scalar::from_int(f5, 2);
        VerificationReport report = verify_generalised_context(g);
        CHECK_FALSE(report.passed());
        bool quadruple_reported = false;
        for (const auto& s : report.sections)
            if (s.name == "mixed associativity" && !s.witnesses.empty()) quadruple_reported = true;
        CHECK(quadruple_reported);
    }
    SECTION("grid shape mismatches throw") {
        GeneralisedContext g = *all_field_context(f5);
        g.maps[0][1].pop_back();
        CHECK_THROWS_AS(verify_generalised_context(g), MalformedInput);
    }
}

TEST_CASE("matrix_ring") {
    SECTION("arity one returns the ring itself") {
        auto fld = std::make_shared<Algebra>(field_algebra(f5));
        auto g = std::make_shared<GeneralisedContext>(make_context_frame(
            {fld}, std::vector<std::vector<BimodulePtr>>(1, std::vector<BimodulePtr>(1)), "F5"));
        MatrixRing ring = matrix_ring(g);
        CHECK(ring.ring->dim == 1);
        CHECK(ring.ring->mul == fld->mul);
    }
    SECTION("the all-field 2x2 context assembles to M_2(F_5)") {
        MatrixRing ring = matrix_ring(all_field_context(f5));
        REQUIRE(ring.ring->dim == 4);
        // blocks are ordered (1,1), (1,2), (2,1), (2,2) = e11, e12, e21, e22
        CHECK(ring.ring->mul == matrix_algebra(f5, 2).mul);
        CHECK(verify_algebra(*ring.ring).passed());
    }
    SECTION("the triangular ring has dim 3 with the expected products") {
        MatrixRing ring = matrix_ring(triangular_context(f5));
        REQUIRE(ring.ring->dim == 3);  // e1, m, e2
        const Algebra& r = *ring.ring;
        CHECK(r.c(0, 1, 1) == Scalar::one(f5));   // e1 * m = m
        CHECK(r.c(1, 2, 1) == Scalar::one(f5));   // m * e2 = m
        CHECK(r.c(1, 1, 0).is_zero());            // m * m = 0
        CHECK(r.c(1, 1, 1).is_zero());
        CHECK(r.c(1, 1, 2).is_zero());
        CHECK(verify_algebra(r).passed());
    }
    SECTION("an invalid context is rejected") {
        GeneralisedContext g = *all_field_context(f5);
        g.maps[0][1][0].t(0, 0, 0) = Scalar::from_int(f5, 2);
        CHECK_THROWS_AS(matrix_ring(std::make_shared<GeneralisedContext>(g)), ContextInvalid);
    }
    SECTION("the distinguished idempotents are orthogonal and complete") {
        MatrixRing ring = matrix_ring(all_field_context(f5));
        CHECK(verify_algebra(*ring.ring).passed());  // includes completeness of E
        CHECK(ring.ring->idempotents.size() == 2);
    }
}

TEST_CASE("block extraction round trip") {
    testsupport::Rng rng(31337);
    for (int trial = 0; trial < 15; ++trial) {
        FieldSpec f = testsupport::random_field(rng);
        std::size_t n = 1 + rng() % 3;
        ContextPtr g = testsupport::random_context(rng, f, n, 2);
        MatrixRing ring = matrix_ring(g, Checked::no);
        GeneralisedContext extracted = extract_context(ring);
        CHECK(extracted == *g);
    }
}

TEST_CASE("as_classical") {
    SECTION("the Peirce context of M_2 gives surjective pairings") {
        ClassicalContext c = as_classical(*all_field_context(f5));
        CHECK(c.N->dim == 1);
        CHECK(c.L->dim == 1);
        RrefAccumulator zr(f5, c.R->dim);
        for (std::size_t i = 0; i < c.N->dim; ++i)
            for (std::size_t j = 0; j < c.L->dim; ++j)
                zr.add_row(Vec(c.zeta.row(i, j), c.zeta.row(i, j) + c.R->dim));
        CHECK(zr.rank() == c.R->dim);
        CHECK(verify_classical_context(c).passed());
    }
    SECTION("the triangular context has zero pairings") {
        ClassicalContext c = as_classical(*triangular_context(f5));
        CHECK(c.zeta.tensor.empty());  // 1 * 0 * 1 entries
        CHECK(c.theta.tensor.empty());
    }
    SECTION("wrong arity throws") {
        auto fld = std::make_shared<Algebra>(field_algebra(f5));
        GeneralisedContext g = make_context_frame(
            {fld}, std::vector<std::vector<BimodulePtr>>(1, std::vector<BimodulePtr>(1)), "F5");
        CHECK_THROWS_AS(as_classical(g), WrongArity);
    }
}

TEST_CASE("column collections") {
    ContextPtr g = all_field_context(f5);
    SECTION("columns of the regular module pass") {
        for (std::size_t j = 0; j < 2; ++j)
            CHECK(verify_column_collection(column_of_ring(g, j)).passed());
    }
    SECTION("the zero collection passes") {
        ColumnCollection zero;
        zero.ctx = g;
        zero.name = "zero";
        for (std::size_t i = 0; i < 2; ++i)
            zero.entries.push_back(left_module_as_bimodule(g->algebras[i], 0, {}, "0"));
        zero.structure.assign(2, std::vector<BilinearBlockMap>());
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t k = 0; k < 2; ++k)
                zero.structure[i].push_back(
                    zero_block_map(g->blocks[i][k], zero.entries[k], zero.entries[i]));
        CHECK(verify_column_collection(zero).passed());
    }
    SECTION("scaling a diagonal map breaks the collection") {
        ColumnCollection col = column_of_ring(g, 0);
        for (Scalar& s : col.structure[0][0].tensor) s *= Scalar::from_int(f5, 2);
        VerificationReport report = verify_column_collection(col);
        CHECK_FALSE(report.passed());
    }
}

TEST_CASE("row collections of the regular module pass") {
    ContextPtr g = all_field_context(f5);
    for (std::size_t i = 0; i < 2; ++i)
        CHECK(verify_row_collection(row_of_ring(g, i)).passed());
}

TEST_CASE("column morphisms") {
    ContextPtr g = all_field_context(f5);
    ColumnCollection col = column_of_ring(g, 0);
    SECTION("identities pass") {
        std::vector<Matrix> f{Matrix::identity(f5, col.entries[0]->dim),
                              Matrix::identity(f5, col.entries[1]->dim)};
        CHECK(verify_column_morphism(col, col, f).passed());
    }
    SECTION("zero maps pass") {
        std::vector<Matrix> f{Matrix(f5, col.entries[0]->dim, col.entries[0]->dim),
                              Matrix(f5, col.entries[1]->dim, col.entries[1]->dim)};
        CHECK(verify_column_morphism(col, col, f).passed());
    }
    SECTION("scaling one entry alone breaks the linking square") {
        std::vector<Matrix> f{Matrix::identity(f5, col.entries[0]->dim),
                              Matrix::identity(f5, col.entries[1]->dim)};
        for (std::size_t i = 0; i < f[0].rows(); ++i) f[0].at(i, i) = Scalar::from_int(f5, 2);
        VerificationReport report = verify_column_morphism(col, col, f);
        CHECK_FALSE(report.passed());
    }
}

TEST_CASE("matrix bimodules") {
    ContextPtr g = all_field_context(f5);
    SECTION("the ring over itself passes") {
        CHECK(verify_matrix_bimodule(regular_matrix_bimodule(g)).passed());
    }
    SECTION("a corrupted compatibility tensor fails with a witness") {
        MatrixBimodule t = regular_matrix_bimodule(g);
        t.left_structure[0][1][0].t(0, 0, 0) = Scalar::from_int(f5, 3);
        VerificationReport report = verify_matrix_bimodule(t);
        CHECK_FALSE(report.passed());
        CHECK(report.total_failures() > 0);
    }
}

TEST_CASE("factor_blockwise_balanced") {
    SECTION("arity one reduces to factor_balanced") {
        auto fld = std::make_shared<Algebra>(field_algebra(f5));
        auto g = std::make_shared<GeneralisedContext>(make_context_frame(
            {fld}, std::vector<std::vector<BimodulePtr>>(1, std::vector<BimodulePtr>(1)), "F5"));
        RowCollection rows = row_of_ring(g, 0);
        ColumnCollection cols = column_of_ring(g, 0);
        BilinearBlockMap alpha;
        alpha.left_factor = rows.entries[0];
        alpha.right_factor = cols.entries[0];
        auto target = std::make_shared<Bimodule>(*regular_bimodule(fld));
        alpha.codomain = target;
        alpha.tensor = fld->mul;
        BlockwiseFactored bf = factor_blockwise_balanced(rows, cols, {alpha}, target);
        CHECK(bf.space.quotient->dim == 1);
        CHECK(rank(bf.factored) == 1);
    }
    SECTION("row x column of the regular matrix ring factors with full image") {
        ContextPtr g = all_field_context(f5);
        RowCollection rows = row_of_ring(g, 0);
        ColumnCollection cols = column_of_ring(g, 0);
        // alpha_k = phi_0k0 lands in the (1,1) block A_1
        auto target = g->blocks[0][0];
        std::vector<BilinearBlockMap> alphas;
        for (std::size_t k = 0; k < 2; ++k) {
            BilinearBlockMap a;
            a.left_factor = rows.entries[k];
            a.right_factor = cols.entries[k];
            a.codomain = target;
            a.tensor = g->phi(0, k, 0).tensor;
            alphas.push_back(std::move(a));
        }
        BlockwiseFactored bf = factor_blockwise_balanced(rows, cols, alphas, target);
        CHECK(rank(bf.factored) == target->dim);
    }
    SECTION("violating the compatibility is rejected with NotBalanced") {
        ContextPtr g = all_field_context(f5);
        RowCollection rows = row_of_ring(g, 0);
        ColumnCollection cols = column_of_ring(g, 0);
        auto target = g->blocks[0][0];
        std::vector<BilinearBlockMap> alphas;
        for (std::size_t k = 0; k < 2; ++k) {
            BilinearBlockMap a;
            a.left_factor = rows.entries[k];
            a.right_factor = cols.entries[k];
            a.codomain = target;
            a.tensor = g->phi(0, k, 0).tensor;
            alphas.push_back(std::move(a));
        }
        for (Scalar& s : alphas[1].tensor) s *= Scalar::from_int(f5, 2);
        CHECK_THROWS_AS(factor_blockwise_balanced(rows, cols, alphas, target), NotBalanced);
    }
}

TEST_CASE("random matrix rings pass the algebra axioms") {
    testsupport::Rng rng(606);
    for (int trial = 0; trial < 20; ++trial) {
        FieldSpec f = testsupport::random_field(rng);
        std::size_t n = 1 + rng() % 3;
        ContextPtr g = testsupport::random_context(rng, f, n, 2);
        CHECK(verify_generalised_context(*g).passed());
        MatrixRing ring = matrix_ring(g, Checked::no);
        CHECK(verify_algebra(*ring.ring).passed());
    }
}

TEST_CASE("2x2 verification agrees with the six classical axioms checked directly") {
    testsupport::Rng rng(777);
    for (int trial = 0; trial < 10; ++trial) {
        FieldSpec f = testsupport::random_field(rng);
        ContextPtr g = testsupport::random_context(rng, f, 2, 2);
        ClassicalContext c = as_classical(*g);
        const bool generalised_ok = verify_generalised_context(*g).passed();

        // direct classical checks: both pairings balanced and bimodule maps,
        // and the two associativity families
        bool classical_ok = is_balanced(c.zeta, *c.S).balanced &&
                            is_balanced(c.theta, *c.R).balanced;
        ReportSection probe{"classical"};
        check_left_linear(c.zeta, probe, "zeta");
        check_right_linear(c.zeta, probe, "zeta");
        check_left_linear(c.theta, probe, "theta");
        check_right_linear(c.theta, probe, "theta");
        // zeta(n (x) l) n' = n theta(l (x) n') and theta(l (x) n) l' = l zeta(n (x) l')
        BilinearBlockMap lam_n;
        lam_n.left_factor = regular_bimodule(c.R);
        lam_n.right_factor = c.N;
        lam_n.codomain = c.N;
        lam_n.tensor = c.N->left_action;
        BilinearBlockMap rho_l;
        rho_l.left_factor = c.L;
        rho_l.right_factor = regular_bimodule(c.R);
        rho_l.codomain = c.L;
        rho_l.tensor = c.L->right_action;
        BilinearBlockMap lam_l;
        lam_l.left_factor = regular_bimodule(c.S);
        lam_l.right_factor = c.L;
        lam_l.codomain = c.L;
        lam_l.tensor = c.L->left_action;
        BilinearBlockMap rho_n_s;  // N x S -> N
        rho_n_s.left_factor = c.N;
        rho_n_s.right_factor = regular_bimodule(c.S);
        rho_n_s.codomain = c.N;
        rho_n_s.tensor = c.N->right_action;
        // lambda_N(zeta (x) 1) = rho_N^S(1 (x) theta) on N (x) L (x) N
        check_mixed_triple(rho_n_s, c.theta, lam_n, c.zeta, probe, "assoc1");
        // lambda_L(theta (x) 1) = rho_L^R(1 (x) zeta) on L (x) N (x) L
        check_mixed_triple(rho_l, c.zeta, lam_l, c.theta, probe, "assoc2");
        classical_ok = classical_ok && probe.passed();

        CHECK(generalised_ok == classical_ok);
        CHECK(generalised_ok);  // the generator only produces valid contexts
    }
}
