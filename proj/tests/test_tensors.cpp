#include <catch2/catch_amalgamated.hpp>

#include "morita/context.hpp"
#include "support/random_structures.hpp"

using namespace morita;

namespace {

const FieldSpec f5 = prime_field(5);

}  // namespace

TEST_CASE("tensor_over on the worked examples") {
    auto m2 = std::make_shared<Algebra>(matrix_algebra(f5, 2));
    auto fld = std::make_shared<Algebra>(field_algebra(f5));
    BimodulePtr reg = regular_bimodule(m2);
    BimodulePtr rows = rows_bimodule(fld, m2, 2);
    BimodulePtr cols = cols_bimodule(fld, m2, 2);

    SECTION("A (x)_A A has the dimension of A for unital A") {
        TensorSpace ts = tensor_over(reg, reg);
        CHECK(ts.quotient->dim == 4);
        CHECK(verify_bimodule(*ts.quotient).passed());
    }
    SECTION("rows (x)_{M_2} columns is one-dimensional; the relation rank is 3") {
        TensorSpace ts = tensor_over(rows, cols);
        CHECK(ts.quotient->dim == 1);
        CHECK(rank(tensor_relation_matrix(*rows, *cols)) == 3);
    }
    SECTION("columns (x)_F rows is four-dimensional (no relations over the field)") {
        TensorSpace ts = tensor_over(cols, rows);
        CHECK(ts.quotient->dim == 4);
    }
    SECTION("middle-algebra mismatch throws") {
        CHECK_THROWS_AS(tensor_over(rows, rows), AlgebraMismatch);
    }
    SECTION("zero factor absorbs") {
        BimodulePtr z = zero_bimodule(fld, m2);
        CHECK(tensor_over(z, reg).quotient->dim == 0);
    }
    SECTION("projection and section are mutually inverse on the quotient") {
        TensorSpace ts = tensor_over(rows, cols);
        CHECK(mul(ts.projection, ts.section) == Matrix::identity(f5, ts.quotient->dim));
    }
}

TEST_CASE("is_balanced") {
    auto m2 = std::make_shared<Algebra>(matrix_algebra(f5, 2));
    auto fld = std::make_shared<Algebra>(field_algebra(f5));
    BimodulePtr rows = rows_bimodule(fld, m2, 2);
    BimodulePtr cols = cols_bimodule(fld, m2, 2);

    SECTION("context multiplication maps are balanced") {
        PeirceDecomposition pd = peirce(m2, unit_vec(f5, 4, 0));
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t k = 0; k < 2; ++k)
                for (std::size_t j = 0; j < 2; ++j)
                    CHECK(is_balanced(pd.context->phi(i, k, j), *pd.context->algebras[k]).balanced);
    }
    SECTION("the zero map is balanced") {
        BilinearBlockMap z = zero_block_map(rows, cols, regular_bimodule(fld));
        CHECK(is_balanced(z, *m2).balanced);
    }
    SECTION("a corrupted pairing is unbalanced with a witness") {
        ClassicalContext amp = amplification_context(fld, 2);
        BilinearBlockMap bad = amp.zeta;
        bad.t(0, 0, 0) = Scalar::from_int(f5, 2);  // zeta(row_1, col_1) corrupted
        BalanceCheck check = is_balanced(bad, *amp.S);
        CHECK_FALSE(check.balanced);
        REQUIRE(check.witness.has_value());
    }
}

TEST_CASE("factor_balanced") {
    auto m2 = std::make_shared<Algebra>(matrix_algebra(f5, 2));
    auto fld = std::make_shared<Algebra>(field_algebra(f5));
    ClassicalContext amp = amplification_context(fld, 2);

    SECTION("zeta factors through rows (x)_{M_2} columns onto the field") {
        TensorSpace ts = tensor_over(amp.N, amp.L);
        REQUIRE(ts.quotient->dim == 1);
        Matrix factored = factor_balanced(amp.zeta, ts);
        CHECK(rank(factored) == 1);  // surjective onto the one-dimensional field
        // f . projection = the ambient map, on every ambient basis vector
        for (std::size_t i = 0; i < amp.N->dim; ++i)
            for (std::size_t j = 0; j < amp.L->dim; ++j) {
                Vec ambient = zero_vec(f5, ts.ambient_dim());
                ambient[ts.ambient_index(i, j)] = Scalar::one(f5);
                Vec via_quotient = apply_matrix(factored, apply_matrix(ts.projection, ambient));
                Vec direct(amp.zeta.row(i, j), amp.zeta.row(i, j) + 1);
                CHECK(via_quotient == direct);
            }
    }
    SECTION("the zero map factors to the zero map") {
        TensorSpace ts = tensor_over(amp.N, amp.L);
        BilinearBlockMap z = zero_block_map(amp.N, amp.L, regular_bimodule(fld));
        Matrix factored = factor_balanced(z, ts);
        CHECK(rank(factored) == 0);
    }
    SECTION("multiplication of A factors to the canonical isomorphism A (x)_A A -> A") {
        BimodulePtr reg = regular_bimodule(m2);
        TensorSpace ts = tensor_over(reg, reg);
        BilinearBlockMap mu;
        mu.left_factor = reg;
        mu.right_factor = reg;
        mu.codomain = reg;
        mu.tensor = m2->mul;
        Matrix factored = factor_balanced(mu, ts);
        CHECK(rank(factored) == 4);  // isomorphism
    }
    SECTION("an unbalanced map is rejected") {
        TensorSpace ts = tensor_over(amp.N, amp.L);
        BilinearBlockMap bad = amp.zeta;
        bad.t(0, 0, 0) = Scalar::from_int(f5, 2);
        CHECK_THROWS_AS(factor_balanced(bad, ts), NotBalanced);
    }
}

TEST_CASE("induced_tensor_map") {
    auto fld = std::make_shared<Algebra>(field_algebra(f5));
    auto m2 = std::make_shared<Algebra>(matrix_algebra(f5, 2));
    BimodulePtr rows = rows_bimodule(fld, m2, 2);
    BimodulePtr cols = cols_bimodule(fld, m2, 2);
    TensorSpace ts = tensor_over(rows, cols);

    SECTION("identity factors induce the identity") {
        Matrix f = Matrix::identity(f5, rows->dim);
        Matrix g = Matrix::identity(f5, cols->dim);
        CHECK(induced_tensor_map(f, g, ts, ts) == Matrix::identity(f5, ts.quotient->dim));
    }
    SECTION("a zero factor induces the zero map") {
        Matrix f(f5, rows->dim, rows->dim);
        Matrix g = Matrix::identity(f5, cols->dim);
        Matrix induced = induced_tensor_map(f, g, ts, ts);
        CHECK(rank(induced) == 0);
    }
    SECTION("maps that do not preserve the relations are rejected with a witness") {
        // swapping the two row slots is not right-M_2-linear, so it cannot descend
        Matrix f(f5, rows->dim, rows->dim);
        f.at(0, 1) = Scalar::one(f5);
        f.at(1, 0) = Scalar::one(f5);
        Matrix g = Matrix::identity(f5, cols->dim);
        CHECK_THROWS_AS(induced_tensor_map(f, g, ts, ts), RelationsNotPreserved);
    }
    SECTION("phi (x) 1 matches blockwise evaluation on a verified context") {
        // inside peirce(M_2) tensor the (1,2) block with the regular right
        // module of the corner and compare against direct evaluation
        PeirceDecomposition pd = peirce(m2, unit_vec(f5, 4, 0));
        ContextPtr g = pd.context;
        BimodulePtr m12 = g->blocks[0][1];
        BimodulePtr a2 = g->blocks[1][1];
        TensorSpace src = tensor_over(m12, a2);
        // f = right action of a fixed element of A_2 on M_12 = phi_122( . (x) s)
        Matrix f(f5, m12->dim, m12->dim);
        for (std::size_t i = 0; i < m12->dim; ++i) {
            Vec img = act_right(*m12, unit_vec(f5, m12->dim, i), unit_vec(f5, a2->dim, 0));
            for (std::size_t k = 0; k < m12->dim; ++k) f.at(k, i) = img[k];
        }
        Matrix induced =
            induced_tensor_map(f, Matrix::identity(f5, a2->dim), src, src);
        // compare on every ambient generator
        for (std::size_t i = 0; i < m12->dim; ++i)
            for (std::size_t j = 0; j < a2->dim; ++j) {
                Vec ambient = zero_vec(f5, src.ambient_dim());
                ambient[src.ambient_index(i, j)] = Scalar::one(f5);
                Vec lhs = apply_matrix(induced, apply_matrix(src.projection, ambient));
                Vec fi = f.col(i);
                Vec image = zero_vec(f5, src.ambient_dim());
                for (std::size_t k = 0; k < m12->dim; ++k)
                    image[src.ambient_index(k, j)] = fi[k];
                Vec rhs = apply_matrix(src.projection, image);
                CHECK(lhs == rhs);
            }
    }
}

TEST_CASE("tensor dimension matches the naive relation-rank oracle") {
    testsupport::Rng rng(4242);
    for (int trial = 0; trial < 60; ++trial) {
        FieldSpec f = testsupport::random_field(rng);
        testsupport::BimodulePair pair = testsupport::random_bimodule_pair(rng, f, 3);
        TensorSpace ts = tensor_over(pair.m, pair.n);
        CHECK(ts.quotient->dim == testsupport::naive_tensor_dim(*pair.m, *pair.n));
        CHECK(verify_bimodule(*ts.quotient).passed());
    }
}

TEST_CASE("unital modules tensor trivially with the ring") {
    // dim(M (x)_A A) = dim M and the rho-factorization is an isomorphism
    testsupport::Rng rng(515);
    for (int trial = 0; trial < 25; ++trial) {
        FieldSpec f = testsupport::random_field(rng);
        testsupport::BimodulePair pair = testsupport::random_bimodule_pair(rng, f, 3);
        const BimodulePtr& m = pair.m;
        if (!right_unital(*m)) continue;
        auto a = m->right;
        TensorSpace ts = tensor_over(m, regular_bimodule(a));
        CHECK(ts.quotient->dim == m->dim);
        BilinearBlockMap rho;
        rho.left_factor = m;
        rho.right_factor = regular_bimodule(a);
        rho.codomain = m;
        rho.tensor = m->right_action;
        Matrix factored = factor_balanced(rho, ts);
        CHECK(rank(factored) == m->dim);
    }
}
