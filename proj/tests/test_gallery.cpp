#include <catch2/catch_amalgamated.hpp>

#include "morita/gallery.hpp"
#include "support/random_structures.hpp"

using namespace morita;

namespace {
const FieldSpec f5 = prime_field(5);
}

TEST_CASE("triangular gallery instance") {
    GalleryInstance inst = triangular_instance(f5);
    INFO(inst.table());
    CHECK(inst.passed());
    CHECK(inst.actual.at("dim L(x)M") == "2");
    CHECK(inst.actual.at("composed lower-left dim") == "0");
    CHECK(inst.actual.at("original ring dim") == "3");
    CHECK(inst.actual.at("composed ring dim") == "7");
}

TEST_CASE("prospecies gallery instance") {
    GalleryInstance inst = prospecies_instance(f5);
    INFO(inst.table());
    CHECK(inst.passed());
    // the chain path block M_13 = N_12 (x) N_23 is one-dimensional
    CHECK(inst.actual.at("original dim[1][3]") == "1");
    // composed M'_12 = L (x) N_12 is two-dimensional
    CHECK(inst.actual.at("composed dim[1][2]") == "2");
    CHECK(inst.actual.at("lower triangle zero") == "true");
}

TEST_CASE("tensor ring rejects cyclic species") {
    std::vector<AlgebraPtr> vertices;
    for (int i = 0; i < 2; ++i)
        vertices.push_back(std::make_shared<Algebra>(field_algebra(f5)));
    std::vector<std::vector<BimodulePtr>> species(2, std::vector<BimodulePtr>(2));
    auto arrow = std::make_shared<Bimodule>();
    arrow->left = vertices[1];
    arrow->right = vertices[0];
    arrow->dim = 1;
    arrow->name = "back";
    arrow->left_action = {Scalar::one(f5)};
    arrow->right_action = {Scalar::one(f5)};
    species[1][0] = arrow;  // arrow against the vertex order
    CHECK_THROWS_AS(tensor_ring_context(vertices, species, "cyclic"), CyclicProspecies);
}

TEST_CASE("multi-path tensor rings verify") {
    // two parallel length-2 routes 1 -> 2 -> 3 plus a direct arrow 1 -> 3:
    // M_13 is the sum of the path component and the arrow component
    std::vector<AlgebraPtr> vertices;
    for (int i = 0; i < 3; ++i)
        vertices.push_back(std::make_shared<Algebra>(field_algebra(f5)));
    auto arrow = [&](int i, int j, const std::string& name) {
        auto m = std::make_shared<Bimodule>();
        m->left = vertices[i];
        m->right = vertices[j];
        m->dim = 1;
        m->name = name;
        m->left_action = {Scalar::one(f5)};
        m->right_action = {Scalar::one(f5)};
        return m;
    };
    std::vector<std::vector<BimodulePtr>> species(3, std::vector<BimodulePtr>(3));
    species[0][1] = arrow(0, 1, "N12");
    species[1][2] = arrow(1, 2, "N23");
    species[0][2] = arrow(0, 2, "N13");
    ContextPtr g = tensor_ring_context(vertices, species, "two-route");
    CHECK(g->blocks[0][2]->dim == 2);  // direct arrow + the length-2 path
    CHECK(verify_generalised_context(*g).passed());
    MatrixRing ring = matrix_ring(g, Checked::no);
    CHECK(verify_algebra(*ring.ring).passed());
}

TEST_CASE("clannish gallery instance at p = 5") {
    for (int sign : {+1, -1}) {
        GalleryInstance inst = clannish_instance(5, sign);
        INFO(inst.table());
        CHECK(inst.passed());
        CHECK(inst.actual.at("left presentation ring dim") == "21");
        CHECK(inst.actual.at("right presentation ring dim") == "30");
    }
}

TEST_CASE("clannish rejects bad primes") {
    CHECK_THROWS_AS(clannish_instance(6, 1), BadPrime);
    CHECK_THROWS_AS(clannish_instance(7, 1), BadPrime);  // 7 = 3 mod 4
}

TEST_CASE("enough idempotents instance on M_3") {
    auto a = std::make_shared<Algebra>(matrix_algebra(f5, 3));
    GalleryInstance inst = enough_idempotents_instance(a, {true, false, false});
    inst.expected.emplace_back("partition dim[1][1]", "1");
    inst.expected.emplace_back("partition dim[1][2]", "2");
    inst.expected.emplace_back("partition dim[2][1]", "2");
    inst.expected.emplace_back("partition dim[2][2]", "4");
    inst.expected.emplace_back("partition ring dim", "9");
    INFO(inst.table());
    CHECK(inst.passed());
    CHECK(inst.actual.at("reassembled dim") == "9");
}

TEST_CASE("enough idempotents rejects one-sided colorings") {
    auto a = std::make_shared<Algebra>(matrix_algebra(f5, 3));
    CHECK_THROWS_AS(enough_idempotents_instance(a, {true, true, true}), IncompletePartition);
    CHECK_THROWS_AS(enough_idempotents_instance(a, {false, false, false}), IncompletePartition);
}
