// Regenerates the JSON fixtures under fixtures/ from their programmatic
// definitions. Run from the repository root after changing the spec format:
//   build/tools/make_fixtures [output-dir]

#include <iostream>

#include "morita/json_io.hpp"

using namespace morita;

namespace {

AlgebraPtr upper_triangular_2(const FieldSpec& f) {
    // basis e11, e12, e22
    Algebra a;
    a.field = f;
    a.dim = 3;
    a.name = "UT2";
    a.mul.assign(27, Scalar::zero(f));
    a.c(0, 0, 0) = Scalar::one(f);  // e11 e11 = e11
    a.c(0, 1, 1) = Scalar::one(f);  // e11 e12 = e12
    a.c(1, 2, 1) = Scalar::one(f);  // e12 e22 = e12
    a.c(2, 2, 2) = Scalar::one(f);  // e22 e22 = e22
    a.idempotents = {unit_vec(f, 3, 0), unit_vec(f, 3, 2)};
    Vec id = zero_vec(f, 3);
    id[0] = Scalar::one(f);
    id[2] = Scalar::one(f);
    a.identity = id;
    return std::make_shared<Algebra>(std::move(a));
}

}  // namespace

int main(int argc, char** argv) {
    const std::string dir = argc > 1 ? argv[1] : "fixtures";
    const FieldSpec f5 = prime_field(5);

    {
        SpecFile spec;
        spec.field = f5;
        spec.algebras["M2"] = std::make_shared<Algebra>(matrix_algebra(f5, 2));
        save_spec_file(spec, dir + "/m2f5.json");
    }
    {
        SpecFile spec;
        spec.field = f5;
        Algebra bad = matrix_algebra(f5, 2);
        bad.name = "M2bad";
        // corrupt e12 * e21 = e11 into 2 e11 (basis order e11, e12, e21, e22)
        bad.c(1, 2, 0) = Scalar::from_int(f5, 2);
        spec.algebras["M2bad"] = std::make_shared<Algebra>(std::move(bad));
        save_spec_file(spec, dir + "/m2f5_corrupt.json");
    }
    {
        // Peirce context of the upper-triangular 2x2 algebra at e22, plus the
        // amplification of its corner to M_2; corner-replace with --t 2
        SpecFile spec;
        spec.field = f5;
        AlgebraPtr ut = upper_triangular_2(f5);
        spec.algebras["UT2"] = ut;
        PeirceDecomposition pd = peirce(ut, unit_vec(f5, 3, 2));
        register_context(spec, pd.context, "peirce_ut");
        ClassicalContext amp = amplification_context(pd.context->algebras[1], 2);
        register_classical(spec, amp, "amp");
        save_spec_file(spec, dir + "/peirce_m2.json");
    }
    {
        // triangular context (R, T; M, 0; 0, 0) over F_5 together with the
        // zero-pairing classical context on R itself: corner replacement is a
        // valid Morita context but the certificate must be refused
        SpecFile spec;
        spec.field = f5;
        auto R = std::make_shared<Algebra>(field_algebra(f5));
        auto T = std::make_shared<Algebra>(field_algebra(f5));
        auto M = std::make_shared<Bimodule>();
        M->left = R;
        M->right = T;
        M->dim = 1;
        M->name = "M";
        M->left_action = {Scalar::one(f5)};
        M->right_action = {Scalar::one(f5)};
        auto Z = zero_bimodule(T, R);
        spec.algebras["R"] = R;
        spec.algebras["T"] = T;
        spec.bimodules["M"] = M;
        spec.bimodules["Z"] = Z;
        std::vector<std::vector<BimodulePtr>> off(2, std::vector<BimodulePtr>(2));
        off[0][1] = M;
        off[1][0] = Z;
        auto g = std::make_shared<GeneralisedContext>(make_context_frame({R, T}, off, "triangular"));
        spec.generalised["triangular"] = g;
        // the same shape as a classical context: N = M, L = 0, zero pairings
        std::vector<Scalar> zeta;  // 1*0*1 entries
        std::vector<Scalar> theta;
        spec.classical.emplace("tri_zero",
                               make_classical(R, T, M, Z, std::move(zeta), std::move(theta),
                                              "tri_zero"));
        ClassicalContext amp = amplification_context(R, 2);
        register_classical(spec, amp, "amp");
        save_spec_file(spec, dir + "/triangular.json");
    }
    std::cout << "fixtures written to " << dir << "\n";
    return 0;
}
