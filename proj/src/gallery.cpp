#include "morita/gallery.hpp"

#include <algorithm>
#include <sstream>

namespace morita {

namespace {

std::string idx1(std::size_t i) { return std::to_string(i + 1); }

void record_dims(GalleryInstance& inst, const std::string& prefix, const GeneralisedContext& g) {
    for (std::size_t i = 0; i < g.n(); ++i)
        for (std::size_t j = 0; j < g.n(); ++j)
            inst.actual[prefix + " dim[" + idx1(i) + "][" + idx1(j) + "]"] =
                std::to_string(g.blocks[i][j]->dim);
    std::size_t total = 0;
    for (std::size_t i = 0; i < g.n(); ++i)
        for (std::size_t j = 0; j < g.n(); ++j) total += g.blocks[i][j]->dim;
    inst.actual[prefix + " ring dim"] = std::to_string(total);
}

void expect_dims(GalleryInstance& inst, const std::string& prefix,
                 const std::vector<std::vector<std::size_t>>& dims) {
    std::size_t total = 0;
    for (std::size_t i = 0; i < dims.size(); ++i)
        for (std::size_t j = 0; j < dims[i].size(); ++j) {
            inst.expected.emplace_back(prefix + " dim[" + idx1(i) + "][" + idx1(j) + "]",
                                       std::to_string(dims[i][j]));
            total += dims[i][j];
        }
    inst.expected.emplace_back(prefix + " ring dim", std::to_string(total));
}

BimodulePtr scalar_bimodule(const AlgebraPtr& a, const AlgebraPtr& b, const std::string& name) {
    // one-dimensional bimodule between two one-dimensional algebras
    auto m = std::make_shared<Bimodule>();
    m->left = a;
    m->right = b;
    m->dim = 1;
    m->name = name;
    m->left_action = {Scalar::one(a->field)};
    m->right_action = {Scalar::one(a->field)};
    return m;
}

}  // namespace

std::string GalleryInstance::table() const {
    std::ostringstream out;
    out << "instance " << name << "\n";
    for (const auto& [k, v] : expected) {
        auto it = actual.find(k);
        const std::string got = it == actual.end() ? "<missing>" : it->second;
        out << "  " << k << ": expected " << v << ", got " << got
            << (got == v ? "" : "   <-- MISMATCH") << "\n";
    }
    out << "  report: " << (report.passed() ? "pass" : "FAIL") << "\n";
    out << "  certificate: expected " << (certificate_expected ? "granted" : "refused") << ", got "
        << (certificate_granted ? "granted" : "refused") << "\n";
    return out.str();
}

GalleryInstance triangular_instance(const FieldSpec& f) {
    GalleryInstance inst;
    inst.name = "triangular";

    auto R = std::make_shared<Algebra>(field_algebra(f));
    auto T = std::make_shared<Algebra>(field_algebra(f));
    auto M = scalar_bimodule(R, T, "M");
    std::vector<std::vector<BimodulePtr>> off(2, std::vector<BimodulePtr>(2));
    off[0][1] = M;
    off[1][0] = zero_bimodule(T, R);
    auto g = std::make_shared<GeneralisedContext>(
        make_context_frame({R, T}, off, "triangular"));

    ClassicalContext c = amplification_context(R, 2);
    SurgeryResult res = corner_replace(g, c, 0);
    inst.report = res.report;

    expect_dims(inst, "original", {{1, 1}, {0, 1}});
    expect_dims(inst, "composed", {{4, 2}, {0, 1}});
    inst.expected.emplace_back("composed pairings zero", "true");
    inst.expected.emplace_back("composed lower-left dim", "0");
    inst.expected.emplace_back("dim L(x)M", "2");

    record_dims(inst, "original", *g);
    record_dims(inst, "composed", *res.composed);
    bool pairings_zero = true;
    for (const Scalar& s : res.composed->phi(0, 1, 0).tensor)
        if (!s.is_zero()) pairings_zero = false;
    for (const Scalar& s : res.composed->phi(1, 0, 1).tensor)
        if (!s.is_zero()) pairings_zero = false;
    inst.actual["composed pairings zero"] = pairings_zero ? "true" : "false";
    inst.actual["composed lower-left dim"] = std::to_string(res.composed->blocks[1][0]->dim);
    inst.actual["dim L(x)M"] = std::to_string(res.composed->blocks[0][1]->dim);

    EquivalenceCertificate cert = certify_equivalence(res);
    inst.certificate_expected = true;
    inst.certificate_granted = cert.granted;

    inst.inputs.field = f;
    inst.inputs.algebras["R"] = R;
    inst.inputs.algebras["T"] = T;
    inst.inputs.bimodules["M"] = M;
    inst.inputs.bimodules["Z"] = g->blocks[1][0];
    inst.inputs.generalised["triangular"] = g;
    register_classical(inst.inputs, c, "amp");
    return inst;
}

ContextPtr tensor_ring_context(const std::vector<AlgebraPtr>& vertex_algebras,
                               const std::vector<std::vector<BimodulePtr>>& species,
                               const std::string& name) {
    const std::size_t n = vertex_algebras.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i < j) continue;
            if (species[i][j] && species[i][j]->dim > 0)
                throw CyclicProspecies(
                    "tensor_ring_context: species arrow " + idx1(i) + " -> " + idx1(j) +
                    " violates acyclicity (vertices must be topologically ordered)");
        }

    using Path = std::vector<std::size_t>;  // vertex sequence i = d0 < ... < dl = j
    struct Component {
        Path path;
        TensorSpace space;     // valid for length >= 2
        BimodulePtr module;    // the underlying bimodule (species edge for length 1)
    };
    // components[i][j]: all paths from i to j, ordered lexicographically
    std::vector<std::vector<std::vector<Component>>> components(
        n, std::vector<std::vector<Component>>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (species[i][j] && species[i][j]->dim > 0)
                components[i][j].push_back(Component{{i, j}, TensorSpace{}, species[i][j]});
    // extend paths in order of length
    for (std::size_t len = 2; len < n; ++len) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                for (std::size_t ci = 0; ci < components[i][j].size(); ++ci) {
                    if (components[i][j][ci].path.size() != len) continue;
                    for (std::size_t k = j + 1; k < n; ++k) {
                        if (!species[j][k] || species[j][k]->dim == 0) continue;
                        TensorSpace ts = tensor_over(components[i][j][ci].module, species[j][k]);
                        Path p = components[i][j][ci].path;
                        p.push_back(k);
                        BimodulePtr q = ts.quotient;
                        components[i][k].push_back(Component{std::move(p), std::move(ts), q});
                    }
                }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            std::sort(components[i][j].begin(), components[i][j].end(),
                      [](const Component& a, const Component& b) { return a.path < b.path; });

    std::vector<std::vector<DirectSumBimodule>> sums(n, std::vector<DirectSumBimodule>(n));
    std::vector<std::vector<BimodulePtr>> off(n, std::vector<BimodulePtr>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (components[i][j].empty()) {
                off[i][j] = zero_bimodule(vertex_algebras[i], vertex_algebras[j]);
                continue;
            }
            std::vector<BimodulePtr> parts;
            for (const Component& comp : components[i][j]) parts.push_back(comp.module);
            sums[i][j] = direct_sum_bimodule(parts, "M" + idx1(i) + idx1(j));
            off[i][j] = sums[i][j].sum;
        }

    GeneralisedContext g = make_context_frame(vertex_algebras, off, name);

    // phi_ikj: component (P, Q) maps into component P.Q by the canonical map,
    // built by peeling Q one edge at a time (left-associated tensors)
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) {
                if (k == i || k == j) continue;
                if (components[i][k].empty() || components[k][j].empty()) continue;
                BilinearBlockMap& phi = g.maps[i][k][j];
                for (std::size_t pi = 0; pi < components[i][k].size(); ++pi)
                    for (std::size_t qi = 0; qi < components[k][j].size(); ++qi) {
                        const Component& P = components[i][k][pi];
                        const Component& Q = components[k][j][qi];
                        Path pq = P.path;
                        pq.insert(pq.end(), Q.path.begin() + 1, Q.path.end());
                        std::size_t target = 0;
                        while (components[i][j][target].path != pq) ++target;

                        // walk the concatenation edge by edge; `current` maps
                        // T_P x T_{Q-prefix} -> T_{P.prefix} as a tensor
                        std::vector<Component> prefix_chain;  // components of P.(prefix of Q)
                        {
                            Path p = P.path;
                            for (std::size_t e = 1; e < Q.path.size(); ++e) {
                                p.push_back(Q.path[e]);
                                std::size_t idx = 0;
                                while (components[i][p.back()][idx].path != p) ++idx;
                                prefix_chain.push_back(components[i][p.back()][idx]);
                            }
                        }
                        // base step: T_P x N_edge -> T_{P.e} is the tensor projection
                        const Component& first_target = prefix_chain[0];
                        Matrix current(first_target.module->left->field, 0, 0);
                        {
                            const TensorSpace& ts = first_target.space;
                            // current[(x, y)] holds coordinates of the class of x (x) y
                            current = ts.projection;  // (q x (dimP * dimEdge))
                        }
                        for (std::size_t e = 1; e < prefix_chain.size(); ++e) {
                            const Component& tgt = prefix_chain[e];
                            const Component& src_q = [&]() -> const Component& {
                                // component of Q-prefix of length e+1 (edges), path Q[0..e+1]
                                Path qp(Q.path.begin(), Q.path.begin() + e + 2);
                                std::size_t idx = 0;
                                while (components[k][qp.back()][idx].path != qp) ++idx;
                                return components[k][qp.back()][idx];
                            }();
                            // fn(x (x) [q' (x) n]) = [current(x, q') (x) n], descended
                            const TensorSpace& qs = src_q.space;
                            const TensorSpace& tspace = tgt.space;
                            const std::size_t dimP = P.module->dim;
                            const std::size_t dimQp = qs.left_factor->dim;
                            const std::size_t dimN = qs.right_factor->dim;
                            Matrix next(current.field(), tspace.quotient->dim, dimP * src_q.module->dim);
                            for (std::size_t x = 0; x < dimP; ++x) {
                                Matrix fx(current.field(), tspace.left_factor->dim, dimQp);
                                for (std::size_t qp = 0; qp < dimQp; ++qp)
                                    for (std::size_t r = 0; r < tspace.left_factor->dim; ++r)
                                        fx.at(r, qp) = current.at(r, x * dimQp + qp);
                                Matrix fxg = induced_tensor_map(
                                    fx, Matrix::identity(current.field(), dimN), qs, tspace);
                                for (std::size_t q = 0; q < src_q.module->dim; ++q)
                                    for (std::size_t r = 0; r < tspace.quotient->dim; ++r)
                                        next.at(r, x * src_q.module->dim + q) = fxg.at(r, q);
                            }
                            current = std::move(next);
                        }
                        // scatter into the direct sums
                        const std::size_t po = sums[i][k].offsets.empty() ? 0 : sums[i][k].offsets[pi];
                        const std::size_t qo = sums[k][j].offsets.empty() ? 0 : sums[k][j].offsets[qi];
                        const std::size_t to = sums[i][j].offsets[target];
                        const std::size_t dimQ = Q.module->dim;
                        for (std::size_t x = 0; x < P.module->dim; ++x)
                            for (std::size_t y = 0; y < dimQ; ++y)
                                for (std::size_t z = 0; z < components[i][j][target].module->dim; ++z)
                                    phi.t(po + x, qo + y, to + z) = current.at(z, x * dimQ + y);
                    }
            }
    return std::make_shared<GeneralisedContext>(std::move(g));
}

GalleryInstance prospecies_instance(const FieldSpec& f) {
    GalleryInstance inst;
    inst.name = "prospecies";

    std::vector<AlgebraPtr> vertices;
    for (int i = 0; i < 3; ++i) {
        Algebra a = field_algebra(f);
        a.name = "A" + std::to_string(i + 1);
        vertices.push_back(std::make_shared<Algebra>(std::move(a)));
    }
    std::vector<std::vector<BimodulePtr>> species(3, std::vector<BimodulePtr>(3));
    species[0][1] = scalar_bimodule(vertices[0], vertices[1], "N12");
    species[1][2] = scalar_bimodule(vertices[1], vertices[2], "N23");
    ContextPtr g = tensor_ring_context(vertices, species, "prospecies");

    ClassicalContext c = amplification_context(vertices[0], 2);
    SurgeryResult res = corner_replace(g, c, 0);
    inst.report = res.report;

    expect_dims(inst, "original", {{1, 1, 1}, {0, 1, 1}, {0, 0, 1}});
    expect_dims(inst, "composed", {{4, 2, 2}, {0, 1, 1}, {0, 0, 1}});
    inst.expected.emplace_back("lower triangle zero", "true");

    record_dims(inst, "original", *g);
    record_dims(inst, "composed", *res.composed);
    bool lower_zero = g->blocks[1][0]->dim == 0 && g->blocks[2][0]->dim == 0 &&
                      g->blocks[2][1]->dim == 0;
    inst.actual["lower triangle zero"] = lower_zero ? "true" : "false";

    EquivalenceCertificate cert = certify_equivalence(res);
    inst.certificate_expected = true;
    inst.certificate_granted = cert.granted;

    inst.inputs.field = f;
    for (std::size_t i = 0; i < 3; ++i) inst.inputs.algebras[vertices[i]->name] = vertices[i];
    inst.inputs.bimodules["N12"] = species[0][1];
    inst.inputs.bimodules["N23"] = species[1][2];
    register_context(inst.inputs, g, "prospecies");
    register_classical(inst.inputs, c, "amp");
    return inst;
}

namespace {

std::uint64_t smallest_nonsquare(std::uint64_t p) {
    for (std::uint64_t a = 2; a < p; ++a) {
        // Euler criterion by repeated squaring
        std::uint64_t r = 1, base = a % p, e = (p - 1) / 2;
        while (e) {
            if (e & 1) r = (r * base) % p;
            base = (base * base) % p;
            e >>= 1;
        }
        if (r == p - 1) return a;
    }
    throw BadPrime("no non-square found modulo " + std::to_string(p));
}

// F_{p^2} = F_p(u), u^2 = eps, basis (1, u)
Algebra quadratic_field_algebra(const FieldSpec& f, std::uint64_t eps, const std::string& name) {
    Algebra a;
    a.field = f;
    a.dim = 2;
    a.name = name;
    a.mul.assign(8, Scalar::zero(f));
    a.c(0, 0, 0) = Scalar::one(f);
    a.c(0, 1, 1) = Scalar::one(f);
    a.c(1, 0, 1) = Scalar::one(f);
    a.c(1, 1, 0) = Scalar::from_int(f, static_cast<long long>(eps));
    a.idempotents = {unit_vec(f, 2, 0)};
    a.identity = unit_vec(f, 2, 0);
    return a;
}

// F_{p^4} = F_p(v), v^4 = eps, basis (1, v, v^2, v^3); u = v^2
Algebra quartic_field_algebra(const FieldSpec& f, std::uint64_t eps, const std::string& name) {
    Algebra a;
    a.field = f;
    a.dim = 4;
    a.name = name;
    a.mul.assign(64, Scalar::zero(f));
    Scalar e = Scalar::from_int(f, static_cast<long long>(eps));
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            std::size_t s = i + j;
            if (s < 4)
                a.c(i, j, s) = Scalar::one(f);
            else
                a.c(i, j, s - 4) = e;
        }
    a.idempotents = {unit_vec(f, 4, 0)};
    a.identity = unit_vec(f, 4, 0);
    return a;
}

}  // namespace

GalleryInstance clannish_instance(std::uint64_t p, int sign) {
    if (!is_prime(p)) throw BadPrime(std::to_string(p) + " is not prime");
    if (p % 4 != 1)
        throw BadPrime(std::to_string(p) + " is not congruent to 1 mod 4, so F_" +
                       std::to_string(p) + " has no primitive 4th root of unity");
    if (sign != 1 && sign != -1) throw MalformedInput("clannish_instance: sign must be +1 or -1");

    GalleryInstance inst;
    inst.name = "clannish(p=" + std::to_string(p) + ", w = u(x)1" + (sign > 0 ? "+" : "-") +
                "1(x)u)";
    const FieldSpec f = prime_field(p);
    const std::uint64_t eps = smallest_nonsquare(p);

    auto Lfield = std::make_shared<Algebra>(quadratic_field_algebra(f, eps, "L"));
    auto Efield = std::make_shared<Algebra>(quartic_field_algebra(f, eps, "E"));
    auto Ffield = std::make_shared<Algebra>(field_algebra(f));

    // Frobenius rho(v) = zeta v with zeta = eps^((p-1)/4); the twist used for
    // the L^theta factor is the nontrivial automorphism sigma = rho|_L,
    // paired with the minus sign of w; the identity twist gets the plus sign.
    const bool twist = (sign < 0);

    // L^theta as an L-L-bimodule (right action through the twist)
    auto Ltheta = std::make_shared<Bimodule>();
    Ltheta->left = Lfield;
    Ltheta->right = Lfield;
    Ltheta->dim = 2;
    Ltheta->name = "L^theta";
    Ltheta->left_action = Lfield->mul;
    Ltheta->right_action.assign(8, Scalar::zero(f));
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t b = 0; b < 2; ++b) {
            Vec tb = unit_vec(f, 2, b);
            if (twist && b == 1) tb[1] = -tb[1];  // sigma(u) = -u
            Vec prod = multiply(*Lfield, unit_vec(f, 2, i), tb);
            for (std::size_t t = 0; t < 2; ++t) Ltheta->r(i, b, t) = prod[t];
        }

    // E as an L-E-bimodule (left action through L -> E, 1 -> 1, u -> v^2)
    auto E_le = std::make_shared<Bimodule>();
    E_le->left = Lfield;
    E_le->right = Efield;
    E_le->dim = 4;
    E_le->name = "E_LE";
    E_le->right_action = Efield->mul;
    E_le->left_action.assign(2 * 16, Scalar::zero(f));
    for (std::size_t a = 0; a < 2; ++a) {
        Vec img = unit_vec(f, 4, a == 0 ? 0 : 2);  // 1 -> 1, u -> v^2
        for (std::size_t x = 0; x < 4; ++x) {
            Vec prod = multiply(*Efield, img, unit_vec(f, 4, x));
            for (std::size_t t = 0; t < 4; ++t) E_le->l(a, x, t) = prod[t];
        }
    }

    // E as an E-F-bimodule and L as an F-L-bimodule
    auto E_ef = std::make_shared<Bimodule>();
    E_ef->left = Efield;
    E_ef->right = Ffield;
    E_ef->dim = 4;
    E_ef->name = "E_EF";
    E_ef->left_action = Efield->mul;
    E_ef->right_action.assign(16, Scalar::zero(f));
    for (std::size_t i = 0; i < 4; ++i) E_ef->r(i, 0, i) = Scalar::one(f);
    auto L_fl = std::make_shared<Bimodule>();
    L_fl->left = Ffield;
    L_fl->right = Lfield;
    L_fl->dim = 2;
    L_fl->name = "L_FL";
    L_fl->right_action = Lfield->mul;
    L_fl->left_action.assign(4, Scalar::zero(f));
    for (std::size_t i = 0; i < 2; ++i) L_fl->l(0, i, i) = Scalar::one(f);

    // M_12 = L^theta (x)_L E
    TensorSpace m12_space = tensor_over(Ltheta, E_le);
    // M_23 = E (x)_F F, M_31 = F (x)_F L
    TensorSpace m23_space = tensor_over(E_ef, regular_bimodule(Ffield));
    TensorSpace m31_space = tensor_over(regular_bimodule(Ffield), L_fl);
    // M_21 = (E (x)_F L) / <w>, w = u (x) 1 +/- 1 (x) u
    TensorSpace el_space = tensor_over(E_ef, L_fl);
    Vec w_ambient = zero_vec(f, 8);
    w_ambient[2 * 2 + 0] = Scalar::one(f);  // u (x) 1 (u = v^2 at index 2)
    Vec one_u = zero_vec(f, 8);
    one_u[0 * 2 + 1] = Scalar::one(f);  // 1 (x) u
    for (std::size_t i = 0; i < 8; ++i)
        w_ambient[i] += sign > 0 ? one_u[i] : -one_u[i];
    Vec w_class = apply_matrix(el_space.projection, w_ambient);
    BimoduleQuotient m21 = bimodule_quotient(el_space.quotient, {w_class}, "E(x)L/<w>");

    std::vector<AlgebraPtr> algebras = {Lfield, Efield, Ffield};
    std::vector<std::vector<BimodulePtr>> off(3, std::vector<BimodulePtr>(3));
    off[0][1] = m12_space.quotient;
    off[0][2] = zero_bimodule(Lfield, Ffield);
    off[1][0] = m21.quotient;
    off[1][2] = m23_space.quotient;
    off[2][0] = m31_space.quotient;
    off[2][1] = zero_bimodule(Ffield, Efield);
    GeneralisedContext ctx = make_context_frame(algebras, off, "clannish");

    // the only nonzero genuine map: phi_231 : M_23 x M_31 -> M_21, the
    // canonical projection of E (x) L onto the quotient by <w>
    {
        BilinearBlockMap& phi = ctx.maps[1][2][0];
        for (std::size_t x = 0; x < off[1][2]->dim; ++x) {
            Vec ex = m23_space.section.col(x);  // over E (x) F, F one-dimensional
            for (std::size_t y = 0; y < off[2][0]->dim; ++y) {
                Vec ly = m31_space.section.col(y);  // over F (x) L
                Vec amb = zero_vec(f, 8);
                for (std::size_t e = 0; e < 4; ++e)
                    for (std::size_t l = 0; l < 2; ++l) amb[e * 2 + l].add_mul(ex[e], ly[l]);
                Vec cls = apply_matrix(m21.projection, apply_matrix(el_space.projection, amb));
                for (std::size_t t = 0; t < off[1][0]->dim; ++t) phi.t(x, y, t) = cls[t];
            }
        }
    }
    ContextPtr g = std::make_shared<GeneralisedContext>(std::move(ctx));

    inst.report.absorb(verify_generalised_context(*g), "left presentation");

    // step 1: replace the E-corner through its presentation L[x]/(x^2 - u),
    // i.e. the basis order (1, u, x, ux) = (1, v^2, v, v^3)
    Matrix perm(f, 4, 4);
    perm.at(0, 0) = Scalar::one(f);
    perm.at(1, 2) = Scalar::one(f);
    perm.at(2, 1) = Scalar::one(f);
    perm.at(3, 3) = Scalar::one(f);
    auto Epres = std::make_shared<Algebra>(transported_algebra(*Efield, perm));
    Epres->name = "L[x]/(x^2-u)";
    auto iso = inverse(perm);
    ClassicalContext c1 = iso_context(Efield, Epres, *iso);
    SurgeryResult res1 = corner_replace(g, c1, 1);
    inst.report.absorb(res1.report, "step 1 (E-corner)");
    EquivalenceCertificate cert1 = certify_equivalence(res1);

    // step 2: replace the F-corner through F ~ M_2(F)
    ClassicalContext c2 = amplification_context(Ffield, 2);
    SurgeryResult res2 = corner_replace(res1.composed, c2, 2);
    inst.report.absorb(res2.report, "step 2 (F-corner)");
    EquivalenceCertificate cert2 = certify_equivalence(res2);

    expect_dims(inst, "left presentation", {{2, 4, 0}, {4, 4, 4}, {2, 0, 1}});
    expect_dims(inst, "after E-corner", {{2, 4, 0}, {4, 4, 4}, {2, 0, 1}});
    expect_dims(inst, "right presentation", {{2, 4, 0}, {4, 4, 8}, {4, 0, 4}});
    inst.expected.emplace_back("dim E(x)L", "8");
    inst.expected.emplace_back("dim <w>", "4");

    record_dims(inst, "left presentation", *g);
    record_dims(inst, "after E-corner", *res1.composed);
    record_dims(inst, "right presentation", *res2.composed);
    inst.actual["dim E(x)L"] = std::to_string(el_space.quotient->dim);
    inst.actual["dim <w>"] =
        std::to_string(el_space.quotient->dim - m21.quotient->dim);

    inst.certificate_expected = true;
    inst.certificate_granted = cert1.granted && cert2.granted;

    inst.inputs.field = f;
    register_context(inst.inputs, g, "clannish");
    register_classical(inst.inputs, c1, "Epres");
    register_classical(inst.inputs, c2, "Famp");
    return inst;
}

GalleryInstance enough_idempotents_instance(const AlgebraPtr& a,
                                            const std::vector<bool>& plus_side) {
    if (plus_side.size() != a->idempotents.size())
        throw MalformedInput("enough_idempotents_instance: coloring size mismatch");
    const FieldSpec& f = a->field;
    std::size_t n_plus = 0, n_minus = 0;
    Vec f_plus = zero_vec(f, a->dim), f_minus = zero_vec(f, a->dim);
    for (std::size_t i = 0; i < plus_side.size(); ++i) {
        if (plus_side[i]) {
            ++n_plus;
            for (std::size_t x = 0; x < a->dim; ++x) f_plus[x] += a->idempotents[i][x];
        } else {
            ++n_minus;
            for (std::size_t x = 0; x < a->dim; ++x) f_minus[x] += a->idempotents[i][x];
        }
    }
    if (n_plus == 0 || n_minus == 0)
        throw IncompletePartition("enough_idempotents_instance: both sides must be nonempty");

    GalleryInstance inst;
    inst.name = "enough-idempotents";

    PeirceDecomposition pd = peirce_partition(a, {f_plus, f_minus});
    ContextPtr g = pd.context;
    inst.report.absorb(verify_generalised_context(*g), "partition context");

    // reassembly: the matrix ring reproduces a's structure constants under
    // the block-basis bijection
    MatrixRing ring = matrix_ring(g, Checked::no);
    Algebra transported = transported_algebra(*a, pd.block_basis);
    ReportSection& reasm = inst.report.section("reassembly");
    ++reasm.checks;
    if (!(transported.mul == ring.ring->mul))
        reasm.fail("matrix ring constants differ from the transported algebra");
    inst.actual["reassembled dim"] = std::to_string(ring.ring->dim);
    inst.expected.emplace_back("reassembled dim", std::to_string(a->dim));

    ClassicalContext c_plus = amplification_context(g->algebras[0], 2);
    ClassicalContext c_minus = amplification_context(g->algebras[1], 2);

    // block-sum tensor identity, the direct-sum commutation in its provable
    // form: L (x)_{A_pm} M grades directly over the outer idempotents e'
    // (right action on the tensor), the cross pieces [L e2 (x) e M e'] vanish
    // for e2 != e, and the aligned pieces [L e (x) e M e'] span each graded
    // component
    CornerAlgebra corner_plus = corner_subalgebra(*a, f_plus);
    CornerAlgebra corner_minus = corner_subalgebra(*a, f_minus);
    auto blocksum = [&](const ClassicalContext& c, const CornerAlgebra& corner,
                        const CornerAlgebra& other, const BimodulePtr& mblock,
                        const Echelon& mspan, bool plus) -> bool {
        TensorSpace full = tensor_over(c.L, mblock);
        bool ok = true;
        std::size_t graded_total = 0;
        std::string summands;
        auto graded_class = [&](std::size_t lslot, const Vec& ej_amb, std::size_t y) {
            // class of l (x) (m e') in the computed tensor space
            Vec l = unit_vec(f, c.L->dim, lslot);
            Vec me = multiply(*a, mspan.reduced.row(y), ej_amb);
            Vec m_coords = coords_in_span(mspan, me);
            Vec amb = zero_vec(f, full.ambient_dim());
            for (std::size_t u = 0; u < c.L->dim; ++u)
                for (std::size_t v = 0; v < mblock->dim; ++v)
                    amb[u * mblock->dim + v].add_mul(l[u], m_coords[v]);
            return apply_matrix(full.projection, amb);
        };
        for (std::size_t ej = 0; ej < a->idempotents.size(); ++ej) {
            if (plus_side[ej] == plus) continue;  // e' runs over the other side
            // graded component [L (x) M e']
            RrefAccumulator component(f, full.quotient->dim);
            for (std::size_t x = 0; x < c.L->dim; ++x)
                for (std::size_t y = 0; y < mblock->dim; ++y) {
                    Vec cls = graded_class(x, a->idempotents[ej], y);
                    if (!is_zero_vec(cls)) component.add_row(std::move(cls));
                }
            graded_total += component.rank();
            if (!summands.empty()) summands += " + ";
            summands += std::to_string(component.rank());

            // refinement over the same-side idempotents e
            RrefAccumulator aligned(f, full.quotient->dim);
            for (std::size_t ei = 0; ei < a->idempotents.size(); ++ei) {
                if (plus_side[ei] != plus) continue;
                Vec e_corner = coords_in_span(corner.basis, a->idempotents[ei]);
                for (std::size_t x = 0; x < c.L->dim; ++x)
                    for (std::size_t y = 0; y < mblock->dim; ++y) {
                        // aligned piece: (l e) (x) (e m e')
                        Vec l = act_right(*c.L, unit_vec(f, c.L->dim, x), e_corner);
                        Vec eme = multiply(*a, multiply(*a, a->idempotents[ei], mspan.reduced.row(y)),
                                           a->idempotents[ej]);
                        Vec m_coords = coords_in_span(mspan, eme);
                        Vec amb = zero_vec(f, full.ambient_dim());
                        for (std::size_t u = 0; u < c.L->dim; ++u)
                            for (std::size_t v = 0; v < mblock->dim; ++v)
                                amb[u * mblock->dim + v].add_mul(l[u], m_coords[v]);
                        Vec cls = apply_matrix(full.projection, amb);
                        if (!is_zero_vec(cls)) aligned.add_row(std::move(cls));
                        // cross pieces (l e2) (x) (e m e') vanish for e2 != e
                        for (std::size_t e2 = 0; e2 < a->idempotents.size(); ++e2) {
                            if (plus_side[e2] != plus || e2 == ei) continue;
                            Vec e2_corner = coords_in_span(corner.basis, a->idempotents[e2]);
                            Vec l2 = act_right(*c.L, unit_vec(f, c.L->dim, x), e2_corner);
                            Vec amb2 = zero_vec(f, full.ambient_dim());
                            for (std::size_t u = 0; u < c.L->dim; ++u)
                                for (std::size_t v = 0; v < mblock->dim; ++v)
                                    amb2[u * mblock->dim + v].add_mul(l2[u], m_coords[v]);
                            if (!is_zero_vec(apply_matrix(full.projection, amb2))) ok = false;
                        }
                    }
            }
            if (aligned.rank() != component.rank()) ok = false;
        }
        (void)other;
        ok = ok && graded_total == full.quotient->dim;
        inst.actual[std::string("blocksum ") + (plus ? "plus" : "minus")] =
            std::to_string(full.quotient->dim) + " = " + summands;
        return ok;
    };
    Echelon span_pm = corner_span(*a, f_plus, f_minus);
    Echelon span_mp = corner_span(*a, f_minus, f_plus);
    bool ok_plus = blocksum(c_plus, corner_plus, corner_minus, g->blocks[0][1], span_pm, true);
    bool ok_minus = blocksum(c_minus, corner_minus, corner_plus, g->blocks[1][0], span_mp, false);
    ReportSection& bs = inst.report.section("block-sum identity");
    bs.checks += 2;
    if (!ok_plus) bs.fail("plus side: graded pieces do not reassemble the tensor");
    if (!ok_minus) bs.fail("minus side: graded pieces do not reassemble the tensor");

    SurgeryResult res1 = corner_replace(g, c_plus, 0);
    inst.report.absorb(res1.report, "replace plus corner");
    EquivalenceCertificate cert1 = certify_equivalence(res1);
    SurgeryResult res2 = corner_replace(res1.composed, c_minus, 1);
    inst.report.absorb(res2.report, "replace minus corner");
    EquivalenceCertificate cert2 = certify_equivalence(res2);
    inst.certificate_expected = true;
    inst.certificate_granted = cert1.granted && cert2.granted;

    record_dims(inst, "partition", *g);
    record_dims(inst, "after plus", *res1.composed);
    record_dims(inst, "after both", *res2.composed);

    inst.inputs.field = f;
    inst.inputs.algebras[a->name.empty() ? "A" : a->name] = a;
    register_context(inst.inputs, g, "partition");
    register_classical(inst.inputs, c_plus, "amp+");
    register_classical(inst.inputs, c_minus, "amp-");
    return inst;
}

}  // namespace morita
