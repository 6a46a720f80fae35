#include "support/random_structures.hpp"

#include <algorithm>
#include <numeric>

namespace morita::testsupport {

namespace {

std::size_t pick(Rng& rng, std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

bool chance(Rng& rng, double p) { return std::uniform_real_distribution<>(0.0, 1.0)(rng) < p; }

// path algebra of an acyclic quiver: vertices 0..v-1, arrows src < dst,
// basis = all paths (trivial ones included), product = concatenation
AlgebraPtr path_algebra(Rng& rng, const FieldSpec& f, std::size_t vertices, std::size_t arrows) {
    struct Arrow {
        std::size_t src, dst;
    };
    std::vector<Arrow> quiver;
    for (std::size_t a = 0; a < arrows; ++a) {
        if (vertices < 2) break;
        std::size_t s = pick(rng, vertices - 1);
        std::size_t d = s + 1 + pick(rng, vertices - 1 - s);
        quiver.push_back({s, d});
    }
    struct Path {
        std::size_t src, dst;
        std::vector<std::size_t> arrows;  // empty = trivial path
    };
    std::vector<Path> paths;
    for (std::size_t v = 0; v < vertices; ++v) paths.push_back({v, v, {}});
    // grow by composing with single arrows (finite: the quiver is acyclic)
    std::vector<Path> frontier;
    for (std::size_t a = 0; a < quiver.size(); ++a)
        frontier.push_back({quiver[a].src, quiver[a].dst, {a}});
    while (!frontier.empty()) {
        paths.insert(paths.end(), frontier.begin(), frontier.end());
        std::vector<Path> next;
        for (const Path& p : frontier)
            for (std::size_t a = 0; a < quiver.size(); ++a)
                if (quiver[a].src == p.dst) {
                    Path q = p;
                    q.dst = quiver[a].dst;
                    q.arrows.push_back(a);
                    next.push_back(std::move(q));
                }
        frontier = std::move(next);
    }
    std::sort(paths.begin(), paths.end(), [](const Path& a, const Path& b) {
        if (a.arrows.size() != b.arrows.size()) return a.arrows.size() < b.arrows.size();
        if (a.src != b.src) return a.src < b.src;
        return a.arrows < b.arrows;
    });

    const std::size_t dim = paths.size();
    Algebra alg;
    alg.field = f;
    alg.dim = dim;
    alg.name = "kQ";
    alg.mul.assign(dim * dim * dim, Scalar::zero(f));
    auto index_of = [&](const Path& p) {
        for (std::size_t i = 0; i < dim; ++i)
            if (paths[i].src == p.src && paths[i].arrows == p.arrows) return i;
        throw InvariantViolated("path index lookup failed");
    };
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) {
            if (paths[i].dst != paths[j].src) continue;
            Path prod{paths[i].src, paths[j].dst, paths[i].arrows};
            prod.arrows.insert(prod.arrows.end(), paths[j].arrows.begin(), paths[j].arrows.end());
            alg.c(i, j, index_of(prod)) = Scalar::one(f);
        }
    for (std::size_t v = 0; v < vertices; ++v) alg.idempotents.push_back(unit_vec(f, dim, v));
    Vec id = zero_vec(f, dim);
    for (std::size_t v = 0; v < vertices; ++v) id[v] = Scalar::one(f);
    alg.identity = id;
    return std::make_shared<Algebra>(std::move(alg));
}

Matrix random_basis_change(Rng& rng, const FieldSpec& f, std::size_t n) {
    // product of elementary shears: always invertible, entries stay small
    Matrix p = Matrix::identity(f, n);
    const std::size_t ops = 1 + pick(rng, 2 * std::max<std::size_t>(n, 1));
    for (std::size_t o = 0; o < ops && n >= 2; ++o) {
        std::size_t i = pick(rng, n), j = pick(rng, n);
        if (i == j) continue;
        long long coeff = static_cast<long long>(pick(rng, 3)) - 1;
        if (coeff == 0) coeff = 1;
        // row_i += coeff * row_j
        for (std::size_t cc = 0; cc < n; ++cc)
            p.at(i, cc).add_mul(Scalar::from_int(f, coeff), p.at(j, cc));
    }
    return p;
}

}  // namespace

FieldSpec random_field(Rng& rng) {
    switch (pick(rng, 3)) {
        case 0: return prime_field(2);
        case 1: return prime_field(5);
        default: return rationals();
    }
}

AlgebraPtr random_algebra(Rng& rng, const FieldSpec& f, std::size_t max_dim) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::size_t vertices = 1 + pick(rng, 3);
        std::size_t arrows = pick(rng, 3);
        AlgebraPtr a = path_algebra(rng, f, vertices, arrows);
        if (chance(rng, 0.35)) {
            Algebra sum = direct_sum(*a, matrix_algebra(f, 2));
            a = std::make_shared<Algebra>(std::move(sum));
        }
        if (a->dim > max_dim) continue;
        if (a->dim <= 6 && chance(rng, f.kind == FieldKind::Rationals ? 0.25 : 0.4)) {
            Matrix p = random_basis_change(rng, f, a->dim);
            Algebra moved = transported_algebra(*a, p);
            moved.name = a->name + "~";
            a = std::make_shared<Algebra>(std::move(moved));
        }
        return a;
    }
    return std::make_shared<Algebra>(field_algebra(f));
}

ContextPtr random_context(Rng& rng, const FieldSpec& f, std::size_t n, std::size_t max_block) {
    for (int attempt = 0; attempt < 128; ++attempt) {
        AlgebraPtr a = random_algebra(rng, f, n + 5);
        if (a->idempotents.size() < n) continue;
        // random ordered partition of E into n groups (empty groups allowed
        // occasionally: zero diagonal blocks are legal)
        std::vector<std::size_t> group_of(a->idempotents.size());
        for (std::size_t e = 0; e < group_of.size(); ++e) group_of[e] = pick(rng, n);
        if (!chance(rng, 0.1)) {
            // usually make every group nonempty
            std::vector<std::size_t> order(group_of.size());
            std::iota(order.begin(), order.end(), 0);
            std::shuffle(order.begin(), order.end(), rng);
            for (std::size_t gidx = 0; gidx < n && gidx < order.size(); ++gidx)
                group_of[order[gidx]] = gidx;
        }
        std::vector<Vec> units(n, zero_vec(f, a->dim));
        for (std::size_t e = 0; e < group_of.size(); ++e)
            for (std::size_t x = 0; x < a->dim; ++x)
                units[group_of[e]][x] += a->idempotents[e][x];
        PeirceDecomposition pd = peirce_partition(a, units);
        bool small = true;
        for (std::size_t i = 0; i < n && small; ++i)
            for (std::size_t j = 0; j < n && small; ++j)
                if (pd.context->blocks[i][j]->dim > max_block) small = false;
        if (!small) continue;
        return pd.context;
    }
    // fallback: the one-block context over the base field
    auto a = std::make_shared<Algebra>(field_algebra(f));
    return peirce_partition(a, std::vector<Vec>(1, *a->identity)).context;
}

std::pair<std::size_t, ClassicalContext> random_corner_choice(Rng& rng, const ContextPtr& g) {
    const std::size_t n = g->n();
    // prefer corners with a nonzero ring
    std::vector<std::size_t> candidates;
    for (std::size_t t = 0; t < n; ++t)
        if (g->algebras[t]->dim > 0) candidates.push_back(t);
    const std::size_t t = candidates.empty() ? 0 : candidates[pick(rng, candidates.size())];
    const AlgebraPtr& corner = g->algebras[t];
    const FieldSpec& f = corner->field;

    for (int attempt = 0; attempt < 8; ++attempt) {
        switch (pick(rng, 4)) {
            case 0:
                return {t, identity_context(corner)};
            case 1: {
                if (corner->dim == 0) break;
                Matrix p = random_basis_change(rng, f, corner->dim);
                Algebra moved = transported_algebra(*corner, p);
                moved.name = corner->name + "~";
                auto b = std::make_shared<Algebra>(std::move(moved));
                auto iso = inverse(p);
                return {t, iso_context(corner, b, *iso)};
            }
            case 2: {
                if (corner->dim == 0 || corner->dim > 2) break;
                return {t, amplification_context(corner, 2)};
            }
            default: {
                // classical face of peirce(M_2(f), e_11), available when the
                // corner is the canonical one-dimensional algebra
                Algebra canonical =
                    corner_subalgebra(matrix_algebra(f, 2), unit_vec(f, 4, 3)).algebra;
                if (!(*corner == canonical)) break;
                auto m2 = std::make_shared<Algebra>(matrix_algebra(f, 2));
                PeirceDecomposition pd = peirce(m2, unit_vec(f, 4, 0));
                return {t, as_classical(*pd.context)};
            }
        }
    }
    return {t, identity_context(corner)};
}

ClassicalContext zero_pairing_classical(const AlgebraPtr& corner) {
    const FieldSpec& f = corner->field;
    auto s = std::make_shared<AlgebraPtr::element_type>(field_algebra(f));
    // N = corner as a corner-S bimodule with scalar right action; L = 0
    auto nmod = std::make_shared<Bimodule>();
    nmod->left = corner;
    nmod->right = s;
    nmod->dim = corner->dim;
    nmod->name = corner->name + "_N";
    nmod->left_action = corner->mul;
    nmod->right_action.assign(nmod->dim * nmod->dim, Scalar::zero(f));
    for (std::size_t i = 0; i < nmod->dim; ++i) nmod->r(i, 0, i) = Scalar::one(f);
    BimodulePtr l = zero_bimodule(s, corner);
    std::vector<Scalar> zeta;  // dims n*0*r
    std::vector<Scalar> theta;
    return make_classical(corner, s, nmod, l, std::move(zeta), std::move(theta),
                          corner->name + "_zero_pairing");
}

std::size_t naive_tensor_dim(const Bimodule& m, const Bimodule& n) {
    Matrix rel = tensor_relation_matrix(m, n);
    // plain forward elimination, no normalization, counting nonzero rows
    const std::size_t rows = rel.rows(), cols = rel.cols();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t sel = rows;
        for (std::size_t i = r; i < rows; ++i)
            if (!rel.at(i, c).is_zero()) {
                sel = i;
                break;
            }
        if (sel == rows) continue;
        if (sel != r)
            for (std::size_t j = 0; j < cols; ++j) std::swap(rel.at(r, j), rel.at(sel, j));
        for (std::size_t i = r + 1; i < rows; ++i) {
            if (rel.at(i, c).is_zero()) continue;
            Scalar factor = -(rel.at(i, c) / rel.at(r, c));
            for (std::size_t j = c; j < cols; ++j) rel.at(i, j).add_mul(factor, rel.at(r, j));
        }
        ++r;
    }
    return m.dim * n.dim - r;
}

BimodulePair random_bimodule_pair(Rng& rng, const FieldSpec& f, std::size_t max_dim) {
    for (int attempt = 0; attempt < 128; ++attempt) {
        AlgebraPtr a = random_algebra(rng, f, 8);
        const std::size_t e_count = a->idempotents.size();
        if (e_count == 0) continue;
        // three (possibly overlapping-free) groups of idempotents
        std::vector<std::size_t> group_of(e_count);
        for (std::size_t e = 0; e < e_count; ++e) group_of[e] = pick(rng, 3);
        std::vector<Vec> units(3, zero_vec(f, a->dim));
        for (std::size_t e = 0; e < e_count; ++e)
            for (std::size_t x = 0; x < a->dim; ++x) units[group_of[e]][x] += a->idempotents[e][x];

        std::vector<CornerAlgebra> corners;
        for (int i = 0; i < 3; ++i) corners.push_back(corner_subalgebra(*a, units[i]));
        auto c0 = std::make_shared<AlgebraPtr::element_type>(corners[0].algebra);
        auto c1 = std::make_shared<AlgebraPtr::element_type>(corners[1].algebra);
        auto c2 = std::make_shared<AlgebraPtr::element_type>(corners[2].algebra);

        auto block = [&](const AlgebraPtr& left, const CornerAlgebra& cl, const Vec& fl,
                         const AlgebraPtr& right, const CornerAlgebra& cr, const Vec& fr,
                         const std::string& name) -> BimodulePtr {
            Echelon span = corner_span(*a, fl, fr);
            auto m = std::make_shared<Bimodule>();
            m->left = left;
            m->right = right;
            m->dim = span.pivots.size();
            m->name = name;
            m->left_action.assign(left->dim * m->dim * m->dim, Scalar::zero(f));
            m->right_action.assign(m->dim * right->dim * m->dim, Scalar::zero(f));
            for (std::size_t u = 0; u < left->dim; ++u)
                for (std::size_t x = 0; x < m->dim; ++x) {
                    Vec prod = multiply(*a, cl.embedding.col(u), span.reduced.row(x));
                    Vec coords = coords_in_span(span, prod);
                    for (std::size_t k = 0; k < m->dim; ++k) m->l(u, x, k) = coords[k];
                }
            for (std::size_t x = 0; x < m->dim; ++x)
                for (std::size_t u = 0; u < right->dim; ++u) {
                    Vec prod = multiply(*a, span.reduced.row(x), cr.embedding.col(u));
                    Vec coords = coords_in_span(span, prod);
                    for (std::size_t k = 0; k < m->dim; ++k) m->r(x, u, k) = coords[k];
                }
            return m;
        };
        BimodulePtr m = block(c0, corners[0], units[0], c1, corners[1], units[1], "M");
        BimodulePtr n = block(c1, corners[1], units[1], c2, corners[2], units[2], "N");
        if (m->dim > max_dim || n->dim > max_dim) continue;
        return BimodulePair{m, n};
    }
    auto fld = std::make_shared<AlgebraPtr::element_type>(field_algebra(f));
    return BimodulePair{regular_bimodule(fld), regular_bimodule(fld)};
}

}  // namespace morita::testsupport
