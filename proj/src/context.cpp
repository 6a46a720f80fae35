#include "morita/context.hpp"

#include <sstream>

#include "morita/parallel.hpp"

namespace morita {

namespace {

std::string idx1(std::size_t i) { return std::to_string(i + 1); }

void require(bool cond, const std::string& msg) {
    if (!cond) throw MalformedInput(msg);
}

Vec block_row_to_vec(const FieldSpec& f, const Scalar* row, std::size_t n) {
    Vec v = zero_vec(f, n);
    for (std::size_t i = 0; i < n; ++i) v[i] = row[i];
    return v;
}

}  // namespace

bool GeneralisedContext::operator==(const GeneralisedContext& o) const {
    if (algebras.size() != o.algebras.size()) return false;
    for (std::size_t i = 0; i < algebras.size(); ++i)
        if (!(*algebras[i] == *o.algebras[i])) return false;
    for (std::size_t i = 0; i < n(); ++i)
        for (std::size_t j = 0; j < n(); ++j)
            if (!(*blocks[i][j] == *o.blocks[i][j])) return false;
    for (std::size_t i = 0; i < n(); ++i)
        for (std::size_t k = 0; k < n(); ++k)
            for (std::size_t j = 0; j < n(); ++j)
                if (!(maps[i][k][j] == o.maps[i][k][j])) return false;
    return true;
}

GeneralisedContext make_context_frame(std::vector<AlgebraPtr> algebras,
                                      std::vector<std::vector<BimodulePtr>> off_diagonal,
                                      std::string name) {
    const std::size_t n = algebras.size();
    require(off_diagonal.size() == n, "context '" + name + "': block grid has wrong row count");
    GeneralisedContext g;
    g.name = std::move(name);
    g.algebras = std::move(algebras);
    g.blocks.assign(n, std::vector<BimodulePtr>(n));
    for (std::size_t i = 0; i < n; ++i) {
        require(off_diagonal[i].size() == n,
                "context '" + g.name + "': block grid has wrong column count");
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) {
                g.blocks[i][i] = regular_bimodule(g.algebras[i]);
            } else {
                require(off_diagonal[i][j] != nullptr, "context '" + g.name + "': missing block M[" +
                                                           idx1(i) + "][" + idx1(j) + "]");
                const Bimodule& m = *off_diagonal[i][j];
                require(*m.left == *g.algebras[i] && *m.right == *g.algebras[j],
                        "context '" + g.name + "': block M[" + idx1(i) + "][" + idx1(j) +
                            "] is not an A_" + idx1(i) + "-A_" + idx1(j) + "-bimodule");
                g.blocks[i][j] = off_diagonal[i][j];
            }
        }
    }
    g.maps.assign(n, std::vector<std::vector<BilinearBlockMap>>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            g.maps[i][k].reserve(n);
            for (std::size_t j = 0; j < n; ++j) {
                if (i == k) {
                    // phi_kkj = lambda (includes phi_kkk = mu on the regular block)
                    BilinearBlockMap b;
                    b.left_factor = g.blocks[k][k];
                    b.right_factor = g.blocks[k][j];
                    b.codomain = g.blocks[k][j];
                    b.tensor = g.blocks[k][j]->left_action;
                    g.maps[i][k].push_back(std::move(b));
                } else if (k == j) {
                    // phi_ikk = rho
                    BilinearBlockMap b;
                    b.left_factor = g.blocks[i][k];
                    b.right_factor = g.blocks[k][k];
                    b.codomain = g.blocks[i][k];
                    b.tensor = g.blocks[i][k]->right_action;
                    g.maps[i][k].push_back(std::move(b));
                } else {
                    g.maps[i][k].push_back(
                        zero_block_map(g.blocks[i][k], g.blocks[k][j], g.blocks[i][j]));
                }
            }
        }
    return g;
}

void check_mixed_triple(const BilinearBlockMap& outer1, const BilinearBlockMap& inner1,
                        const BilinearBlockMap& outer2, const BilinearBlockMap& inner2,
                        ReportSection& sec, const std::string& label) {
    if (!(*outer1.left_factor == *inner2.left_factor) ||
        !(*inner1.left_factor == *inner2.right_factor) ||
        !(*inner1.right_factor == *outer2.right_factor) ||
        !(*inner1.codomain == *outer1.right_factor) ||
        !(*inner2.codomain == *outer2.left_factor) || !(*outer1.codomain == *outer2.codomain))
        throw InvariantViolated("check_mixed_triple: factor shapes disagree at " + label);
    const std::size_t X = outer1.left_factor->dim;
    const std::size_t Y = inner1.left_factor->dim;
    const std::size_t Z = inner1.right_factor->dim;
    const std::size_t W1 = inner1.codomain->dim;
    const std::size_t W2 = inner2.codomain->dim;
    const std::size_t T = outer1.codomain->dim;
    if (X == 0 || Y == 0 || Z == 0) return;
    const FieldSpec& f = outer1.codomain->left->field;
    Vec lhs = zero_vec(f, T), rhs = zero_vec(f, T);
    for (std::size_t x = 0; x < X; ++x)
        for (std::size_t y = 0; y < Y; ++y) {
            const Scalar* w2 = inner2.row(x, y);
            for (std::size_t z = 0; z < Z; ++z) {
                ++sec.checks;
                for (std::size_t t = 0; t < T; ++t) {
                    lhs[t] = Scalar::zero(f);
                    rhs[t] = Scalar::zero(f);
                }
                const Scalar* w1 = inner1.row(y, z);
                for (std::size_t m = 0; m < W1; ++m) {
                    if (w1[m].is_zero()) continue;
                    const Scalar* row = outer1.row(x, m);
                    for (std::size_t t = 0; t < T; ++t) lhs[t].add_mul(w1[m], row[t]);
                }
                for (std::size_t m = 0; m < W2; ++m) {
                    if (w2[m].is_zero()) continue;
                    const Scalar* row = outer2.row(m, z);
                    for (std::size_t t = 0; t < T; ++t) rhs[t].add_mul(w2[m], row[t]);
                }
                if (lhs != rhs)
                    sec.fail(label + " (x=" + idx1(x) + ", y=" + idx1(y) + ", z=" + idx1(z) + ")");
            }
        }
}

void check_left_linear(const BilinearBlockMap& beta, ReportSection& sec, const std::string& label) {
    const Bimodule& X = *beta.left_factor;
    const Bimodule& C = *beta.codomain;
    if (!(*X.left == *C.left))
        throw InvariantViolated("check_left_linear: codomain has a different left algebra at " + label);
    const FieldSpec& f = C.left->field;
    Vec lhs = zero_vec(f, C.dim), rhs = zero_vec(f, C.dim);
    for (std::size_t a = 0; a < X.left->dim; ++a)
        for (std::size_t x = 0; x < X.dim; ++x) {
            const Scalar* ax = X.left_row(a, x);
            for (std::size_t y = 0; y < beta.right_factor->dim; ++y) {
                ++sec.checks;
                for (std::size_t t = 0; t < C.dim; ++t) {
                    lhs[t] = Scalar::zero(f);
                    rhs[t] = Scalar::zero(f);
                }
                for (std::size_t m = 0; m < X.dim; ++m) {
                    if (ax[m].is_zero()) continue;
                    const Scalar* row = beta.row(m, y);
                    for (std::size_t t = 0; t < C.dim; ++t) lhs[t].add_mul(ax[m], row[t]);
                }
                const Scalar* xy = beta.row(x, y);
                for (std::size_t m = 0; m < C.dim; ++m) {
                    if (xy[m].is_zero()) continue;
                    const Scalar* row = C.left_row(a, m);
                    for (std::size_t t = 0; t < C.dim; ++t) rhs[t].add_mul(xy[m], row[t]);
                }
                if (lhs != rhs)
                    sec.fail(label + " not left-linear at (a=" + idx1(a) + ", x=" + idx1(x) +
                             ", y=" + idx1(y) + ")");
            }
        }
}

void check_right_linear(const BilinearBlockMap& beta, ReportSection& sec, const std::string& label) {
    const Bimodule& Y = *beta.right_factor;
    const Bimodule& C = *beta.codomain;
    if (!(*Y.right == *C.right))
        throw InvariantViolated("check_right_linear: codomain has a different right algebra at " +
                                label);
    const FieldSpec& f = C.left->field;
    Vec lhs = zero_vec(f, C.dim), rhs = zero_vec(f, C.dim);
    for (std::size_t x = 0; x < beta.left_factor->dim; ++x)
        for (std::size_t y = 0; y < Y.dim; ++y)
            for (std::size_t b = 0; b < Y.right->dim; ++b) {
                ++sec.checks;
                for (std::size_t t = 0; t < C.dim; ++t) {
                    lhs[t] = Scalar::zero(f);
                    rhs[t] = Scalar::zero(f);
                }
                const Scalar* yb = Y.right_row(y, b);
                for (std::size_t m = 0; m < Y.dim; ++m) {
                    if (yb[m].is_zero()) continue;
                    const Scalar* row = beta.row(x, m);
                    for (std::size_t t = 0; t < C.dim; ++t) lhs[t].add_mul(yb[m], row[t]);
                }
                const Scalar* xy = beta.row(x, y);
                for (std::size_t m = 0; m < C.dim; ++m) {
                    if (xy[m].is_zero()) continue;
                    const Scalar* row = C.right_row(m, b);
                    for (std::size_t t = 0; t < C.dim; ++t) rhs[t].add_mul(xy[m], row[t]);
                }
                if (lhs != rhs)
                    sec.fail(label + " not right-linear at (x=" + idx1(x) + ", y=" + idx1(y) +
                             ", b=" + idx1(b) + ")");
            }
}

void check_balanced_into(const BilinearBlockMap& beta, const Algebra& over, ReportSection& sec,
                         const std::string& label) {
    const Bimodule& X = *beta.left_factor;
    const Bimodule& Y = *beta.right_factor;
    if (!(*X.right == over) || !(*Y.left == over))
        throw InvariantViolated("check_balanced_into: domains are not modules over the middle at " +
                                label);
    const FieldSpec& f = beta.codomain->left->field;
    const std::size_t T = beta.codomain->dim;
    Vec lhs = zero_vec(f, T), rhs = zero_vec(f, T);
    for (std::size_t x = 0; x < X.dim; ++x)
        for (std::size_t a = 0; a < over.dim; ++a)
            for (std::size_t y = 0; y < Y.dim; ++y) {
                ++sec.checks;
                for (std::size_t t = 0; t < T; ++t) {
                    lhs[t] = Scalar::zero(f);
                    rhs[t] = Scalar::zero(f);
                }
                const Scalar* xa = X.right_row(x, a);
                for (std::size_t m = 0; m < X.dim; ++m) {
                    if (xa[m].is_zero()) continue;
                    const Scalar* row = beta.row(m, y);
                    for (std::size_t t = 0; t < T; ++t) lhs[t].add_mul(xa[m], row[t]);
                }
                const Scalar* ay = Y.left_row(a, y);
                for (std::size_t m = 0; m < Y.dim; ++m) {
                    if (ay[m].is_zero()) continue;
                    const Scalar* row = beta.row(x, m);
                    for (std::size_t t = 0; t < T; ++t) rhs[t].add_mul(ay[m], row[t]);
                }
                if (lhs != rhs)
                    sec.fail(label + " not balanced at (x=" + idx1(x) + ", a=" + idx1(a) +
                             ", y=" + idx1(y) + ")");
            }
}

namespace {

void check_context_shape(const GeneralisedContext& g) {
    const std::size_t n = g.n();
    require(g.blocks.size() == n, "context '" + g.name + "': block grid has wrong row count");
    require(g.maps.size() == n, "context '" + g.name + "': map grid has wrong size");
    for (std::size_t i = 0; i < n; ++i) {
        require(g.blocks[i].size() == n, "context '" + g.name + "': block grid has wrong row length");
        require(g.maps[i].size() == n, "context '" + g.name + "': map grid has wrong size");
        for (std::size_t j = 0; j < n; ++j) {
            require(g.blocks[i][j] != nullptr, "context '" + g.name + "': missing block");
            check_bimodule_shape(*g.blocks[i][j]);
            require(*g.blocks[i][j]->left == *g.algebras[i] && *g.blocks[i][j]->right == *g.algebras[j],
                    "context '" + g.name + "': block M[" + idx1(i) + "][" + idx1(j) +
                        "] has mismatched algebras");
            require(g.maps[i][j].size() == n, "context '" + g.name + "': map grid has wrong size");
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) {
                const BilinearBlockMap& b = g.maps[i][k][j];
                check_block_map_shape(b);
                require(*b.left_factor == *g.blocks[i][k] && *b.right_factor == *g.blocks[k][j] &&
                            *b.codomain == *g.blocks[i][j],
                        "context '" + g.name + "': map phi[" + idx1(i) + "][" + idx1(k) + "][" +
                            idx1(j) + "] has mismatched factors");
            }
}

}  // namespace

VerificationReport verify_generalised_context(const GeneralisedContext& g) {
    check_context_shape(g);
    const std::size_t n = g.n();
    VerificationReport report;

    for (std::size_t i = 0; i < n; ++i)
        report.absorb(verify_algebra(*g.algebras[i]), "rings: A[" + idx1(i) + "]");

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            report.absorb(verify_bimodule(*g.blocks[i][j]),
                          "bimodules: M[" + idx1(i) + "][" + idx1(j) + "]");

    ReportSection& diag = report.section("bimodules: diagonal blocks");
    for (std::size_t i = 0; i < n; ++i) {
        ++diag.checks;
        if (!(*g.blocks[i][i] == *regular_bimodule(g.algebras[i])))
            diag.fail("M[" + idx1(i) + "][" + idx1(i) + "] is not the regular bimodule of A_" +
                      idx1(i));
    }

    ReportSection& units = report.section("multiplication maps: unit identities");
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j) {
            ++units.checks;
            if (g.maps[k][k][j].tensor != g.blocks[k][j]->left_action)
                units.fail("phi[" + idx1(k) + "][" + idx1(k) + "][" + idx1(j) +
                           "] differs from the left action");
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            if (i == k) continue;  // covered above, where it is mu
            ++units.checks;
            if (g.maps[i][k][k].tensor != g.blocks[i][k]->right_action)
                units.fail("phi[" + idx1(i) + "][" + idx1(k) + "][" + idx1(k) +
                           "] differs from the right action");
        }

    ReportSection& balance = report.section("multiplication maps: balance");
    ReportSection& bimap = report.section("multiplication maps: bimodule homomorphism");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) {
                const std::string label =
                    "phi[" + idx1(i) + "][" + idx1(k) + "][" + idx1(j) + "]";
                check_balanced_into(g.maps[i][k][j], *g.algebras[k], balance, label);
                check_left_linear(g.maps[i][k][j], bimap, label);
                check_right_linear(g.maps[i][k][j], bimap, label);
            }

    ReportSection& assoc = report.section("mixed associativity");
    parallel_sweep(n * n * n * n, assoc, [&](std::size_t q, ReportSection& sec) {
        const std::size_t h = q / (n * n * n);
        const std::size_t i = (q / (n * n)) % n;
        const std::size_t j = (q / n) % n;
        const std::size_t k = q % n;
        std::ostringstream label;
        label << "(h=" << h + 1 << ", i=" << i + 1 << ", j=" << j + 1 << ", k=" << k + 1 << ")";
        // phi_ihj (1 (x) phi_hkj) = phi_ikj (phi_ihk (x) 1) on M_ih (x) M_hk (x) M_kj
        check_mixed_triple(g.maps[i][h][j], g.maps[h][k][j], g.maps[i][k][j], g.maps[i][h][k], sec,
                           label.str());
    });

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            report.facts["dim M[" + idx1(i) + "][" + idx1(j) + "]"] =
                std::to_string(g.blocks[i][j]->dim);
    return report;
}

ClassicalContext make_classical(AlgebraPtr R, AlgebraPtr S, BimodulePtr N, BimodulePtr L,
                                std::vector<Scalar> zeta_tensor, std::vector<Scalar> theta_tensor,
                                std::string name) {
    ClassicalContext c;
    c.R = std::move(R);
    c.S = std::move(S);
    c.N = std::move(N);
    c.L = std::move(L);
    c.name = std::move(name);
    require(*c.N->left == *c.R && *c.N->right == *c.S,
            "classical context '" + c.name + "': N is not an R-S-bimodule");
    require(*c.L->left == *c.S && *c.L->right == *c.R,
            "classical context '" + c.name + "': L is not an S-R-bimodule");
    c.zeta.left_factor = c.N;
    c.zeta.right_factor = c.L;
    c.zeta.codomain = regular_bimodule(c.R);
    c.zeta.tensor = std::move(zeta_tensor);
    check_block_map_shape(c.zeta);
    c.theta.left_factor = c.L;
    c.theta.right_factor = c.N;
    c.theta.codomain = regular_bimodule(c.S);
    c.theta.tensor = std::move(theta_tensor);
    check_block_map_shape(c.theta);
    return c;
}

GeneralisedContext to_generalised(const ClassicalContext& c) {
    std::vector<std::vector<BimodulePtr>> off(2, std::vector<BimodulePtr>(2));
    off[0][1] = c.N;
    off[1][0] = c.L;
    GeneralisedContext g = make_context_frame({c.R, c.S}, off, c.name);
    g.maps[0][1][0].tensor = c.zeta.tensor;
    g.maps[1][0][1].tensor = c.theta.tensor;
    return g;
}

VerificationReport verify_classical_context(const ClassicalContext& c) {
    return verify_generalised_context(to_generalised(c));
}

ClassicalContext as_classical(const GeneralisedContext& g) {
    if (g.n() != 2)
        throw WrongArity("as_classical: context has arity " + std::to_string(g.n()) +
                         ", expected 2");
    return make_classical(g.algebras[0], g.algebras[1], g.blocks[0][1], g.blocks[1][0],
                          g.maps[0][1][0].tensor, g.maps[1][0][1].tensor, g.name);
}

MatrixRing matrix_ring(const ContextPtr& g, Checked check) {
    if (check == Checked::yes) {
        VerificationReport rep = verify_generalised_context(*g);
        if (!rep.passed())
            throw ContextInvalid("matrix_ring: context '" + g->name + "' fails verification:\n" +
                                 rep.summary());
    }
    const std::size_t n = g->n();
    const FieldSpec& f = g->algebras.empty() ? rationals() : g->algebras[0]->field;
    std::vector<std::vector<std::size_t>> offsets(n, std::vector<std::size_t>(n, 0));
    std::size_t total = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            offsets[i][j] = total;
            total += g->blocks[i][j]->dim;
        }
    auto ring = std::make_shared<Algebra>();
    ring->field = f;
    ring->dim = total;
    ring->name = "[" + g->name + "]";
    ring->mul.assign(total * total * total, Scalar::zero(f));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) {
                const BilinearBlockMap& phi = g->maps[i][k][j];
                for (std::size_t x = 0; x < phi.left_factor->dim; ++x)
                    for (std::size_t y = 0; y < phi.right_factor->dim; ++y) {
                        const Scalar* row = phi.row(x, y);
                        for (std::size_t t = 0; t < phi.codomain->dim; ++t)
                            ring->c(offsets[i][k] + x, offsets[k][j] + y, offsets[i][j] + t) = row[t];
                    }
            }
    Vec total_id = zero_vec(f, total);
    for (std::size_t i = 0; i < n; ++i) {
        const Algebra& a = *g->algebras[i];
        if (a.dim == 0) continue;
        std::optional<Vec> id = a.identity ? a.identity : find_identity(a);
        if (!id)
            throw InvariantViolated("matrix_ring: diagonal algebra A_" + idx1(i) +
                                    " has no identity");
        Vec e = zero_vec(f, total);
        for (std::size_t x = 0; x < a.dim; ++x) e[offsets[i][i] + x] = (*id)[x];
        for (std::size_t x = 0; x < total; ++x) total_id[x] += e[x];
        ring->idempotents.push_back(std::move(e));
    }
    ring->identity = total_id;
    return MatrixRing{std::move(ring), g, std::move(offsets)};
}

GeneralisedContext extract_context(const MatrixRing& ring) {
    const GeneralisedContext& src = *ring.source;
    const Algebra& R = *ring.ring;
    const std::size_t n = src.n();
    auto block_dim = [&](std::size_t i, std::size_t j) { return src.blocks[i][j]->dim; };
    auto in_block = [&](std::size_t i, std::size_t j, std::size_t g) {
        return g >= ring.offsets[i][j] && g < ring.offsets[i][j] + block_dim(i, j);
    };
    // reads the product of two global basis elements, asserting it lies in the expected block
    auto read_product = [&](std::size_t gx, std::size_t gy, std::size_t i, std::size_t j) {
        Vec out = zero_vec(R.field, block_dim(i, j));
        for (std::size_t t = 0; t < R.dim; ++t) {
            const Scalar& c = R.c(gx, gy, t);
            if (c.is_zero()) continue;
            if (!in_block(i, j, t))
                throw InvariantViolated("extract_context: product escapes block (" + idx1(i) + "," +
                                        idx1(j) + ")");
            out[t - ring.offsets[i][j]] = c;
        }
        return out;
    };

    std::vector<AlgebraPtr> algebras;
    for (std::size_t i = 0; i < n; ++i) {
        Algebra a = *src.algebras[i];
        for (std::size_t x = 0; x < a.dim; ++x)
            for (std::size_t y = 0; y < a.dim; ++y) {
                Vec prod = read_product(ring.offsets[i][i] + x, ring.offsets[i][i] + y, i, i);
                for (std::size_t t = 0; t < a.dim; ++t) a.c(x, y, t) = prod[t];
            }
        algebras.push_back(std::make_shared<Algebra>(std::move(a)));
    }
    std::vector<std::vector<BimodulePtr>> off(n, std::vector<BimodulePtr>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            auto m = std::make_shared<Bimodule>();
            m->left = algebras[i];
            m->right = algebras[j];
            m->dim = block_dim(i, j);
            m->name = src.blocks[i][j]->name;
            m->left_action.assign(algebras[i]->dim * m->dim * m->dim, Scalar::zero(R.field));
            m->right_action.assign(m->dim * algebras[j]->dim * m->dim, Scalar::zero(R.field));
            for (std::size_t a = 0; a < algebras[i]->dim; ++a)
                for (std::size_t x = 0; x < m->dim; ++x) {
                    Vec prod = read_product(ring.offsets[i][i] + a, ring.offsets[i][j] + x, i, j);
                    for (std::size_t t = 0; t < m->dim; ++t) m->l(a, x, t) = prod[t];
                }
            for (std::size_t x = 0; x < m->dim; ++x)
                for (std::size_t b = 0; b < algebras[j]->dim; ++b) {
                    Vec prod = read_product(ring.offsets[i][j] + x, ring.offsets[j][j] + b, i, j);
                    for (std::size_t t = 0; t < m->dim; ++t) m->r(x, b, t) = prod[t];
                }
            off[i][j] = m;
        }
    GeneralisedContext g = make_context_frame(algebras, off, src.name);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) {
                if (k == i || k == j) continue;
                BilinearBlockMap& phi = g.maps[i][k][j];
                for (std::size_t x = 0; x < g.blocks[i][k]->dim; ++x)
                    for (std::size_t y = 0; y < g.blocks[k][j]->dim; ++y) {
                        Vec prod = read_product(ring.offsets[i][k] + x, ring.offsets[k][j] + y, i, j);
                        for (std::size_t t = 0; t < g.blocks[i][j]->dim; ++t) phi.t(x, y, t) = prod[t];
                    }
            }
    return g;
}

PeirceDecomposition peirce_partition(const AlgebraPtr& a, const std::vector<Vec>& group_units) {
    check_algebra_shape(*a);
    std::optional<Vec> id = a->identity ? a->identity : find_identity(*a);
    if (!id) throw NoIdentity("peirce: algebra '" + a->name + "' has no identity");
    const std::size_t n = group_units.size();
    const FieldSpec& f = a->field;
    for (const Vec& e : group_units)
        if (multiply(*a, e, e) != e)
            throw NotIdempotent("peirce: group unit is not idempotent: " + vec_str(e));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (!is_zero_vec(multiply(*a, group_units[i], group_units[j])))
                throw MalformedInput("peirce: group units " + idx1(i) + " and " + idx1(j) +
                                     " are not orthogonal");
        }
    Vec sum = zero_vec(f, a->dim);
    for (const Vec& e : group_units)
        for (std::size_t x = 0; x < a->dim; ++x) sum[x] += e[x];
    if (sum != *id) throw MalformedInput("peirce: group units do not sum to the identity");

    std::vector<AlgebraPtr> corners;
    std::vector<CornerAlgebra> corner_data;
    for (std::size_t i = 0; i < n; ++i) {
        corner_data.push_back(corner_subalgebra(*a, group_units[i]));
        corners.push_back(std::make_shared<Algebra>(corner_data.back().algebra));
    }
    std::vector<std::vector<Echelon>> spans;
    for (std::size_t i = 0; i < n; ++i) {
        spans.emplace_back();
        for (std::size_t j = 0; j < n; ++j)
            spans[i].push_back(corner_span(*a, group_units[i], group_units[j]));
    }
    auto span_vec = [&](const Echelon& e, std::size_t r) { return e.reduced.row(r); };

    std::vector<std::vector<BimodulePtr>> off(n, std::vector<BimodulePtr>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            auto m = std::make_shared<Bimodule>();
            m->left = corners[i];
            m->right = corners[j];
            m->dim = spans[i][j].pivots.size();
            m->name = a->name + "[" + idx1(i) + "," + idx1(j) + "]";
            m->left_action.assign(corners[i]->dim * m->dim * m->dim, Scalar::zero(f));
            m->right_action.assign(m->dim * corners[j]->dim * m->dim, Scalar::zero(f));
            for (std::size_t u = 0; u < corners[i]->dim; ++u)
                for (std::size_t x = 0; x < m->dim; ++x) {
                    Vec prod = multiply(*a, corner_data[i].embedding.col(u), span_vec(spans[i][j], x));
                    Vec coords = coords_in_span(spans[i][j], prod);
                    for (std::size_t t = 0; t < m->dim; ++t) m->l(u, x, t) = coords[t];
                }
            for (std::size_t x = 0; x < m->dim; ++x)
                for (std::size_t u = 0; u < corners[j]->dim; ++u) {
                    Vec prod = multiply(*a, span_vec(spans[i][j], x), corner_data[j].embedding.col(u));
                    Vec coords = coords_in_span(spans[i][j], prod);
                    for (std::size_t t = 0; t < m->dim; ++t) m->r(x, u, t) = coords[t];
                }
            off[i][j] = m;
        }

    GeneralisedContext g = make_context_frame(corners, off, a->name + "_peirce");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) {
                if (k == i || k == j) continue;
                BilinearBlockMap& phi = g.maps[i][k][j];
                for (std::size_t x = 0; x < g.blocks[i][k]->dim; ++x)
                    for (std::size_t y = 0; y < g.blocks[k][j]->dim; ++y) {
                        Vec prod = multiply(*a, span_vec(spans[i][k], x), span_vec(spans[k][j], y));
                        Vec coords = coords_in_span(spans[i][j], prod);
                        for (std::size_t t = 0; t < g.blocks[i][j]->dim; ++t)
                            phi.t(x, y, t) = coords[t];
                    }
            }

    Matrix basis(f, a->dim, a->dim);
    std::size_t col = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t x = 0; x < spans[i][j].pivots.size(); ++x, ++col) {
                Vec v = span_vec(spans[i][j], x);
                for (std::size_t r = 0; r < a->dim; ++r) basis.at(r, col) = v[r];
            }
    if (col != a->dim)
        throw InvariantViolated("peirce: block dimensions sum to " + std::to_string(col) +
                                ", expected " + std::to_string(a->dim));
    return PeirceDecomposition{std::make_shared<GeneralisedContext>(std::move(g)), std::move(basis)};
}

PeirceDecomposition peirce(const AlgebraPtr& a, const Vec& e) {
    check_algebra_shape(*a);
    if (multiply(*a, e, e) != e) throw NotIdempotent("peirce: e*e != e for e = " + vec_str(e));
    std::optional<Vec> id = a->identity ? a->identity : find_identity(*a);
    if (!id) throw NoIdentity("peirce: algebra '" + a->name + "' has no identity");
    Vec complement = *id;
    for (std::size_t x = 0; x < a->dim; ++x) complement[x] -= e[x];
    return peirce_partition(a, {complement, e});
}

// -- collections ------------------------------------------------------------

namespace {

void check_collection_shape(const ContextPtr& ctx, const std::vector<BimodulePtr>& entries,
                            const std::vector<std::vector<BilinearBlockMap>>& structure,
                            bool column, const std::string& name) {
    const std::size_t n = ctx->n();
    require(entries.size() == n, "collection '" + name + "': wrong entry count");
    require(structure.size() == n, "collection '" + name + "': wrong structure grid");
    for (std::size_t i = 0; i < n; ++i) {
        require(entries[i] != nullptr, "collection '" + name + "': missing entry");
        require(structure[i].size() == n, "collection '" + name + "': wrong structure grid");
        if (column)
            require(*entries[i]->left == *ctx->algebras[i],
                    "collection '" + name + "': P[" + idx1(i) + "] is not a left A_" + idx1(i) +
                        "-module");
        else
            require(*entries[i]->right == *ctx->algebras[i],
                    "collection '" + name + "': P[" + idx1(i) + "] is not a right A_" + idx1(i) +
                        "-module");
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const BilinearBlockMap& b = structure[i][k];
            check_block_map_shape(b);
            if (column)
                require(*b.left_factor == *ctx->blocks[i][k] && *b.right_factor == *entries[k] &&
                            *b.codomain == *entries[i],
                        "collection '" + name + "': structure map beta[" + idx1(i) + "][" + idx1(k) +
                            "] has mismatched factors");
            else
                require(*b.left_factor == *entries[i] && *b.right_factor == *ctx->blocks[i][k] &&
                            *b.codomain == *entries[k],
                        "collection '" + name + "': structure map beta[" + idx1(i) + "][" + idx1(k) +
                            "] has mismatched factors");
        }
}

}  // namespace

VerificationReport verify_column_collection(const ColumnCollection& p) {
    check_collection_shape(p.ctx, p.entries, p.structure, true, p.name);
    const std::size_t n = p.ctx->n();
    VerificationReport report;
    for (std::size_t i = 0; i < n; ++i)
        report.absorb(verify_bimodule(*p.entries[i]), "entries: P[" + idx1(i) + "]");

    ReportSection& diag = report.section("diagonal structure maps");
    for (std::size_t i = 0; i < n; ++i) {
        ++diag.checks;
        if (p.structure[i][i].tensor != p.entries[i]->left_action)
            diag.fail("beta[" + idx1(i) + "][" + idx1(i) + "] differs from the left action");
    }

    ReportSection& maps = report.section("structure maps: module homomorphism");
    ReportSection& bal = report.section("structure maps: balance");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const std::string label = "beta[" + idx1(i) + "][" + idx1(k) + "]";
            check_left_linear(p.structure[i][k], maps, label);
            check_balanced_into(p.structure[i][k], *p.ctx->algebras[k], bal, label);
        }

    ReportSection& assoc = report.section("associativity");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t h = 0; h < n; ++h) {
                std::ostringstream label;
                label << "(i=" << i + 1 << ", k=" << k + 1 << ", h=" << h + 1 << ")";
                // beta_ih (phi_ikh (x) 1) = beta_ik (1 (x) beta_kh) on M_ik (x) M_kh (x) P_h
                check_mixed_triple(p.structure[i][k], p.structure[k][h], p.structure[i][h],
                                   p.ctx->phi(i, k, h), assoc, label.str());
            }
    return report;
}

VerificationReport verify_row_collection(const RowCollection& p) {
    check_collection_shape(p.ctx, p.entries, p.structure, false, p.name);
    const std::size_t n = p.ctx->n();
    VerificationReport report;
    for (std::size_t i = 0; i < n; ++i)
        report.absorb(verify_bimodule(*p.entries[i]), "entries: P[" + idx1(i) + "]");

    ReportSection& diag = report.section("diagonal structure maps");
    for (std::size_t i = 0; i < n; ++i) {
        ++diag.checks;
        if (p.structure[i][i].tensor != p.entries[i]->right_action)
            diag.fail("beta[" + idx1(i) + "][" + idx1(i) + "] differs from the right action");
    }

    ReportSection& maps = report.section("structure maps: module homomorphism");
    ReportSection& bal = report.section("structure maps: balance");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const std::string label = "beta[" + idx1(i) + "][" + idx1(k) + "]";
            check_right_linear(p.structure[i][k], maps, label);
            check_balanced_into(p.structure[i][k], *p.ctx->algebras[i], bal, label);
        }

    ReportSection& assoc = report.section("associativity");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t h = 0; h < n; ++h) {
                std::ostringstream label;
                label << "(i=" << i + 1 << ", k=" << k + 1 << ", h=" << h + 1 << ")";
                // beta_ih (1 (x) phi_ikh)?  row form: (p.m).m' = p.(m m'):
                // beta_kh (beta_ik (x) 1) = beta_ih (1 (x) phi_ikh) on P_i (x) M_ik (x) M_kh
                check_mixed_triple(p.structure[i][h], p.ctx->phi(i, k, h), p.structure[k][h],
                                   p.structure[i][k], assoc, label.str());
            }
    return report;
}

VerificationReport verify_column_morphism(const ColumnCollection& p, const ColumnCollection& p2,
                                          const std::vector<Matrix>& f) {
    const std::size_t n = p.ctx->n();
    require(p2.ctx->n() == n && f.size() == n, "column morphism: arity mismatch");
    for (std::size_t i = 0; i < n; ++i)
        require(f[i].cols() == p.entries[i]->dim && f[i].rows() == p2.entries[i]->dim,
                "column morphism: f[" + idx1(i) + "] has wrong shape");
    const FieldSpec& field = p.ctx->algebras.empty() ? rationals() : p.ctx->algebras[0]->field;
    VerificationReport report;

    ReportSection& lin = report.section("left linearity");
    for (std::size_t i = 0; i < n; ++i) {
        const Bimodule& P = *p.entries[i];
        const Bimodule& P2 = *p2.entries[i];
        for (std::size_t a = 0; a < P.left->dim; ++a)
            for (std::size_t x = 0; x < P.dim; ++x) {
                ++lin.checks;
                Vec ax = block_row_to_vec(field, P.left_row(a, x), P.dim);
                Vec lhs = apply_matrix(f[i], ax);
                Vec rhs = act_left(P2, unit_vec(field, P.left->dim, a), apply_matrix(f[i], unit_vec(field, P.dim, x)));
                if (lhs != rhs)
                    lin.fail("f[" + idx1(i) + "] not left-linear at (a=" + idx1(a) + ", x=" + idx1(x) +
                             ")");
            }
    }

    ReportSection& sq = report.section("structure squares");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const BilinearBlockMap& b = p.structure[i][j];
            const BilinearBlockMap& b2 = p2.structure[i][j];
            for (std::size_t m = 0; m < b.left_factor->dim; ++m)
                for (std::size_t x = 0; x < b.right_factor->dim; ++x) {
                    ++sq.checks;
                    Vec lhs = apply_matrix(f[i], block_row_to_vec(field, b.row(m, x), b.codomain->dim));
                    Vec fx = apply_matrix(f[j], unit_vec(field, b.right_factor->dim, x));
                    Vec rhs = eval(b2, unit_vec(field, b2.left_factor->dim, m), fx);
                    if (lhs != rhs)
                        sq.fail("square (i=" + idx1(i) + ", j=" + idx1(j) + ") breaks at (m=" +
                                idx1(m) + ", x=" + idx1(x) + ")");
                }
        }
    return report;
}

ColumnCollection column_of_ring(const ContextPtr& g, std::size_t j) {
    const std::size_t n = g->n();
    require(j < n, "column_of_ring: column index out of range");
    ColumnCollection col;
    col.ctx = g;
    col.name = g->name + "_col" + idx1(j);
    for (std::size_t i = 0; i < n; ++i)
        col.entries.push_back(left_module_as_bimodule(g->algebras[i], g->blocks[i][j]->dim,
                                                      g->blocks[i][j]->left_action,
                                                      g->blocks[i][j]->name + "_col"));
    col.structure.assign(n, std::vector<BilinearBlockMap>());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            BilinearBlockMap b;
            b.left_factor = g->blocks[i][k];
            b.right_factor = col.entries[k];
            b.codomain = col.entries[i];
            b.tensor = g->phi(i, k, j).tensor;
            col.structure[i].push_back(std::move(b));
        }
    return col;
}

RowCollection row_of_ring(const ContextPtr& g, std::size_t i) {
    const std::size_t n = g->n();
    require(i < n, "row_of_ring: row index out of range");
    RowCollection row;
    row.ctx = g;
    row.name = g->name + "_row" + idx1(i);
    for (std::size_t k = 0; k < n; ++k)
        row.entries.push_back(right_module_as_bimodule(g->algebras[k], g->blocks[i][k]->dim,
                                                       g->blocks[i][k]->right_action,
                                                       g->blocks[i][k]->name + "_row"));
    row.structure.assign(n, std::vector<BilinearBlockMap>());
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t k = 0; k < n; ++k) {
            BilinearBlockMap b;
            b.left_factor = row.entries[a];
            b.right_factor = g->blocks[a][k];
            b.codomain = row.entries[k];
            b.tensor = g->phi(i, a, k).tensor;
            row.structure[a].push_back(std::move(b));
        }
    return row;
}

// -- matrix bimodules -------------------------------------------------------

namespace {

void check_matrix_bimodule_shape(const MatrixBimodule& t) {
    const std::size_t n = t.row_ctx->n();
    require(t.col_ctx->n() == n, "matrix bimodule '" + t.name + "': contexts of different arity");
    require(t.blocks.size() == n && t.left_structure.size() == n && t.right_structure.size() == n,
            "matrix bimodule '" + t.name + "': grid size mismatch");
    for (std::size_t i = 0; i < n; ++i) {
        require(t.blocks[i].size() == n, "matrix bimodule '" + t.name + "': grid size mismatch");
        for (std::size_t j = 0; j < n; ++j) {
            require(t.blocks[i][j] != nullptr, "matrix bimodule '" + t.name + "': missing block");
            require(*t.blocks[i][j]->left == *t.row_ctx->algebras[i] &&
                        *t.blocks[i][j]->right == *t.col_ctx->algebras[j],
                    "matrix bimodule '" + t.name + "': block T[" + idx1(i) + "][" + idx1(j) +
                        "] has mismatched algebras");
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) {
                const BilinearBlockMap& l = t.left_structure[i][k][j];
                require(*l.left_factor == *t.row_ctx->blocks[i][k] &&
                            *l.right_factor == *t.blocks[k][j] && *l.codomain == *t.blocks[i][j],
                        "matrix bimodule '" + t.name + "': left structure gamma[" + idx1(i) + "][" +
                            idx1(k) + "][" + idx1(j) + "] has mismatched factors");
                const BilinearBlockMap& r = t.right_structure[i][k][j];
                require(*r.left_factor == *t.blocks[i][k] &&
                            *r.right_factor == *t.col_ctx->blocks[k][j] &&
                            *r.codomain == *t.blocks[i][j],
                        "matrix bimodule '" + t.name + "': right structure beta[" + idx1(i) + "][" +
                            idx1(k) + "][" + idx1(j) + "] has mismatched factors");
            }
}

}  // namespace

VerificationReport verify_matrix_bimodule(const MatrixBimodule& t) {
    check_matrix_bimodule_shape(t);
    const std::size_t n = t.row_ctx->n();
    VerificationReport report;

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            report.absorb(verify_bimodule(*t.blocks[i][j]),
                          "blocks: T[" + idx1(i) + "][" + idx1(j) + "]");

    ReportSection& diag = report.section("diagonal structure maps");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            ++diag.checks;
            if (t.left_structure[i][i][j].tensor != t.blocks[i][j]->left_action)
                diag.fail("gamma[" + idx1(i) + "][" + idx1(i) + "][" + idx1(j) +
                          "] differs from the left action");
            ++diag.checks;
            if (t.right_structure[i][j][j].tensor != t.blocks[i][j]->right_action)
                diag.fail("beta[" + idx1(i) + "][" + idx1(j) + "][" + idx1(j) +
                          "] differs from the right action");
        }

    ReportSection& hom = report.section("structure maps: module homomorphism");
    ReportSection& bal = report.section("structure maps: balance");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) {
                const std::string gl = "gamma[" + idx1(i) + "][" + idx1(k) + "][" + idx1(j) + "]";
                check_left_linear(t.left_structure[i][k][j], hom, gl);
                check_balanced_into(t.left_structure[i][k][j], *t.row_ctx->algebras[k], bal, gl);
                const std::string bl = "beta[" + idx1(i) + "][" + idx1(k) + "][" + idx1(j) + "]";
                check_right_linear(t.right_structure[i][k][j], hom, bl);
                check_balanced_into(t.right_structure[i][k][j], *t.col_ctx->algebras[k], bal, bl);
            }

    ReportSection& colassoc = report.section("column collections");
    parallel_sweep(n * n * n * n, colassoc, [&](std::size_t q, ReportSection& sec) {
        const std::size_t i = q / (n * n * n);
        const std::size_t k = (q / (n * n)) % n;
        const std::size_t h = (q / n) % n;
        const std::size_t j = q % n;
        std::ostringstream label;
        label << "column " << j + 1 << " (i=" << i + 1 << ", k=" << k + 1 << ", h=" << h + 1 << ")";
        // gamma_ihj (phi_ikh (x) 1) = gamma_ikj (1 (x) gamma_khj) on M_ik (x) M_kh (x) T_hj
        check_mixed_triple(t.left_structure[i][k][j], t.left_structure[k][h][j],
                           t.left_structure[i][h][j], t.row_ctx->phi(i, k, h), sec, label.str());
    });

    ReportSection& rowassoc = report.section("row collections");
    parallel_sweep(n * n * n * n, rowassoc, [&](std::size_t q, ReportSection& sec) {
        const std::size_t i = q / (n * n * n);
        const std::size_t h = (q / (n * n)) % n;
        const std::size_t k = (q / n) % n;
        const std::size_t j = q % n;
        std::ostringstream label;
        label << "row " << i + 1 << " (h=" << h + 1 << ", k=" << k + 1 << ", j=" << j + 1 << ")";
        // beta_ihj (1 (x) phi'_hkj) = beta_ikj (beta_ihk (x) 1) on T_ih (x) M'_hk (x) M'_kj
        check_mixed_triple(t.right_structure[i][h][j], t.col_ctx->phi(h, k, j),
                           t.right_structure[i][k][j], t.right_structure[i][h][k], sec, label.str());
    });

    ReportSection& compat = report.section("compatibility");
    parallel_sweep(n * n * n * n, compat, [&](std::size_t q, ReportSection& sec) {
        const std::size_t h = q / (n * n * n);
        const std::size_t i = (q / (n * n)) % n;
        const std::size_t j = (q / n) % n;
        const std::size_t k = q % n;
        std::ostringstream label;
        label << "(h=" << h + 1 << ", i=" << i + 1 << ", j=" << j + 1 << ", k=" << k + 1 << ")";
        // beta_ikj (gamma_ihk (x) 1) = gamma_ihj (1 (x) beta_hkj) on M_ih (x) T_hk (x) M'_kj
        check_mixed_triple(t.left_structure[i][h][j], t.right_structure[h][k][j],
                           t.right_structure[i][k][j], t.left_structure[i][h][k], sec, label.str());
    });
    return report;
}

MatrixBimodule regular_matrix_bimodule(const ContextPtr& g) {
    MatrixBimodule t;
    t.row_ctx = g;
    t.col_ctx = g;
    t.blocks = g->blocks;
    t.left_structure = g->maps;
    t.right_structure = g->maps;
    t.name = g->name + "_regular";
    return t;
}

FlattenedGrid flatten_matrix_bimodule(const MatrixBimodule& t, const MatrixRing& left_ring,
                                      const MatrixRing& right_ring) {
    const std::size_t n = t.row_ctx->n();
    const FieldSpec& f = left_ring.ring->field;
    std::vector<std::vector<std::size_t>> offsets(n, std::vector<std::size_t>(n, 0));
    std::size_t total = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            offsets[i][j] = total;
            total += t.blocks[i][j]->dim;
        }
    auto m = std::make_shared<Bimodule>();
    m->left = left_ring.ring;
    m->right = right_ring.ring;
    m->dim = total;
    m->name = t.name + "_flat";
    m->left_action.assign(left_ring.ring->dim * total * total, Scalar::zero(f));
    m->right_action.assign(total * right_ring.ring->dim * total, Scalar::zero(f));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t j = 0; j < n; ++j) {
                const BilinearBlockMap& gamma = t.left_structure[a][b][j];
                for (std::size_t z = 0; z < gamma.left_factor->dim; ++z)
                    for (std::size_t x = 0; x < gamma.right_factor->dim; ++x) {
                        const Scalar* row = gamma.row(z, x);
                        const std::size_t gz = left_ring.global_index(a, b, z);
                        for (std::size_t u = 0; u < gamma.codomain->dim; ++u)
                            m->l(gz, offsets[b][j] + x, offsets[a][j] + u) = row[u];
                    }
            }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                const BilinearBlockMap& beta = t.right_structure[i][a][b];
                for (std::size_t x = 0; x < beta.left_factor->dim; ++x)
                    for (std::size_t z = 0; z < beta.right_factor->dim; ++z) {
                        const Scalar* row = beta.row(x, z);
                        const std::size_t gz = right_ring.global_index(a, b, z);
                        for (std::size_t u = 0; u < beta.codomain->dim; ++u)
                            m->r(offsets[i][a] + x, gz, offsets[i][b] + u) = row[u];
                    }
            }
    return FlattenedGrid{m, std::move(offsets)};
}

BilinearBlockMap flatten_pairing(
    const std::vector<std::vector<std::vector<BilinearBlockMap>>>& alphas, const FlattenedGrid& x,
    const FlattenedGrid& y, const MatrixRing& target) {
    const std::size_t n = target.source->n();
    BilinearBlockMap out = zero_block_map(x.bim, y.bim, regular_bimodule(target.ring));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) {
                const BilinearBlockMap& a = alphas[i][k][j];
                if (!(*a.codomain == *target.source->blocks[i][j]))
                    throw InvariantViolated("flatten_pairing: codomain mismatch");
                for (std::size_t u = 0; u < a.left_factor->dim; ++u)
                    for (std::size_t v = 0; v < a.right_factor->dim; ++v) {
                        const Scalar* row = a.row(u, v);
                        for (std::size_t w = 0; w < a.codomain->dim; ++w)
                            out.t(x.offsets[i][k] + u, y.offsets[k][j] + v,
                                  target.global_index(i, j, w)) = row[w];
                    }
            }
    return out;
}

BlockwiseFactored factor_blockwise_balanced(const RowCollection& rows,
                                            const ColumnCollection& cols,
                                            const std::vector<BilinearBlockMap>& alphas,
                                            const BimodulePtr& target) {
    const std::size_t n = rows.ctx->n();
    require(cols.ctx->n() == n, "factor_blockwise_balanced: contexts of different arity");
    require(alphas.size() == n, "factor_blockwise_balanced: wrong number of pairings");
    for (std::size_t k = 0; k < n; ++k) {
        check_block_map_shape(alphas[k]);
        require(*alphas[k].left_factor == *rows.entries[k] &&
                    *alphas[k].right_factor == *cols.entries[k] && *alphas[k].codomain == *target,
                "factor_blockwise_balanced: alpha[" + idx1(k) + "] has mismatched factors");
    }
    // alpha_i (1 (x) gamma_ij) = alpha_j (beta_ij (x) 1) on P_i (x) M_ij (x) Q_j
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            ReportSection probe{"compat"};
            check_mixed_triple(alphas[i], cols.structure[i][j], alphas[j], rows.structure[i][j],
                               probe, "");
            if (!probe.passed())
                throw NotBalanced("factor_blockwise_balanced: compatibility fails at (i=" + idx1(i) +
                                  ", j=" + idx1(j) + "), first witness " + probe.witnesses.front());
        }

    MatrixRing ring = matrix_ring(rows.ctx, Checked::yes);
    const FieldSpec& f = ring.ring->field;

    std::vector<std::size_t> p_off(n, 0), q_off(n, 0);
    std::size_t p_total = 0, q_total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        p_off[i] = p_total;
        p_total += rows.entries[i]->dim;
        q_off[i] = q_total;
        q_total += cols.entries[i]->dim;
    }
    auto flat_rows = std::make_shared<Bimodule>();
    flat_rows->left = std::make_shared<Algebra>(field_algebra(f));
    flat_rows->right = ring.ring;
    flat_rows->dim = p_total;
    flat_rows->name = rows.name + "_flat";
    flat_rows->left_action.assign(p_total * p_total, Scalar::zero(f));
    for (std::size_t x = 0; x < p_total; ++x) flat_rows->l(0, x, x) = Scalar::one(f);
    flat_rows->right_action.assign(p_total * ring.ring->dim * p_total, Scalar::zero(f));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            const BilinearBlockMap& beta = rows.structure[a][b];
            for (std::size_t x = 0; x < beta.left_factor->dim; ++x)
                for (std::size_t z = 0; z < beta.right_factor->dim; ++z) {
                    const Scalar* row = beta.row(x, z);
                    for (std::size_t u = 0; u < beta.codomain->dim; ++u)
                        flat_rows->r(p_off[a] + x, ring.global_index(a, b, z), p_off[b] + u) = row[u];
                }
        }
    auto flat_cols = std::make_shared<Bimodule>();
    flat_cols->left = ring.ring;
    flat_cols->right = std::make_shared<Algebra>(field_algebra(f));
    flat_cols->dim = q_total;
    flat_cols->name = cols.name + "_flat";
    flat_cols->right_action.assign(q_total * q_total, Scalar::zero(f));
    for (std::size_t x = 0; x < q_total; ++x) flat_cols->r(x, 0, x) = Scalar::one(f);
    flat_cols->left_action.assign(ring.ring->dim * q_total * q_total, Scalar::zero(f));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            const BilinearBlockMap& gamma = cols.structure[a][b];
            for (std::size_t z = 0; z < gamma.left_factor->dim; ++z)
                for (std::size_t x = 0; x < gamma.right_factor->dim; ++x) {
                    const Scalar* row = gamma.row(z, x);
                    for (std::size_t u = 0; u < gamma.codomain->dim; ++u)
                        flat_cols->l(ring.global_index(a, b, z), q_off[b] + x, q_off[a] + u) = row[u];
                }
        }

    BilinearBlockMap flat_alpha = zero_block_map(flat_rows, flat_cols, target);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t u = 0; u < alphas[k].left_factor->dim; ++u)
            for (std::size_t v = 0; v < alphas[k].right_factor->dim; ++v) {
                const Scalar* row = alphas[k].row(u, v);
                for (std::size_t w = 0; w < target->dim; ++w)
                    flat_alpha.t(p_off[k] + u, q_off[k] + v, w) = row[w];
            }

    BalanceCheck bc = is_balanced(flat_alpha, *ring.ring);
    if (!bc.balanced)
        throw InvariantViolated(
            "factor_blockwise_balanced: assembled map is not balanced over the matrix ring");
    TensorSpace space = tensor_over(flat_rows, flat_cols);
    Matrix factored = factor_balanced(flat_alpha, space);
    return BlockwiseFactored{std::move(ring), flat_rows, flat_cols, std::move(space),
                             std::move(factored)};
}

// -- standard classical contexts -------------------------------------------

ClassicalContext identity_context(const AlgebraPtr& a) {
    return iso_context(a, a, Matrix::identity(a->field, a->dim));
}

ClassicalContext iso_context(const AlgebraPtr& a, const AlgebraPtr& b, const Matrix& iso) {
    require(iso.rows() == b->dim && iso.cols() == a->dim, "iso_context: map shape mismatch");
    auto back = inverse(iso);
    if (!back) throw MalformedInput("iso_context: the map is not invertible");
    const FieldSpec& f = a->field;
    for (std::size_t x = 0; x < a->dim; ++x)
        for (std::size_t y = 0; y < a->dim; ++y) {
            Vec lhs = apply_matrix(iso, block_row_to_vec(f, a->product_row(x, y), a->dim));
            Vec rhs = multiply(*b, iso.col(x), iso.col(y));
            if (lhs != rhs)
                throw MalformedInput("iso_context: the map is not an algebra homomorphism at (" +
                                     idx1(x) + ", " + idx1(y) + ")");
        }

    auto N = std::make_shared<Bimodule>();
    N->left = a;
    N->right = b;
    N->dim = a->dim;
    N->name = a->name + "~" + b->name;
    N->left_action = a->mul;
    N->right_action.assign(a->dim * b->dim * a->dim, Scalar::zero(f));
    for (std::size_t x = 0; x < a->dim; ++x)
        for (std::size_t y = 0; y < b->dim; ++y) {
            Vec prod = multiply(*a, unit_vec(f, a->dim, x), back->col(y));
            for (std::size_t t = 0; t < a->dim; ++t) N->r(x, y, t) = prod[t];
        }
    auto L = std::make_shared<Bimodule>();
    L->left = b;
    L->right = a;
    L->dim = b->dim;
    L->name = b->name + "~" + a->name;
    L->left_action = b->mul;
    L->right_action.assign(b->dim * a->dim * b->dim, Scalar::zero(f));
    for (std::size_t x = 0; x < b->dim; ++x)
        for (std::size_t y = 0; y < a->dim; ++y) {
            Vec prod = multiply(*b, unit_vec(f, b->dim, x), iso.col(y));
            for (std::size_t t = 0; t < b->dim; ++t) L->r(x, y, t) = prod[t];
        }

    std::vector<Scalar> zeta(a->dim * b->dim * a->dim, Scalar::zero(f));
    for (std::size_t x = 0; x < a->dim; ++x)
        for (std::size_t y = 0; y < b->dim; ++y) {
            Vec prod = multiply(*a, unit_vec(f, a->dim, x), back->col(y));
            for (std::size_t t = 0; t < a->dim; ++t) zeta[(x * b->dim + y) * a->dim + t] = prod[t];
        }
    std::vector<Scalar> theta(b->dim * a->dim * b->dim, Scalar::zero(f));
    for (std::size_t x = 0; x < b->dim; ++x)
        for (std::size_t y = 0; y < a->dim; ++y) {
            Vec prod = multiply(*b, unit_vec(f, b->dim, x), iso.col(y));
            for (std::size_t t = 0; t < b->dim; ++t) theta[(x * a->dim + y) * b->dim + t] = prod[t];
        }
    return make_classical(a, b, N, L, std::move(zeta), std::move(theta),
                          a->name + "~" + b->name);
}

Algebra matrix_over_algebra(const Algebra& a, std::size_t k) {
    if (k == 0) throw MalformedInput("matrix_over_algebra: k = 0");
    const FieldSpec& f = a.field;
    Algebra m;
    m.field = f;
    m.dim = k * k * a.dim;
    m.name = "M" + std::to_string(k) + "(" + a.name + ")";
    m.mul.assign(m.dim * m.dim * m.dim, Scalar::zero(f));
    auto gx = [&](std::size_t r, std::size_t c, std::size_t x) { return (r * k + c) * a.dim + x; };
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = 0; c < k; ++c)
            for (std::size_t c2 = 0; c2 < k; ++c2)
                for (std::size_t x = 0; x < a.dim; ++x)
                    for (std::size_t y = 0; y < a.dim; ++y) {
                        const Scalar* row = a.product_row(x, y);
                        for (std::size_t t = 0; t < a.dim; ++t)
                            m.c(gx(r, c, x), gx(c, c2, y), gx(r, c2, t)) = row[t];
                    }
    for (std::size_t r = 0; r < k; ++r)
        for (const Vec& e : a.idempotents) {
            Vec lifted = zero_vec(f, m.dim);
            for (std::size_t x = 0; x < a.dim; ++x) lifted[gx(r, r, x)] = e[x];
            m.idempotents.push_back(std::move(lifted));
        }
    if (a.identity) {
        Vec id = zero_vec(f, m.dim);
        for (std::size_t r = 0; r < k; ++r)
            for (std::size_t x = 0; x < a.dim; ++x) id[gx(r, r, x)] = (*a.identity)[x];
        m.identity = id;
    }
    return m;
}

BimodulePtr rows_bimodule(const AlgebraPtr& a, const AlgebraPtr& mk, std::size_t k) {
    const FieldSpec& f = a->field;
    auto rows = std::make_shared<Bimodule>();
    rows->left = a;
    rows->right = mk;
    rows->dim = k * a->dim;
    rows->name = a->name + "_rows" + std::to_string(k);
    auto ix = [&](std::size_t c, std::size_t x) { return c * a->dim + x; };
    auto gx = [&](std::size_t r, std::size_t c, std::size_t x) { return (r * k + c) * a->dim + x; };
    rows->left_action.assign(a->dim * rows->dim * rows->dim, Scalar::zero(f));
    for (std::size_t z = 0; z < a->dim; ++z)
        for (std::size_t c = 0; c < k; ++c)
            for (std::size_t x = 0; x < a->dim; ++x) {
                const Scalar* row = a->product_row(z, x);
                for (std::size_t t = 0; t < a->dim; ++t)
                    rows->l(z, ix(c, x), ix(c, t)) = row[t];
            }
    rows->right_action.assign(rows->dim * mk->dim * rows->dim, Scalar::zero(f));
    for (std::size_t c = 0; c < k; ++c)
        for (std::size_t x = 0; x < a->dim; ++x)
            for (std::size_t c2 = 0; c2 < k; ++c2)
                for (std::size_t y = 0; y < a->dim; ++y) {
                    const Scalar* row = a->product_row(x, y);
                    for (std::size_t t = 0; t < a->dim; ++t)
                        rows->r(ix(c, x), gx(c, c2, y), ix(c2, t)) = row[t];
                }
    return rows;
}

BimodulePtr cols_bimodule(const AlgebraPtr& a, const AlgebraPtr& mk, std::size_t k) {
    const FieldSpec& f = a->field;
    auto cols = std::make_shared<Bimodule>();
    cols->left = mk;
    cols->right = a;
    cols->dim = k * a->dim;
    cols->name = a->name + "_cols" + std::to_string(k);
    auto ix = [&](std::size_t r, std::size_t x) { return r * a->dim + x; };
    auto gx = [&](std::size_t r, std::size_t c, std::size_t x) { return (r * k + c) * a->dim + x; };
    cols->left_action.assign(mk->dim * cols->dim * cols->dim, Scalar::zero(f));
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = 0; c < k; ++c)
            for (std::size_t y = 0; y < a->dim; ++y)
                for (std::size_t x = 0; x < a->dim; ++x) {
                    const Scalar* row = a->product_row(y, x);
                    for (std::size_t t = 0; t < a->dim; ++t)
                        cols->l(gx(r, c, y), ix(c, x), ix(r, t)) = row[t];
                }
    cols->right_action.assign(cols->dim * a->dim * cols->dim, Scalar::zero(f));
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t x = 0; x < a->dim; ++x)
            for (std::size_t z = 0; z < a->dim; ++z) {
                const Scalar* row = a->product_row(x, z);
                for (std::size_t t = 0; t < a->dim; ++t)
                    cols->r(ix(r, x), z, ix(r, t)) = row[t];
            }
    return cols;
}

ClassicalContext amplification_context(const AlgebraPtr& a, std::size_t k) {
    auto mk = std::make_shared<Algebra>(matrix_over_algebra(*a, k));
    BimodulePtr N = rows_bimodule(a, mk, k);
    BimodulePtr L = cols_bimodule(a, mk, k);
    const FieldSpec& f = a->field;
    auto nx = [&](std::size_t c, std::size_t x) { return c * a->dim + x; };
    auto gx = [&](std::size_t r, std::size_t c, std::size_t x) { return (r * k + c) * a->dim + x; };
    // zeta(row (x,c), col (y,r)) = delta_{cr} x*y in a
    std::vector<Scalar> zeta(N->dim * L->dim * a->dim, Scalar::zero(f));
    for (std::size_t c = 0; c < k; ++c)
        for (std::size_t x = 0; x < a->dim; ++x)
            for (std::size_t y = 0; y < a->dim; ++y) {
                const Scalar* row = a->product_row(x, y);
                for (std::size_t t = 0; t < a->dim; ++t)
                    zeta[(nx(c, x) * L->dim + nx(c, y)) * a->dim + t] = row[t];
            }
    // theta(col (y,r), row (x,c)) = (y*x, r, c) in M_k(a)
    std::vector<Scalar> theta(L->dim * N->dim * mk->dim, Scalar::zero(f));
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t y = 0; y < a->dim; ++y)
            for (std::size_t c = 0; c < k; ++c)
                for (std::size_t x = 0; x < a->dim; ++x) {
                    const Scalar* row = a->product_row(y, x);
                    for (std::size_t t = 0; t < a->dim; ++t)
                        theta[(nx(r, y) * N->dim + nx(c, x)) * mk->dim + gx(r, c, t)] = row[t];
                }
    return make_classical(a, mk, N, L, std::move(zeta), std::move(theta),
                          a->name + "~M" + std::to_string(k));
}

}  // namespace morita
