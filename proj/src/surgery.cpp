#include "morita/surgery.hpp"

#include <functional>
#include <sstream>

#include "morita/parallel.hpp"

namespace morita {

namespace {

std::string idx1(std::size_t i) { return std::to_string(i + 1); }

struct Parts {
    ContextPtr g;
    ClassicalContext c;
    std::size_t t = 0;
    std::vector<TensorSpace> ts_n;  // i -> M_it (x)_R N, literal R (x) N at i = t
    std::vector<TensorSpace> ts_l;  // j -> L (x)_R M_tj, literal L (x) R at j = t
    ContextPtr composed;
};

// Builds a bilinear map by evaluating `fn` on all basis pairs of the factors;
// fn returns codomain coordinates.
BilinearBlockMap build_map(const BimodulePtr& lf, const BimodulePtr& rf, const BimodulePtr& cod,
                           const std::function<Vec(std::size_t, std::size_t)>& fn) {
    BilinearBlockMap b = zero_block_map(lf, rf, cod);
    for (std::size_t x = 0; x < lf->dim; ++x)
        for (std::size_t y = 0; y < rf->dim; ++y) {
            Vec out = fn(x, y);
            for (std::size_t k = 0; k < cod->dim; ++k) b.t(x, y, k) = out[k];
        }
    return b;
}

class CaseBuilder {
public:
    CaseBuilder(const ContextPtr& g, const ClassicalContext& c, std::size_t t,
                const std::vector<TensorSpace>& ts_n, const std::vector<TensorSpace>& ts_l)
        : g_(g), c_(c), t_(t), ts_n_(ts_n), ts_l_(ts_l), field_(c.R->field) {}

    // phi_ikt (x) 1_N : M_ik x (M_kt (x) N) -> M_it (x) N
    BilinearBlockMap phi_tensor_n(std::size_t i, std::size_t k) const {
        const TensorSpace& src = ts_n_[k];
        const TensorSpace& dst = ts_n_[i];
        const BilinearBlockMap& phi = g_->phi(i, k, t_);
        const std::size_t ndim = c_.N->dim;
        return build_map(g_->blocks[i][k], src.quotient, dst.quotient, [&](std::size_t x, std::size_t qy) {
            Vec amb_y = src.section.col(qy);
            Vec out_amb = zero_vec(field_, dst.ambient_dim());
            for (std::size_t cc = 0; cc < src.left_factor->dim; ++cc)
                for (std::size_t d = 0; d < ndim; ++d) {
                    const Scalar& coeff = amb_y[cc * ndim + d];
                    if (coeff.is_zero()) continue;
                    const Scalar* row = phi.row(x, cc);
                    for (std::size_t v = 0; v < dst.left_factor->dim; ++v)
                        out_amb[v * ndim + d].add_mul(coeff, row[v]);
                }
            return apply_matrix(dst.projection, out_amb);
        });
    }

    // 1_L (x) phi_tkj : (L (x) M_tk) x M_kj -> L (x) M_tj
    BilinearBlockMap l_tensor_phi(std::size_t k, std::size_t j) const {
        const TensorSpace& src = ts_l_[k];
        const TensorSpace& dst = ts_l_[j];
        const BilinearBlockMap& phi = g_->phi(t_, k, j);
        const std::size_t ldim = c_.L->dim;
        return build_map(src.quotient, g_->blocks[k][j], dst.quotient, [&](std::size_t qx, std::size_t y) {
            Vec amb_x = src.section.col(qx);
            Vec out_amb = zero_vec(field_, dst.ambient_dim());
            const std::size_t src_m = src.right_factor->dim;
            const std::size_t dst_m = dst.right_factor->dim;
            for (std::size_t cc = 0; cc < ldim; ++cc)
                for (std::size_t d = 0; d < src_m; ++d) {
                    const Scalar& coeff = amb_x[cc * src_m + d];
                    if (coeff.is_zero()) continue;
                    const Scalar* row = phi.row(d, y);
                    for (std::size_t v = 0; v < dst_m; ++v)
                        out_amb[cc * dst_m + v].add_mul(coeff, row[v]);
                }
            return apply_matrix(dst.projection, out_amb);
        });
    }

    // phi_itj . (rho (x) 1) . (1 (x) zeta (x) 1) : (M_it (x) N) x (L (x) M_tj) -> M_ij
    BilinearBlockMap zeta_sandwich(std::size_t i, std::size_t j) const {
        const TensorSpace& left = ts_n_[i];
        const TensorSpace& right = ts_l_[j];
        const BimodulePtr& mit = g_->blocks[i][t_];
        const BimodulePtr& cod = g_->blocks[i][j];
        const BilinearBlockMap& phi = g_->phi(i, t_, j);
        const std::size_t ndim = c_.N->dim, ldim = c_.L->dim;
        const std::size_t mdim = right.right_factor->dim;
        return build_map(left.quotient, right.quotient, cod, [&](std::size_t qx, std::size_t qy) {
            Vec amb_x = left.section.col(qx);
            Vec amb_y = right.section.col(qy);
            Vec out = zero_vec(field_, cod->dim);
            for (std::size_t a = 0; a < mit->dim; ++a)
                for (std::size_t b = 0; b < ndim; ++b) {
                    const Scalar& ca = amb_x[a * ndim + b];
                    if (ca.is_zero()) continue;
                    for (std::size_t cc = 0; cc < ldim; ++cc)
                        for (std::size_t d = 0; d < mdim; ++d) {
                            const Scalar& cb = amb_y[cc * mdim + d];
                            if (cb.is_zero()) continue;
                            Scalar coeff = ca * cb;
                            const Scalar* z = c_.zeta.row(b, cc);  // in R
                            // w = m_a . z, then phi_itj(w (x) m_d)
                            for (std::size_t u = 0; u < c_.R->dim; ++u) {
                                if (z[u].is_zero()) continue;
                                const Scalar* w = mit->right_row(a, u);
                                for (std::size_t v = 0; v < mit->dim; ++v) {
                                    if (w[v].is_zero()) continue;
                                    Scalar cw = coeff * z[u] * w[v];
                                    const Scalar* row = phi.row(v, d);
                                    for (std::size_t s = 0; s < cod->dim; ++s)
                                        out[s].add_mul(cw, row[s]);
                                }
                            }
                        }
                }
            return out;
        });
    }

    // theta . (rho_L (x) 1_N) . (1_L (x) phi_tkt (x) 1_N) : (L (x) M_tk) x (M_kt (x) N) -> S
    BilinearBlockMap theta_sandwich(std::size_t k, const BimodulePtr& cod) const {
        const TensorSpace& left = ts_l_[k];
        const TensorSpace& right = ts_n_[k];
        const BilinearBlockMap& phi = g_->phi(t_, k, t_);
        const std::size_t ndim = c_.N->dim, ldim = c_.L->dim;
        const std::size_t mdim = left.right_factor->dim;
        return build_map(left.quotient, right.quotient, cod, [&](std::size_t qx, std::size_t qy) {
            Vec amb_x = left.section.col(qx);
            Vec amb_y = right.section.col(qy);
            Vec out = zero_vec(field_, cod->dim);
            for (std::size_t a = 0; a < ldim; ++a)
                for (std::size_t b = 0; b < mdim; ++b) {
                    const Scalar& ca = amb_x[a * mdim + b];
                    if (ca.is_zero()) continue;
                    for (std::size_t cc = 0; cc < right.left_factor->dim; ++cc)
                        for (std::size_t d = 0; d < ndim; ++d) {
                            const Scalar& cb = amb_y[cc * ndim + d];
                            if (cb.is_zero()) continue;
                            Scalar coeff = ca * cb;
                            const Scalar* w = phi.row(b, cc);  // in R
                            // l' = l_a . w, then theta(l' (x) n_d)
                            for (std::size_t u = 0; u < c_.R->dim; ++u) {
                                if (w[u].is_zero()) continue;
                                const Scalar* lr = c_.L->right_row(a, u);
                                for (std::size_t v = 0; v < ldim; ++v) {
                                    if (lr[v].is_zero()) continue;
                                    Scalar cw = coeff * w[u] * lr[v];
                                    const Scalar* row = c_.theta.row(v, d);
                                    for (std::size_t s = 0; s < cod->dim; ++s)
                                        out[s].add_mul(cw, row[s]);
                                }
                            }
                        }
                }
            return out;
        });
    }

    // lambda_Mtj . (mu_R (x) 1) . (1_R (x) zeta (x) 1) : (R (x) N) x (L (x) M_tj) -> M_tj
    BilinearBlockMap rn_collapse(std::size_t j) const {
        const TensorSpace& left = ts_n_[t_];
        const TensorSpace& right = ts_l_[j];
        const BimodulePtr& cod = g_->blocks[t_][j];
        const std::size_t ndim = c_.N->dim, ldim = c_.L->dim;
        const std::size_t mdim = right.right_factor->dim;
        return build_map(left.quotient, right.quotient, cod, [&](std::size_t qx, std::size_t qy) {
            Vec amb_x = left.section.col(qx);
            Vec amb_y = right.section.col(qy);
            Vec out = zero_vec(field_, cod->dim);
            for (std::size_t a = 0; a < c_.R->dim; ++a)
                for (std::size_t b = 0; b < ndim; ++b) {
                    const Scalar& ca = amb_x[a * ndim + b];
                    if (ca.is_zero()) continue;
                    for (std::size_t cc = 0; cc < ldim; ++cc)
                        for (std::size_t d = 0; d < mdim; ++d) {
                            const Scalar& cb = amb_y[cc * mdim + d];
                            if (cb.is_zero()) continue;
                            Scalar coeff = ca * cb;
                            const Scalar* z = c_.zeta.row(b, cc);
                            // w = r_a * z in R, then w . m_d
                            for (std::size_t u = 0; u < c_.R->dim; ++u) {
                                if (z[u].is_zero()) continue;
                                const Scalar* w = c_.R->product_row(a, u);
                                for (std::size_t v = 0; v < c_.R->dim; ++v) {
                                    if (w[v].is_zero()) continue;
                                    Scalar cw = coeff * z[u] * w[v];
                                    const Scalar* row = cod->left_row(v, d);
                                    for (std::size_t s = 0; s < cod->dim; ++s)
                                        out[s].add_mul(cw, row[s]);
                                }
                            }
                        }
                }
            return out;
        });
    }

    // rho_Mit . (1 (x) mu_R) . (1 (x) zeta (x) 1_R) : (M_it (x) N) x (L (x) R) -> M_it
    BilinearBlockMap lr_collapse(std::size_t i) const {
        const TensorSpace& left = ts_n_[i];
        const TensorSpace& right = ts_l_[t_];
        const BimodulePtr& cod = g_->blocks[i][t_];
        const std::size_t ndim = c_.N->dim, ldim = c_.L->dim;
        return build_map(left.quotient, right.quotient, cod, [&](std::size_t qx, std::size_t qy) {
            Vec amb_x = left.section.col(qx);
            Vec amb_y = right.section.col(qy);
            Vec out = zero_vec(field_, cod->dim);
            for (std::size_t a = 0; a < cod->dim; ++a)
                for (std::size_t b = 0; b < ndim; ++b) {
                    const Scalar& ca = amb_x[a * ndim + b];
                    if (ca.is_zero()) continue;
                    for (std::size_t cc = 0; cc < ldim; ++cc)
                        for (std::size_t d = 0; d < c_.R->dim; ++d) {
                            const Scalar& cb = amb_y[cc * c_.R->dim + d];
                            if (cb.is_zero()) continue;
                            Scalar coeff = ca * cb;
                            const Scalar* z = c_.zeta.row(b, cc);
                            // w = z * r_d in R, then m_a . w
                            for (std::size_t u = 0; u < c_.R->dim; ++u) {
                                if (z[u].is_zero()) continue;
                                const Scalar* w = c_.R->product_row(u, d);
                                for (std::size_t v = 0; v < c_.R->dim; ++v) {
                                    if (w[v].is_zero()) continue;
                                    Scalar cw = coeff * z[u] * w[v];
                                    const Scalar* row = cod->right_row(a, v);
                                    for (std::size_t s = 0; s < cod->dim; ++s)
                                        out[s].add_mul(cw, row[s]);
                                }
                            }
                        }
                }
            return out;
        });
    }

private:
    const ContextPtr& g_;
    const ClassicalContext& c_;
    std::size_t t_;
    const std::vector<TensorSpace>& ts_n_;
    const std::vector<TensorSpace>& ts_l_;
    FieldSpec field_;
};

Parts build_parts(const ContextPtr& g, const ClassicalContext& c, std::size_t t, bool verify) {
    const std::size_t n = g->n();
    if (t >= n) throw MalformedInput("corner index t out of range");
    if (!(*c.R == *g->algebras[t]))
        throw CornerMismatch("classical context '" + c.name + "' has corner ring '" + c.R->name +
                             "' but the context's A_" + idx1(t) + " is '" + g->algebras[t]->name +
                             "'");
    if (verify) {
        VerificationReport gr = verify_generalised_context(*g);
        if (!gr.passed())
            throw ContextInvalid("corner replacement: context '" + g->name +
                                 "' fails verification:\n" + gr.summary());
        VerificationReport cr = verify_classical_context(c);
        if (!cr.passed())
            throw ContextInvalid("corner replacement: classical context '" + c.name +
                                 "' fails verification:\n" + cr.summary());
    }

    Parts parts{g, c, t, {}, {}, nullptr};
    for (std::size_t i = 0; i < n; ++i) parts.ts_n.push_back(tensor_over(g->blocks[i][t], c.N));
    for (std::size_t j = 0; j < n; ++j) parts.ts_l.push_back(tensor_over(c.L, g->blocks[t][j]));

    CaseBuilder cases(g, parts.c, t, parts.ts_n, parts.ts_l);

    std::vector<AlgebraPtr> algebras = g->algebras;
    algebras[t] = c.S;
    std::vector<std::vector<BimodulePtr>> off(n, std::vector<BimodulePtr>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (j == t)
                off[i][j] = parts.ts_n[i].quotient;
            else if (i == t)
                off[i][j] = parts.ts_l[j].quotient;
            else
                off[i][j] = g->blocks[i][j];
        }
    GeneralisedContext comp = make_context_frame(std::move(algebras), std::move(off),
                                                 g->name + "'");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) {
                if (k == i || k == j) continue;  // unit maps from the frame
                if (k == t) {
                    comp.maps[i][k][j] = cases.zeta_sandwich(i, j);
                } else if (i != t && j != t) {
                    comp.maps[i][k][j].tensor = g->phi(i, k, j).tensor;
                } else if (i != t && j == t) {
                    comp.maps[i][k][j] = cases.phi_tensor_n(i, k);
                } else if (i == t && j != t) {
                    comp.maps[i][k][j] = cases.l_tensor_phi(k, j);
                } else {  // i == t && j == t
                    comp.maps[i][k][j] = cases.theta_sandwich(k, comp.blocks[t][t]);
                }
            }
    parts.composed = std::make_shared<GeneralisedContext>(std::move(comp));
    return parts;
}

MatrixBimodule build_column_excision(const Parts& parts) {
    const ContextPtr& g = parts.g;
    const std::size_t n = g->n();
    const std::size_t t = parts.t;
    CaseBuilder cases(g, parts.c, t, parts.ts_n, parts.ts_l);
    MatrixBimodule nm;
    nm.row_ctx = g;
    nm.col_ctx = parts.composed;
    nm.name = g->name + "_column_excision";
    nm.blocks.assign(n, std::vector<BimodulePtr>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            nm.blocks[i][j] = (j == t) ? parts.ts_n[i].quotient : g->blocks[i][j];
    nm.left_structure.assign(n, std::vector<std::vector<BilinearBlockMap>>(n));
    nm.right_structure.assign(n, std::vector<std::vector<BilinearBlockMap>>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) {
                // left structure over [A; M]: beta_ikj = phi_ikj for j != t, phi_ikt (x) 1_N at t
                if (j == t)
                    nm.left_structure[i][k].push_back(cases.phi_tensor_n(i, k));
                else
                    nm.left_structure[i][k].push_back(g->phi(i, k, j));
                // right structure over [A'; M']
                if (i != t) {
                    nm.right_structure[i][k].push_back(parts.composed->phi(i, k, j));
                } else if (k == t && j == t) {
                    // 1_R (x) rho_N : (R (x) N) x S -> R (x) N
                    BilinearBlockMap b;
                    b.left_factor = parts.ts_n[t].quotient;
                    b.right_factor = parts.composed->blocks[t][t];
                    b.codomain = parts.ts_n[t].quotient;
                    b.tensor = parts.ts_n[t].quotient->right_action;
                    nm.right_structure[i][k].push_back(std::move(b));
                } else if (k == t && j != t) {
                    nm.right_structure[i][k].push_back(cases.rn_collapse(j));
                } else if (j == t) {  // k != t
                    nm.right_structure[i][k].push_back(cases.phi_tensor_n(t, k));
                } else {  // i == t, k != t, j != t
                    nm.right_structure[i][k].push_back(g->phi(t, k, j));
                }
            }
    return nm;
}

MatrixBimodule build_row_excision(const Parts& parts) {
    const ContextPtr& g = parts.g;
    const std::size_t n = g->n();
    const std::size_t t = parts.t;
    CaseBuilder cases(g, parts.c, t, parts.ts_n, parts.ts_l);
    MatrixBimodule lm;
    lm.row_ctx = parts.composed;
    lm.col_ctx = g;
    lm.name = g->name + "_row_excision";
    lm.blocks.assign(n, std::vector<BimodulePtr>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            lm.blocks[i][j] = (i == t) ? parts.ts_l[j].quotient : g->blocks[i][j];
    lm.left_structure.assign(n, std::vector<std::vector<BilinearBlockMap>>(n));
    lm.right_structure.assign(n, std::vector<std::vector<BilinearBlockMap>>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) {
                // right structure over [A; M]: gamma_ikj = phi_ikj for i != t, 1_L (x) phi_tkj at t
                if (i == t)
                    lm.right_structure[i][k].push_back(cases.l_tensor_phi(k, j));
                else
                    lm.right_structure[i][k].push_back(g->phi(i, k, j));
                // left structure over [A'; M']
                if (j != t) {
                    lm.left_structure[i][k].push_back(parts.composed->phi(i, k, j));
                } else if (i == t && k == t) {
                    // lambda_L (x) 1_R : S x (L (x) R) -> L (x) R
                    BilinearBlockMap b;
                    b.left_factor = parts.composed->blocks[t][t];
                    b.right_factor = parts.ts_l[t].quotient;
                    b.codomain = parts.ts_l[t].quotient;
                    b.tensor = parts.ts_l[t].quotient->left_action;
                    lm.left_structure[i][k].push_back(std::move(b));
                } else if (i == t && k != t) {
                    lm.left_structure[i][k].push_back(cases.l_tensor_phi(k, t));
                } else if (k == t) {  // i != t
                    lm.left_structure[i][k].push_back(cases.lr_collapse(i));
                } else {  // i != t, k != t, j == t
                    lm.left_structure[i][k].push_back(g->phi(i, k, t));
                }
            }
    return lm;
}

PairingGrid build_alpha(const Parts& parts) {
    const ContextPtr& g = parts.g;
    const std::size_t n = g->n();
    const std::size_t t = parts.t;
    CaseBuilder cases(g, parts.c, t, parts.ts_n, parts.ts_l);
    PairingGrid alpha(n, std::vector<std::vector<BilinearBlockMap>>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) {
                if (k == t)
                    alpha[i][k].push_back(cases.zeta_sandwich(i, j));
                else
                    alpha[i][k].push_back(g->phi(i, k, j));
            }
    return alpha;
}

PairingGrid build_alpha_prime(const Parts& parts) {
    const ContextPtr& g = parts.g;
    const std::size_t n = g->n();
    const std::size_t t = parts.t;
    CaseBuilder cases(g, parts.c, t, parts.ts_n, parts.ts_l);
    PairingGrid alpha(n, std::vector<std::vector<BilinearBlockMap>>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) {
                if (i != t && j != t)
                    alpha[i][k].push_back(g->phi(i, k, j));
                else if (i != t && j == t)
                    alpha[i][k].push_back(cases.phi_tensor_n(i, k));
                else if (i == t && j != t)
                    alpha[i][k].push_back(cases.l_tensor_phi(k, j));
                else
                    alpha[i][k].push_back(cases.theta_sandwich(k, parts.composed->blocks[t][t]));
            }
    return alpha;
}

}  // namespace

ContextPtr compose(const ClassicalContext& c, const ContextPtr& g, std::size_t t) {
    return build_parts(g, c, t, true).composed;
}

MatrixBimodule column_excision(const ContextPtr& g, const ClassicalContext& c, std::size_t t) {
    return build_column_excision(build_parts(g, c, t, true));
}

MatrixBimodule row_excision(const ContextPtr& g, const ClassicalContext& c, std::size_t t) {
    Parts parts = build_parts(g, c, t, true);
    return build_row_excision(parts);
}

PairingGrid column_row_ligation(const ContextPtr& g, const ClassicalContext& c, std::size_t t,
                                const MatrixBimodule& n_m, const MatrixBimodule& l_m) {
    Parts parts = build_parts(g, c, t, false);
    PairingGrid alpha = build_alpha(parts);
    // the Lemmas guarantee balance; a violation here is a bug, not bad input
    const std::size_t n = g->n();
    for (std::size_t h = 0; h < n; ++h)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k) {
                    ReportSection probe{"balance"};
                    check_mixed_triple(alpha[i][h][j], l_m.left_structure[h][k][j], alpha[i][k][j],
                                       n_m.right_structure[i][h][k], probe, "");
                    if (!probe.passed())
                        throw InvariantViolated("column-row ligation is not balanced at (h=" +
                                                idx1(h) + ", i=" + idx1(i) + ", j=" + idx1(j) +
                                                ", k=" + idx1(k) + "): " + probe.witnesses.front());
                }
    return alpha;
}

PairingGrid row_column_ligation(const ContextPtr& g, const ClassicalContext& c, std::size_t t,
                                const MatrixBimodule& l_m, const MatrixBimodule& n_m) {
    Parts parts = build_parts(g, c, t, false);
    PairingGrid alpha = build_alpha_prime(parts);
    const std::size_t n = g->n();
    for (std::size_t h = 0; h < n; ++h)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k) {
                    ReportSection probe{"balance"};
                    check_mixed_triple(alpha[i][h][j], n_m.left_structure[h][k][j], alpha[i][k][j],
                                       l_m.right_structure[i][h][k], probe, "");
                    if (!probe.passed())
                        throw InvariantViolated("row-column ligation is not balanced at (h=" +
                                                idx1(h) + ", i=" + idx1(i) + ", j=" + idx1(j) +
                                                ", k=" + idx1(k) + "): " + probe.witnesses.front());
                }
    return alpha;
}

std::size_t image_rank(const BilinearBlockMap& b) {
    RrefAccumulator acc(b.codomain->left->field, b.codomain->dim);
    for (std::size_t i = 0; i < b.left_factor->dim; ++i)
        for (std::size_t j = 0; j < b.right_factor->dim; ++j) {
            Vec row = zero_vec(b.codomain->left->field, b.codomain->dim);
            const Scalar* r = b.row(i, j);
            for (std::size_t k = 0; k < b.codomain->dim; ++k) row[k] = r[k];
            if (!is_zero_vec(row)) acc.add_row(std::move(row));
        }
    return acc.rank();
}

SurgeryResult corner_replace(const ContextPtr& g, const ClassicalContext& c, std::size_t t) {
    Parts parts = build_parts(g, c, t, true);
    const std::size_t n = g->n();

    SurgeryResult r;
    r.original = g;
    r.composed = parts.composed;
    r.t = t;
    r.classical = c;
    r.column = build_column_excision(parts);
    r.row = build_row_excision(parts);
    r.alpha = build_alpha(parts);
    r.alpha_prime = build_alpha_prime(parts);

    VerificationReport& report = r.report;
    report.absorb(verify_generalised_context(*parts.composed), "composition");
    report.absorb(verify_matrix_bimodule(r.column), "column excision");
    report.absorb(verify_matrix_bimodule(r.row), "row excision");

    auto sweep = [&](const std::string& section_name, auto&& pick) {
        ReportSection& sec = report.section(section_name);
        parallel_sweep(n * n * n * n, sec, [&](std::size_t q, ReportSection& local) {
            const std::size_t h = q / (n * n * n);
            const std::size_t i = (q / (n * n)) % n;
            const std::size_t j = (q / n) % n;
            const std::size_t k = q % n;
            std::ostringstream label;
            label << "(h=" << h + 1 << ", i=" << i + 1 << ", j=" << j + 1 << ", k=" << k + 1 << ")";
            auto [o1, i1, o2, i2] = pick(h, i, j, k);
            check_mixed_triple(*o1, *i1, *o2, *i2, local, label.str());
        });
    };
    using Picked = std::tuple<const BilinearBlockMap*, const BilinearBlockMap*,
                              const BilinearBlockMap*, const BilinearBlockMap*>;

    // alpha_ihj (1 (x) gamma'_hkj) = alpha_ikj (beta'_ihk (x) 1) on N_ih (x) M'_hk (x) L_kj
    sweep("ligation alpha: balance over the composed ring", [&](auto h, auto i, auto j, auto k) {
        return Picked{&r.alpha[i][h][j], &r.row.left_structure[h][k][j], &r.alpha[i][k][j],
                      &r.column.right_structure[i][h][k]};
    });
    // alpha_ikj (beta_ihk (x) 1) = phi_ihj (1 (x) alpha_hkj) on M_ih (x) N_hk (x) L_kj
    sweep("ligation alpha: left module homomorphism", [&](auto h, auto i, auto j, auto k) {
        return Picked{&g->phi(i, h, j), &r.alpha[h][k][j], &r.alpha[i][k][j],
                      &r.column.left_structure[i][h][k]};
    });
    // alpha_ihj (1 (x) gamma_hkj) = phi_ikj (alpha_ihk (x) 1) on N_ih (x) L_hk (x) M_kj
    sweep("ligation alpha: right module homomorphism", [&](auto h, auto i, auto j, auto k) {
        return Picked{&r.alpha[i][h][j], &r.row.right_structure[h][k][j], &g->phi(i, k, j),
                      &r.alpha[i][h][k]};
    });
    // alpha'_ihj (1 (x) beta_hkj) = alpha'_ikj (gamma_ihk (x) 1) on L_ih (x) M_hk (x) N_kj
    sweep("ligation alpha': balance over the original ring", [&](auto h, auto i, auto j, auto k) {
        return Picked{&r.alpha_prime[i][h][j], &r.column.left_structure[h][k][j],
                      &r.alpha_prime[i][k][j], &r.row.right_structure[i][h][k]};
    });
    // alpha'_ikj (gamma'_ihk (x) 1) = phi'_ihj (1 (x) alpha'_hkj) on M'_ih (x) L_hk (x) N_kj
    sweep("ligation alpha': left module homomorphism", [&](auto h, auto i, auto j, auto k) {
        return Picked{&parts.composed->phi(i, h, j), &r.alpha_prime[h][k][j],
                      &r.alpha_prime[i][k][j], &r.row.left_structure[i][h][k]};
    });
    // alpha'_ihj (1 (x) beta'_hkj) = phi'_ikj (alpha'_ihk (x) 1) on L_ih (x) N_hk (x) M'_kj
    sweep("ligation alpha': right module homomorphism", [&](auto h, auto i, auto j, auto k) {
        return Picked{&r.alpha_prime[i][h][j], &r.column.right_structure[h][k][j],
                      &parts.composed->phi(i, k, j), &r.alpha_prime[i][h][k]};
    });
    // (*)  beta_ikj (alpha_ihk (x) 1) = beta'_ihj (1 (x) alpha'_hkj) on N_ih (x) L_hk (x) N_kj
    sweep("mixed associativity (*)", [&](auto h, auto i, auto j, auto k) {
        return Picked{&r.column.right_structure[i][h][j], &r.alpha_prime[h][k][j],
                      &r.column.left_structure[i][k][j], &r.alpha[i][h][k]};
    });
    // (**) gamma_ihj (1 (x) alpha_hkj) = gamma'_ikj (alpha'_ihk (x) 1) on L_ih (x) N_hk (x) L_kj
    sweep("mixed associativity (**)", [&](auto h, auto i, auto j, auto k) {
        return Picked{&r.row.right_structure[i][h][j], &r.alpha[h][k][j],
                      &r.row.left_structure[i][k][j], &r.alpha_prime[i][h][k]};
    });

    r.ring_original = matrix_ring(g, Checked::no);
    r.ring_composed = matrix_ring(parts.composed, Checked::no);
    FlattenedGrid flat_n = flatten_matrix_bimodule(r.column, r.ring_original, r.ring_composed);
    FlattenedGrid flat_l = flatten_matrix_bimodule(r.row, r.ring_composed, r.ring_original);
    BilinearBlockMap flat_alpha = flatten_pairing(r.alpha, flat_n, flat_l, r.ring_original);
    BilinearBlockMap flat_alpha_prime =
        flatten_pairing(r.alpha_prime, flat_l, flat_n, r.ring_composed);
    r.assembled = make_classical(r.ring_original.ring, r.ring_composed.ring, flat_n.bim, flat_l.bim,
                                 flat_alpha.tensor, flat_alpha_prime.tensor,
                                 g->name + "~" + parts.composed->name);
    report.absorb(verify_classical_context(r.assembled), "assembled classical context");

    try {
        r.alpha_space = tensor_over(flat_n.bim, flat_l.bim);
        r.alpha_factored = factor_balanced(r.assembled.zeta, r.alpha_space);
        r.alpha_prime_space = tensor_over(flat_l.bim, flat_n.bim);
        r.alpha_prime_factored = factor_balanced(r.assembled.theta, r.alpha_prime_space);
    } catch (const NotBalanced& e) {
        throw InvariantViolated(std::string("corner_replace: ligation failed to factor: ") +
                                e.what());
    }

    report.facts["dim ring original"] = std::to_string(r.ring_original.ring->dim);
    report.facts["dim ring composed"] = std::to_string(r.ring_composed.ring->dim);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            report.facts["dim composed M'[" + idx1(i) + "][" + idx1(j) + "]"] =
                std::to_string(parts.composed->blocks[i][j]->dim);
            report.facts["dim column excision N[" + idx1(i) + "][" + idx1(j) + "]"] =
                std::to_string(r.column.blocks[i][j]->dim);
            report.facts["dim row excision L[" + idx1(i) + "][" + idx1(j) + "]"] =
                std::to_string(r.row.blocks[i][j]->dim);
        }
    return r;
}

EquivalenceCertificate certify_equivalence(const SurgeryResult& r) {
    EquivalenceCertificate cert;
    const std::size_t n = r.original->n();

    bool all_unital = true;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const Bimodule& m = *r.original->blocks[i][j];
            bool u = left_unital(m) && right_unital(m);
            cert.evidence["unital M[" + idx1(i) + "][" + idx1(j) + "]"] = u ? "true" : "false";
            if (!u) {
                all_unital = false;
                cert.failed_conditions.push_back("block M[" + idx1(i) + "][" + idx1(j) +
                                                 "] is not unital");
            }
        }
    for (const char* which : {"N", "L"}) {
        const Bimodule& m = std::string(which) == "N" ? *r.classical.N : *r.classical.L;
        bool u = left_unital(m) && right_unital(m);
        cert.evidence[std::string("unital ") + which] = u ? "true" : "false";
        if (!u) {
            all_unital = false;
            cert.failed_conditions.push_back(std::string(which) + " is not unital");
        }
    }

    const std::size_t zeta_rank = image_rank(r.classical.zeta);
    const std::size_t theta_rank = image_rank(r.classical.theta);
    cert.evidence["rank zeta"] =
        std::to_string(zeta_rank) + " of " + std::to_string(r.classical.R->dim);
    cert.evidence["rank theta"] =
        std::to_string(theta_rank) + " of " + std::to_string(r.classical.S->dim);
    if (zeta_rank != r.classical.R->dim)
        cert.failed_conditions.push_back("zeta is not surjective");
    if (theta_rank != r.classical.S->dim)
        cert.failed_conditions.push_back("theta is not surjective");

    // the decisive evidence: surjectivity of both factored ligations, by rank
    const std::size_t alpha_rank = rank(r.alpha_factored);
    const std::size_t alpha_prime_rank = rank(r.alpha_prime_factored);
    const std::size_t dim_orig = r.ring_original.ring->dim;
    const std::size_t dim_comp = r.ring_composed.ring->dim;
    cert.evidence["rank |alpha|"] = std::to_string(alpha_rank) + " of " + std::to_string(dim_orig);
    cert.evidence["rank |alpha'|"] =
        std::to_string(alpha_prime_rank) + " of " + std::to_string(dim_comp);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            RrefAccumulator acc(r.ring_original.ring->field, r.original->blocks[i][j]->dim);
            for (std::size_t k = 0; k < n; ++k) {
                const BilinearBlockMap& a = r.alpha[i][k][j];
                for (std::size_t x = 0; x < a.left_factor->dim; ++x)
                    for (std::size_t y = 0; y < a.right_factor->dim; ++y) {
                        Vec row(a.row(x, y), a.row(x, y) + a.codomain->dim);
                        if (!is_zero_vec(row)) acc.add_row(std::move(row));
                    }
            }
            cert.evidence["rank |alpha| block (" + idx1(i) + "," + idx1(j) + ")"] =
                std::to_string(acc.rank()) + " of " + std::to_string(r.original->blocks[i][j]->dim);
        }

    const bool alpha_onto = alpha_rank == dim_orig;
    const bool alpha_prime_onto = alpha_prime_rank == dim_comp;
    if (!alpha_onto) cert.failed_conditions.push_back("|alpha| is not surjective");
    if (!alpha_prime_onto) cert.failed_conditions.push_back("|alpha'| is not surjective");

    cert.granted = alpha_onto && alpha_prime_onto;
    if (cert.granted) {
        cert.conclusion = "Morita equivalence certified: [" + r.original->name + "] ~ [" +
                          r.composed->name + "] (both ligation maps surjective)";
        (void)all_unital;
    } else {
        cert.conclusion = "certificate refused: " + cert.failed_conditions.front();
    }
    return cert;
}

SurgeryResult corner_replace_idempotent(const AlgebraPtr& r, const Vec& e,
                                        const ClassicalContext& c) {
    PeirceDecomposition pd = peirce(r, e);
    if (!(*c.R == *pd.context->algebras[1]))
        throw CornerMismatch("corner_replace_idempotent: classical context corner '" + c.R->name +
                             "' does not match the eae corner of '" + r->name + "'");
    return corner_replace(pd.context, c, 1);
}

}  // namespace morita
