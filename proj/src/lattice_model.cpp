#include "ssr/lattice_model.hpp"

#include <algorithm>

namespace ssr {

void LatticeModel::validate() const {
    rep.validate();
    if (static_cast<int>(lattices.size()) != rep.quiver.vertices)
        throw error("model needs one lattice per vertex");
    for (int v = 0; v < rep.quiver.vertices; ++v)
        if (lattices[static_cast<size_t>(v)].dim() != rep.dims[static_cast<size_t>(v)])
            throw error("lattice dimension mismatch at vertex " + std::to_string(v));
    for (size_t a = 0; a < rep.quiver.arrows.size(); ++a)
        if (!all_integral(arrow_in_lattice_coords(a)))
            throw error("arrow " + std::to_string(a) + " is not integral on the lattices");
}

MatK LatticeModel::arrow_in_lattice_coords(size_t arrow) const {
    auto [src, tgt] = rep.quiver.arrows[arrow];
    const Lattice& ls = lattices[static_cast<size_t>(src)];
    const Lattice& lt = lattices[static_cast<size_t>(tgt)];
    return lt.coordinates(rep.arrow_maps[arrow] * ls.basis());
}

LatticeModel LatticeModel::scaled(int n) const {
    LatticeModel out = *this;
    for (auto& l : out.lattices) l = l.scaled(n);
    return out;
}

LatticeModel standard_model(const RepK& m) {
    m.validate();
    const Backend& b = m.proto.backend();
    // constraints n_src - n_tgt >= -minval(A_a); least nonnegative fixpoint
    std::vector<int> n(static_cast<size_t>(m.quiver.vertices), 0);
    std::vector<int> need(m.quiver.arrows.size(), 0);
    int positive_total = 0;
    for (size_t a = 0; a < m.quiver.arrows.size(); ++a) {
        int mv = min_valuation(m.arrow_maps[a]);
        need[a] = (mv == VAL_INFINITY) ? INT32_MIN : -mv;
        if (need[a] != INT32_MIN && need[a] > 0) positive_total += need[a];
    }
    int guard = (m.quiver.vertices + 1) * (positive_total + 1);
    for (int round = 0;; ++round) {
        bool changed = false;
        for (size_t a = 0; a < m.quiver.arrows.size(); ++a) {
            if (need[a] == INT32_MIN) continue;
            auto [src, tgt] = m.quiver.arrows[a];
            int lo = n[static_cast<size_t>(tgt)] + need[a];
            if (n[static_cast<size_t>(src)] < lo) {
                n[static_cast<size_t>(src)] = lo;
                changed = true;
            }
        }
        if (!changed) break;
        if (round >= guard)
            throw error("no scaled standard model: a cycle of arrows has positive total "
                        "valuation defect");
    }
    LatticeModel model;
    model.rep = m;
    for (int v = 0; v < m.quiver.vertices; ++v)
        model.lattices.push_back(Lattice::scaled_standard(b, m.dims[static_cast<size_t>(v)],
                                                          n[static_cast<size_t>(v)]));
    model.validate();
    return model;
}

RepF reduction(const LatticeModel& l) {
    const std::int64_t p = l.backend().p;
    RepF red;
    red.quiver = l.rep.quiver;
    red.dims = l.rep.dims;
    red.proto = Fp(0, p);
    for (size_t a = 0; a < l.rep.quiver.arrows.size(); ++a)
        red.arrow_maps.push_back(reduce_matrix(l.arrow_in_lattice_coords(a), p));
    red.validate();
    return red;
}

SaturationResult saturate_submodel(const SubrepWitnessK& g, const LatticeModel& l) {
    l.validate();
    if (!arrow_invariant_k(l.rep, g)) throw error("subspace family is not arrow-invariant");
    const Backend& b = l.backend();
    SaturationResult out;

    // subrepresentation in the witness coordinates
    out.sub_rep.quiver = l.rep.quiver;
    out.sub_rep.proto = l.rep.proto;
    for (const auto& c : g.bases) out.sub_rep.dims.push_back(c.cols());
    for (size_t a = 0; a < l.rep.quiver.arrows.size(); ++a) {
        auto [src, tgt] = l.rep.quiver.arrows[a];
        const MatK& cs = g.bases[static_cast<size_t>(src)];
        const MatK& ct = g.bases[static_cast<size_t>(tgt)];
        MatK image = l.rep.arrow_maps[a] * cs;
        if (ct.cols() == 0) {
            if (!image.is_zero()) throw error("subspace family is not arrow-invariant");
            out.sub_rep.arrow_maps.push_back(MatK::zero(0, cs.cols(), Scalar::zero(b)));
            continue;
        }
        auto x = ct.solve(image);
        if (!x) throw error("subspace family is not arrow-invariant");
        out.sub_rep.arrow_maps.push_back(*x);
    }
    out.sub_rep.validate();

    // per-vertex saturated lattice G_v meet L_v, in witness coordinates,
    // plus its coordinate matrix inside L_v
    out.submodel.rep = out.sub_rep;
    std::vector<MatK> inclusion;
    for (int v = 0; v < l.rep.quiver.vertices; ++v) {
        const MatK& c = g.bases[static_cast<size_t>(v)];
        if (c.cols() == 0) {
            out.submodel.lattices.push_back(Lattice::standard(b, 0));
            inclusion.push_back(MatK::zero(l.rep.dims[static_cast<size_t>(v)], 0, Scalar::zero(b)));
            continue;
        }
        MatK d = l.lattices[static_cast<size_t>(v)].coordinates(c);
        MatK y = preimage_lattice_basis(d, 0);
        Lattice sat(y);
        inclusion.push_back(d * sat.basis());
        out.submodel.lattices.push_back(std::move(sat));
    }
    out.submodel.validate();

    // flat quotient: the inclusion has all Smith exponents zero
    out.quotient_flat = true;
    for (int v = 0; v < l.rep.quiver.vertices; ++v) {
        const MatK& inc = inclusion[static_cast<size_t>(v)];
        if (inc.cols() == 0) continue;
        auto s = smith_normal_form(inc);
        for (int e : s.exponents)
            if (e != 0) out.quotient_flat = false;
    }

    // reduction-level exact sequence 0 -> G_0 -> L_0 -> H_0 -> 0
    RepF ambient = reduction(l);
    RepF sub_red = reduction(out.submodel);
    const std::int64_t p = b.p;
    SubrepWitness image_witness;
    bool exact = true;
    for (int v = 0; v < l.rep.quiver.vertices; ++v) {
        MatF inc = reduce_matrix(inclusion[static_cast<size_t>(v)], p);
        if (inc.rank() != inc.cols()) exact = false; // injectivity of G_0 -> L_0
        image_witness.bases.push_back(inc.column_echelon());
    }
    for (size_t a = 0; a < l.rep.quiver.arrows.size() && exact; ++a) {
        auto [src, tgt] = l.rep.quiver.arrows[a];
        MatF left = ambient.arrow_maps[a] * reduce_matrix(inclusion[static_cast<size_t>(src)], p);
        MatF right = reduce_matrix(inclusion[static_cast<size_t>(tgt)], p) * sub_red.arrow_maps[a];
        if (!(left == right)) exact = false;
    }
    if (exact && !arrow_invariant(ambient, image_witness)) exact = false;
    out.quotient_reduction = quotient_rep(ambient, image_witness);
    for (int v = 0; v < l.rep.quiver.vertices && exact; ++v) {
        int d = l.rep.dims[static_cast<size_t>(v)];
        int gdim = g.bases[static_cast<size_t>(v)].cols();
        if (out.quotient_reduction.dims[static_cast<size_t>(v)] != d - gdim) exact = false;
    }
    out.reduction_sequence_exact = exact;
    return out;
}

ModelComparison compare_models(const LatticeModel& l1, const LatticeModel& l2) {
    l1.validate();
    l2.validate();
    if (!(l1.rep == l2.rep)) throw error("model comparison needs one generic fiber");
    const Backend& b = l1.backend();
    const std::int64_t p = b.p;
    const int nv = l1.rep.quiver.vertices;

    ModelComparison cmp;
    for (int v = 0; v < nv; ++v)
        cmp.rescale = std::max(cmp.rescale,
                               l2.lattices[static_cast<size_t>(v)].rescale_exponent_for(
                                   l1.lattices[static_cast<size_t>(v)]));
    LatticeModel first = l1.scaled(cmp.rescale);

    // coordinates of the rescaled first model inside the second
    std::vector<MatK> w;
    int max_level = 0;
    for (int v = 0; v < nv; ++v) {
        MatK c = l2.lattices[static_cast<size_t>(v)].coordinates(
            first.lattices[static_cast<size_t>(v)].basis());
        auto s = smith_normal_form(c);
        TorsionModule t;
        for (int e : s.exponents)
            if (e > 0) t.exponents.push_back(e);
        if (!t.exponents.empty()) max_level = std::max(max_level, t.exponents.back());
        cmp.torsion.push_back(std::move(t));
        w.push_back(std::move(c));
    }

    RepF red_first = reduction(first);
    RepF red_second = reduction(l2);

    auto first_fil = [&](int v, int g) -> MatF {
        // image of pi^g L2 meet L1 in the reduction of L1 (decreasing in g)
        int d = l1.rep.dims[static_cast<size_t>(v)];
        if (g <= 0) return MatF::identity(d, Fp(0, p));
        Lattice inter = lattice_intersection(Lattice::scaled_standard(b, d, g),
                                             Lattice(w[static_cast<size_t>(v)]));
        auto inv = w[static_cast<size_t>(v)].inverse();
        return reduce_matrix(*inv * inter.basis(), p).column_echelon();
    };
    auto second_fil = [&](int v, int g) -> MatF {
        // image of { y in L2 : pi^g y in L1 } in the reduction of L2 (increasing)
        int d = l1.rep.dims[static_cast<size_t>(v)];
        if (g < 0) return MatF(d, 0, Fp(0, p));
        Lattice inter = lattice_intersection(Lattice::scaled_standard(b, d, g),
                                             Lattice(w[static_cast<size_t>(v)]));
        Lattice grown(inter.basis().scaled(Scalar::uniformizer_pow(b, -g)));
        Lattice clipped = lattice_intersection(grown, Lattice::standard(b, d));
        return reduce_matrix(clipped.basis(), p).column_echelon();
    };

    auto graded_rep = [&](const RepF& ambient, const std::vector<MatF>& sub,
                          const std::vector<MatF>& reps) -> std::optional<RepF> {
        RepF gr;
        gr.quiver = ambient.quiver;
        gr.proto = ambient.proto;
        for (int v = 0; v < nv; ++v) gr.dims.push_back(reps[static_cast<size_t>(v)].cols());
        for (size_t a = 0; a < ambient.quiver.arrows.size(); ++a) {
            auto [src, tgt] = ambient.quiver.arrows[a];
            MatF image = ambient.arrow_maps[a] * reps[static_cast<size_t>(src)];
            auto klass = quotient_coordinates(sub[static_cast<size_t>(tgt)],
                                              reps[static_cast<size_t>(tgt)], image);
            if (!klass) return std::nullopt;
            gr.arrow_maps.push_back(*klass);
        }
        gr.validate();
        return gr;
    };

    for (int g = 1; g <= max_level; ++g) {
        ModelComparison::Level level;
        level.level = g;

        std::vector<MatF> gr1_reps, gr1_sub, gr2_reps, gr2_sub;
        for (int v = 0; v < nv; ++v) {
            MatF f_g = first_fil(v, g);
            MatF f_next = first_fil(v, g + 1);
            gr1_sub.push_back(f_next);
            gr1_reps.push_back(quotient_representatives(f_next, f_g));
            MatF s_g = second_fil(v, g);
            MatF s_prev = second_fil(v, g - 1);
            gr2_sub.push_back(s_prev);
            gr2_reps.push_back(quotient_representatives(s_prev, s_g));
        }

        auto g1 = graded_rep(red_first, gr1_sub, gr1_reps);
        auto g2 = graded_rep(red_second, gr2_sub, gr2_reps);
        bool ok = g1.has_value() && g2.has_value();

        // level map: a class of x in pi^g L2 meet L1 goes to pi^{-g} x in L2_0
        std::vector<MatF> phi(static_cast<size_t>(nv));
        for (int v = 0; v < nv && ok; ++v) {
            int d = l1.rep.dims[static_cast<size_t>(v)];
            const MatF& reps = gr1_reps[static_cast<size_t>(v)];
            Lattice inter = lattice_intersection(Lattice::scaled_standard(b, d, g),
                                                 Lattice(w[static_cast<size_t>(v)]));
            auto winv = w[static_cast<size_t>(v)].inverse();
            MatF inter_red = reduce_matrix(*winv * inter.basis(), p);
            MatF image(d, reps.cols(), Fp(0, p));
            for (int c = 0; c < reps.cols(); ++c) {
                auto coeff = inter_red.solve(reps.col(c));
                if (!coeff) { ok = false; break; }
                MatK x = inter.basis() * lift_matrix(*coeff, b); // in L2 coordinates
                MatK y = x.scaled(Scalar::uniformizer_pow(b, -g));
                MatF ybar = reduce_matrix(y, p);
                for (int r = 0; r < ybar.rows(); ++r) image.at(r, c) = ybar.at(r, 0);
            }
            if (!ok) break;
            auto klass = quotient_coordinates(gr2_sub[static_cast<size_t>(v)],
                                              gr2_reps[static_cast<size_t>(v)], image);
            if (!klass) { ok = false; break; }
            phi[static_cast<size_t>(v)] = *klass;
            if (klass->rows() != klass->cols() || klass->rank() != klass->rows()) ok = false;
        }

        for (size_t a = 0; a < l1.rep.quiver.arrows.size() && ok; ++a) {
            auto [src, tgt] = l1.rep.quiver.arrows[a];
            MatF left = phi[static_cast<size_t>(tgt)] * g1->arrow_maps[a];
            MatF right = g2->arrow_maps[a] * phi[static_cast<size_t>(src)];
            if (!(left == right)) ok = false;
        }

        level.iso_verified = ok;
        if (g1) level.graded_first = *g1;
        if (g2) level.graded_second = *g2;
        cmp.levels.push_back(std::move(level));
    }
    return cmp;
}

std::vector<int> k_class_of_model(const LatticeModel& l) { return l.rep.dims; }

} // namespace ssr
