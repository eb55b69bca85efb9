#include "ssr/langton.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace ssr {

namespace {

std::vector<int> echelon_pivot_rows(const MatF& basis) {
    std::vector<int> rows;
    for (int j = 0; j < basis.cols(); ++j) {
        int r = 0;
        while (r < basis.rows() && basis.at(r, j).is_zero()) ++r;
        rows.push_back(r);
    }
    return rows;
}

// column generators of the preimage of a residue subspace: lifted basis
// columns plus pi on a complement of the pivot rows
MatK preimage_generators(const MatF& witness_basis, const Backend& bk) {
    int d = witness_basis.rows();
    MatK lifted = lift_matrix(witness_basis, bk);
    auto pivots = echelon_pivot_rows(witness_basis);
    std::vector<bool> is_pivot(static_cast<size_t>(d), false);
    for (int r : pivots) is_pivot[static_cast<size_t>(r)] = true;
    MatK tail(d, d - witness_basis.cols(), Scalar::zero(bk));
    int c = 0;
    for (int r = 0; r < d; ++r) {
        if (is_pivot[static_cast<size_t>(r)]) continue;
        tail.at(r, c) = Scalar::uniformizer(bk);
        ++c;
    }
    return MatK::hconcat(lifted, tail);
}

} // namespace

FlipStep flip(const LatticeModel& l, const SubrepWitness& b0, const Caps& caps) {
    l.validate();
    const Backend& bk = l.backend();
    const std::int64_t p = bk.p;
    RepF red = reduction(l);
    if (!arrow_invariant(red, b0))
        throw error("flip destabilizer is not arrow-invariant on the reduction");

    FlipStep step;
    step.input = l;
    step.destabilizer = b0;
    step.destabilizer_rep = subrep_restriction(red, b0);
    step.quotient_g0 = quotient_rep(red, b0);
    step.hom_vanishes = hom_dimension(step.destabilizer_rep, step.quotient_g0) == 0;

    // new lattice at v: preimage of B0_v under L_v -> L_v / pi L_v
    step.output.rep = l.rep;
    for (int v = 0; v < l.rep.quiver.vertices; ++v) {
        MatK gen = preimage_generators(b0.bases[static_cast<size_t>(v)], bk);
        step.output.lattices.push_back(
            Lattice(l.lattices[static_cast<size_t>(v)].basis() * gen));
    }
    step.output.validate();

    // pi-torsion of L / L'
    step.pi_torsion = true;
    for (int v = 0; v < l.rep.quiver.vertices; ++v) {
        TorsionModule t = quotient_torsion(step.output.lattices[static_cast<size_t>(v)],
                                           l.lattices[static_cast<size_t>(v)]);
        for (int e : t.exponents)
            if (e != 1) step.pi_torsion = false;
        step.step_torsion.push_back(std::move(t));
    }

    // exact sequence 0 -> G~_0 -> L'_0 -> B~_0 -> 0, on explicit bases
    RepF mid = reduction(step.output);
    bool ok = true;

    // middle subobject: image of pi L in L'_0
    for (int v = 0; v < l.rep.quiver.vertices; ++v) {
        MatK pil = l.lattices[static_cast<size_t>(v)].basis().scaled(Scalar::uniformizer(bk));
        MatK coords = step.output.lattices[static_cast<size_t>(v)].coordinates(pil);
        step.middle_sub.bases.push_back(reduce_matrix(coords, p).column_echelon());
        if (step.middle_sub.bases.back().cols() !=
            l.rep.dims[static_cast<size_t>(v)] - b0.bases[static_cast<size_t>(v)].cols())
            ok = false;
    }
    if (ok && !arrow_invariant(mid, step.middle_sub)) ok = false;

    // the twist map G_0 -> image of pi L: a quotient class goes to pi times
    // any lift; verified to be an arrow-equivariant isomorphism
    if (ok) {
        std::vector<MatF> phi(static_cast<size_t>(l.rep.quiver.vertices));
        RepF mid_sub = subrep_restriction(mid, step.middle_sub);
        for (int v = 0; v < l.rep.quiver.vertices && ok; ++v) {
            int d = l.rep.dims[static_cast<size_t>(v)];
            auto pivots = echelon_pivot_rows(b0.bases[static_cast<size_t>(v)]);
            std::vector<bool> is_pivot(static_cast<size_t>(d), false);
            for (int r : pivots) is_pivot[static_cast<size_t>(r)] = true;
            std::vector<int> free;
            for (int r = 0; r < d; ++r)
                if (!is_pivot[static_cast<size_t>(r)]) free.push_back(r);
            int g = static_cast<int>(free.size());
            MatF images(d, g, Fp(0, p));
            for (int i = 0; i < g; ++i) {
                MatK x(d, 1, Scalar::zero(bk));
                x.at(free[static_cast<size_t>(i)], 0) = Scalar::uniformizer(bk);
                MatK ambient = l.lattices[static_cast<size_t>(v)].basis() * x;
                MatK coords = step.output.lattices[static_cast<size_t>(v)].coordinates(ambient);
                if (!all_integral(coords)) { ok = false; break; }
                MatF col = reduce_matrix(coords, p);
                for (int r = 0; r < d; ++r) images.at(r, i) = col.at(r, 0);
            }
            if (!ok) break;
            auto inside = step.middle_sub.bases[static_cast<size_t>(v)].solve(images);
            if (!inside || inside->rank() != g) { ok = false; break; }
            phi[static_cast<size_t>(v)] = *inside;
        }
        for (size_t a = 0; a < l.rep.quiver.arrows.size() && ok; ++a) {
            auto [src, tgt] = l.rep.quiver.arrows[a];
            MatF left = mid_sub.arrow_maps[a] * phi[static_cast<size_t>(src)];
            MatF right = phi[static_cast<size_t>(tgt)] * step.quotient_g0.arrow_maps[a];
            if (!(left == right)) ok = false;
        }
    }

    // quotient side: L'_0 / image(pi L) identified with B_0 through L' -> L
    if (ok) {
        RepF btilde = quotient_rep(mid, step.middle_sub);
        if (btilde.dims != step.destabilizer_rep.dims) ok = false;
        std::vector<MatF> psi(static_cast<size_t>(l.rep.quiver.vertices));
        for (int v = 0; v < l.rep.quiver.vertices && ok; ++v) {
            int d = l.rep.dims[static_cast<size_t>(v)];
            auto pivots = echelon_pivot_rows(step.middle_sub.bases[static_cast<size_t>(v)]);
            std::vector<bool> is_pivot(static_cast<size_t>(d), false);
            for (int r : pivots) is_pivot[static_cast<size_t>(r)] = true;
            std::vector<int> free;
            for (int r = 0; r < d; ++r)
                if (!is_pivot[static_cast<size_t>(r)]) free.push_back(r);
            int s = static_cast<int>(free.size());
            MatF to_b0(b0.bases[static_cast<size_t>(v)].cols(), s, Fp(0, p));
            for (int i = 0; i < s; ++i) {
                MatK x(d, 1, Scalar::zero(bk));
                x.at(free[static_cast<size_t>(i)], 0) = Scalar::one(bk);
                MatK ambient = step.output.lattices[static_cast<size_t>(v)].basis() * x;
                MatK coords = l.lattices[static_cast<size_t>(v)].coordinates(ambient);
                if (!all_integral(coords)) { ok = false; break; }
                MatF col = reduce_matrix(coords, p);
                auto in_b0 = b0.bases[static_cast<size_t>(v)].solve(col);
                if (!in_b0) { ok = false; break; }
                for (int r = 0; r < to_b0.rows(); ++r) to_b0.at(r, i) = in_b0->at(r, 0);
            }
            if (!ok) break;
            if (to_b0.rows() != to_b0.cols() || to_b0.rank() != to_b0.rows()) { ok = false; break; }
            psi[static_cast<size_t>(v)] = to_b0;
        }
        for (size_t a = 0; a < l.rep.quiver.arrows.size() && ok; ++a) {
            auto [src, tgt] = l.rep.quiver.arrows[a];
            RepF bt = quotient_rep(mid, step.middle_sub);
            MatF left = step.destabilizer_rep.arrow_maps[a] * psi[static_cast<size_t>(src)];
            MatF right = psi[static_cast<size_t>(tgt)] * bt.arrow_maps[a];
            if (!(left == right)) ok = false;
        }
        for (int v = 0; v < l.rep.quiver.vertices && ok; ++v) {
            int d = l.rep.dims[static_cast<size_t>(v)];
            if (step.middle_sub.bases[static_cast<size_t>(v)].cols() +
                    btilde.dims[static_cast<size_t>(v)] !=
                d)
                ok = false;
        }
    }
    (void)caps;
    step.sequence_exact = ok;
    return step;
}

LiftLevelReport max_lift_level(const LatticeModel& l, const SubrepWitness& b0, int cap,
                               const Caps& caps) {
    l.validate();
    const Backend& bk = l.backend();
    const std::int64_t p = bk.p;
    RepF red = reduction(l);
    if (!arrow_invariant(red, b0))
        throw error("lift level of a non-invariant subspace family");

    LiftLevelReport report;
    report.hom_vanishes =
        hom_dimension(subrep_restriction(red, b0), quotient_rep(red, b0)) == 0;

    const int nv = l.rep.quiver.vertices;
    std::vector<MatK> arrows;
    for (size_t a = 0; a < l.rep.quiver.arrows.size(); ++a)
        arrows.push_back(l.arrow_in_lattice_coords(a));

    // candidate = per-vertex integral matrices with identity pivot block;
    // the free slots sit on non-pivot rows and extend level by level as a
    // torsor over the residue field
    struct Slot { int vertex, row, col; };
    std::vector<Slot> slots;
    std::vector<std::vector<int>> pivots(static_cast<size_t>(nv));
    for (int v = 0; v < nv; ++v) {
        pivots[static_cast<size_t>(v)] = echelon_pivot_rows(b0.bases[static_cast<size_t>(v)]);
        std::vector<bool> is_pivot(static_cast<size_t>(l.rep.dims[static_cast<size_t>(v)]), false);
        for (int r : pivots[static_cast<size_t>(v)]) is_pivot[static_cast<size_t>(r)] = true;
        for (int j = 0; j < b0.bases[static_cast<size_t>(v)].cols(); ++j)
            for (int r = 0; r < l.rep.dims[static_cast<size_t>(v)]; ++r)
                if (!is_pivot[static_cast<size_t>(r)]) slots.push_back({v, r, j});
    }

    auto materialize = [&](const std::vector<Scalar>& values) {
        std::vector<MatK> mats;
        for (int v = 0; v < nv; ++v) {
            int d = l.rep.dims[static_cast<size_t>(v)];
            int s = b0.bases[static_cast<size_t>(v)].cols();
            MatK m(d, s, Scalar::zero(bk));
            for (int j = 0; j < s; ++j)
                m.at(pivots[static_cast<size_t>(v)][static_cast<size_t>(j)], j) = Scalar::one(bk);
            mats.push_back(std::move(m));
        }
        for (size_t k = 0; k < slots.size(); ++k)
            mats[static_cast<size_t>(slots[k].vertex)].at(slots[k].row, slots[k].col) = values[k];
        return mats;
    };

    auto invariant_mod = [&](const std::vector<MatK>& mats, int level) {
        for (size_t a = 0; a < arrows.size(); ++a) {
            auto [src, tgt] = l.rep.quiver.arrows[a];
            const MatK& bt = mats[static_cast<size_t>(tgt)];
            MatK image = arrows[a] * mats[static_cast<size_t>(src)];
            MatK diff = image;
            if (bt.cols() > 0) {
                MatK coeff(bt.cols(), image.cols(), Scalar::zero(bk));
                for (int j = 0; j < image.cols(); ++j)
                    for (int c = 0; c < bt.cols(); ++c)
                        coeff.at(c, j) =
                            image.at(pivots[static_cast<size_t>(tgt)][static_cast<size_t>(c)], j);
                diff = image - bt * coeff;
            }
            for (int i = 0; i < diff.rows(); ++i)
                for (int j = 0; j < diff.cols(); ++j)
                    if (diff.at(i, j).valuation() < level) return false;
        }
        return true;
    };

    std::vector<Scalar> base_values;
    for (const Slot& sl : slots)
        base_values.push_back(Scalar::lift(
            bk, b0.bases[static_cast<size_t>(sl.vertex)].at(sl.row, sl.col)));
    std::vector<std::vector<Scalar>> valid{base_values};
    report.level = 1;

    for (int level = 2; level <= cap; ++level) {
        std::uint64_t extensions = 1;
        bool overflow = false;
        for (size_t i = 0; i < slots.size(); ++i) {
            extensions *= static_cast<std::uint64_t>(p);
            if (extensions > caps.lift_cap) { overflow = true; break; }
        }
        if (overflow || valid.size() > caps.lift_cap / std::max<std::uint64_t>(extensions, 1))
            throw cap_exceeded_error("lift enumeration blowup at level " + std::to_string(level));
        Scalar step_scale = Scalar::uniformizer_pow(bk, level - 1);
        std::vector<std::vector<Scalar>> next;
        for (const auto& values : valid) {
            std::vector<std::int64_t> digits(slots.size(), 0);
            while (true) {
                std::vector<Scalar> candidate = values;
                for (size_t k = 0; k < slots.size(); ++k)
                    if (digits[k])
                        candidate[k] = candidate[k] + step_scale * Scalar::from_int(bk, digits[k]);
                ++report.candidates_scanned;
                if (invariant_mod(materialize(candidate), level)) next.push_back(candidate);
                size_t k = 0;
                while (k < digits.size() && ++digits[k] == p) digits[k++] = 0;
                if (k == digits.size()) break;
            }
        }
        if (next.empty()) {
            report.level = level - 1;
            report.at_cap = false;
            return report;
        }
        valid = std::move(next);
        report.level = level;
    }
    report.at_cap = true;
    return report;
}

bool sequence_splits(const FlipStep& step, const Caps& caps) {
    RepF mid = reduction(step.output);
    RepF btilde = quotient_rep(mid, step.middle_sub);
    std::vector<MatF> reps;
    for (int v = 0; v < mid.quiver.vertices; ++v)
        reps.push_back(quotient_representatives(
            step.middle_sub.bases[static_cast<size_t>(v)],
            MatF::identity(mid.dims[static_cast<size_t>(v)], mid.proto.zero())));
    for (const auto& w : enumerate_subreps(mid, caps)) {
        bool candidate = true;
        for (int v = 0; v < mid.quiver.vertices && candidate; ++v)
            if (w.bases[static_cast<size_t>(v)].cols() != btilde.dims[static_cast<size_t>(v)])
                candidate = false;
        if (!candidate) continue;
        bool iso = true;
        for (int v = 0; v < mid.quiver.vertices && iso; ++v) {
            auto klass = quotient_coordinates(step.middle_sub.bases[static_cast<size_t>(v)],
                                              reps[static_cast<size_t>(v)],
                                              w.bases[static_cast<size_t>(v)]);
            if (!klass || klass->rank() != btilde.dims[static_cast<size_t>(v)]) iso = false;
        }
        if (iso) return true;
    }
    return false;
}

std::string to_string(LangtonStatus s) {
    return s == LangtonStatus::semistable_reduction ? "semistable-reduction" : "cap-exceeded";
}

namespace {

struct DestabChoice {
    std::optional<SubrepWitness> witness;
    int level = 0;
    bool advanced = false;
};

// destabilizer at level codim+1, advancing past levels where the candidate
// construction returns the full object
DestabChoice choose_destabilizer(const RepF& red, const StabilityData& s, int codim,
                                 const Caps& caps) {
    DestabChoice choice;
    choice.level = codim + 1;
    while (choice.level <= s.arity()) {
        SubrepWitness cand = maximal_destabilizing(red, s, choice.level, caps);
        if (cand.total_dim() < red.total_dim()) {
            choice.witness = std::move(cand);
            return choice;
        }
        ++choice.level;
        choice.advanced = true;
    }
    return choice;
}

// The revisit detector runs in a fixed accumulated coordinate frame: the
// arrow matrices there evolve by M -> T_tgt^{-1} M T_src with T a function
// of the reduction alone, so the tuple is a genuine deterministic state of
// the loop and a repeat at one codimension proves the loop is periodic.
struct ShadowState {
    std::vector<MatK> arrows;

    RepF reduction(const Quiver& q, const std::vector<int>& dims, std::int64_t p) const {
        RepF red;
        red.quiver = q;
        red.dims = dims;
        red.proto = Fp(0, p);
        for (const auto& m : arrows) red.arrow_maps.push_back(reduce_matrix(m, p));
        return red;
    }

    std::string key(int codim) const {
        std::ostringstream os;
        os << codim << "#";
        for (const auto& m : arrows) {
            for (int i = 0; i < m.rows(); ++i)
                for (int j = 0; j < m.cols(); ++j) os << m.at(i, j).str() << ",";
            os << ";";
        }
        return os.str();
    }

    void advance(const Quiver& q, const SubrepWitness& b0, const Backend& bk) {
        std::vector<MatK> trans;
        std::vector<MatK> trans_inv;
        for (const auto& basis : b0.bases) {
            MatK t = preimage_generators(basis, bk);
            auto inv = t.inverse();
            if (!inv) throw error("degenerate preimage frame");
            trans.push_back(std::move(t));
            trans_inv.push_back(std::move(*inv));
        }
        for (size_t a = 0; a < arrows.size(); ++a) {
            auto [src, tgt] = q.arrows[a];
            arrows[a] = trans_inv[static_cast<size_t>(tgt)] * arrows[a] *
                        trans[static_cast<size_t>(src)];
        }
    }
};

} // namespace

LangtonTrace langton_run_from(const LatticeModel& start, const StabilityData& s,
                              const Caps& caps) {
    start.validate();
    s.validate(start.rep.quiver.vertices);
    const int arity = s.arity();
    const Backend& bk = start.backend();

    LangtonTrace trace;
    LatticeModel current = start;
    ShadowState shadow;
    for (size_t a = 0; a < start.rep.quiver.arrows.size(); ++a)
        shadow.arrows.push_back(start.arrow_in_lattice_coords(a));
    std::map<std::string, int> seen;
    int last_codim = -1;
    std::optional<std::pair<Rational, std::int64_t>> last_order;

    for (int iter = 0; iter < caps.langton_iterations; ++iter) {
        RepF red = reduction(current);
        int codim = semistable_codimension(red, s, caps);
        if (last_codim >= 0 && codim < last_codim) trace.codim_monotone = false;

        if (codim == arity) {
            trace.status = LangtonStatus::semistable_reduction;
            trace.final_model = current;
            trace.final_reduction = red;
            trace.final_codimension = codim;
            trace.lex_semistable = is_semistable(red, s, LEVEL_FULL, caps).semistable;
            return trace;
        }

        std::string key = shadow.key(codim);
        auto it = seen.find(key);
        if (it != seen.end()) {
            trace.status = LangtonStatus::cap_exceeded;
            trace.periodic = true;
            trace.final_model = current;
            trace.final_reduction = red;
            trace.final_codimension = codim;
            return trace;
        }
        seen.emplace(std::move(key), iter);

        DestabChoice choice = choose_destabilizer(red, s, codim, caps);
        if (!choice.witness) {
            // the full object matches its own truncated slopes at every
            // level; no flip can lower them
            trace.status = LangtonStatus::cap_exceeded;
            trace.stalled = true;
            trace.final_model = current;
            trace.final_reduction = red;
            trace.final_codimension = codim;
            trace.lex_semistable = is_semistable(red, s, LEVEL_FULL, caps).semistable;
            return trace;
        }
        int level = choice.level;
        bool advanced = choice.advanced;
        std::optional<SubrepWitness> destab = std::move(choice.witness);

        FlipStep fs = flip(current, *destab, caps);

        // advance the shadow frame with the destabilizer computed there
        RepF shadow_red = shadow.reduction(start.rep.quiver, start.rep.dims, bk.p);
        DestabChoice shadow_choice =
            choose_destabilizer(shadow_red, s, semistable_codimension(shadow_red, s, caps), caps);
        if (!shadow_choice.witness || shadow_choice.witness->dims() != destab->dims())
            throw error("revisit detector lost frame consistency; library bug");
        shadow.advance(start.rep.quiver, *shadow_choice.witness, bk);

        LangtonTrace::Step record;
        record.index = iter;
        record.codim_before = codim;
        record.level_used = level;
        record.level_advanced = advanced;
        record.destab_dims = destab->dims();
        record.destab_rank = sigma_rank(destab->dims(), s);
        record.destab_slope = slope_of_dims(destab->dims(), s);
        record.step_torsion = fs.step_torsion;
        record.sequence_exact = fs.sequence_exact;
        record.pi_torsion = fs.pi_torsion;
        record.hom_vanishes = fs.hom_vanishes;
        record.nonsplit = !sequence_splits(fs, caps);
        record.lift_level_one = max_lift_level(current, *destab, 2, caps).level == 1;

        Rational a_level = record.destab_slope.a[static_cast<size_t>(
            std::min(level, record.destab_slope.arity()) - 1)];
        if (codim == last_codim && last_order) {
            if (last_order->first < a_level ||
                (last_order->first == a_level && last_order->second < record.destab_rank))
                trace.working_order_monotone = false;
        }
        last_order = {a_level, record.destab_rank};
        last_codim = codim;

        trace.steps.push_back(std::move(record));
        current = fs.output;
    }

    trace.status = LangtonStatus::cap_exceeded;
    trace.final_model = current;
    trace.final_reduction = reduction(current);
    trace.final_codimension = semistable_codimension(trace.final_reduction, s, caps);
    return trace;
}

LangtonTrace langton_run(const RepK& m, const StabilityData& s, const Caps& caps) {
    return langton_run_from(standard_model(m), s, caps);
}

SEquivalenceCertificate certify_s_equivalence(const LangtonTrace& run1, const LangtonTrace& run2,
                                              const StabilityData& s, const Caps& caps) {
    if (!run1.terminated() || !run2.terminated())
        throw error("S-equivalence certificate needs two terminated runs");
    if (!(run1.final_model.rep == run2.final_model.rep))
        throw error("S-equivalence certificate needs runs over one representation");
    SEquivalenceCertificate cert;
    cert.equivalent = s_equivalent(run1.final_reduction, run2.final_reduction, s, caps);
    cert.comparison = compare_models(run1.final_model, run2.final_model);
    return cert;
}

} // namespace ssr
