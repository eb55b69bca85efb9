#include "ssr/torsion.hpp"

#include <algorithm>

namespace ssr {

namespace {

// diag(pi^{e_1}, ..., pi^{e_m}), the presentation of Q
MatK presentation_matrix(const TorsionModule& q, const Backend& b) {
    int m = q.generators();
    MatK d = MatK::zero(m, m, Scalar::zero(b));
    for (int i = 0; i < m; ++i)
        d.at(i, i) = Scalar::uniformizer_pow(b, q.exponents[static_cast<size_t>(i)]);
    return d;
}

// lattice { x in O^m : pi^level * x lies in D O^m } = ker(pi^level : Q -> Q)
Lattice kernel_lattice(const TorsionModule& q, const Backend& b, int level) {
    int m = q.generators();
    MatK a = MatK::zero(m, m, Scalar::zero(b));
    for (int i = 0; i < m; ++i)
        a.at(i, i) = Scalar::uniformizer_pow(b, level - q.exponents[static_cast<size_t>(i)]);
    Lattice pre(preimage_lattice_basis(a, 0));
    return lattice_intersection(pre, Lattice::standard(b, m));
}

// pi^{level} Q + D O^m as a lattice in O^m
Lattice power_sublattice(const TorsionModule& q, const Backend& b, int level) {
    int m = q.generators();
    Lattice scaled = Lattice::scaled_standard(b, m, level);
    return lattice_sum(scaled, Lattice(presentation_matrix(q, b)));
}

// residue image of an integral lattice basis, as a canonical subspace basis
MatF residue_span(const MatK& basis, std::int64_t p) {
    return reduce_matrix(basis, p).column_echelon();
}

// coordinates of an element of ker(pi : Q -> Q) in the socle basis:
// component i maps to (x_i / pi^{e_i - 1}) mod pi
MatF socle_coordinates(const TorsionModule& q, const MatK& vectors) {
    const Backend& b = vectors.proto().backend();
    MatF out(vectors.rows(), vectors.cols(), Fp(0, b.p));
    for (int i = 0; i < vectors.rows(); ++i) {
        Scalar scale = Scalar::uniformizer_pow(b, -(q.exponents[static_cast<size_t>(i)] - 1));
        for (int j = 0; j < vectors.cols(); ++j)
            out.at(i, j) = (vectors.at(i, j) * scale).residue();
    }
    return out;
}

} // namespace

bool FiltrationProfile::first_increasing_exhaustive() const {
    for (size_t i = 1; i < first_dims.size(); ++i)
        if (first_dims[i] < first_dims[i - 1]) return false;
    return first_dims.empty() ||
           (first_dims.front() == 0 && first_dims.back() == second_dims.front());
}

bool FiltrationProfile::second_decreasing_separated() const {
    for (size_t i = 1; i < second_dims.size(); ++i)
        if (second_dims[i] > second_dims[i - 1]) return false;
    return true;
}

FiltrationProfile filtration_profiles(const TorsionModule& q, const Backend& b) {
    FiltrationProfile prof;
    int m = q.generators();
    if (m == 0) return prof;
    prof.max_level = q.exponents.back();

    Lattice socle = kernel_lattice(q, b, 1); // ker(pi : Q -> Q)

    for (int g = 0; g <= prof.max_level; ++g) {
        if (g == 0) {
            prof.first_dims.push_back(0);
            prof.second_dims.push_back(m);
            continue;
        }
        MatF span = residue_span(kernel_lattice(q, b, g).basis(), b.p);
        prof.first_dims.push_back(span.cols());
        Lattice fil = lattice_intersection(power_sublattice(q, b, g - 1), socle);
        prof.second_dims.push_back(socle_coordinates(q, fil.basis()).column_echelon().cols());
    }

    std::vector<int> distinct;
    for (int e : q.exponents)
        if (distinct.empty() || distinct.back() != e) distinct.push_back(e);
    prof.jump_levels = distinct;
    for (size_t j = 0; j < distinct.size(); ++j) {
        int g = distinct[j];
        int prev = (j == 0) ? 0 : distinct[j - 1];
        prof.graded_first.push_back(prof.first_dims[static_cast<size_t>(g)] -
                                    prof.first_dims[static_cast<size_t>(prev)]);
        int next_dim = (j + 1 < distinct.size())
                           ? prof.second_dims[static_cast<size_t>(distinct[j + 1])]
                           : 0;
        prof.graded_second.push_back(prof.second_dims[static_cast<size_t>(g)] - next_dim);
    }
    return prof;
}

GradedIso graded_iso_check(const TorsionModule& q, const Backend& b, std::uint64_t seed) {
    GradedIso iso;
    int m = q.generators();
    if (m == 0) return iso;
    Rng rng(seed);

    std::vector<int> distinct;
    for (int e : q.exponents)
        if (distinct.empty() || distinct.back() != e) distinct.push_back(e);

    Lattice socle = kernel_lattice(q, b, 1);

    for (size_t j = 0; j < distinct.size(); ++j) {
        int g = distinct[j];
        int g_prev = (j == 0) ? 0 : distinct[j - 1];

        Lattice ker_g = kernel_lattice(q, b, g);
        MatF fil_g = residue_span(ker_g.basis(), b.p);
        MatF fil_prev = (g_prev == 0) ? MatF(m, 0, Fp(0, b.p))
                                      : residue_span(kernel_lattice(q, b, g_prev).basis(), b.p);

        // basis of Gr^j(Q_0): representatives of Fil^g modulo Fil^{g_prev}
        MatF reps = quotient_representatives(fil_prev, fil_g);

        // decreasing side, in socle coordinates
        Lattice fil2_g = lattice_intersection(power_sublattice(q, b, g - 1), socle);
        MatF fil2_span = socle_coordinates(q, fil2_g.basis()).column_echelon();
        MatF fil2_next(m, 0, Fp(0, b.p));
        if (j + 1 < distinct.size()) {
            Lattice nxt = lattice_intersection(power_sublattice(q, b, distinct[j + 1] - 1), socle);
            fil2_next = socle_coordinates(q, nxt.basis()).column_echelon();
        }
        MatF target_reps = quotient_representatives(fil2_next, fil2_span);

        // residue image of the kernel-lattice basis, used to lift classes
        MatF ker_res = reduce_matrix(ker_g.basis(), b.p);

        Scalar twist = Scalar::uniformizer_pow(b, g - 1);

        GradedIso::Level level;
        level.level = g;
        level.map = MatF(target_reps.cols(), reps.cols(), Fp(0, b.p));
        level.lift_independent = true;

        for (int c = 0; c < reps.cols(); ++c) {
            // lift the class to xtilde in ker(pi^g), solving over the residue field
            auto coeff = ker_res.solve(reps.col(c));
            if (!coeff)
                throw error("graded isomorphism lift failed; this indicates a library bug");
            MatK xtilde = ker_g.basis() * lift_matrix(*coeff, b);
            MatK image = xtilde.scaled(twist);
            auto klass = quotient_coordinates(fil2_next, target_reps, socle_coordinates(q, image));
            if (!klass)
                throw error("graded isomorphism image escaped its filtration step");
            for (int r = 0; r < target_reps.cols(); ++r) level.map.at(r, c) = klass->at(r, 0);

            // alternative lift: random kernel element one level down plus a
            // random pi-multiple inside ker(pi^g)
            MatK delta = MatK::zero(m, 1, Scalar::zero(b));
            if (g_prev > 0) {
                MatK noise = kernel_lattice(q, b, g_prev).basis();
                MatK coeffs(noise.cols(), 1, Scalar::zero(b));
                for (int i = 0; i < noise.cols(); ++i)
                    coeffs.at(i, 0) = Scalar::from_int(b, rng.range(0, b.p - 1));
                delta = delta + noise * coeffs;
            }
            Lattice deeper = lattice_intersection(Lattice::scaled_standard(b, m, 1), ker_g);
            MatK coeffs2(m, 1, Scalar::zero(b));
            for (int i = 0; i < m; ++i)
                coeffs2.at(i, 0) = Scalar::from_int(b, rng.range(0, b.p - 1));
            delta = delta + deeper.basis() * coeffs2;

            MatK image2 = (xtilde + delta).scaled(twist);
            auto klass2 = quotient_coordinates(fil2_next, target_reps, socle_coordinates(q, image2));
            if (!klass2 || !(*klass2 == *klass)) level.lift_independent = false;
        }
        level.invertible =
            level.map.rows() == level.map.cols() && level.map.rank() == level.map.rows();
        iso.levels.push_back(std::move(level));
    }
    return iso;
}

int k_class_of_model(const Lattice& l) { return l.dim(); }

} // namespace ssr
