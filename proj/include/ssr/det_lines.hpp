#pragma once

#include "ssr/common.hpp"
#include "ssr/ext_field.hpp"
#include "ssr/matrix.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace ssr {

// Bounded complex of based finite-dimensional spaces with differentials
// raising the degree by one; square-zero is checked at construction.
template <class F>
struct BasedComplex {
    int min_deg = 0;
    std::vector<int> dims;      // dims[j] is the dimension in degree min_deg + j
    std::vector<Mat<F>> diffs;  // diffs[j] : degree min_deg+j -> min_deg+j+1
    F proto{};

    int terms() const { return static_cast<int>(dims.size()); }
    int max_deg() const { return min_deg + terms() - 1; }

    void validate() const {
        if (dims.empty()) return;
        if (diffs.size() + 1 != dims.size()) throw error("differential count mismatch");
        for (size_t j = 0; j + 1 < dims.size(); ++j)
            if (diffs[j].rows() != dims[j + 1] || diffs[j].cols() != dims[j])
                throw error("differential shape mismatch");
        for (size_t j = 0; j + 2 < dims.size(); ++j)
            if (!(diffs[j + 1] * diffs[j]).is_zero())
                throw error("differentials do not square to zero");
    }

    // dimension of the cohomology in absolute degree min_deg + j
    int homology_dim(int j) const {
        int rank_in = (j > 0) ? diffs[static_cast<size_t>(j - 1)].rank() : 0;
        int rank_out = (j + 1 < terms()) ? diffs[static_cast<size_t>(j)].rank() : 0;
        return dims[static_cast<size_t>(j)] - rank_in - rank_out;
    }

    bool is_exact() const {
        for (int j = 0; j < terms(); ++j)
            if (homology_dim(j) != 0) return false;
        return true;
    }

    // alternating-sum parity of the term dimensions
    int parity() const {
        int s = 0;
        for (int d : dims) s += d;
        return s & 1;
    }
};

// Determinant line of a based complex, relative to the canonical generator
// (the ordered tensor of top wedge powers with alternating exponents by
// ascending degree, exterior factors ordered by ascending basis index).
template <class F>
struct DetLine {
    int parity = 0;
    F scalar{};
};

template <class F>
DetLine<F> det_complex(const BasedComplex<F>& c) {
    c.validate();
    return {c.parity(), c.proto.one()};
}

// Degreewise maps C -> D; commuting with the differentials is `verify`-ed.
template <class F>
struct ChainMap {
    std::vector<Mat<F>> maps; // one per degree of C, shapes D^j x C^j

    void verify(const BasedComplex<F>& c, const BasedComplex<F>& d) const {
        if (c.min_deg != d.min_deg || c.terms() != d.terms())
            throw error("chain map needs aligned degree ranges");
        if (maps.size() != c.dims.size()) throw error("chain map term count mismatch");
        for (int j = 0; j < c.terms(); ++j)
            if (maps[static_cast<size_t>(j)].rows() != d.dims[static_cast<size_t>(j)] ||
                maps[static_cast<size_t>(j)].cols() != c.dims[static_cast<size_t>(j)])
                throw error("chain map shape mismatch");
        for (int j = 0; j + 1 < c.terms(); ++j) {
            Mat<F> left = d.diffs[static_cast<size_t>(j)] * maps[static_cast<size_t>(j)];
            Mat<F> right = maps[static_cast<size_t>(j + 1)] * c.diffs[static_cast<size_t>(j)];
            if (!(left == right)) throw error("not a chain map: squares do not commute");
        }
    }
};

// shift both complexes to a common degree range by padding with zero terms
template <class F>
BasedComplex<F> padded(const BasedComplex<F>& c, int lo, int hi) {
    BasedComplex<F> out;
    out.min_deg = lo;
    out.proto = c.proto;
    for (int deg = lo; deg <= hi; ++deg) {
        int j = deg - c.min_deg;
        out.dims.push_back((j >= 0 && j < c.terms()) ? c.dims[static_cast<size_t>(j)] : 0);
    }
    for (int deg = lo; deg < hi; ++deg) {
        int j = deg - c.min_deg;
        if (j >= 0 && j + 1 < c.terms()) {
            out.diffs.push_back(c.diffs[static_cast<size_t>(j)]);
        } else {
            int rows = out.dims[static_cast<size_t>(deg - lo + 1)];
            int cols = out.dims[static_cast<size_t>(deg - lo)];
            out.diffs.push_back(Mat<F>::zero(rows, cols, c.proto));
        }
    }
    out.validate();
    return out;
}

// mapping cone: Cone^j = C^{j+1} (+) D^j with the usual block differential
template <class F>
BasedComplex<F> mapping_cone(const ChainMap<F>& phi, const BasedComplex<F>& c,
                             const BasedComplex<F>& d) {
    phi.verify(c, d);
    BasedComplex<F> cone;
    cone.proto = c.proto;
    cone.min_deg = c.min_deg - 1;
    int terms = c.terms() + 1;
    for (int j = 0; j < terms; ++j) {
        int cdim = (j < c.terms()) ? c.dims[static_cast<size_t>(j)] : 0;
        int ddim = (j > 0) ? d.dims[static_cast<size_t>(j - 1)] : 0;
        cone.dims.push_back(cdim + ddim);
    }
    for (int j = 0; j + 1 < terms; ++j) {
        int c_src = (j < c.terms()) ? c.dims[static_cast<size_t>(j)] : 0;
        int d_src = (j > 0) ? d.dims[static_cast<size_t>(j - 1)] : 0;
        int c_tgt = (j + 1 < c.terms()) ? c.dims[static_cast<size_t>(j + 1)] : 0;
        int d_tgt = d.dims[static_cast<size_t>(j)];
        Mat<F> block = Mat<F>::zero(c_tgt + d_tgt, c_src + d_src, c.proto);
        // top left: -d_C on the shifted part
        if (c_tgt > 0 && c_src > 0 && j + 1 < c.terms()) {
            Mat<F> neg = -c.diffs[static_cast<size_t>(j)];
            for (int i = 0; i < c_tgt; ++i)
                for (int k = 0; k < c_src; ++k) block.at(i, k) = neg.at(i, k);
        }
        // bottom left: phi in degree j
        if (d_tgt > 0 && c_src > 0) {
            const Mat<F>& f = phi.maps[static_cast<size_t>(j)];
            for (int i = 0; i < d_tgt; ++i)
                for (int k = 0; k < c_src; ++k) block.at(c_tgt + i, k) = f.at(i, k);
        }
        // bottom right: d_D one degree down
        if (d_tgt > 0 && d_src > 0) {
            const Mat<F>& dd = d.diffs[static_cast<size_t>(j - 1)];
            for (int i = 0; i < d_tgt; ++i)
                for (int k = 0; k < d_src; ++k) block.at(c_tgt + i, c_src + k) = dd.at(i, k);
        }
        cone.diffs.push_back(std::move(block));
    }
    cone.validate();
    return cone;
}

namespace detail {

// a splitting of a based complex: per degree, a complement W of the kernel,
// and homology representatives H inside the kernel modulo the image
template <class F>
struct Splitting {
    std::vector<Mat<F>> w;        // complement of ker d^j in C^j
    std::vector<Mat<F>> h;        // kernel vectors independent modulo im d^{j-1}
    std::vector<Mat<F>> image;    // basis of im d^{j-1} = d(W^{j-1})
};

// deterministic splitting (standard-vector greedy) or a seeded random one
template <class F>
Splitting<F> split_complex(const BasedComplex<F>& c, std::optional<std::uint64_t> seed,
                           const std::vector<F>& samples) {
    Splitting<F> s;
    Rng rng(seed.value_or(1));
    for (int j = 0; j < c.terms(); ++j) {
        int dim = c.dims[static_cast<size_t>(j)];
        Mat<F> ker = (j + 1 < c.terms()) ? c.diffs[static_cast<size_t>(j)].kernel()
                                         : Mat<F>::identity(dim, c.proto);
        // complement of the kernel
        Mat<F> w(dim, 0, c.proto);
        {
            Mat<F> acc = ker;
            int rank = acc.rank();
            int want = dim - rank;
            // candidate vectors: standard basis, then random combinations
            int guard = 0;
            while (w.cols() < want) {
                Mat<F> cand(dim, 1, c.proto);
                if (!seed) {
                    if (guard >= dim) throw error("splitting search failed");
                    cand.at(guard, 0) = c.proto.one();
                } else {
                    for (int i = 0; i < dim; ++i)
                        cand.at(i, 0) = samples[rng.below(samples.size())];
                }
                ++guard;
                if (guard > 64 * (dim + 1)) throw error("splitting search failed");
                Mat<F> trial = Mat<F>::hconcat(acc, cand);
                if (trial.rank() > acc.rank()) {
                    acc = trial;
                    w = Mat<F>::hconcat(w, cand);
                }
            }
        }
        s.w.push_back(w);
        Mat<F> img = (j > 0) ? c.diffs[static_cast<size_t>(j - 1)] * s.w[static_cast<size_t>(j - 1)]
                             : Mat<F>(dim, 0, c.proto);
        s.h.push_back(quotient_representatives(img, ker));
        s.image.push_back(std::move(img));
    }
    return s;
}

// based-versus-split volume ratio: product over degrees of
// det[ d(W^{j-1}) | H^j | W^j ] ^ (-1)^j
template <class F>
F volume_ratio(const BasedComplex<F>& c, const Splitting<F>& s) {
    F num = c.proto.one();
    F den = c.proto.one();
    for (int j = 0; j < c.terms(); ++j) {
        Mat<F> t = Mat<F>::hconcat(Mat<F>::hconcat(s.image[static_cast<size_t>(j)],
                                                   s.h[static_cast<size_t>(j)]),
                                   s.w[static_cast<size_t>(j)]);
        if (t.rows() != t.cols()) throw error("splitting does not fill the term");
        F dt = t.det();
        if (dt.is_zero()) throw error("degenerate splitting volume");
        bool even = ((c.min_deg + j) % 2) == 0;
        if (even) num = num * dt;
        else den = den * dt;
    }
    return num / den;
}

} // namespace detail

// Canonical trivialization of the determinant line of an acyclic based
// complex.  Splitting-independence is verified against a second randomized
// splitting on every call.
template <class F>
F trivialize_acyclic(const BasedComplex<F>& c, const std::vector<F>& samples,
                     std::uint64_t seed = 0xac1c) {
    c.validate();
    if (!c.is_exact()) throw error("trivialization of a non-exact complex");
    detail::Splitting<F> det_split = detail::split_complex(c, std::nullopt, samples);
    F first = detail::volume_ratio(c, det_split);
    detail::Splitting<F> rand_split = detail::split_complex(c, seed, samples);
    F second = detail::volume_ratio(c, rand_split);
    if (!(first == second))
        throw error("acyclic trivialization depends on the splitting; library bug");
    return first;
}

// Determinant isomorphism induced by a quasi-isomorphism, computed from
// compatible splittings: the ratio of based-versus-split volumes times the
// alternating product of determinants of the induced homology maps.  The
// mapping cone is built and checked for exactness; that check is the
// quasi-isomorphism verification.
template <class F>
struct DetIso {
    int parity_source = 0;
    int parity_target = 0;
    F scalar{};
};

template <class F>
DetIso<F> det_iso_of_quasi_iso(const ChainMap<F>& phi_in, const BasedComplex<F>& c_in,
                               const BasedComplex<F>& d_in, const std::vector<F>& samples) {
    int lo = std::min(c_in.min_deg, d_in.min_deg);
    int hi = std::max(c_in.max_deg(), d_in.max_deg());
    BasedComplex<F> c = padded(c_in, lo, hi);
    BasedComplex<F> d = padded(d_in, lo, hi);
    ChainMap<F> phi;
    for (int deg = lo; deg <= hi; ++deg) {
        int cdim = c.dims[static_cast<size_t>(deg - lo)];
        int ddim = d.dims[static_cast<size_t>(deg - lo)];
        Mat<F> m = Mat<F>::zero(ddim, cdim, c.proto);
        int jc = deg - c_in.min_deg;
        int jd = deg - d_in.min_deg;
        if (jc >= 0 && jc < c_in.terms() && jd >= 0 && jd < d_in.terms())
            m = phi_in.maps[static_cast<size_t>(jc)];
        phi.maps.push_back(std::move(m));
    }
    phi.verify(c, d);

    BasedComplex<F> cone = mapping_cone(phi, c, d);
    if (!cone.is_exact()) throw error("not a quasi-isomorphism: the cone has homology");

    detail::Splitting<F> sc = detail::split_complex(c, std::nullopt, samples);
    detail::Splitting<F> sd = detail::split_complex(d, std::nullopt, samples);
    F hprod_num = c.proto.one();
    F hprod_den = c.proto.one();
    for (int j = 0; j < c.terms(); ++j) {
        const Mat<F>& hc = sc.h[static_cast<size_t>(j)];
        const Mat<F>& hd = sd.h[static_cast<size_t>(j)];
        if (hc.cols() != hd.cols())
            throw error("not a quasi-isomorphism: homology dimensions differ");
        if (hc.cols() == 0) continue;
        Mat<F> mapped = phi.maps[static_cast<size_t>(j)] * hc;
        auto klass = quotient_coordinates(sd.image[static_cast<size_t>(j)], hd, mapped);
        if (!klass) throw error("homology image escaped its representatives");
        F dt = klass->det();
        if (dt.is_zero()) throw error("induced homology map is singular");
        bool even = ((c.min_deg + j) % 2) == 0;
        if (even) hprod_num = hprod_num * dt;
        else hprod_den = hprod_den * dt;
    }
    DetIso<F> iso;
    iso.parity_source = c.parity();
    iso.parity_target = d.parity();
    iso.scalar = (detail::volume_ratio(d, sd) / detail::volume_ratio(c, sc)) *
                 (hprod_num / hprod_den);
    return iso;
}

// extension of scalars along an embedding
template <class F, class G>
BasedComplex<G> extend_scalars(const BasedComplex<F>& c, const std::function<G(const F&)>& embed,
                               const G& proto) {
    BasedComplex<G> out;
    out.min_deg = c.min_deg;
    out.dims = c.dims;
    out.proto = proto.zero();
    for (const auto& m : c.diffs) out.diffs.push_back(m.template map<G>(embed, proto));
    out.validate();
    return out;
}

namespace detail {

// det commutes with extension of scalars: the trivialization of an exact
// complex and the scalar of a seeded quasi-isomorphism both map along the
// embedding F -> F[x]/(modulus)
template <class F>
bool pullback_compat_impl(const BasedComplex<F>& c, const std::vector<F>& modulus,
                          const std::vector<F>& samples, std::uint64_t seed) {
    c.validate();
    using E = Ext<F>;
    const F zero = c.proto.zero();
    E ezero = E::embed(modulus, zero);
    std::function<E(const F&)> embed = [&](const F& x) { return E::embed(modulus, x); };
    std::vector<E> esamples;
    for (const F& s : samples) esamples.push_back(embed(s));
    esamples.push_back(E::generator(modulus));
    BasedComplex<E> ce = extend_scalars<F, E>(c, embed, ezero);

    if (det_complex(c).parity != det_complex(ce).parity) return false;
    if (c.is_exact()) {
        if (!(trivialize_acyclic(ce, esamples, seed) ==
              embed(trivialize_acyclic(c, samples, seed))))
            return false;
    }
    // a seeded homotopy perturbation of the identity, checked on both sides
    Rng rng(seed + 1);
    ChainMap<F> phi;
    std::vector<Mat<F>> h;
    for (int j = 0; j < c.terms(); ++j) {
        int rows = (j > 0) ? c.dims[static_cast<size_t>(j - 1)] : 0;
        Mat<F> m(rows, c.dims[static_cast<size_t>(j)], zero);
        for (int i = 0; i < m.rows(); ++i)
            for (int k = 0; k < m.cols(); ++k) m.at(i, k) = samples[rng.below(samples.size())];
        h.push_back(std::move(m));
    }
    for (int j = 0; j < c.terms(); ++j) {
        Mat<F> m = Mat<F>::identity(c.dims[static_cast<size_t>(j)], zero);
        if (j + 1 < c.terms())
            m = m + h[static_cast<size_t>(j + 1)] * c.diffs[static_cast<size_t>(j)];
        if (j > 0) m = m + c.diffs[static_cast<size_t>(j - 1)] * h[static_cast<size_t>(j)];
        phi.maps.push_back(std::move(m));
    }
    try {
        F base = det_iso_of_quasi_iso(phi, c, c, samples).scalar;
        ChainMap<E> ephi;
        for (const auto& m : phi.maps) ephi.maps.push_back(m.template map<E>(embed, ezero));
        return det_iso_of_quasi_iso(ephi, ce, ce, esamples).scalar == embed(base);
    } catch (const error&) {
        return true; // the perturbation failed to be a quasi-isomorphism
    }
}

} // namespace detail

inline bool pullback_compat_check(const BasedComplex<Fp>& c, const std::vector<Fp>& modulus,
                                  std::uint64_t seed = 0xbc) {
    if (!irreducible_mod_p(modulus)) throw error("reducible modulus");
    std::vector<Fp> samples;
    for (std::int64_t v = 0; v < c.proto.prime(); ++v) samples.emplace_back(v, c.proto.prime());
    return detail::pullback_compat_impl(c, modulus, samples, seed);
}

inline bool pullback_compat_check(const BasedComplex<Rational>& c,
                                  const std::vector<Rational>& modulus,
                                  std::uint64_t seed = 0xbc) {
    if (!irreducible_over_q(modulus)) throw error("reducible modulus");
    std::vector<Rational> samples{Rational(0), Rational(1), Rational(-1),
                                  Rational(2), Rational(3), Rational(1, 2)};
    return detail::pullback_compat_impl(c, modulus, samples, seed);
}

} // namespace ssr
