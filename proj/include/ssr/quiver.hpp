#pragma once

#include "ssr/common.hpp"
#include "ssr/dvr.hpp"
#include "ssr/hilbert.hpp"
#include "ssr/matrix.hpp"
#include "ssr/rational.hpp"
#include "ssr/scalar.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ssr {

struct Quiver {
    int vertices = 0;
    std::vector<std::pair<int, int>> arrows; // (source, target); loops and multi-arrows allowed

    void validate() const;
    friend bool operator==(const Quiver&, const Quiver&) = default;
};

// Quiver representation over a field element type F (residue field or K).
// `proto` pins the field even when there are no arrows.
template <class F>
struct Rep {
    Quiver quiver;
    std::vector<int> dims;
    std::vector<Mat<F>> arrow_maps; // per arrow: d_tgt x d_src
    F proto{};

    void validate() const {
        quiver.validate();
        if (static_cast<int>(dims.size()) != quiver.vertices)
            throw error("dimension vector length mismatch");
        if (arrow_maps.size() != quiver.arrows.size())
            throw error("arrow matrix count mismatch");
        for (size_t a = 0; a < arrow_maps.size(); ++a) {
            auto [src, tgt] = quiver.arrows[a];
            if (arrow_maps[a].rows() != dims[static_cast<size_t>(tgt)] ||
                arrow_maps[a].cols() != dims[static_cast<size_t>(src)])
                throw error("arrow matrix shape mismatch at arrow " + std::to_string(a));
        }
    }

    int total_dim() const {
        int s = 0;
        for (int d : dims) s += d;
        return s;
    }
    bool is_zero() const { return total_dim() == 0; }

    friend bool operator==(const Rep&, const Rep&) = default;
};

using RepF = Rep<Fp>;    // representation over the residue field
using RepK = Rep<Scalar>; // representation over K

// Per-vertex subspace bases, canonical reduced column echelon, lowest-index
// pivot first.  Witnesses compare bit-identically.
template <class F>
struct Witness {
    std::vector<Mat<F>> bases; // d_v x s_v

    std::vector<int> dims() const {
        std::vector<int> d;
        for (const auto& b : bases) d.push_back(b.cols());
        return d;
    }
    int total_dim() const {
        int s = 0;
        for (const auto& b : bases) s += b.cols();
        return s;
    }
    friend bool operator==(const Witness&, const Witness&) = default;
};

using SubrepWitness = Witness<Fp>;
using SubrepWitnessK = Witness<Scalar>;

template <class F>
Witness<F> zero_witness(const Rep<F>& m) {
    Witness<F> w;
    for (int v = 0; v < m.quiver.vertices; ++v)
        w.bases.emplace_back(m.dims[static_cast<size_t>(v)], 0, m.proto.zero());
    return w;
}

template <class F>
Witness<F> full_witness(const Rep<F>& m) {
    Witness<F> w;
    for (int v = 0; v < m.quiver.vertices; ++v)
        w.bases.push_back(Mat<F>::identity(m.dims[static_cast<size_t>(v)], m.proto.zero()));
    return w;
}

// m weight functions theta_1..theta_m plus one positive denominator weight.
struct StabilityData {
    std::vector<std::vector<std::int64_t>> theta;
    std::vector<std::int64_t> sigma;

    int arity() const { return static_cast<int>(theta.size()); }
    void validate(int vertices) const;
};

// slope vector (theta_1 . d / sigma . d, ..., theta_m . d / sigma . d)
SlopeVector slope_of_dims(const std::vector<int>& dims, const StabilityData& s);
std::int64_t sigma_rank(const std::vector<int>& dims, const StabilityData& s);

template <class F>
SlopeVector slope(const Rep<F>& m, const StabilityData& s) {
    if (m.is_zero()) throw error("slope of the zero representation");
    return slope_of_dims(m.dims, s);
}

// --- residue-field machinery -----------------------------------------------

// all subspaces of F_p^d as canonical column-echelon bases, 0 and full included
std::vector<MatF> all_subspaces(int d, std::int64_t p);
std::uint64_t count_subspaces(int d, std::int64_t p);

// exhaustive, duplicate-free, deterministic order; errors past the cap
// naming the blowup; may fan out over caps.threads workers with an
// order-preserving merge
std::vector<SubrepWitness> enumerate_subreps(const RepF& m, const Caps& caps = {});

bool arrow_invariant(const RepF& m, const SubrepWitness& w);
bool arrow_invariant_k(const RepK& m, const SubrepWitnessK& w);

// representation induced on a witness / on its quotient
RepF subrep_restriction(const RepF& m, const SubrepWitness& w);
RepF quotient_rep(const RepF& m, const SubrepWitness& w);
SubrepWitness sum_witness(const RepF& m, const SubrepWitness& a, const SubrepWitness& b);
// preimage in m of a subrep of quotient_rep(m, w)
SubrepWitness preimage_witness(const RepF& m, const SubrepWitness& w, const SubrepWitness& in_quotient);

// semistability level: 1..arity checks the componentwise condition on the
// first k slope coordinates; LEVEL_FULL is the full lexicographic order
inline constexpr int LEVEL_FULL = -1;

struct SemistabilityVerdict {
    bool semistable = false;
    std::optional<SubrepWitness> witness; // violator of maximal slope when not semistable
};

SemistabilityVerdict is_semistable(const RepF& m, const StabilityData& s, int level,
                                   const Caps& caps = {});

// biggest k for which the representation is semistable at level k
int semistable_codimension(const RepF& m, const StabilityData& s, const Caps& caps = {});

// Harder-Narasimhan filtration 0 = M_0 < M_1 < ... < M_r = M with strictly
// decreasing lexicographic subquotient slopes and semistable subquotients.
struct HNFiltration {
    std::vector<SubrepWitness> steps;   // M_1, ..., M_r = M
    std::vector<SlopeVector> slopes;    // slope of M_i / M_{i-1}
    bool one_step() const { return steps.size() == 1; }
};

HNFiltration hn_filtration(const RepF& m, const StabilityData& s, const Caps& caps = {});

// top of the HN filtration: the sum of all subreps of maximal slope
SubrepWitness hn_maximal_destabilizing(const RepF& m, const StabilityData& s,
                                       const Caps& caps = {});

// inclusion-maximal subrep matching the first `level` slope coordinates of
// the HN maximal destabilizing subobject; errors when the candidate set is
// not closed under sums
SubrepWitness maximal_destabilizing(const RepF& m, const StabilityData& s, int level,
                                    const Caps& caps = {});

// graded pieces of a Jordan-Holder filtration of a semistable representation;
// computed twice with different greedy orders and cross-checked
std::vector<RepF> jh_graded(const RepF& m, const StabilityData& s, const Caps& caps = {});

// basis of the intertwiner space Hom(a, b): each column is a stacked tuple
// of per-vertex matrices X_v with X_tgt A_arrow = B_arrow X_src
MatF hom_space_basis(const RepF& a, const RepF& b);
int hom_dimension(const RepF& a, const RepF& b);

// intertwining tuple of invertible matrices exists?  Solves for the Hom
// space and scans its lines under the cap.
bool iso_check(const RepF& a, const RepF& b, const Caps& caps = {});

bool s_equivalent(const RepF& a, const RepF& b, const StabilityData& s, const Caps& caps = {});

} // namespace ssr
