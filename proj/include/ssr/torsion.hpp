#pragma once

#include "ssr/dvr.hpp"

#include <vector>

namespace ssr {

// The two canonical filtrations attached to a torsion module Q:
//   increasing:  Fil^g(Q_0)  = Im(ker(pi^g : Q -> Q) -> Q_0)
//   decreasing:  Fil^g(Q'_0) = pi^{g-1} Q  intersected with  ker(pi : Q -> Q)
// where Q_0 = Q/pi Q and Q'_0 = ker(pi : Q -> Q).  Both are computed from
// explicit lattice bases in the direct-sum model; the closed-form dimension
// counts live in the tests as the oracle.
struct FiltrationProfile {
    int max_level = 0;               // largest exponent of Q
    std::vector<int> first_dims;     // dim Fil^g(Q_0),  g = 0..max_level
    std::vector<int> second_dims;    // dim Fil^g(Q'_0), g = 0..max_level (g=0 means all of Q'_0)
    std::vector<int> jump_levels;    // distinct exponents g_1 < ... < g_k
    std::vector<int> graded_first;   // dim Gr^j along the increasing filtration
    std::vector<int> graded_second;  // dim Gr^j along the decreasing filtration

    bool first_increasing_exhaustive() const;
    bool second_decreasing_separated() const;
    bool graded_dims_agree() const { return graded_first == graded_second; }
};

FiltrationProfile filtration_profiles(const TorsionModule& q, const Backend& b);

// The per-level maps f_j(x) = class of pi_j tensor xtilde, realized on
// explicit residue-field bases, with bijectivity and independence of the
// lift verified.
struct GradedIso {
    struct Level {
        int level = 0;
        MatF map;                   // Gr^j(Q_0) -> Gr^j(Q'_0) in the chosen bases
        bool invertible = false;
        bool lift_independent = false;
    };
    std::vector<Level> levels;
    bool verified() const {
        for (const auto& l : levels)
            if (!l.invertible || !l.lift_independent) return false;
        return true;
    }
};

GradedIso graded_iso_check(const TorsionModule& q, const Backend& b, std::uint64_t seed = 0x10f5);

// K-class descriptor of a full-rank lattice: the only invariant of the
// generic fiber at this scale is its dimension, and any two lattices in the
// same space reduce to residue representations of that dimension.
int k_class_of_model(const Lattice& l);

} // namespace ssr
