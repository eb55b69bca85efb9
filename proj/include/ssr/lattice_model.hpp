#pragma once

#include "ssr/dvr.hpp"
#include "ssr/quiver.hpp"
#include "ssr/torsion.hpp"

#include <vector>

namespace ssr {

// Integral model of a K-representation: one full-rank lattice per vertex,
// with every arrow mapping the source lattice into the target lattice.
struct LatticeModel {
    RepK rep;
    std::vector<Lattice> lattices;

    const Backend& backend() const { return rep.proto.backend(); }
    void validate() const;

    // arrow matrix rewritten in the lattice bases; integral for a valid model
    MatK arrow_in_lattice_coords(size_t arrow) const;

    LatticeModel scaled(int n) const; // pi^n * every lattice

    friend bool operator==(const LatticeModel&, const LatticeModel&) = default;
};

// Per-vertex lattice pi^{n_v} O^{d_v} with the least nonnegative n_v making
// every arrow integral.  Errors when no vertex rescaling can fix a cycle.
LatticeModel standard_model(const RepK& m);

// special fiber: arrows in lattice coordinates reduced entrywise
RepF reduction(const LatticeModel& l);

// Saturated model of a K-subrepresentation: per-vertex lattice G_v meet L_v
// carried in the subrepresentation's own coordinates.
struct SaturationResult {
    RepK sub_rep;                  // G in the witness coordinates
    LatticeModel submodel;         // model of sub_rep
    bool quotient_flat = false;    // elementary divisors of L/(G meet L) all zero
    bool reduction_sequence_exact = false; // 0 -> G_0 -> L_0 -> H_0 -> 0 checked on bases
    RepF quotient_reduction;       // H_0
};

SaturationResult saturate_submodel(const SubrepWitnessK& g, const LatticeModel& l);

// Comparison data for two models of one representation: the torsion
// quotient after rescale, the two filtrations on the reductions, and the
// level maps verified as arrow-equivariant isomorphisms of graded pieces.
struct ModelComparison {
    int rescale = 0;
    std::vector<TorsionModule> torsion; // per vertex, L2 / pi^rescale L1
    struct Level {
        int level = 0;
        RepF graded_first;  // graded piece of the decreasing filtration on L1_0
        RepF graded_second; // graded piece of the increasing filtration on L2_0
        bool iso_verified = false;
    };
    std::vector<Level> levels;

    bool verified() const {
        for (const auto& l : levels)
            if (!l.iso_verified) return false;
        return true;
    }
    int total_graded_dim() const {
        int s = 0;
        for (const auto& l : levels) s += l.graded_first.total_dim();
        return s;
    }
};

ModelComparison compare_models(const LatticeModel& l1, const LatticeModel& l2);

// dimension vector: the K-class descriptor of a model
std::vector<int> k_class_of_model(const LatticeModel& l);

} // namespace ssr
