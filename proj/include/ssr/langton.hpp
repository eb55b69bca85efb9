#pragma once

#include "ssr/lattice_model.hpp"
#include "ssr/quiver.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ssr {

// One elementary modification: replace each L_v by the preimage of the
// destabilizing subspace under L_v -> L_v/pi L_v, and verify the exact
// sequence 0 -> G~_0 -> L'_0 -> B~_0 -> 0 on explicit bases.
struct FlipStep {
    LatticeModel input;
    LatticeModel output;
    SubrepWitness destabilizer;   // B_0 inside the reduction of the input
    RepF destabilizer_rep;        // B_0 with its arrow action
    RepF quotient_g0;             // G_0 = L_0 / B_0
    SubrepWitness middle_sub;     // image of pi L in the new reduction

    std::vector<TorsionModule> step_torsion; // per vertex, L / L'
    bool pi_torsion = false;      // all exponents equal 1
    bool sequence_exact = false;  // both graded isomorphisms verified
    bool hom_vanishes = false;    // Hom(B_0, G_0) = 0
};

FlipStep flip(const LatticeModel& l, const SubrepWitness& b0, const Caps& caps = {});

// Largest level j <= cap such that the sequence lifts modulo pi^j with flat
// quotient, by exhaustive enumeration of canonical free-summand lifts
// filtered by arrow invariance.
struct LiftLevelReport {
    int level = 0;
    bool at_cap = false;     // a lift survived every tested level
    bool hom_vanishes = false;
    std::uint64_t candidates_scanned = 0;
};

LiftLevelReport max_lift_level(const LatticeModel& l, const SubrepWitness& b0, int cap,
                               const Caps& caps = {});

// true iff some subrep of the new reduction maps isomorphically onto B~_0
bool sequence_splits(const FlipStep& step, const Caps& caps = {});

enum class LangtonStatus { semistable_reduction, cap_exceeded };

std::string to_string(LangtonStatus s);

// Full iteration record of the descent loop.
struct LangtonTrace {
    struct Step {
        int index = 0;
        int codim_before = 0;
        int level_used = 0;           // k+1, possibly advanced past ties
        bool level_advanced = false;
        std::vector<int> destab_dims;
        std::int64_t destab_rank = 0; // sigma-weighted
        SlopeVector destab_slope;
        std::vector<TorsionModule> step_torsion;
        bool sequence_exact = false;
        bool pi_torsion = false;
        bool hom_vanishes = false;
        bool nonsplit = false;
        // the destabilizing sequence does not lift modulo pi^2, so the
        // uniformizer-level flip is the maximal one
        bool lift_level_one = false;
    };

    LangtonStatus status = LangtonStatus::cap_exceeded;
    bool periodic = false;   // model revisit detected
    bool stalled = false;    // componentwise destabilizer equal to the full object
    std::vector<Step> steps;

    LatticeModel final_model;
    RepF final_reduction;
    int final_codimension = 0;
    bool lex_semistable = false;

    // instrumentation of the termination argument
    bool codim_monotone = true;
    bool working_order_monotone = true;

    bool terminated() const { return status == LangtonStatus::semistable_reduction; }
};

// run from the standard model of m
LangtonTrace langton_run(const RepK& m, const StabilityData& s, const Caps& caps = {});
// run from an explicit starting model
LangtonTrace langton_run_from(const LatticeModel& start, const StabilityData& s,
                              const Caps& caps = {});

struct SEquivalenceCertificate {
    bool equivalent = false;
    ModelComparison comparison; // diagnostic: the two-model filtration data
};

SEquivalenceCertificate certify_s_equivalence(const LangtonTrace& run1, const LangtonTrace& run2,
                                              const StabilityData& s, const Caps& caps = {});

} // namespace ssr
