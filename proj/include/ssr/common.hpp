#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ssr {

// Error hierarchy shared across the library.  CLI maps these to exit codes.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct parse_error : error {
    using error::error;
};

// Input that was required to lie in the valuation ring but does not.
struct not_integral_error : error {
    using error::error;
};

// Containment L1 <= L2 failed; `rescale` is the minimal exponent n such
// that pi^n * L1 is contained in L2.
struct containment_error : error {
    int rescale;
    explicit containment_error(int n)
        : error("lattice not contained; rescale by uniformizer^" + std::to_string(n)),
          rescale(n) {}
};

// An enumeration would exceed its configured cap; message names the blowup.
struct cap_exceeded_error : error {
    using error::error;
};

struct overflow_error_ssr : error {
    using error::error;
};

// Enumeration / iteration budgets.  Configuration, not constants.
struct Caps {
    std::uint64_t subrep_cap = 1'000'000; // product of per-vertex subspace counts
    std::uint64_t hom_cap = 2'000'000;    // residue-field points of a Hom space
    std::uint64_t lift_cap = 4'000'000;   // candidate lifts per level in max_lift_level
    int langton_iterations = 256;
    int threads = 1;
    std::uint64_t seed = 0x5eed5eedULL;
};

// splitmix64: tiny deterministic PRNG, stable across platforms and runs.
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed = 0x5eed5eedULL) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // uniform in [0, n)
    std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }
    // uniform in [lo, hi] inclusive
    std::int64_t range(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }
};

// Narrow a 128-bit intermediate back to 64 bits, or refuse.
inline std::int64_t narrow_checked(__int128 v, const char* what) {
    if (v > static_cast<__int128>(INT64_MAX) || v < static_cast<__int128>(INT64_MIN))
        throw overflow_error_ssr(std::string("integer overflow in ") + what);
    return static_cast<std::int64_t>(v);
}

} // namespace ssr
