#pragma once

#include "ssr/rational.hpp"

#include <string>
#include <vector>

namespace ssr {

// Polynomial with exact rational coefficients, stored degree-descending.
// Plays the role of the Hilbert polynomial in the stability machinery.
struct HilbertPolynomial {
    std::vector<Rational> coeffs; // coeffs[0] is the leading coefficient

    HilbertPolynomial() = default;
    explicit HilbertPolynomial(std::vector<Rational> c);

    bool is_zero() const { return coeffs.empty(); }
    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    Rational leading() const;

    Rational eval(const Rational& x) const;

    friend bool operator==(const HilbertPolynomial&, const HilbertPolynomial&) = default;
    std::string str() const; // "c_d n^d + ... + c_0"
    static HilbertPolynomial parse(const std::string& text);
};

// monic normalization: P divided by its leading coefficient
HilbertPolynomial reduced(const HilbertPolynomial& p);

// a_k = coefficient of x^{deg-k} of reduced(P); a_0 = 1 always
Rational coefficient_a(const HilbertPolynomial& p, int k);

enum class Order { less, equal, greater };

// order by value at all sufficiently large arguments: lexicographic on
// degree-aligned coefficient lists
Order eventual_compare(const HilbertPolynomial& p, const HilbertPolynomial& q);

// Tuple (a_1, ..., a_m) of slope coordinates.
struct SlopeVector {
    std::vector<Rational> a;

    int arity() const { return static_cast<int>(a.size()); }
    friend bool operator==(const SlopeVector&, const SlopeVector&) = default;
    std::string str() const;
};

enum class TruncatedVerdict { dominates, dominated, equal_to_level, incomparable };

// componentwise verdict on the first k coordinates, as literally defined;
// verdicts are mutually exclusive and "incomparable" covers mixed signs
TruncatedVerdict truncated_compare(const SlopeVector& u, const SlopeVector& v, int k);

// the alternative total preorder: lexicographic on the first k coordinates
Order lex_compare(const SlopeVector& u, const SlopeVector& v, int k);

// componentwise bound: true iff a_i(u) <= a_i(v) for all 1 <= i <= k
bool componentwise_at_most(const SlopeVector& u, const SlopeVector& v, int k);

} // namespace ssr
