#pragma once

#include "ssr/common.hpp"
#include "ssr/rational.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ssr {

// Valuation of zero.  Distinguished value, never a sentinel integer that
// could collide with a genuine valuation.
inline constexpr int VAL_INFINITY = std::numeric_limits<int>::max();

enum class BackendKind { padic, tadic };

// A discretely valued field with residue field F_p:
//   p-adic: K = Q with v_p, O = Z_(p), pi = p
//   t-adic: K = F_p(t) with v = ord_{t=0}, O = F_p[t]_(t), pi = t
struct Backend {
    BackendKind kind = BackendKind::padic;
    std::int64_t p = 5;

    static Backend padic(std::int64_t p) { return make(BackendKind::padic, p); }
    static Backend tadic(std::int64_t p) { return make(BackendKind::tadic, p); }

    friend bool operator==(const Backend&, const Backend&) = default;

    std::string str() const {
        return (kind == BackendKind::padic ? "p-adic " : "t-adic ") + std::to_string(p);
    }

private:
    static Backend make(BackendKind k, std::int64_t p);
};

// Polynomial over F_p, coefficients ascending, no trailing zeros.
class FpPoly {
public:
    FpPoly() : p_(2) {}
    explicit FpPoly(std::int64_t p) : p_(p) {}
    FpPoly(std::int64_t p, std::vector<std::int64_t> coeffs);

    static FpPoly constant(std::int64_t p, std::int64_t c) { return FpPoly(p, {c}); }
    static FpPoly t(std::int64_t p) { return FpPoly(p, {0, 1}); }

    std::int64_t prime() const { return p_; }
    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; } // -1 for zero
    std::int64_t coeff(int i) const {
        return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[static_cast<size_t>(i)] : 0;
    }
    // order of vanishing at t = 0; VAL_INFINITY for the zero polynomial
    int order() const;

    friend FpPoly operator+(const FpPoly& a, const FpPoly& b);
    friend FpPoly operator-(const FpPoly& a, const FpPoly& b);
    friend FpPoly operator*(const FpPoly& a, const FpPoly& b);
    FpPoly operator-() const;

    // euclidean division
    static void divmod(const FpPoly& a, const FpPoly& b, FpPoly& q, FpPoly& r);
    static FpPoly gcd(const FpPoly& a, const FpPoly& b); // monic
    FpPoly shifted(int k) const;                         // multiply by t^k, k >= 0
    FpPoly scaled(std::int64_t c) const;
    // inverse as a power series modulo t^n; requires nonzero constant term
    FpPoly series_inverse(int n) const;
    FpPoly truncated(int n) const; // drop terms of degree >= n

    friend bool operator==(const FpPoly&, const FpPoly&) = default;

    std::string str() const; // e.g. "1+2t+t^3"

private:
    void normalize();
    std::int64_t p_;
    std::vector<std::int64_t> c_;
};

// Rational function num/den over F_p, canonical: gcd(num, den) = 1 and the
// lowest nonzero coefficient of den equals 1.
struct RatFunc {
    FpPoly num, den;

    RatFunc() = default;
    RatFunc(FpPoly n, FpPoly d);

    bool is_zero() const { return num.is_zero(); }
    friend bool operator==(const RatFunc&, const RatFunc&) = default;
};

// Exact element of the valued field K under a pluggable backend.
// Representation is canonical: equal field elements compare bit-identical.
class Scalar {
public:
    Scalar() : backend_(Backend::padic(5)), value_(Rational(0)) {}

    static Scalar from_rational(const Backend& b, const Rational& r);
    static Scalar from_int(const Backend& b, std::int64_t n);
    static Scalar from_ratfunc(const Backend& b, const RatFunc& f);
    static Scalar zero(const Backend& b) { return from_int(b, 0); }
    static Scalar one(const Backend& b) { return from_int(b, 1); }
    // pi: p for p-adic, t for t-adic; valuation 1 by construction
    static Scalar uniformizer(const Backend& b);
    // pi^n for n of either sign
    static Scalar uniformizer_pow(const Backend& b, int n);

    const Backend& backend() const { return backend_; }
    bool is_zero() const;

    // v(x), with v(0) = VAL_INFINITY
    int valuation() const;
    bool is_integral() const { return valuation() >= 0; }

    // ring homomorphism O -> F_p; error on negative valuation
    Fp residue() const;

    // canonical representative of the class x mod pi^e * O (e of either
    // sign); used by Hermite reduction.  Returns zero when v(x) >= e.
    Scalar mod_pi_pow(int e) const;

    friend Scalar operator+(const Scalar& a, const Scalar& b);
    friend Scalar operator-(const Scalar& a, const Scalar& b);
    friend Scalar operator*(const Scalar& a, const Scalar& b);
    friend Scalar operator/(const Scalar& a, const Scalar& b);
    Scalar operator-() const;
    Scalar& operator+=(const Scalar& b) { return *this = *this + b; }
    Scalar& operator-=(const Scalar& b) { return *this = *this - b; }
    Scalar& operator*=(const Scalar& b) { return *this = *this * b; }

    Scalar inv() const;
    Scalar zero() const { return zero(backend_); }
    Scalar one() const { return one(backend_); }

    friend bool operator==(const Scalar&, const Scalar&) = default;

    // text encoding: "a/b" for p-adic, "(poly)/(poly)" for t-adic
    std::string str() const;
    static Scalar parse(const Backend& b, const std::string& text);

    // lift of a residue element along O -> F_p (canonical: integer 0..p-1,
    // resp. constant polynomial)
    static Scalar lift(const Backend& b, const Fp& x);

private:
    Scalar(const Backend& b, Rational r) : backend_(b), value_(std::move(r)) {}
    Scalar(const Backend& b, RatFunc f) : backend_(b), value_(std::move(f)) {}
    const Rational& rat() const { return std::get<Rational>(value_); }
    const RatFunc& fun() const { return std::get<RatFunc>(value_); }
    void check(const Scalar& o) const {
        if (!(backend_ == o.backend_)) throw error("scalar backend mismatch");
    }

    Backend backend_;
    std::variant<Rational, RatFunc> value_;
};

bool is_prime(std::int64_t n);

} // namespace ssr
