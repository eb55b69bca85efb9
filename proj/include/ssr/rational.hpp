#pragma once

#include "ssr/common.hpp"

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>

namespace ssr {

// Exact rational with 64-bit numerator/denominator, reduced eagerly.
// Intermediates run through __int128 and narrowing is checked, so overflow
// surfaces as an error instead of silent wraparound.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(std::int64_t n) : num_(n), den_(1) {}
    Rational(std::int64_t n, std::int64_t d) { assign(n, d); }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }

    Rational zero() const { return Rational(0); }
    Rational one() const { return Rational(1); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return from128(i128(a.num_) * b.den_ + i128(b.num_) * a.den_, i128(a.den_) * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return from128(i128(a.num_) * b.den_ - i128(b.num_) * a.den_, i128(a.den_) * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return from128(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw error("rational division by zero");
        return from128(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
    }
    Rational operator-() const {
        Rational r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }
    Rational& operator+=(const Rational& b) { return *this = *this + b; }
    Rational& operator-=(const Rational& b) { return *this = *this - b; }
    Rational& operator*=(const Rational& b) { return *this = *this * b; }
    Rational& operator/=(const Rational& b) { return *this = *this / b; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        __int128 l = i128(a.num_) * b.den_;
        __int128 r = i128(b.num_) * a.den_;
        return l < r ? std::strong_ordering::less
               : l > r ? std::strong_ordering::greater
                       : std::strong_ordering::equal;
    }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }
    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    static __int128 i128(std::int64_t v) { return static_cast<__int128>(v); }

    static Rational from128(__int128 n, __int128 d) {
        if (d == 0) throw error("rational with zero denominator");
        if (d < 0) { n = -n; d = -d; }
        __int128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        Rational r;
        r.num_ = narrow_checked(n, "rational numerator");
        r.den_ = narrow_checked(d, "rational denominator");
        return r;
    }

    static __int128 gcd128(__int128 a, __int128 b) {
        while (b) { __int128 t = a % b; a = b; b = t; }
        return a ? a : 1;
    }

    void assign(std::int64_t n, std::int64_t d) {
        *this = from128(static_cast<__int128>(n), static_cast<__int128>(d));
    }

    std::int64_t num_;
    std::int64_t den_; // > 0
};

// Residue field F_p element.  Carries its prime so matrices over mixed
// contexts are caught early.
class Fp {
public:
    Fp() : v_(0), p_(2) {}
    Fp(std::int64_t v, std::int64_t p) : p_(p) {
        v_ = v % p;
        if (v_ < 0) v_ += p;
    }

    std::int64_t value() const { return v_; }
    std::int64_t prime() const { return p_; }
    bool is_zero() const { return v_ == 0; }

    Fp zero() const { return Fp(0, p_); }
    Fp one() const { return Fp(1, p_); }

    friend Fp operator+(const Fp& a, const Fp& b) { a.match(b); return Fp(a.v_ + b.v_, a.p_); }
    friend Fp operator-(const Fp& a, const Fp& b) { a.match(b); return Fp(a.v_ - b.v_, a.p_); }
    friend Fp operator*(const Fp& a, const Fp& b) { a.match(b); return Fp(a.v_ * b.v_, a.p_); }
    friend Fp operator/(const Fp& a, const Fp& b) { return a * b.inv(); }
    Fp operator-() const { return Fp(-v_, p_); }

    Fp inv() const {
        if (v_ == 0) throw error("inverse of zero in residue field");
        // extended Euclid
        std::int64_t t = 0, newt = 1, r = p_, newr = v_;
        while (newr != 0) {
            std::int64_t q = r / newr;
            std::int64_t tmp = t - q * newt; t = newt; newt = tmp;
            tmp = r - q * newr; r = newr; newr = tmp;
        }
        return Fp(t, p_);
    }

    friend bool operator==(const Fp& a, const Fp& b) { return a.p_ == b.p_ && a.v_ == b.v_; }
    friend bool operator!=(const Fp& a, const Fp& b) { return !(a == b); }

    std::string str() const { return std::to_string(v_); }
    friend std::ostream& operator<<(std::ostream& os, const Fp& x) { return os << x.v_; }

private:
    void match(const Fp& o) const {
        if (p_ != o.p_) throw error("residue field mismatch");
    }
    std::int64_t v_;
    std::int64_t p_;
};

} // namespace ssr
