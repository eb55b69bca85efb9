#pragma once

#include "ssr/common.hpp"
#include "ssr/rational.hpp"

#include <vector>

namespace ssr {

// Polynomial helpers over a coefficient field F (ascending coefficients).
namespace polyf {

template <class F>
void trim(std::vector<F>& c) {
    while (!c.empty() && c.back().is_zero()) c.pop_back();
}

template <class F>
std::vector<F> mul(const std::vector<F>& a, const std::vector<F>& b, const F& zero) {
    if (a.empty() || b.empty()) return {};
    std::vector<F> c(a.size() + b.size() - 1, zero);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) c[i + j] = c[i + j] + a[i] * b[j];
    trim(c);
    return c;
}

template <class F>
std::vector<F> sub(std::vector<F> a, const std::vector<F>& b, const F& zero) {
    if (a.size() < b.size()) a.resize(b.size(), zero);
    for (size_t i = 0; i < b.size(); ++i) a[i] = a[i] - b[i];
    trim(a);
    return a;
}

template <class F>
void divmod(const std::vector<F>& a, const std::vector<F>& b, std::vector<F>& q,
            std::vector<F>& r, const F& zero) {
    if (b.empty()) throw error("polynomial division by zero");
    r = a;
    trim(r);
    q.clear();
    if (r.size() >= b.size()) q.assign(r.size() - b.size() + 1, zero);
    F lead_inv = zero.one() / b.back();
    while (r.size() >= b.size()) {
        size_t shift = r.size() - b.size();
        F f = r.back() * lead_inv;
        q[shift] = q[shift] + f;
        for (size_t i = 0; i < b.size(); ++i)
            r[shift + i] = r[shift + i] - f * b[i];
        trim(r); // the leading term cancels, so the degree strictly drops
    }
}

} // namespace polyf

// Simple field extension F[x]/(m) with m monic irreducible (checked by the
// caller); elements are residue polynomials of degree < deg(m).
template <class F>
class Ext {
public:
    Ext() = default;
    Ext(std::vector<F> modulus, std::vector<F> coeffs)
        : modulus_(std::move(modulus)), coeffs_(std::move(coeffs)) {
        reduce();
    }

    static Ext embed(const std::vector<F>& modulus, const F& c) {
        return Ext(modulus, std::vector<F>{c});
    }
    static Ext generator(const std::vector<F>& modulus) {
        F zero = modulus.front().zero();
        return Ext(modulus, std::vector<F>{zero, zero.one()});
    }

    const std::vector<F>& modulus() const { return modulus_; }
    const std::vector<F>& coeffs() const { return coeffs_; }

    bool is_zero() const { return coeffs_.empty(); }
    Ext zero() const { return Ext(modulus_, {}); }
    Ext one() const { return Ext(modulus_, {modulus_.front().one()}); }

    friend Ext operator+(const Ext& a, const Ext& b) {
        std::vector<F> c = a.coeffs_;
        const F z = a.zero_coeff();
        if (c.size() < b.coeffs_.size()) c.resize(b.coeffs_.size(), z);
        for (size_t i = 0; i < b.coeffs_.size(); ++i) c[i] = c[i] + b.coeffs_[i];
        return Ext(a.modulus_, std::move(c));
    }
    friend Ext operator-(const Ext& a, const Ext& b) {
        return a + (-b);
    }
    Ext operator-() const {
        std::vector<F> c = coeffs_;
        for (auto& x : c) x = -x;
        return Ext(modulus_, std::move(c));
    }
    friend Ext operator*(const Ext& a, const Ext& b) {
        return Ext(a.modulus_, polyf::mul(a.coeffs_, b.coeffs_, a.zero_coeff()));
    }
    friend Ext operator/(const Ext& a, const Ext& b) { return a * b.inv(); }

    Ext inv() const {
        if (is_zero()) throw error("inverse of zero in field extension");
        // extended Euclid in F[x]
        const F z = zero_coeff();
        std::vector<F> r0 = modulus_, r1 = coeffs_;
        std::vector<F> t0, t1{z.one()};
        while (!r1.empty()) {
            std::vector<F> q, rem;
            polyf::divmod(r0, r1, q, rem, z);
            std::vector<F> t2 = polyf::sub(t0, polyf::mul(q, t1, z), z);
            r0 = std::move(r1);
            r1 = std::move(rem);
            t0 = std::move(t1);
            t1 = std::move(t2);
        }
        if (r0.size() != 1) throw error("modulus is not irreducible: gcd has positive degree");
        F scale = z.one() / r0[0];
        std::vector<F> out = t0;
        for (auto& x : out) x = x * scale;
        return Ext(modulus_, std::move(out));
    }

    friend bool operator==(const Ext& a, const Ext& b) {
        return a.coeffs_ == b.coeffs_ && a.modulus_ == b.modulus_;
    }

private:
    F zero_coeff() const {
        if (!modulus_.empty()) return modulus_.front().zero();
        return F{};
    }
    void reduce() {
        polyf::trim(coeffs_);
        if (modulus_.empty()) throw error("extension without modulus");
        if (coeffs_.size() >= modulus_.size()) {
            std::vector<F> q, r;
            polyf::divmod(coeffs_, modulus_, q, r, zero_coeff());
            coeffs_ = std::move(r);
        }
    }

    std::vector<F> modulus_;
    std::vector<F> coeffs_;
};

// Irreducibility over F_p: exhaustive trial division by monic factors.
bool irreducible_mod_p(const std::vector<Fp>& modulus);

// Irreducibility over the rationals, degree 2 or 3: rational root test.
bool irreducible_over_q(const std::vector<Rational>& modulus);

} // namespace ssr
