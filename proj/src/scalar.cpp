#include "ssr/scalar.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace ssr {

bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

namespace {

// enumeration feasibility bound on the residue field size
constexpr std::int64_t MAX_RESIDUE_PRIME = 13;

std::int64_t pow_checked(std::int64_t base, int e, const char* what) {
    __int128 r = 1;
    for (int i = 0; i < e; ++i) {
        r *= base;
        if (r > static_cast<__int128>(INT64_MAX)) throw overflow_error_ssr(what);
    }
    return static_cast<std::int64_t>(r);
}

std::int64_t mod_pos(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m) {
    return static_cast<std::int64_t>((static_cast<__int128>(a) * b) % m);
}

std::int64_t invmod(std::int64_t a, std::int64_t m) {
    std::int64_t t = 0, newt = 1, r = m, newr = mod_pos(a, m);
    while (newr != 0) {
        std::int64_t q = r / newr;
        std::int64_t tmp = t - q * newt; t = newt; newt = tmp;
        tmp = r - q * newr; r = newr; newr = tmp;
    }
    if (r != 1) throw error("not invertible in modular arithmetic");
    return mod_pos(t, m);
}

int int64_val_p(std::int64_t n, std::int64_t p) {
    if (n == 0) return VAL_INFINITY;
    int v = 0;
    while (n % p == 0) { n /= p; ++v; }
    return v;
}

} // namespace

Backend Backend::make(BackendKind k, std::int64_t p) {
    if (!is_prime(p)) throw error("backend prime must be prime, got " + std::to_string(p));
    if (p > MAX_RESIDUE_PRIME)
        throw error("residue prime " + std::to_string(p) + " exceeds feasibility bound " +
                    std::to_string(MAX_RESIDUE_PRIME));
    Backend b;
    b.kind = k;
    b.p = p;
    return b;
}

// ---------------------------------------------------------------- FpPoly

FpPoly::FpPoly(std::int64_t p, std::vector<std::int64_t> coeffs) : p_(p), c_(std::move(coeffs)) {
    for (auto& c : c_) c = mod_pos(c, p_);
    normalize();
}

void FpPoly::normalize() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

int FpPoly::order() const {
    if (c_.empty()) return VAL_INFINITY;
    for (size_t i = 0; i < c_.size(); ++i)
        if (c_[i] != 0) return static_cast<int>(i);
    return VAL_INFINITY;
}

FpPoly operator+(const FpPoly& a, const FpPoly& b) {
    std::vector<std::int64_t> c(std::max(a.c_.size(), b.c_.size()), 0);
    for (size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(static_cast<int>(i)) + b.coeff(static_cast<int>(i));
    return FpPoly(a.p_, std::move(c));
}

FpPoly operator-(const FpPoly& a, const FpPoly& b) {
    std::vector<std::int64_t> c(std::max(a.c_.size(), b.c_.size()), 0);
    for (size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(static_cast<int>(i)) - b.coeff(static_cast<int>(i));
    return FpPoly(a.p_, std::move(c));
}

FpPoly operator*(const FpPoly& a, const FpPoly& b) {
    if (a.is_zero() || b.is_zero()) return FpPoly(a.p_);
    std::vector<std::int64_t> c(a.c_.size() + b.c_.size() - 1, 0);
    for (size_t i = 0; i < a.c_.size(); ++i)
        for (size_t j = 0; j < b.c_.size(); ++j)
            c[i + j] = (c[i + j] + a.c_[i] * b.c_[j]) % a.p_;
    return FpPoly(a.p_, std::move(c));
}

FpPoly FpPoly::operator-() const {
    std::vector<std::int64_t> c(c_);
    for (auto& x : c) x = -x;
    return FpPoly(p_, std::move(c));
}

void FpPoly::divmod(const FpPoly& a, const FpPoly& b, FpPoly& q, FpPoly& r) {
    if (b.is_zero()) throw error("polynomial division by zero");
    const std::int64_t p = a.p_;
    std::vector<std::int64_t> rem(a.c_);
    std::vector<std::int64_t> quo;
    int db = b.degree();
    std::int64_t lead_inv = invmod(b.c_.back(), p);
    int da = static_cast<int>(rem.size()) - 1;
    if (da >= db) quo.assign(static_cast<size_t>(da - db + 1), 0);
    for (int d = da; d >= db; --d) {
        std::int64_t coef = rem[static_cast<size_t>(d)];
        if (coef == 0) continue;
        std::int64_t f = mod_pos(coef * lead_inv, p);
        quo[static_cast<size_t>(d - db)] = f;
        for (int i = 0; i <= db; ++i)
            rem[static_cast<size_t>(d - db + i)] =
                mod_pos(rem[static_cast<size_t>(d - db + i)] - f * b.coeff(i), p);
    }
    q = FpPoly(p, std::move(quo));
    r = FpPoly(p, std::move(rem));
}

FpPoly FpPoly::gcd(const FpPoly& a, const FpPoly& b) {
    FpPoly x = a, y = b, q, r;
    while (!y.is_zero()) {
        divmod(x, y, q, r);
        x = y;
        y = r;
    }
    if (x.is_zero()) return x;
    return x.scaled(invmod(x.c_.back(), x.p_)); // monic
}

FpPoly FpPoly::shifted(int k) const {
    if (is_zero()) return *this;
    std::vector<std::int64_t> c(static_cast<size_t>(k), 0);
    c.insert(c.end(), c_.begin(), c_.end());
    return FpPoly(p_, std::move(c));
}

FpPoly FpPoly::scaled(std::int64_t s) const {
    std::vector<std::int64_t> c(c_);
    for (auto& x : c) x = mod_pos(x * mod_pos(s, p_), p_);
    return FpPoly(p_, std::move(c));
}

FpPoly FpPoly::series_inverse(int n) const {
    if (coeff(0) == 0) throw error("series inverse needs a unit constant term");
    std::vector<std::int64_t> inv(static_cast<size_t>(n), 0);
    std::int64_t c0 = invmod(coeff(0), p_);
    inv[0] = c0;
    for (int k = 1; k < n; ++k) {
        std::int64_t acc = 0;
        for (int i = 1; i <= k; ++i) acc = mod_pos(acc + coeff(i) * inv[static_cast<size_t>(k - i)], p_);
        inv[static_cast<size_t>(k)] = mod_pos(-acc * c0, p_);
    }
    return FpPoly(p_, std::move(inv));
}

FpPoly FpPoly::truncated(int n) const {
    std::vector<std::int64_t> c(c_.begin(),
                                c_.begin() + std::min<size_t>(c_.size(), static_cast<size_t>(std::max(n, 0))));
    return FpPoly(p_, std::move(c));
}

std::string FpPoly::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        if (!first) os << "+";
        first = false;
        if (i == 0) {
            os << c_[i];
        } else {
            if (c_[i] != 1) os << c_[i];
            os << "t";
            if (i > 1) os << "^" << i;
        }
    }
    return os.str();
}

// ---------------------------------------------------------------- RatFunc

RatFunc::RatFunc(FpPoly n, FpPoly d) {
    if (d.is_zero()) throw error("rational function with zero denominator");
    if (n.is_zero()) {
        num = FpPoly(n.prime());
        den = FpPoly::constant(n.prime(), 1);
        return;
    }
    FpPoly g = FpPoly::gcd(n, d);
    if (g.degree() > 0) {
        FpPoly q, r;
        FpPoly::divmod(n, g, q, r);
        n = q;
        FpPoly::divmod(d, g, q, r);
        d = q;
    }
    // scale so that the lowest nonzero coefficient of den is 1
    std::int64_t low = d.coeff(d.order());
    if (low != 1) {
        std::int64_t s = invmod(low, d.prime());
        n = n.scaled(s);
        d = d.scaled(s);
    }
    num = std::move(n);
    den = std::move(d);
}

// ---------------------------------------------------------------- Scalar

Scalar Scalar::from_rational(const Backend& b, const Rational& r) {
    if (b.kind != BackendKind::padic) throw error("rational scalar needs a p-adic backend");
    return Scalar(b, r);
}

Scalar Scalar::from_int(const Backend& b, std::int64_t n) {
    if (b.kind == BackendKind::padic) return Scalar(b, Rational(n));
    return Scalar(b, RatFunc(FpPoly::constant(b.p, n), FpPoly::constant(b.p, 1)));
}

Scalar Scalar::from_ratfunc(const Backend& b, const RatFunc& f) {
    if (b.kind != BackendKind::tadic) throw error("rational-function scalar needs a t-adic backend");
    return Scalar(b, f);
}

Scalar Scalar::uniformizer(const Backend& b) {
    if (b.kind == BackendKind::padic) return Scalar(b, Rational(b.p));
    return Scalar(b, RatFunc(FpPoly::t(b.p), FpPoly::constant(b.p, 1)));
}

Scalar Scalar::uniformizer_pow(const Backend& b, int n) {
    if (b.kind == BackendKind::padic) {
        if (n >= 0) return Scalar(b, Rational(pow_checked(b.p, n, "uniformizer power")));
        return Scalar(b, Rational(1, pow_checked(b.p, -n, "uniformizer power")));
    }
    if (n >= 0)
        return Scalar(b, RatFunc(FpPoly::constant(b.p, 1).shifted(n), FpPoly::constant(b.p, 1)));
    return Scalar(b, RatFunc(FpPoly::constant(b.p, 1), FpPoly::constant(b.p, 1).shifted(-n)));
}

bool Scalar::is_zero() const {
    if (backend_.kind == BackendKind::padic) return rat().is_zero();
    return fun().is_zero();
}

int Scalar::valuation() const {
    if (backend_.kind == BackendKind::padic) {
        const Rational& r = rat();
        if (r.is_zero()) return VAL_INFINITY;
        return int64_val_p(r.num(), backend_.p) - int64_val_p(r.den(), backend_.p);
    }
    const RatFunc& f = fun();
    if (f.is_zero()) return VAL_INFINITY;
    return f.num.order() - f.den.order();
}

Fp Scalar::residue() const {
    int v = valuation();
    if (v == VAL_INFINITY) return Fp(0, backend_.p);
    if (v < 0) throw not_integral_error("residue of non-integral scalar " + str());
    if (v > 0) return Fp(0, backend_.p);
    if (backend_.kind == BackendKind::padic) {
        const Rational& r = rat();
        // v = 0 and the fraction is reduced, so den is a unit mod p
        return Fp(mulmod(mod_pos(r.num(), backend_.p), invmod(r.den(), backend_.p), backend_.p),
                  backend_.p);
    }
    // canonical form: ord(den) = 0 and the constant term of den is 1
    return Fp(fun().num.coeff(0), backend_.p);
}

Scalar Scalar::mod_pi_pow(int e) const {
    int v = valuation();
    if (v == VAL_INFINITY || v >= e) return zero();
    if (backend_.kind == BackendKind::padic) {
        const Rational& r = rat();
        int m = std::max(0, -v);
        std::int64_t M = pow_checked(backend_.p, e + m, "canonical residue modulus");
        std::int64_t den_unit = r.den() / pow_checked(backend_.p, m, "canonical residue");
        std::int64_t c = mulmod(mod_pos(r.num(), M), invmod(den_unit, M), M);
        return Scalar(backend_, Rational(c, pow_checked(backend_.p, m, "canonical residue")));
    }
    const RatFunc& f = fun();
    int m = std::max(0, -v);
    int a = f.den.order();
    // x * t^m = (num shifted by m-a) / unit-part(den), expanded mod t^(e+m)
    FpPoly unit = f.den; // den = t^a * unit with unit(0) = 1
    if (a > 0) {
        std::vector<std::int64_t> c;
        for (int i = a; i <= unit.degree(); ++i) c.push_back(unit.coeff(i));
        unit = FpPoly(backend_.p, std::move(c));
    }
    FpPoly shifted_num = (m >= a) ? f.num.shifted(m - a) : [&] {
        std::vector<std::int64_t> c;
        for (int i = a - m; i <= f.num.degree(); ++i) c.push_back(f.num.coeff(i));
        return FpPoly(backend_.p, std::move(c));
    }();
    FpPoly series = (shifted_num * unit.series_inverse(e + m)).truncated(e + m);
    return Scalar(backend_, RatFunc(series, FpPoly::constant(backend_.p, 1).shifted(m)));
}

Scalar operator+(const Scalar& a, const Scalar& b) {
    a.check(b);
    if (a.backend_.kind == BackendKind::padic) return Scalar(a.backend_, a.rat() + b.rat());
    return Scalar(a.backend_, RatFunc(a.fun().num * b.fun().den + b.fun().num * a.fun().den,
                                      a.fun().den * b.fun().den));
}

Scalar operator-(const Scalar& a, const Scalar& b) {
    a.check(b);
    if (a.backend_.kind == BackendKind::padic) return Scalar(a.backend_, a.rat() - b.rat());
    return Scalar(a.backend_, RatFunc(a.fun().num * b.fun().den - b.fun().num * a.fun().den,
                                      a.fun().den * b.fun().den));
}

Scalar operator*(const Scalar& a, const Scalar& b) {
    a.check(b);
    if (a.backend_.kind == BackendKind::padic) return Scalar(a.backend_, a.rat() * b.rat());
    return Scalar(a.backend_, RatFunc(a.fun().num * b.fun().num, a.fun().den * b.fun().den));
}

Scalar operator/(const Scalar& a, const Scalar& b) {
    a.check(b);
    if (b.is_zero()) throw error("scalar division by zero");
    if (a.backend_.kind == BackendKind::padic) return Scalar(a.backend_, a.rat() / b.rat());
    return Scalar(a.backend_, RatFunc(a.fun().num * b.fun().den, a.fun().den * b.fun().num));
}

Scalar Scalar::operator-() const {
    if (backend_.kind == BackendKind::padic) return Scalar(backend_, -rat());
    return Scalar(backend_, RatFunc(-fun().num, fun().den));
}

Scalar Scalar::inv() const { return one() / *this; }

Scalar Scalar::lift(const Backend& b, const Fp& x) {
    if (x.prime() != b.p) throw error("residue prime mismatch in lift");
    return from_int(b, x.value());
}

std::string Scalar::str() const {
    if (backend_.kind == BackendKind::padic) return rat().str();
    const RatFunc& f = fun();
    std::string s = "(" + f.num.str() + ")";
    if (!(f.den == FpPoly::constant(backend_.p, 1))) s += "/(" + f.den.str() + ")";
    return s;
}

namespace {

FpPoly parse_poly(std::int64_t p, const std::string& s) {
    std::vector<std::int64_t> coeffs;
    auto add_coeff = [&](int deg, std::int64_t c) {
        if (deg >= static_cast<int>(coeffs.size())) coeffs.resize(static_cast<size_t>(deg) + 1, 0);
        coeffs[static_cast<size_t>(deg)] += c;
    };
    size_t i = 0;
    std::int64_t sign = 1;
    while (i < s.size()) {
        if (s[i] == '+') { sign = 1; ++i; continue; }
        if (s[i] == '-') { sign = -1; ++i; continue; }
        if (std::isspace(static_cast<unsigned char>(s[i]))) { ++i; continue; }
        std::int64_t coef = 1;
        bool have_digits = false;
        std::int64_t acc = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            acc = acc * 10 + (s[i] - '0');
            have_digits = true;
            ++i;
        }
        if (have_digits) coef = acc;
        if (i < s.size() && (s[i] == 't' || s[i] == 'T')) {
            ++i;
            int deg = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                int d = 0;
                if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
                    throw parse_error("bad exponent in polynomial: " + s);
                while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
                    d = d * 10 + (s[i++] - '0');
                deg = d;
            }
            add_coeff(deg, sign * coef);
        } else if (have_digits) {
            add_coeff(0, sign * coef);
        } else {
            throw parse_error("cannot parse polynomial term in: " + s);
        }
        sign = 1;
    }
    return FpPoly(p, std::move(coeffs));
}

} // namespace

Scalar Scalar::parse(const Backend& b, const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw parse_error("empty scalar");
    if (b.kind == BackendKind::padic) {
        size_t slash = s.find('/');
        try {
            if (slash == std::string::npos) return Scalar(b, Rational(std::stoll(s)));
            return Scalar(b, Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1))));
        } catch (const std::logic_error&) {
            throw parse_error("cannot parse p-adic scalar: " + text);
        }
    }
    // t-adic: "(poly)", "(poly)/(poly)", or a bare polynomial
    auto strip_parens = [](const std::string& x) -> std::string {
        if (x.size() >= 2 && x.front() == '(' && x.back() == ')') return x.substr(1, x.size() - 2);
        return x;
    };
    if (s.front() == '(') {
        int depth = 0;
        size_t split = std::string::npos;
        for (size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '(') ++depth;
            else if (s[i] == ')') --depth;
            else if (s[i] == '/' && depth == 0) { split = i; break; }
        }
        if (split == std::string::npos)
            return Scalar(b, RatFunc(parse_poly(b.p, strip_parens(s)), FpPoly::constant(b.p, 1)));
        return Scalar(b, RatFunc(parse_poly(b.p, strip_parens(s.substr(0, split))),
                                 parse_poly(b.p, strip_parens(s.substr(split + 1)))));
    }
    return Scalar(b, RatFunc(parse_poly(b.p, s), FpPoly::constant(b.p, 1)));
}

} // namespace ssr
