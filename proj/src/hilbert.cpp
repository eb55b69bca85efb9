#include "ssr/hilbert.hpp"

#include "ssr/common.hpp"

#include <cctype>
#include <sstream>

namespace ssr {

HilbertPolynomial::HilbertPolynomial(std::vector<Rational> c) : coeffs(std::move(c)) {
    size_t lead = 0;
    while (lead < coeffs.size() && coeffs[lead].is_zero()) ++lead;
    coeffs.erase(coeffs.begin(), coeffs.begin() + static_cast<std::ptrdiff_t>(lead));
}

Rational HilbertPolynomial::leading() const {
    if (is_zero()) throw error("leading coefficient of the zero polynomial");
    return coeffs.front();
}

Rational HilbertPolynomial::eval(const Rational& x) const {
    Rational acc(0);
    for (const Rational& c : coeffs) acc = acc * x + c;
    return acc;
}

std::string HilbertPolynomial::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    int d = degree();
    bool first = true;
    for (int i = 0; i <= d; ++i) {
        const Rational& c = coeffs[static_cast<size_t>(i)];
        if (c.is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        int power = d - i;
        if (power == 0) {
            os << c.str();
        } else {
            if (!(c == Rational(1))) os << c.str() << " ";
            os << "n";
            if (power > 1) os << "^" << power;
        }
    }
    return os.str();
}

HilbertPolynomial HilbertPolynomial::parse(const std::string& text) {
    // terms separated by + / -, each "c", "c n^k", or "n^k"
    std::vector<std::pair<int, Rational>> terms;
    size_t i = 0;
    auto skip_ws = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    std::int64_t sign = 1;
    skip_ws();
    while (i < text.size()) {
        if (text[i] == '+') { sign = 1; ++i; skip_ws(); continue; }
        if (text[i] == '-') { sign = -1; ++i; skip_ws(); continue; }
        std::int64_t num = 1, den = 1;
        bool have_num = false;
        auto read_int = [&]() -> std::int64_t {
            std::int64_t v = 0;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
                v = v * 10 + (text[i++] - '0');
            return v;
        };
        if (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            num = read_int();
            have_num = true;
            if (i < text.size() && text[i] == '/') {
                ++i;
                den = read_int();
            }
        }
        skip_ws();
        int power = 0;
        if (i < text.size() && (text[i] == 'n' || text[i] == 'x')) {
            ++i;
            power = 1;
            if (i < text.size() && text[i] == '^') {
                ++i;
                power = static_cast<int>(read_int());
            }
        } else if (!have_num) {
            throw parse_error("cannot parse polynomial: " + text);
        }
        terms.emplace_back(power, Rational(sign * num, den));
        sign = 1;
        skip_ws();
    }
    int deg = 0;
    for (auto& [p, c] : terms) deg = std::max(deg, p);
    std::vector<Rational> coeffs(static_cast<size_t>(deg) + 1, Rational(0));
    for (auto& [p, c] : terms) coeffs[static_cast<size_t>(deg - p)] += c;
    return HilbertPolynomial(std::move(coeffs));
}

HilbertPolynomial reduced(const HilbertPolynomial& p) {
    if (p.is_zero()) throw error("reduced polynomial of zero");
    std::vector<Rational> c = p.coeffs;
    Rational lead = p.leading();
    for (auto& x : c) x /= lead;
    return HilbertPolynomial(std::move(c));
}

Rational coefficient_a(const HilbertPolynomial& p, int k) {
    if (k < 0 || k > p.degree()) throw error("coefficient index out of range");
    return reduced(p).coeffs[static_cast<size_t>(k)];
}

Order eventual_compare(const HilbertPolynomial& p, const HilbertPolynomial& q) {
    int deg = std::max(p.degree(), q.degree());
    for (int d = deg; d >= 0; --d) {
        Rational cp = (d <= p.degree()) ? p.coeffs[static_cast<size_t>(p.degree() - d)] : Rational(0);
        Rational cq = (d <= q.degree()) ? q.coeffs[static_cast<size_t>(q.degree() - d)] : Rational(0);
        if (cp < cq) return Order::less;
        if (cq < cp) return Order::greater;
    }
    return Order::equal;
}

std::string SlopeVector::str() const {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < a.size(); ++i) {
        if (i) os << ",";
        os << a[i].str();
    }
    os << ")";
    return os.str();
}

namespace {
void arity_check(const SlopeVector& u, const SlopeVector& v, int k) {
    if (u.arity() != v.arity()) throw error("slope vector arity mismatch");
    if (k < 0 || k > u.arity()) throw error("truncation level out of range");
}
} // namespace

TruncatedVerdict truncated_compare(const SlopeVector& u, const SlopeVector& v, int k) {
    arity_check(u, v, k);
    bool some_less = false, some_greater = false;
    for (int i = 0; i < k; ++i) {
        if (u.a[static_cast<size_t>(i)] < v.a[static_cast<size_t>(i)]) some_less = true;
        if (v.a[static_cast<size_t>(i)] < u.a[static_cast<size_t>(i)]) some_greater = true;
    }
    if (!some_less && !some_greater) return TruncatedVerdict::equal_to_level;
    if (some_less && some_greater) return TruncatedVerdict::incomparable;
    return some_greater ? TruncatedVerdict::dominates : TruncatedVerdict::dominated;
}

Order lex_compare(const SlopeVector& u, const SlopeVector& v, int k) {
    arity_check(u, v, k);
    for (int i = 0; i < k; ++i) {
        if (u.a[static_cast<size_t>(i)] < v.a[static_cast<size_t>(i)]) return Order::less;
        if (v.a[static_cast<size_t>(i)] < u.a[static_cast<size_t>(i)]) return Order::greater;
    }
    return Order::equal;
}

bool componentwise_at_most(const SlopeVector& u, const SlopeVector& v, int k) {
    arity_check(u, v, k);
    for (int i = 0; i < k; ++i)
        if (v.a[static_cast<size_t>(i)] < u.a[static_cast<size_t>(i)]) return false;
    return true;
}

} // namespace ssr
