#include "ssr/ext_field.hpp"

#include <cmath>
#include <numeric>

namespace ssr {

bool irreducible_mod_p(const std::vector<Fp>& modulus) {
    if (modulus.size() < 2) return false;
    if (modulus.back().is_zero()) throw error("modulus with zero leading coefficient");
    const std::int64_t p = modulus.front().prime();
    int deg = static_cast<int>(modulus.size()) - 1;
    if (deg == 1) return true;
    Fp zero(0, p);
    // trial division by every monic polynomial of degree 1..deg/2
    for (int fd = 1; fd <= deg / 2; ++fd) {
        std::vector<std::int64_t> tail(static_cast<size_t>(fd), 0);
        while (true) {
            std::vector<Fp> factor;
            for (auto c : tail) factor.emplace_back(c, p);
            factor.emplace_back(1, p);
            std::vector<Fp> q, r;
            polyf::divmod(modulus, factor, q, r, zero);
            if (r.empty()) return false;
            size_t k = 0;
            while (k < tail.size() && ++tail[k] == p) tail[k++] = 0;
            if (k == tail.size()) break;
        }
    }
    return true;
}

bool irreducible_over_q(const std::vector<Rational>& modulus) {
    if (modulus.size() < 2) return false;
    if (modulus.back().is_zero()) throw error("modulus with zero leading coefficient");
    int deg = static_cast<int>(modulus.size()) - 1;
    if (deg == 1) return true;
    if (deg > 3)
        throw error("irreducibility over the rationals is only decided up to degree 3 here");
    // clear denominators, then use the rational root test
    std::int64_t lcm = 1;
    for (const auto& c : modulus) lcm = std::lcm(lcm, c.den());
    std::vector<std::int64_t> z;
    for (const auto& c : modulus) z.push_back(c.num() * (lcm / c.den()));
    std::int64_t a0 = std::abs(z.front());
    std::int64_t an = std::abs(z.back());
    if (a0 == 0) return false; // x divides
    auto divisors = [](std::int64_t n) {
        std::vector<std::int64_t> out;
        for (std::int64_t d = 1; d * d <= n; ++d)
            if (n % d == 0) {
                out.push_back(d);
                out.push_back(n / d);
            }
        return out;
    };
    for (std::int64_t num : divisors(a0))
        for (std::int64_t den : divisors(an))
            for (int sign : {1, -1}) {
                Rational root(sign * num, den);
                Rational acc(0);
                for (auto it = z.rbegin(); it != z.rend(); ++it)
                    acc = acc * root + Rational(*it);
                if (acc.is_zero()) return false;
            }
    return true;
}

} // namespace ssr
