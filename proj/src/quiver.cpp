#include "ssr/quiver.hpp"

#include <algorithm>
#include <future>

namespace ssr {

void Quiver::validate() const {
    if (vertices < 0) throw error("negative vertex count");
    for (auto [s, t] : arrows)
        if (s < 0 || s >= vertices || t < 0 || t >= vertices)
            throw error("arrow endpoint out of range");
}

void StabilityData::validate(int vertices) const {
    if (theta.empty()) throw error("stability needs at least one weight function");
    for (const auto& th : theta)
        if (static_cast<int>(th.size()) != vertices) throw error("theta length mismatch");
    if (static_cast<int>(sigma.size()) != vertices) throw error("sigma length mismatch");
    for (auto s : sigma)
        if (s <= 0) throw error("sigma weights must be positive");
}

std::int64_t sigma_rank(const std::vector<int>& dims, const StabilityData& s) {
    std::int64_t r = 0;
    for (size_t v = 0; v < dims.size(); ++v) r += s.sigma[v] * dims[v];
    return r;
}

SlopeVector slope_of_dims(const std::vector<int>& dims, const StabilityData& s) {
    std::int64_t den = sigma_rank(dims, s);
    if (den == 0) throw error("slope of the zero dimension vector");
    SlopeVector mu;
    for (const auto& th : s.theta) {
        std::int64_t num = 0;
        for (size_t v = 0; v < dims.size(); ++v) num += th[v] * dims[v];
        mu.a.emplace_back(num, den);
    }
    return mu;
}

// ------------------------------------------------------------ subspaces

std::uint64_t count_subspaces(int d, std::int64_t p) {
    const __int128 saturate = static_cast<__int128>(1) << 100;
    __int128 total = 0;
    for (int s = 0; s <= d; ++s) {
        __int128 num = 1, den = 1;
        for (int i = 0; i < s; ++i) {
            __int128 pd = 1, ps = 1;
            for (int k = 0; k < d - i; ++k) {
                pd *= p;
                if (pd > saturate) return UINT64_MAX;
            }
            for (int k = 0; k < s - i; ++k) ps *= p;
            num *= pd - 1;
            den *= ps - 1;
            if (num > saturate) return UINT64_MAX;
        }
        total += num / den;
    }
    if (total > static_cast<__int128>(UINT64_MAX)) return UINT64_MAX;
    return static_cast<std::uint64_t>(total);
}

std::vector<MatF> all_subspaces(int d, std::int64_t p) {
    std::vector<MatF> out;
    Fp zero(0, p);
    // pivot-row subsets in binary order; within a subset, odometer over the
    // free entries.  Order is fixed so downstream output is deterministic.
    for (std::uint64_t mask = 0; mask < (1ull << d); ++mask) {
        std::vector<int> pivots;
        for (int i = 0; i < d; ++i)
            if (mask & (1ull << i)) pivots.push_back(i);
        int s = static_cast<int>(pivots.size());
        // free slots: (column j, row i) with i below the pivot and i not a pivot row
        std::vector<std::pair<int, int>> free_slots;
        for (int j = 0; j < s; ++j)
            for (int i = pivots[static_cast<size_t>(j)] + 1; i < d; ++i)
                if (!(mask & (1ull << i))) free_slots.emplace_back(j, i);
        std::vector<std::int64_t> vals(free_slots.size(), 0);
        while (true) {
            MatF basis(d, s, zero);
            for (int j = 0; j < s; ++j) basis.at(pivots[static_cast<size_t>(j)], j) = Fp(1, p);
            for (size_t k = 0; k < free_slots.size(); ++k)
                basis.at(free_slots[k].second, free_slots[k].first) = Fp(vals[k], p);
            out.push_back(std::move(basis));
            size_t k = 0;
            while (k < vals.size() && ++vals[k] == p) vals[k++] = 0;
            if (k == vals.size()) break;
        }
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const MatF& a, const MatF& b) { return a.cols() < b.cols(); });
    return out;
}

bool arrow_invariant(const RepF& m, const SubrepWitness& w) {
    for (size_t a = 0; a < m.quiver.arrows.size(); ++a) {
        auto [src, tgt] = m.quiver.arrows[a];
        const MatF& bs = w.bases[static_cast<size_t>(src)];
        if (bs.cols() == 0) continue;
        MatF image = m.arrow_maps[a] * bs;
        if (!subspace_contained(w.bases[static_cast<size_t>(tgt)], image)) return false;
    }
    return true;
}

bool arrow_invariant_k(const RepK& m, const SubrepWitnessK& w) {
    for (size_t a = 0; a < m.quiver.arrows.size(); ++a) {
        auto [src, tgt] = m.quiver.arrows[a];
        const MatK& bs = w.bases[static_cast<size_t>(src)];
        if (bs.cols() == 0) continue;
        MatK image = m.arrow_maps[a] * bs;
        if (!subspace_contained(w.bases[static_cast<size_t>(tgt)], image)) return false;
    }
    return true;
}

std::vector<SubrepWitness> enumerate_subreps(const RepF& m, const Caps& caps) {
    m.validate();
    const std::int64_t p = m.proto.prime();
    std::vector<std::vector<MatF>> per_vertex;
    std::uint64_t product = 1;
    for (int v = 0; v < m.quiver.vertices; ++v) {
        std::uint64_t n = count_subspaces(m.dims[static_cast<size_t>(v)], p);
        if (n == 0) n = 1;
        if (product > caps.subrep_cap / n)
            throw cap_exceeded_error(
                "subrepresentation enumeration blowup: subspace tuple count exceeds cap " +
                std::to_string(caps.subrep_cap));
        product *= n;
        per_vertex.push_back(all_subspaces(m.dims[static_cast<size_t>(v)], p));
    }

    auto tuple_at = [&](std::uint64_t flat) {
        SubrepWitness w;
        for (int v = 0; v < m.quiver.vertices; ++v) {
            const auto& list = per_vertex[static_cast<size_t>(v)];
            w.bases.push_back(list[static_cast<size_t>(flat % list.size())]);
            flat /= list.size();
        }
        return w;
    };

    auto scan = [&](std::uint64_t lo, std::uint64_t hi) {
        std::vector<SubrepWitness> found;
        for (std::uint64_t i = lo; i < hi; ++i) {
            SubrepWitness w = tuple_at(i);
            if (arrow_invariant(m, w)) found.push_back(std::move(w));
        }
        return found;
    };

    int workers = std::max(1, caps.threads);
    if (workers == 1 || product < 1024) return scan(0, product);

    // fixed chunking by index keeps the merged order independent of timing
    std::vector<std::future<std::vector<SubrepWitness>>> futures;
    std::uint64_t chunk = (product + static_cast<std::uint64_t>(workers) - 1) /
                          static_cast<std::uint64_t>(workers);
    for (int t = 0; t < workers; ++t) {
        std::uint64_t lo = chunk * static_cast<std::uint64_t>(t);
        std::uint64_t hi = std::min(product, lo + chunk);
        if (lo >= hi) break;
        futures.push_back(std::async(std::launch::async, scan, lo, hi));
    }
    std::vector<SubrepWitness> out;
    for (auto& f : futures) {
        auto part = f.get();
        out.insert(out.end(), std::make_move_iterator(part.begin()),
                   std::make_move_iterator(part.end()));
    }
    return out;
}

// ------------------------------------------------------ induced structures

namespace {

std::vector<int> pivot_rows(const MatF& echelon_basis) {
    std::vector<int> rows;
    for (int j = 0; j < echelon_basis.cols(); ++j) {
        int r = 0;
        while (r < echelon_basis.rows() && echelon_basis.at(r, j).is_zero()) ++r;
        rows.push_back(r);
    }
    return rows;
}

} // namespace

RepF subrep_restriction(const RepF& m, const SubrepWitness& w) {
    RepF sub;
    sub.quiver = m.quiver;
    sub.proto = m.proto;
    sub.dims = w.dims();
    for (size_t a = 0; a < m.quiver.arrows.size(); ++a) {
        auto [src, tgt] = m.quiver.arrows[a];
        MatF image = m.arrow_maps[a] * w.bases[static_cast<size_t>(src)];
        auto x = w.bases[static_cast<size_t>(tgt)].solve(image);
        if (!x) throw error("witness is not arrow-invariant");
        sub.arrow_maps.push_back(*x);
    }
    sub.validate();
    return sub;
}

RepF quotient_rep(const RepF& m, const SubrepWitness& w) {
    RepF q;
    q.quiver = m.quiver;
    q.proto = m.proto;
    std::vector<std::vector<int>> free_rows(static_cast<size_t>(m.quiver.vertices));
    for (int v = 0; v < m.quiver.vertices; ++v) {
        auto pivots = pivot_rows(w.bases[static_cast<size_t>(v)]);
        std::vector<bool> is_pivot(static_cast<size_t>(m.dims[static_cast<size_t>(v)]), false);
        for (int r : pivots) is_pivot[static_cast<size_t>(r)] = true;
        for (int r = 0; r < m.dims[static_cast<size_t>(v)]; ++r)
            if (!is_pivot[static_cast<size_t>(r)]) free_rows[static_cast<size_t>(v)].push_back(r);
        q.dims.push_back(static_cast<int>(free_rows[static_cast<size_t>(v)].size()));
    }
    // the projection p(x) = x_N - B_N x_R kills the witness (the pivot-row
    // block of a reduced echelon basis is the identity); arrows descend
    // through the zero-padded section
    for (size_t a = 0; a < m.quiver.arrows.size(); ++a) {
        auto [src, tgt] = m.quiver.arrows[a];
        const auto& nsrc = free_rows[static_cast<size_t>(src)];
        const auto& ntgt = free_rows[static_cast<size_t>(tgt)];
        auto tpivots = pivot_rows(w.bases[static_cast<size_t>(tgt)]);
        const MatF& bt = w.bases[static_cast<size_t>(tgt)];
        MatF reduced(static_cast<int>(ntgt.size()), static_cast<int>(nsrc.size()), m.proto.zero());
        for (size_t j = 0; j < nsrc.size(); ++j)
            for (size_t i = 0; i < ntgt.size(); ++i) {
                Fp val = m.arrow_maps[a].at(ntgt[i], nsrc[j]);
                for (int c = 0; c < bt.cols(); ++c)
                    val = val - bt.at(ntgt[i], c) *
                                    m.arrow_maps[a].at(tpivots[static_cast<size_t>(c)], nsrc[j]);
                reduced.at(static_cast<int>(i), static_cast<int>(j)) = val;
            }
        q.arrow_maps.push_back(std::move(reduced));
    }
    q.validate();
    return q;
}

SubrepWitness sum_witness(const RepF& m, const SubrepWitness& a, const SubrepWitness& b) {
    SubrepWitness w;
    for (int v = 0; v < m.quiver.vertices; ++v)
        w.bases.push_back(MatF::hconcat(a.bases[static_cast<size_t>(v)],
                                        b.bases[static_cast<size_t>(v)])
                              .column_echelon());
    return w;
}

SubrepWitness preimage_witness(const RepF& m, const SubrepWitness& w,
                               const SubrepWitness& in_quotient) {
    SubrepWitness out;
    for (int v = 0; v < m.quiver.vertices; ++v) {
        int d = m.dims[static_cast<size_t>(v)];
        auto pivots = pivot_rows(w.bases[static_cast<size_t>(v)]);
        std::vector<bool> is_pivot(static_cast<size_t>(d), false);
        for (int r : pivots) is_pivot[static_cast<size_t>(r)] = true;
        std::vector<int> free;
        for (int r = 0; r < d; ++r)
            if (!is_pivot[static_cast<size_t>(r)]) free.push_back(r);
        const MatF& qb = in_quotient.bases[static_cast<size_t>(v)];
        MatF lifted(d, qb.cols(), m.proto.zero());
        for (int j = 0; j < qb.cols(); ++j)
            for (size_t i = 0; i < free.size(); ++i)
                lifted.at(free[i], j) = qb.at(static_cast<int>(i), j);
        out.bases.push_back(
            MatF::hconcat(w.bases[static_cast<size_t>(v)], lifted).column_echelon());
    }
    return out;
}

// --------------------------------------------------------------- stability

namespace {

bool violates(const SlopeVector& sub, const SlopeVector& whole, int level) {
    if (level == LEVEL_FULL)
        return lex_compare(sub, whole, whole.arity()) == Order::greater;
    return !componentwise_at_most(sub, whole, level);
}

} // namespace

SemistabilityVerdict is_semistable(const RepF& m, const StabilityData& s, int level,
                                   const Caps& caps) {
    s.validate(m.quiver.vertices);
    if (m.is_zero()) return {true, std::nullopt};
    SlopeVector mu = slope(m, s);
    SemistabilityVerdict verdict{true, std::nullopt};
    std::optional<SlopeVector> best;
    std::int64_t best_rank = -1;
    for (const auto& w : enumerate_subreps(m, caps)) {
        if (w.total_dim() == 0) continue;
        SlopeVector ms = slope_of_dims(w.dims(), s);
        if (!violates(ms, mu, level)) continue;
        verdict.semistable = false;
        std::int64_t rank = sigma_rank(w.dims(), s);
        bool better = false;
        if (!best) {
            better = true;
        } else {
            Order o = lex_compare(*best, ms, ms.arity());
            better = (o == Order::less) || (o == Order::equal && rank > best_rank);
        }
        if (better) {
            best = ms;
            best_rank = rank;
            verdict.witness = w;
        }
    }
    return verdict;
}

int semistable_codimension(const RepF& m, const StabilityData& s, const Caps& caps) {
    s.validate(m.quiver.vertices);
    if (m.is_zero()) return s.arity();
    SlopeVector mu = slope(m, s);
    auto subs = enumerate_subreps(m, caps);
    for (int k = 1; k <= s.arity(); ++k)
        for (const auto& w : subs) {
            if (w.total_dim() == 0) continue;
            if (!componentwise_at_most(slope_of_dims(w.dims(), s), mu, k)) return k - 1;
        }
    return s.arity();
}

SubrepWitness hn_maximal_destabilizing(const RepF& m, const StabilityData& s, const Caps& caps) {
    auto subs = enumerate_subreps(m, caps);
    std::optional<SlopeVector> best;
    for (const auto& w : subs) {
        if (w.total_dim() == 0) continue;
        SlopeVector ms = slope_of_dims(w.dims(), s);
        if (!best || lex_compare(*best, ms, ms.arity()) == Order::less) best = ms;
    }
    if (!best) throw error("maximal destabilizing subobject of the zero representation");
    SubrepWitness acc = zero_witness(m);
    for (const auto& w : subs) {
        if (w.total_dim() == 0) continue;
        if (lex_compare(slope_of_dims(w.dims(), s), *best, best->arity()) == Order::equal)
            acc = sum_witness(m, acc, w);
    }
    // the sum of all maximal-slope subreps keeps the maximal slope
    if (!(lex_compare(slope_of_dims(acc.dims(), s), *best, best->arity()) == Order::equal))
        throw error("maximal destabilizing subobject verification failed");
    return acc;
}

HNFiltration hn_filtration(const RepF& m, const StabilityData& s, const Caps& caps) {
    s.validate(m.quiver.vertices);
    if (m.is_zero()) throw error("HN filtration of the zero representation");
    HNFiltration hn;
    SubrepWitness top = hn_maximal_destabilizing(m, s, caps);
    hn.steps.push_back(top);
    hn.slopes.push_back(slope_of_dims(top.dims(), s));
    if (top.total_dim() == m.total_dim()) return hn;
    RepF q = quotient_rep(m, top);
    HNFiltration tail = hn_filtration(q, s, caps);
    for (size_t i = 0; i < tail.steps.size(); ++i) {
        hn.steps.push_back(preimage_witness(m, top, tail.steps[i]));
        hn.slopes.push_back(tail.slopes[i]);
    }
    return hn;
}

SubrepWitness maximal_destabilizing(const RepF& m, const StabilityData& s, int level,
                                    const Caps& caps) {
    s.validate(m.quiver.vertices);
    if (level < 1 || level > s.arity()) throw error("destabilizing level out of range");
    SubrepWitness top = hn_maximal_destabilizing(m, s, caps);
    SlopeVector b = slope_of_dims(top.dims(), s);
    auto matches = [&](const SubrepWitness& w) {
        if (w.total_dim() == 0) return false;
        SlopeVector ms = slope_of_dims(w.dims(), s);
        for (int i = 0; i < level; ++i)
            if (!(ms.a[static_cast<size_t>(i)] == b.a[static_cast<size_t>(i)])) return false;
        return true;
    };
    std::vector<SubrepWitness> candidates;
    for (const auto& w : enumerate_subreps(m, caps))
        if (matches(w)) candidates.push_back(w);
    for (size_t i = 0; i < candidates.size(); ++i)
        for (size_t j = i + 1; j < candidates.size(); ++j)
            if (!matches(sum_witness(m, candidates[i], candidates[j])))
                throw error("destabilizing candidates not closed under sums at level " +
                            std::to_string(level) +
                            "; componentwise truncation is order-ambiguous here");
    SubrepWitness acc = zero_witness(m);
    for (const auto& w : candidates) acc = sum_witness(m, acc, w);
    if (!matches(acc)) throw error("maximal destabilizing sum verification failed");
    return acc;
}

// ------------------------------------------------------------ Jordan-Holder

namespace {

std::vector<RepF> jh_graded_greedy(const RepF& m, const StabilityData& s, const Caps& caps,
                                   bool pick_last) {
    std::vector<RepF> pieces;
    RepF current = m;
    SlopeVector mu = slope(m, s);
    while (!current.is_zero()) {
        auto subs = enumerate_subreps(current, caps);
        std::optional<SubrepWitness> chosen;
        for (const auto& w : subs) {
            if (w.total_dim() == 0) continue;
            if (!(slope_of_dims(w.dims(), s) == mu)) continue;
            if (!chosen || w.total_dim() < chosen->total_dim() ||
                (pick_last && w.total_dim() == chosen->total_dim()))
                chosen = w;
        }
        if (!chosen) throw error("Jordan-Holder step found no equal-slope subobject");
        pieces.push_back(subrep_restriction(current, *chosen));
        current = quotient_rep(current, *chosen);
    }
    return pieces;
}

} // namespace

std::vector<RepF> jh_graded(const RepF& m, const StabilityData& s, const Caps& caps) {
    if (m.is_zero()) return {};
    if (!is_semistable(m, s, LEVEL_FULL, caps).semistable)
        throw error("Jordan-Holder graded object of a non-semistable representation");
    std::vector<RepF> first = jh_graded_greedy(m, s, caps, false);
    std::vector<RepF> second = jh_graded_greedy(m, s, caps, true);
    // the multiset of pieces must not depend on the greedy order
    std::vector<bool> used(second.size(), false);
    for (const auto& piece : first) {
        bool matched = false;
        for (size_t j = 0; j < second.size(); ++j) {
            if (used[j]) continue;
            if (iso_check(piece, second[j], caps)) {
                used[j] = true;
                matched = true;
                break;
            }
        }
        if (!matched)
            throw error("Jordan-Holder graded multiset depends on the filtration; library bug");
    }
    return first;
}

// ------------------------------------------------------------------- iso

MatF hom_space_basis(const RepF& a, const RepF& b) {
    if (!(a.quiver == b.quiver)) throw error("Hom space needs one quiver");
    const std::int64_t p = a.proto.prime();
    // unknowns: one block X_v of shape b.dims[v] x a.dims[v] per vertex;
    // constraints X_tgt A_arrow = B_arrow X_src
    std::vector<int> offset(a.dims.size() + 1, 0);
    for (size_t v = 0; v < a.dims.size(); ++v)
        offset[v + 1] = offset[v] + b.dims[v] * a.dims[v];
    int unknowns = offset.back();
    int rows = 0;
    for (size_t ar = 0; ar < a.quiver.arrows.size(); ++ar) {
        auto [src, tgt] = a.quiver.arrows[ar];
        rows += b.dims[static_cast<size_t>(tgt)] * a.dims[static_cast<size_t>(src)];
    }
    MatF system(std::max(rows, 1), std::max(unknowns, 1), Fp(0, p));
    int row = 0;
    for (size_t ar = 0; ar < a.quiver.arrows.size(); ++ar) {
        auto [src, tgt] = a.quiver.arrows[ar];
        int bt = b.dims[static_cast<size_t>(tgt)], as = a.dims[static_cast<size_t>(src)];
        int at = a.dims[static_cast<size_t>(tgt)], bs = b.dims[static_cast<size_t>(src)];
        for (int i = 0; i < bt; ++i)
            for (int j = 0; j < as; ++j) {
                // X_tgt is bt x at: entry (i, k) multiplies A[k][j]
                for (int k = 0; k < at; ++k)
                    system.at(row, offset[static_cast<size_t>(tgt)] + i * at + k) =
                        system.at(row, offset[static_cast<size_t>(tgt)] + i * at + k) +
                        a.arrow_maps[ar].at(k, j);
                // X_src is bs x as: entry (k, j) multiplies -B[i][k]
                for (int k = 0; k < bs; ++k)
                    system.at(row, offset[static_cast<size_t>(src)] + k * as + j) =
                        system.at(row, offset[static_cast<size_t>(src)] + k * as + j) -
                        b.arrow_maps[ar].at(i, k);
                ++row;
            }
    }
    if (unknowns == 0) return MatF(0, 0, Fp(0, p));
    return system.kernel();
}

int hom_dimension(const RepF& a, const RepF& b) { return hom_space_basis(a, b).cols(); }

bool iso_check(const RepF& a, const RepF& b, const Caps& caps) {
    if (!(a.quiver == b.quiver)) return false;
    if (a.dims != b.dims) return false;
    if (a.total_dim() == 0) return true;
    const std::int64_t p = a.proto.prime();

    std::vector<int> offset(a.dims.size() + 1, 0);
    for (size_t v = 0; v < a.dims.size(); ++v)
        offset[v + 1] = offset[v] + a.dims[v] * a.dims[v];
    MatF hom = hom_space_basis(a, b);
    int h = hom.cols();
    if (h == 0) return false;

    __int128 lines = 1;
    for (int i = 0; i < h; ++i) {
        lines *= p;
        if (lines / (p - 1) > static_cast<__int128>(caps.hom_cap))
            throw cap_exceeded_error("isomorphism search blowup: Hom space has p^" +
                                     std::to_string(h) + " points");
    }
    std::vector<std::int64_t> coef(static_cast<size_t>(h), 0);
    auto advance = [&]() {
        size_t k = 0;
        while (k < coef.size() && ++coef[k] == p) coef[k++] = 0;
        return k < coef.size();
    };
    while (advance()) {
        // one representative per line: leading nonzero coefficient equals 1
        int lead = h - 1;
        while (lead >= 0 && coef[static_cast<size_t>(lead)] == 0) --lead;
        if (lead < 0 || coef[static_cast<size_t>(lead)] != 1) continue;
        bool all_invertible = true;
        for (size_t v = 0; v < a.dims.size() && all_invertible; ++v) {
            int d = a.dims[v];
            if (d == 0) continue;
            MatF x(d, d, Fp(0, p));
            for (int i = 0; i < d; ++i)
                for (int jj = 0; jj < d; ++jj) {
                    Fp val(0, p);
                    for (int c = 0; c < h; ++c)
                        val = val + Fp(coef[static_cast<size_t>(c)], p) *
                                        hom.at(offset[v] + i * d + jj, c);
                    x.at(i, jj) = val;
                }
            if (x.rank() < d) all_invertible = false;
        }
        if (all_invertible) return true;
    }
    return false;
}

bool s_equivalent(const RepF& a, const RepF& b, const StabilityData& s, const Caps& caps) {
    if (!(a.quiver == b.quiver) || a.dims != b.dims)
        throw error("S-equivalence needs matching quivers and dimension vectors");
    std::vector<RepF> ga = jh_graded(a, s, caps);
    std::vector<RepF> gb = jh_graded(b, s, caps);
    if (ga.size() != gb.size()) return false;
    std::vector<bool> used(gb.size(), false);
    for (const auto& piece : ga) {
        bool matched = false;
        for (size_t j = 0; j < gb.size(); ++j) {
            if (used[j]) continue;
            if (iso_check(piece, gb[j], caps)) {
                used[j] = true;
                matched = true;
                break;
            }
        }
        if (!matched) return false;
    }
    return true;
}

} // namespace ssr
