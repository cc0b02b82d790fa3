#include "prt/ramsey.hpp"

#include "prt/weights.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_map>

namespace prt {

void EquationSpec::validate() const {
    if (a.empty()) throw std::invalid_argument("equation spec: s >= 1 required");
    for (const auto& ai : a)
        if (ai == 0) throw std::invalid_argument("equation spec: coefficients must be nonzero");
    if (h.degree() < 1) throw std::invalid_argument("equation spec: deg h >= 1 required");
}

namespace {

// Minimal-bitmask nonempty zero-sum subset by meet-in-the-middle; 0 when none.
uint32_t min_zero_sum_mask(const std::vector<mpz_class>& a) {
    const size_t s = a.size();
    const size_t s1 = s / 2;
    const size_t s2 = s - s1;
    std::map<mpz_class, uint32_t> any, nonzero;
    for (uint32_t mask = 0; mask < (1u << s1); ++mask) {
        mpz_class sum = 0;
        for (size_t i = 0; i < s1; ++i)
            if (mask & (1u << i)) sum += a[i];
        if (!any.count(sum)) any[sum] = mask;
        if (mask != 0 && !nonzero.count(sum)) nonzero[sum] = mask;
    }
    for (uint32_t hi = 0; hi < (1u << s2); ++hi) {
        mpz_class sum = 0;
        for (size_t i = 0; i < s2; ++i)
            if (hi & (1u << i)) sum += a[s1 + i];
        mpz_class need = -sum;
        if (hi == 0) {
            auto it = nonzero.find(need);
            if (it != nonzero.end()) return it->second;
        } else {
            auto it = any.find(need);
            if (it != any.end()) return (hi << s1) | it->second;
        }
    }
    return 0;
}

}  // namespace

bool dr_verdict(const EquationSpec& spec) {
    spec.validate();
    mpz_class sum = 0;
    for (const auto& ai : spec.a) sum += ai;
    return sum == 0 && spec.b == 0;
}

RegularityVerdict pr_verdict(const EquationSpec& spec, uint64_t intersectivity_bound) {
    spec.validate();
    if (spec.s() > 30) throw std::domain_error("pr_verdict: s <= 30 (subset enumeration guard)");
    RegularityVerdict v;
    v.dr = dr_verdict(spec);

    mpz_class sum = 0;
    for (const auto& ai : spec.a) sum += ai;

    if (sum == 0) {
        if (spec.b != 0) {
            v.pr = false;
            v.pr_reason = "sum of coefficients is zero but b is nonzero: no valid shift m";
            return v;
        }
        // remark case: I = [s], m = h(1)
        v.pr = true;
        for (unsigned i = 1; i <= spec.s(); ++i) v.I.push_back(i);
        v.m = spec.h(mpz_class(1));
        IntPoly shifted = spec.h - IntPoly::constant(v.m);
        v.shift_verdict = is_intersective_second_kind(shifted, intersectivity_bound);
        return v;
    }

    if (spec.b % sum != 0) {
        v.pr = false;
        v.pr_reason = "b is not divisible by the coefficient sum: no integer shift m";
        return v;
    }
    v.m = spec.b / sum;

    uint32_t mask = min_zero_sum_mask(spec.a);
    if (mask == 0) {
        v.pr = false;
        v.pr_reason = "no nonempty zero-sum subset of the coefficients";
        return v;
    }
    for (unsigned i = 0; i < spec.s(); ++i)
        if (mask & (1u << i)) v.I.push_back(i + 1);

    IntPoly shifted = spec.h - IntPoly::constant(v.m);
    v.shift_verdict = is_intersective_second_kind(shifted, intersectivity_bound);
    if (v.shift_verdict.is_no()) {
        v.pr = false;
        v.pr_reason = "h(x) - m fails second-kind intersectivity (witness " +
                      v.shift_verdict.witness.get_str() + ")";
        v.I.clear();
        return v;
    }
    v.pr = true;
    return v;
}

ThresholdReport s0_threshold(unsigned d) {
    if (d < 2) throw std::domain_error("s0_threshold: d >= 2");
    ThresholdReport r;
    r.d = d;
    if (d == 2)
        r.T_upper = 2;
    else if (d == 3)
        r.T_upper = 4;
    else
        r.T_upper = static_cast<uint64_t>(d) * (d - 1) / 2 +
                    static_cast<uint64_t>(std::floor(std::sqrt(2.0 * d + 2.0)));
    r.s0_upper = 2 * r.T_upper + 1;
    r.s0_lower = 2ull * d + 1;
    return r;
}

namespace {

// Value distribution with exact integer weights, sparse or dense.
struct Dist {
    bool dense = false;
    int64_t lo = 0;
    std::vector<uint64_t> dvals;                      // dense
    std::vector<std::pair<int64_t, uint64_t>> svals;  // sparse, sorted

    uint64_t total() const {
        uint64_t t = 0;
        if (dense)
            for (uint64_t x : dvals) t += x;
        else
            for (const auto& [k, x] : svals) t += x;
        return t;
    }
};

int64_t h_i64(const IntPoly& h, uint64_t x) {
    mpz_class v = h(mpz_class(static_cast<unsigned long>(x)));
    if (!v.fits_slong_p()) throw std::overflow_error("count_solutions: h value exceeds int64");
    return static_cast<int64_t>(v.get_si());
}

// Distribution of sum_B c_B h(y_B) over y in A^blocks, c_B > 0 multiset.
Dist block_distribution(const std::vector<int64_t>& hvals, const std::vector<int64_t>& coeffs,
                        size_t budget_bytes) {
    // start sparse from the first coefficient
    std::unordered_map<int64_t, uint64_t> cur;
    cur.reserve(hvals.size() * 2);
    for (int64_t hv : hvals) ++cur[coeffs[0] * hv];
    int64_t lo_acc, hi_acc;
    {
        auto [mn, mx] = std::minmax_element(hvals.begin(), hvals.end());
        lo_acc = coeffs[0] * *mn;
        hi_acc = coeffs[0] * *mx;
        if (coeffs[0] < 0) std::swap(lo_acc, hi_acc);
    }
    for (size_t ci = 1; ci < coeffs.size(); ++ci) {
        auto [mn, mx] = std::minmax_element(hvals.begin(), hvals.end());
        int64_t add_lo = coeffs[ci] * *mn, add_hi = coeffs[ci] * *mx;
        if (coeffs[ci] < 0) std::swap(add_lo, add_hi);
        int64_t nlo = lo_acc + add_lo, nhi = hi_acc + add_hi;
        uint64_t range = static_cast<uint64_t>(nhi - nlo + 1);
        if (range * sizeof(uint64_t) <= budget_bytes) {
            std::vector<uint64_t> next(range, 0);
            for (const auto& [v, c] : cur)
                for (int64_t hv : hvals) next[static_cast<size_t>(v + coeffs[ci] * hv - nlo)] += c;
            // keep dense from here on
            Dist d;
            d.dense = true;
            d.lo = nlo;
            d.dvals = std::move(next);
            for (size_t cj = ci + 1; cj < coeffs.size(); ++cj) {
                auto [mn2, mx2] = std::minmax_element(hvals.begin(), hvals.end());
                int64_t a_lo = coeffs[cj] * *mn2, a_hi = coeffs[cj] * *mx2;
                if (coeffs[cj] < 0) std::swap(a_lo, a_hi);
                int64_t mlo = d.lo + a_lo;
                uint64_t mrange =
                    static_cast<uint64_t>((d.lo + static_cast<int64_t>(d.dvals.size()) - 1 + a_hi) -
                                          mlo + 1);
                if (mrange * sizeof(uint64_t) > budget_bytes)
                    throw std::overflow_error("count_solutions: dense range exceeds memory budget");
                std::vector<uint64_t> merged(mrange, 0);
                for (size_t i = 0; i < d.dvals.size(); ++i) {
                    if (!d.dvals[i]) continue;
                    int64_t base = d.lo + static_cast<int64_t>(i);
                    for (int64_t hv : hvals)
                        merged[static_cast<size_t>(base + coeffs[cj] * hv - mlo)] += d.dvals[i];
                }
                d.lo = mlo;
                d.dvals = std::move(merged);
            }
            return d;
        }
        uint64_t est_entries =
            std::min<uint64_t>(cur.size() * hvals.size(), static_cast<uint64_t>(nhi - nlo + 1));
        if (est_entries * 32 > budget_bytes || cur.size() * hvals.size() > (1ull << 27))
            throw std::overflow_error("count_solutions: sparse convolution exceeds memory budget");
        std::unordered_map<int64_t, uint64_t> next;
        next.reserve(cur.size() * 2);
        for (const auto& [v, c] : cur)
            for (int64_t hv : hvals) next[v + coeffs[ci] * hv] += c;
        cur = std::move(next);
        lo_acc = nlo;
        hi_acc = nhi;
    }
    Dist d;
    d.dense = false;
    d.svals.assign(cur.begin(), cur.end());
    std::sort(d.svals.begin(), d.svals.end());
    return d;
}

uint64_t dist_lookup(const Dist& d, int64_t key) {
    if (d.dense) {
        int64_t idx = key - d.lo;
        if (idx < 0 || idx >= static_cast<int64_t>(d.dvals.size())) return 0;
        return d.dvals[static_cast<size_t>(idx)];
    }
    auto it = std::lower_bound(d.svals.begin(), d.svals.end(), key,
                               [](const auto& e, int64_t k) { return e.first < k; });
    if (it != d.svals.end() && it->first == key) return it->second;
    return 0;
}

// inner product sum_v L(v) R(v - b)
unsigned __int128 dist_inner(const Dist& L, const Dist& R, int64_t b) {
    unsigned __int128 total = 0;
    auto iterate_smaller = [&](const Dist& A, const Dist& B, bool a_is_left) {
        if (A.dense) {
            for (size_t i = 0; i < A.dvals.size(); ++i) {
                if (!A.dvals[i]) continue;
                int64_t v = A.lo + static_cast<int64_t>(i);
                int64_t key = a_is_left ? v - b : v + b;
                uint64_t other = dist_lookup(B, key);
                if (other) total += static_cast<unsigned __int128>(A.dvals[i]) * other;
            }
        } else {
            for (const auto& [v, c] : A.svals) {
                int64_t key = a_is_left ? v - b : v + b;
                uint64_t other = dist_lookup(B, key);
                if (other) total += static_cast<unsigned __int128>(c) * other;
            }
        }
    };
    size_t ln = L.dense ? L.dvals.size() : L.svals.size();
    size_t rn = R.dense ? R.dvals.size() : R.svals.size();
    if (ln <= rn)
        iterate_smaller(L, R, true);  // iterate L, lookup R at v - b
    else
        iterate_smaller(R, L, false);  // iterate R, lookup L at w + b
    return total;
}

// Iterator over set partitions of [s] as restricted growth strings.
struct PartitionIter {
    std::vector<unsigned> rgs;
    bool first = true;

    explicit PartitionIter(size_t s) : rgs(s, 0) {}

    bool next() {
        if (first) {
            first = false;
            return true;
        }
        size_t s = rgs.size();
        for (size_t i = s; i-- > 1;) {
            unsigned maxprev = 0;
            for (size_t j = 0; j < i; ++j) maxprev = std::max(maxprev, rgs[j]);
            if (rgs[i] <= maxprev) {
                ++rgs[i];
                for (size_t j = i + 1; j < s; ++j) rgs[j] = 0;
                return true;
            }
            rgs[i] = 0;
        }
        return false;
    }
};

}  // namespace

uint64_t count_solutions_brute(const std::vector<uint64_t>& A, const EquationSpec& spec) {
    spec.validate();
    const size_t s = spec.s();
    std::vector<mpz_class> hv(A.size());
    for (size_t i = 0; i < A.size(); ++i) hv[i] = spec.h(mpz_class(A[i]));
    std::vector<size_t> idx(s, 0);
    uint64_t count = 0;
    if (A.empty()) return 0;
    double tuples = std::pow(static_cast<double>(A.size()), static_cast<double>(s));
    if (tuples > 2e9) throw std::overflow_error("count_solutions_brute: too many tuples");
    while (true) {
        bool distinct = true;
        for (size_t i = 0; i < s && distinct; ++i)
            for (size_t j = i + 1; j < s; ++j)
                if (idx[i] == idx[j]) {
                    distinct = false;
                    break;
                }
        if (distinct) {
            mpz_class sum = -spec.b;
            for (size_t i = 0; i < s; ++i) sum += spec.a[i] * hv[idx[i]];
            if (sum == 0) ++count;
        }
        size_t pos = s;
        while (pos > 0) {
            if (++idx[pos - 1] < A.size()) break;
            idx[pos - 1] = 0;
            --pos;
        }
        if (pos == 0) break;
    }
    return count;
}

uint64_t count_solutions(const std::vector<uint64_t>& A, const EquationSpec& spec,
                         size_t memory_budget_bytes) {
    spec.validate();
    const size_t s = spec.s();
    if (A.size() < s) return 0;
    if (s > 8) {
        // filtered enumeration fallback for wide equations
        return count_solutions_brute(A, spec);
    }
    if (!spec.b.fits_slong_p()) throw std::overflow_error("count_solutions: b exceeds int64");
    const int64_t b = static_cast<int64_t>(spec.b.get_si());

    std::vector<int64_t> hvals(A.size());
    for (size_t i = 0; i < A.size(); ++i) hvals[i] = h_i64(spec.h, A[i]);
    std::vector<int64_t> coeffs(s);
    for (size_t i = 0; i < s; ++i) {
        if (!spec.a[i].fits_slong_p()) throw std::overflow_error("count_solutions: coefficient overflow");
        coeffs[i] = static_cast<int64_t>(spec.a[i].get_si());
    }

    // Cache side distributions by their coefficient multiset.
    std::map<std::vector<int64_t>, Dist> cache;
    auto get_dist = [&](std::vector<int64_t> cs) -> const Dist& {
        std::sort(cs.begin(), cs.end());
        auto it = cache.find(cs);
        if (it == cache.end()) it = cache.emplace(cs, block_distribution(hvals, cs, memory_budget_bytes)).first;
        return it->second;
    };

    __int128 total = 0;
    PartitionIter pit(s);
    while (pit.next()) {
        unsigned nblocks = *std::max_element(pit.rgs.begin(), pit.rgs.end()) + 1;
        std::vector<int64_t> block_coeff(nblocks, 0);
        std::vector<unsigned> block_size(nblocks, 0);
        for (size_t i = 0; i < s; ++i) {
            block_coeff[pit.rgs[i]] += coeffs[i];
            ++block_size[pit.rgs[i]];
        }
        // Moebius weight prod (-1)^(|B|-1) (|B|-1)!
        long long mu = 1;
        for (unsigned bs : block_size) {
            long long f = 1;
            for (unsigned k = 2; k < bs; ++k) f *= k;
            mu *= ((bs % 2 == 0) ? -1 : 1) * f;
        }
        std::vector<int64_t> pos, neg;
        unsigned zero_blocks = 0;
        for (int64_t c : block_coeff) {
            if (c > 0)
                pos.push_back(c);
            else if (c < 0)
                neg.push_back(-c);
            else
                ++zero_blocks;
        }
        // count solutions of sum_pos c h(y) = b + sum_neg c h(y)
        unsigned __int128 cnt;
        if (pos.empty() && neg.empty()) {
            cnt = (b == 0) ? 1 : 0;
        } else if (pos.empty()) {
            const Dist& R = get_dist(neg);
            cnt = dist_lookup(R, -b);
        } else if (neg.empty()) {
            const Dist& L = get_dist(pos);
            cnt = dist_lookup(L, b);
        } else {
            const Dist& L = get_dist(pos);
            const Dist& R = get_dist(neg);
            cnt = dist_inner(L, R, b);
        }
        unsigned __int128 scale = 1;
        for (unsigned zb = 0; zb < zero_blocks; ++zb) scale *= A.size();
        total += static_cast<__int128>(mu) * static_cast<__int128>(cnt * scale);
    }
    if (total < 0) throw std::logic_error("count_solutions: negative inclusion-exclusion total");
    return static_cast<uint64_t>(total);
}

Coloring make_random_coloring(const std::vector<uint64_t>& primes, unsigned r, uint64_t seed) {
    if (r < 1) throw std::domain_error("coloring: r >= 1");
    Coloring c;
    c.r = r;
    c.policy = "random";
    c.seed = seed;
    std::mt19937_64 rng(seed);
    for (uint64_t p : primes) c.assignment[p] = static_cast<unsigned>(rng() % r);
    return c;
}

Coloring make_residue_coloring(const std::vector<uint64_t>& primes, uint64_t modulus) {
    if (modulus < 1) throw std::domain_error("coloring: modulus >= 1");
    Coloring c;
    c.r = static_cast<unsigned>(modulus);
    c.policy = "residue";
    for (uint64_t p : primes) c.assignment[p] = static_cast<unsigned>(p % modulus);
    return c;
}

Coloring make_block_coloring(const std::vector<uint64_t>& primes, unsigned r) {
    if (r < 1) throw std::domain_error("coloring: r >= 1");
    Coloring c;
    c.r = r;
    c.policy = "blocks";
    size_t n = primes.size();
    for (size_t i = 0; i < n; ++i)
        c.assignment[primes[i]] = static_cast<unsigned>(std::min<size_t>(i * r / std::max<size_t>(n, 1), r - 1));
    return c;
}

namespace {

double scaling_ratio(uint64_t count, uint64_t N, unsigned d, size_t s) {
    double logN = std::log(static_cast<double>(N));
    return static_cast<double>(count) * std::pow(static_cast<double>(N), static_cast<double>(d)) *
           std::pow(logN / static_cast<double>(N), static_cast<double>(s));
}

}  // namespace

ColorReport color_experiment(uint64_t N, const Coloring& coloring, const EquationSpec& spec,
                             const PrimeTable& primes, const std::vector<unsigned>* split_I) {
    spec.validate();
    if (primes.limit < N) throw std::domain_error("color_experiment: sieve does not reach N");
    ColorReport rep;
    std::vector<std::vector<uint64_t>> classes(coloring.r);
    std::vector<uint64_t> all;
    for (uint64_t p : primes.primes) {
        if (p > N) break;
        all.push_back(p);
        auto it = coloring.assignment.find(p);
        if (it == coloring.assignment.end())
            throw std::invalid_argument("color_experiment: coloring does not cover P_N");
        classes[it->second].push_back(p);
    }
    const unsigned d = static_cast<unsigned>(spec.h.degree());
    rep.total_count = count_solutions(all, spec);
    rep.class_sizes.resize(coloring.r);
    rep.counts.resize(coloring.r);
    rep.ratios.resize(coloring.r);
    for (unsigned k = 0; k < coloring.r; ++k) {
        rep.class_sizes[k] = classes[k].size();
        rep.counts[k] = count_solutions(classes[k], spec);
        rep.ratios[k] = scaling_ratio(rep.counts[k], N, d, spec.s());
        if (rep.counts[k] > rep.counts[rep.best_class]) rep.best_class = k;
    }

    if (split_I && !split_I->empty()) {
        // Mixed count over P_N^s x C_k^t with the linear forms induced by the
        // zero-sum subset I: L1(x) = sum_{i in I} a_i x_i on the h-image of
        // all primes, L2(y) = -sum_{j notin I} a_j y_j on the class image.
        std::vector<bool> in_I(spec.s() + 1, false);
        for (unsigned idx : *split_I) {
            if (idx < 1 || idx > spec.s())
                throw std::invalid_argument("color_experiment: split index out of range");
            in_I[idx] = true;
        }
        auto image_table = [&](const std::vector<uint64_t>& primeset) {
            WeightTable t;
            t.support_bound = 0;
            for (uint64_t p : primeset) {
                mpz_class v = spec.h(mpz_class(static_cast<unsigned long>(p)));
                if (!v.fits_slong_p())
                    throw std::overflow_error("color_experiment: h value exceeds int64");
                t.add(static_cast<int64_t>(v.get_si()), 1.0);
            }
            t.sort_entries();
            if (!t.entries.empty()) t.support_bound = t.entries.back().first;
            return t;
        };
        WeightTable allimg = image_table(all);
        std::vector<int64_t> L1, L2;
        for (size_t i = 0; i < spec.s(); ++i) {
            long c = static_cast<long>(spec.a[i].get_si());
            if (in_I[i + 1])
                L1.push_back(c);
            else
                L2.push_back(-c);
        }
        rep.mixed_counts.resize(coloring.r, 0.0);
        rep.mixed_ratios.resize(coloring.r, 0.0);
        for (unsigned k = 0; k < coloring.r; ++k) {
            WeightTable img = image_table(classes[k]);
            std::vector<const WeightTable*> fs(L1.size(), &allimg);
            std::vector<const WeightTable*> gs(L2.size(), &img);
            double cnt = (classes[k].empty() && !L2.empty())
                             ? 0.0
                             : phi_count(fs, L1, gs, L2);
            rep.mixed_counts[k] = cnt;
            double logN = std::log(static_cast<double>(N));
            rep.mixed_ratios[k] =
                cnt * std::pow(static_cast<double>(N), static_cast<double>(d)) *
                std::pow(logN / static_cast<double>(N), static_cast<double>(spec.s()));
        }
    }
    return rep;
}

DenseReport dense_experiment(uint64_t N, double delta, const std::string& policy,
                             const EquationSpec& spec, const PrimeTable& primes, uint64_t seed) {
    spec.validate();
    if (!(delta > 0.0 && delta <= 1.0)) throw std::domain_error("dense_experiment: delta in (0,1]");
    if (primes.limit < N) throw std::domain_error("dense_experiment: sieve does not reach N");
    std::vector<uint64_t> all;
    for (uint64_t p : primes.primes) {
        if (p > N) break;
        all.push_back(p);
    }
    std::vector<uint64_t> A;
    size_t target = static_cast<size_t>(std::ceil(delta * static_cast<double>(all.size())));
    if (policy == "random") {
        std::mt19937_64 rng(seed);
        for (uint64_t p : all) {
            double u = std::ldexp(static_cast<double>(rng() >> 11), -53);
            if (u < delta) A.push_back(p);
        }
    } else if (policy == "top") {
        A.assign(all.end() - std::min(target, all.size()), all.end());
    } else if (policy == "ap") {
        for (uint64_t p : all)
            if (p % 3 == 1) A.push_back(p);
        if (A.size() > target) A.resize(target);
    } else {
        throw std::invalid_argument("dense_experiment: unknown policy '" + policy + "'");
    }
    DenseReport rep;
    rep.subset_size = A.size();
    rep.count = count_solutions(A, spec);
    rep.ratio = scaling_ratio(rep.count, N, static_cast<unsigned>(spec.h.degree()), spec.s());
    return rep;
}

}  // namespace prt
