#include "prt/intersective.hpp"

#include <algorithm>
#include <numeric>
#include <map>
#include <stdexcept>

namespace prt {

namespace {

// ---- dense polynomial arithmetic mod p on uint64 coefficients ----

using ModPoly = std::vector<uint64_t>;  // ascending, no trailing zeros

ModPoly reduce_mod_p(const IntPoly& f, uint64_t p) {
    ModPoly c(f.coeffs().size());
    for (size_t i = 0; i < c.size(); ++i)
        c[i] = mpz_fdiv_ui(f.coeffs()[i].get_mpz_t(), p);
    while (!c.empty() && c.back() == 0) c.pop_back();
    return c;
}

void trim(ModPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

ModPoly mul_mod(const ModPoly& a, const ModPoly& b, uint64_t p) {
    if (a.empty() || b.empty()) return {};
    ModPoly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + static_cast<unsigned __int128>(a[i]) * b[j]) % p;
    }
    trim(r);
    return r;
}

// Remainder of a by monic m.
ModPoly rem_monic(ModPoly a, const ModPoly& m, uint64_t p) {
    while (a.size() >= m.size()) {
        uint64_t q = a.back();
        size_t shift = a.size() - m.size();
        if (q) {
            for (size_t j = 0; j < m.size(); ++j) {
                uint64_t sub = mulmod_u64(q, m[j], p);
                uint64_t& t = a[shift + j];
                t = (t >= sub) ? t - sub : t + p - sub;
            }
        }
        a.pop_back();
        trim(a);
        if (a.size() < m.size()) break;
    }
    trim(a);
    return a;
}

ModPoly make_monic(ModPoly a, uint64_t p) {
    trim(a);
    if (a.empty()) return a;
    uint64_t inv = powmod_u64(a.back(), p - 2, p);
    for (auto& c : a) c = mulmod_u64(c, inv, p);
    return a;
}

ModPoly gcd_mod(ModPoly a, ModPoly b, uint64_t p) {
    a = make_monic(std::move(a), p);
    b = make_monic(std::move(b), p);
    while (!b.empty()) {
        ModPoly r = rem_monic(a, b, p);
        a = std::move(b);
        b = make_monic(std::move(r), p);
    }
    return a;
}

// base^exp mod m (m monic), all mod p.
ModPoly powmod_poly(ModPoly base, uint64_t exp, const ModPoly& m, uint64_t p) {
    ModPoly r{1};
    base = rem_monic(std::move(base), m, p);
    while (exp) {
        if (exp & 1) r = rem_monic(mul_mod(r, base, p), m, p);
        base = rem_monic(mul_mod(base, base, p), m, p);
        exp >>= 1;
    }
    return r;
}

ModPoly sub_mod(ModPoly a, const ModPoly& b, uint64_t p) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (size_t i = 0; i < b.size(); ++i) {
        uint64_t& t = a[i];
        t = (t >= b[i]) ? t - b[i] : t + p - b[i];
    }
    trim(a);
    return a;
}

uint64_t eval_mod(const ModPoly& a, uint64_t x, uint64_t p) {
    uint64_t acc = 0;
    for (size_t i = a.size(); i-- > 0;) acc = (mulmod_u64(acc, x, p) + a[i]) % p;
    return acc;
}

// Splits a monic product of distinct linear factors into its roots.
void split_linear(const ModPoly& g, uint64_t p, uint64_t& rng, std::vector<uint64_t>& out) {
    if (g.size() <= 1) return;
    if (g.size() == 2) {
        out.push_back((p - g[0]) % p);
        return;
    }
    for (int attempt = 0; attempt < 128; ++attempt) {
        rng = rng * 6364136223846793005ull + 1442695040888963407ull;
        uint64_t a = rng % p;
        // (x + a)^((p-1)/2) - 1 splits off roots r with (r + a) a QR.
        ModPoly t = powmod_poly(ModPoly{a, 1}, (p - 1) / 2, g, p);
        if (t.empty()) continue;
        t = sub_mod(std::move(t), ModPoly{1}, p);
        ModPoly d = gcd_mod(t, g, p);
        if (d.size() <= 1 || d.size() >= g.size()) continue;
        // quotient g / d by synthetic division (d monic)
        ModPoly q;
        {
            ModPoly num = g;
            ModPoly quot(num.size() - d.size() + 1, 0);
            for (size_t i = quot.size(); i-- > 0;) {
                uint64_t c = num[i + d.size() - 1];
                quot[i] = c;
                if (c)
                    for (size_t j = 0; j < d.size(); ++j) {
                        uint64_t sub = mulmod_u64(c, d[j], p);
                        uint64_t& tt = num[i + j];
                        tt = (tt >= sub) ? tt - sub : tt + p - sub;
                    }
            }
            q = std::move(quot);
        }
        split_linear(d, p, rng, out);
        split_linear(q, p, rng, out);
        return;
    }
    throw std::runtime_error("root splitting failed to converge");
}

}  // namespace

std::vector<uint64_t> poly_roots_mod_p(const IntPoly& f, uint64_t p) {
    ModPoly c = reduce_mod_p(f, p);
    if (c.empty()) {
        // f vanishes identically mod p.
        if (p > (1ull << 22)) throw std::runtime_error("poly_roots_mod_p: zero polynomial mod large p");
        std::vector<uint64_t> all(p);
        for (uint64_t i = 0; i < p; ++i) all[i] = i;
        return all;
    }
    std::vector<uint64_t> roots;
    if (c.size() == 1) return roots;
    if (p < 64) {
        for (uint64_t z = 0; z < p; ++z)
            if (eval_mod(c, z, p) == 0) roots.push_back(z);
        return roots;
    }
    ModPoly m = make_monic(c, p);
    // gcd(x^p - x, m): the product of the distinct linear factors.
    ModPoly xp = powmod_poly(ModPoly{0, 1}, p, m, p);
    ModPoly lin = gcd_mod(sub_mod(std::move(xp), ModPoly{0, 1}, p), m, p);
    if (lin.size() <= 1) return roots;
    if (lin[0] == 0) {
        roots.push_back(0);
        lin.erase(lin.begin());  // divide by x
        trim(lin);
    }
    uint64_t rng = p ^ 0x9e3779b97f4a7c15ull;
    split_linear(lin, p, rng, roots);
    std::sort(roots.begin(), roots.end());
    return roots;
}

namespace {

mpz_class pow_u64(uint64_t p, unsigned k) {
    mpz_class m;
    mpz_ui_pow_ui(m.get_mpz_t(), p, k);
    return m;
}

mpz_class eval_mod_m(const IntPoly& f, const mpz_class& z, const mpz_class& M) {
    mpz_class acc = 0;
    for (size_t i = f.coeffs().size(); i-- > 0;) {
        acc = (acc * z + f.coeffs()[i]) % M;
    }
    if (acc < 0) acc += M;
    return acc;
}

// All residues z mod p^L with f(z) = 0 (mod p^L), restricted to units,
// by exhaustive level-by-level lifting.
std::vector<mpz_class> congruence_unit_roots(const IntPoly& f, uint64_t p, unsigned L,
                                             size_t branch_cap = 200000) {
    std::vector<mpz_class> cur;
    for (uint64_t z : poly_roots_mod_p(f, p))
        if (z % p != 0) cur.emplace_back(z);
    mpz_class M = p;
    for (unsigned j = 1; j < L && !cur.empty(); ++j) {
        mpz_class M_next = M * p;
        std::vector<mpz_class> next;
        for (const auto& z : cur) {
            for (uint64_t t = 0; t < p; ++t) {
                mpz_class cand = z + M * t;
                if (eval_mod_m(f, cand, M_next) == 0) next.push_back(cand);
            }
            if (next.size() > branch_cap)
                throw std::runtime_error("congruence_unit_roots: branch cap exceeded");
        }
        cur = std::move(next);
        M = M_next;
    }
    std::sort(cur.begin(), cur.end());
    return cur;
}

unsigned vp_of(const mpz_class& x, uint64_t p, unsigned cap) {
    if (x == 0) return cap;
    mpz_class t = x;
    unsigned v = 0;
    while (v < cap && mpz_divisible_ui_p(t.get_mpz_t(), p)) {
        t /= static_cast<unsigned long>(p);
        ++v;
    }
    return v;
}

struct GenuineRoot {
    unsigned factor_index;
    unsigned multiplicity;  // exponent of the squarefree factor in h
    unsigned v;             // valuation of g'(zeta) within the factor
    unsigned level;         // residue certified mod p^level, level >= 2v+1
    mpz_class z;            // residue mod p^level
};

constexpr uint64_t kPrecisionCap = 1000000000ull;  // p^k <= 1e9

unsigned max_level(uint64_t p) {
    unsigned k = 0;
    unsigned __int128 acc = 1;
    while (acc * p <= kPrecisionCap) {
        acc *= p;
        ++k;
    }
    return std::max(k, 1u);
}

// Genuine p-adic unit roots of the squarefree factor g, found by exhaustive
// lifting until every branch is dead or Hensel-certified.
std::vector<GenuineRoot> certify_factor_roots(const IntPoly& g, unsigned factor_index,
                                              unsigned multiplicity, uint64_t p) {
    std::vector<GenuineRoot> out;
    IntPoly gp = g.derivative();
    const unsigned cap = max_level(p) + 2;

    struct Branch {
        mpz_class z;
        unsigned level;
    };
    std::vector<Branch> branches;
    for (uint64_t z : poly_roots_mod_p(g, p))
        if (z % p != 0) branches.push_back({mpz_class(z), 1});

    // Dedupe certificates by the residue class that pins the genuine root:
    // z mod p^(level - v), keyed together with that exponent.
    std::map<std::pair<unsigned, mpz_class>, bool> seen;

    mpz_class M = p;
    unsigned level = 1;
    while (!branches.empty()) {
        std::vector<Branch> keep;
        for (auto& br : branches) {
            mpz_class gz = eval_mod_m(g, br.z, M);
            if (gz != 0) continue;  // dead
            mpz_class gpz = eval_mod_m(gp, br.z, M);
            unsigned v = vp_of(gpz, p, level);
            if (v < level && level >= 2 * v + 1) {
                // Hensel: certified genuine root, determined mod p^(level-v).
                std::pair<unsigned, mpz_class> id(level - v, mpz_class(br.z % pow_u64(p, level - v)));
                if (!seen.count(id)) {
                    seen[id] = true;
                    out.push_back({factor_index, multiplicity, v, level, br.z});
                }
                continue;
            }
            keep.push_back(br);
        }
        if (keep.empty()) break;
        if (level + 1 > cap)
            throw std::runtime_error("certify_factor_roots: precision cap exceeded (p^k > 1e9)");
        // expand one level
        mpz_class M_next = M * p;
        std::vector<Branch> next;
        for (auto& br : keep) {
            for (uint64_t t = 0; t < p; ++t) {
                mpz_class cand = br.z + M * t;
                if (eval_mod_m(g, cand, M_next) == 0) next.push_back({cand, level + 1});
            }
        }
        branches = std::move(next);
        M = M_next;
        ++level;
    }
    return out;
}

// Lift a certified genuine root to a residue mod p^target by Newton
// iteration within its squarefree factor. The certificate guarantees
// v_p(g(z)) >= 2v+1 with v = v_p(g'(z)), which places z in the quadratic
// convergence basin of the root.
mpz_class lift_genuine(const IntPoly& g, uint64_t p, const GenuineRoot& root, unsigned target) {
    if (target + root.v <= root.level) return root.z % pow_u64(p, target);
    const unsigned v = root.v;
    mpz_class goal = pow_u64(p, target + v);
    mpz_class W = goal * pow_u64(p, v + 1);  // working modulus
    mpz_class pv = pow_u64(p, v);
    IntPoly gp = g.derivative();

    mpz_class z = root.z % W;
    for (int iter = 0; iter < 200; ++iter) {
        mpz_class u = eval_mod_m(g, z, W);
        if (u % goal == 0) return z % pow_u64(p, target);
        mpz_class w = eval_mod_m(gp, z, W);
        if (!mpz_divisible_p(w.get_mpz_t(), pv.get_mpz_t()))
            throw std::logic_error("lift_genuine: derivative valuation mismatch");
        mpz_class wu = w / pv;
        mpz_class Wv = W / pv;
        mpz_class winv;
        if (mpz_invert(winv.get_mpz_t(), wu.get_mpz_t(), Wv.get_mpz_t()) == 0)
            throw std::logic_error("lift_genuine: derivative unit part not invertible");
        mpz_class step = ((u / pv) * winv) % Wv;
        z = (z - step) % W;
        if (z < 0) z += W;
    }
    throw std::logic_error("lift_genuine: Newton iteration failed to converge");
}

struct FactorSet {
    std::vector<std::pair<IntPoly, unsigned>> factors;
};

FactorSet factor_set(const IntPoly& h) { return {squarefree_decomposition(h)}; }

std::vector<GenuineRoot> genuine_unit_roots(const FactorSet& fs, uint64_t p) {
    std::vector<GenuineRoot> all;
    for (size_t i = 0; i < fs.factors.size(); ++i) {
        auto roots = certify_factor_roots(fs.factors[i].first, static_cast<unsigned>(i),
                                          fs.factors[i].second, p);
        all.insert(all.end(), roots.begin(), roots.end());
    }
    return all;
}

// Multiplicity of z as reported at precision p^k: the number of times
// (x - z) divides h in (Z/p^k)[x].
unsigned division_multiplicity(const IntPoly& h, const mpz_class& z, const mpz_class& M,
                               unsigned degree_cap) {
    std::vector<mpz_class> c;
    c.reserve(h.coeffs().size());
    for (const auto& a : h.coeffs()) {
        mpz_class r = a % M;
        if (r < 0) r += M;
        c.push_back(r);
    }
    unsigned mult = 0;
    while (mult < degree_cap) {
        // synthetic division by (x - z): remainder is the evaluation
        std::vector<mpz_class> q(c.size() > 1 ? c.size() - 1 : 0);
        mpz_class acc = 0;
        for (size_t i = c.size(); i-- > 0;) {
            acc = (acc * z + c[i]) % M;
            if (i > 0) q[i - 1] = acc;
        }
        if (acc % M != 0) break;
        ++mult;
        c = std::move(q);
        if (c.empty()) break;
        bool all_zero = true;
        for (const auto& a : c)
            if (a % M != 0) { all_zero = false; break; }
        if (all_zero) { mult = degree_cap; break; }
    }
    return mult;
}

PadicRootCert make_cert(const FactorSet& fs, const GenuineRoot& r, uint64_t p, unsigned k,
                        const IntPoly& h) {
    PadicRootCert cert;
    cert.p = p;
    cert.k = k;
    cert.z = lift_genuine(fs.factors[r.factor_index].first, p, r, k);
    cert.unit = true;
    cert.hensel = true;
    cert.vp_deriv = r.v;
    cert.factor_index = r.factor_index;
    cert.multiplicity = r.multiplicity;
    (void)h;
    return cert;
}

}  // namespace

std::vector<PadicRootCert> padic_unit_roots(const IntPoly& h, uint64_t p, unsigned k) {
    if (k < 1) throw std::domain_error("padic_unit_roots: k must be >= 1");
    FactorSet fs = factor_set(h);
    std::vector<GenuineRoot> roots = genuine_unit_roots(fs, p);
    mpz_class M = pow_u64(p, k);
    std::map<mpz_class, PadicRootCert> by_residue;
    for (const auto& r : roots) {
        PadicRootCert cert = make_cert(fs, r, p, k, h);
        auto it = by_residue.find(cert.z);
        if (it == by_residue.end()) {
            cert.multiplicity = division_multiplicity(h, cert.z, M,
                                                      static_cast<unsigned>(h.degree()));
            by_residue.emplace(cert.z, cert);
        }
    }
    std::vector<PadicRootCert> out;
    out.reserve(by_residue.size());
    for (auto& [z, cert] : by_residue) out.push_back(cert);
    return out;
}

namespace {

// Canonical z_p among genuine roots: minimal multiplicity, then smallest
// residue at the comparison precision k = max(floor, 2v+1), raised further
// if needed to separate the candidates. The floor is 3, capped so that
// p^k <= 1e9.
constexpr unsigned kComparisonFloor = 3;

PadicRootCert choose_zp_impl(const FactorSet& fs, const IntPoly& h, uint64_t p,
                             const std::vector<GenuineRoot>* precomputed = nullptr) {
    std::vector<GenuineRoot> roots = precomputed ? *precomputed : genuine_unit_roots(fs, p);
    if (roots.empty()) throw std::domain_error("choose_zp: no p-adic unit root");
    unsigned min_mult = roots[0].multiplicity;
    for (const auto& r : roots) min_mult = std::min(min_mult, r.multiplicity);
    std::vector<GenuineRoot> cands;
    for (const auto& r : roots)
        if (r.multiplicity == min_mult) cands.push_back(r);

    unsigned k = std::min(kComparisonFloor, max_level(p));
    for (const auto& r : cands) k = std::max(k, 2 * r.v + 1);
    const unsigned cap = max_level(p) + 2;
    while (true) {
        std::vector<mpz_class> lifted(cands.size());
        for (size_t i = 0; i < cands.size(); ++i)
            lifted[i] = lift_genuine(fs.factors[cands[i].factor_index].first, p, cands[i], k);
        bool distinct = true;
        for (size_t i = 0; i < lifted.size() && distinct; ++i)
            for (size_t j = i + 1; j < lifted.size(); ++j)
                if (lifted[i] == lifted[j]) { distinct = false; break; }
        if (distinct || cands.size() <= 1) {
            size_t best = 0;
            for (size_t i = 1; i < lifted.size(); ++i)
                if (lifted[i] < lifted[best]) best = i;
            PadicRootCert cert = make_cert(fs, cands[best], p, k, h);
            return cert;
        }
        if (k + 1 > cap) throw std::runtime_error("choose_zp: precision cap exceeded separating roots");
        ++k;
    }
}

}  // namespace

PadicRootCert choose_zp(const IntPoly& h, uint64_t p) {
    FactorSet fs = factor_set(h);
    return choose_zp_impl(fs, h, p);
}

mpz_class lift_root(const IntPoly& h, const PadicRootCert& cert, unsigned k) {
    FactorSet fs = factor_set(h);
    if (cert.factor_index >= fs.factors.size())
        throw std::invalid_argument("lift_root: certificate does not match polynomial");
    GenuineRoot r{cert.factor_index, cert.multiplicity, cert.vp_deriv, cert.k, cert.z};
    return lift_genuine(fs.factors[cert.factor_index].first, cert.p, r, k);
}

namespace {

// Smallest level j (if any) at which h has no unit root mod p^j; searches up
// to the precision cap.
std::optional<unsigned> death_level(const IntPoly& h, uint64_t p) {
    const unsigned cap = max_level(p) + 2;
    for (unsigned j = 1; j <= cap; ++j) {
        if (congruence_unit_roots(h, p, j).empty()) return j;
    }
    return std::nullopt;
}

}  // namespace

IntersectivityVerdict is_intersective_second_kind(const IntPoly& h, uint64_t prime_bound) {
    IntersectivityVerdict v;
    if (h.is_zero()) {
        v.status = IntersectivityVerdict::Status::CertifiedYes;
        v.trivial_root = 0;
        return v;
    }
    if (h(mpz_class(1)) == 0) {
        v.status = IntersectivityVerdict::Status::CertifiedYes;
        v.trivial_root = 1;
        return v;
    }
    if (h(mpz_class(-1)) == 0) {
        v.status = IntersectivityVerdict::Status::CertifiedYes;
        v.trivial_root = -1;
        return v;
    }
    if (prime_bound < 2) throw std::domain_error("is_intersective_second_kind: bound must be >= 2");

    FactorSet fs = factor_set(h);
    PrimeTable pt = sieve_primes(prime_bound);

    mpz_class best_witness = 0;
    std::vector<PadicRootCert> certs;
    for (uint64_t p : pt.primes) {
        if (best_witness != 0 && mpz_class(static_cast<unsigned long>(p)) > best_witness) break;
        std::vector<GenuineRoot> roots = genuine_unit_roots(fs, p);
        if (!roots.empty()) {
            certs.push_back(choose_zp_impl(fs, h, p, &roots));
            continue;
        }
        std::optional<unsigned> dl = death_level(h, p);
        if (!dl)
            throw std::runtime_error("is_intersective_second_kind: undecided prime at precision cap");
        mpz_class w = pow_u64(p, *dl);
        if (best_witness == 0 || w < best_witness) best_witness = w;
    }
    if (best_witness != 0) {
        v.status = IntersectivityVerdict::Status::No;
        v.witness = best_witness;
        // Exhaustive soundness scan over units mod the witness.
        if (best_witness <= 1000000) {
            bool found = false;
            unsigned long n = best_witness.get_ui();
            for (unsigned long t = 1; t < n && !found; ++t) {
                if (std::gcd(t, n) != 1) continue;
                if (mpz_fdiv_ui(h(mpz_class(t)).get_mpz_t(), n) == 0) found = true;
            }
            if (found) throw std::logic_error("witness failed exhaustive verification");
            v.witness_verified = true;
        }
        // Smallest modulus where roots exist but none is coprime.
        uint64_t cap = 2000;
        if (best_witness.fits_ulong_p()) cap = std::max<uint64_t>(cap, 3 * best_witness.get_ui());
        for (uint64_t n = 2; n <= cap; ++n) {
            bool any_root = false, unit_root = false;
            for (uint64_t t = 0; t < n; ++t) {
                if (mpz_fdiv_ui(h(mpz_class(static_cast<unsigned long>(t))).get_mpz_t(), n) != 0)
                    continue;
                any_root = true;
                if (std::gcd(t, n) == 1) {
                    unit_root = true;
                    break;
                }
            }
            if (any_root && !unit_root) {
                v.strict_second_kind_witness = static_cast<unsigned long>(n);
                break;
            }
        }
        return v;
    }
    v.status = IntersectivityVerdict::Status::YesUpToBound;
    v.bound = prime_bound;
    v.certificates = std::move(certs);
    return v;
}

mpz_class lambda_of(const IntPoly& h, const mpz_class& D) {
    if (D <= 0) throw std::domain_error("lambda_of: D must be positive");
    mpz_class lam = 1;
    FactorSet fs = factor_set(h);
    for (const auto& [p, e] : factorize(D)) {
        if (!p.fits_ulong_p()) throw std::overflow_error("lambda_of: prime factor too large");
        PadicRootCert cert = choose_zp_impl(fs, h, p.get_ui());
        mpz_class pe;
        mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), cert.multiplicity * e);
        lam *= pe;
    }
    return lam;
}

mpz_class compute_rD(const IntPoly& h, const mpz_class& D) {
    if (D <= 0) throw std::domain_error("compute_rD: D must be positive");
    if (D == 1) return 0;
    FactorSet fs = factor_set(h);
    std::vector<mpz_class> residues, moduli;
    for (const auto& [p, e] : factorize(D)) {
        if (!p.fits_ulong_p()) throw std::overflow_error("compute_rD: prime factor too large");
        uint64_t pu = p.get_ui();
        PadicRootCert cert = choose_zp_impl(fs, h, pu);
        GenuineRoot r{cert.factor_index, cert.multiplicity, cert.vp_deriv, cert.k, cert.z};
        residues.push_back(lift_genuine(fs.factors[cert.factor_index].first, pu, r, e));
        moduli.push_back(pow_u64(pu, e));
    }
    mpz_class r = crt_solve(residues, moduli);
    // normalize into (-D, 0]
    r %= D;
    if (r > 0) r -= D;
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), r.get_mpz_t(), D.get_mpz_t());
    if (g != 1) throw std::logic_error("compute_rD: r_D not coprime to D");
    return r;
}

AuxPolyData aux_poly(const IntPoly& h, const mpz_class& D) {
    AuxPolyData a;
    a.D = D;
    a.lambda = lambda_of(h, D);
    a.r_D = compute_rD(h, D);
    IntPoly shifted = taylor_shift(h, a.r_D, D);
    try {
        a.h_D = shifted.divide_exact(a.lambda);
    } catch (const std::domain_error&) {
        throw std::runtime_error("aux_poly: h(r_D + Dx) not divisible by lambda(D)");
    }
    return a;
}

ContentScan content_bound_scan(const IntPoly& h, uint64_t Dmax) {
    ContentScan scan;
    scan.max_content = 0;
    // Cache canonical roots per prime across the D loop.
    FactorSet fs = factor_set(h);
    std::map<uint64_t, PadicRootCert> zp_cache;
    auto zp = [&](uint64_t p) -> const PadicRootCert& {
        auto it = zp_cache.find(p);
        if (it == zp_cache.end()) it = zp_cache.emplace(p, choose_zp_impl(fs, h, p)).first;
        return it->second;
    };
    for (uint64_t D = 1; D <= Dmax; ++D) {
        mpz_class lam = 1, rD = 0;
        std::vector<mpz_class> residues, moduli;
        for (const auto& [p, e] : factorize_u64(D)) {
            const PadicRootCert& cert = zp(p);
            mpz_class pe;
            mpz_ui_pow_ui(pe.get_mpz_t(), p, cert.multiplicity * e);
            lam *= pe;
            GenuineRoot r{cert.factor_index, cert.multiplicity, cert.vp_deriv, cert.k, cert.z};
            residues.push_back(lift_genuine(fs.factors[cert.factor_index].first, p, r, e));
            moduli.push_back(pow_u64(p, e));
        }
        if (D > 1) {
            rD = crt_solve(residues, moduli) % mpz_class(static_cast<unsigned long>(D));
            if (rD > 0) rD -= static_cast<unsigned long>(D);
        }
        IntPoly hD = taylor_shift(h, rD, mpz_class(static_cast<unsigned long>(D))).divide_exact(lam);
        mpz_class c = content_nonconstant(hD);
        scan.content[D] = c;
        if (c > scan.max_content) scan.max_content = c;
    }
    return scan;
}

std::optional<mpz_class> obstruction_witness(const std::vector<mpz_class>& a, const mpz_class& b,
                                             const IntPoly& h, uint64_t bound) {
    mpz_class suma = 0;
    for (const auto& ai : a) suma += ai;
    IntPoly F = h * suma - IntPoly::constant(b);
    if (F.is_zero()) return std::nullopt;
    for (uint64_t n = 2; n <= bound; ++n) {
        bool has_root = false;
        for (uint64_t t = 1; t < n && !has_root; ++t) {
            if (std::gcd(t, n) != 1) continue;
            if (mpz_fdiv_ui(F(mpz_class(static_cast<unsigned long>(t))).get_mpz_t(), n) == 0)
                has_root = true;
        }
        if (!has_root) return mpz_class(static_cast<unsigned long>(n));
    }
    return std::nullopt;
}

}  // namespace prt
