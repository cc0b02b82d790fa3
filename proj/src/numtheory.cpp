#include "prt/numtheory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace prt {

bool PrimeTable::contains(uint64_t n) const {
    return std::binary_search(primes.begin(), primes.end(), n);
}

size_t PrimeTable::count_leq(uint64_t n) const {
    return std::upper_bound(primes.begin(), primes.end(), n) - primes.begin();
}

PrimeTable sieve_primes(uint64_t limit) {
    if (limit < 2) throw std::domain_error("sieve_primes: limit must be >= 2");
    std::vector<bool> composite(limit + 1, false);
    PrimeTable t;
    t.limit = limit;
    for (uint64_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        t.primes.push_back(i);
        for (uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return t;
}

mpz_class crt_solve(const std::vector<mpz_class>& residues, const std::vector<mpz_class>& moduli) {
    if (residues.size() != moduli.size())
        throw std::invalid_argument("crt_solve: residue/modulus count mismatch");
    mpz_class r = 0, m = 1;
    for (size_t i = 0; i < moduli.size(); ++i) {
        const mpz_class& mi = moduli[i];
        if (mi <= 0) throw std::invalid_argument("crt_solve: moduli must be positive");
        mpz_class ri = residues[i] % mi;
        if (ri < 0) ri += mi;
        // Merge x = r (mod m) with x = ri (mod mi).
        mpz_class g, s, t;
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), m.get_mpz_t(), mi.get_mpz_t());
        mpz_class diff = ri - r;
        if (diff % g != 0) throw std::domain_error("crt_solve: inconsistent congruences");
        mpz_class lcm = m / g * mi;
        mpz_class step = (diff / g * s) % (mi / g);
        r = (r + m * step) % lcm;
        if (r < 0) r += lcm;
        m = lcm;
    }
    return r;
}

Rational cf_approx(double theta, uint64_t qmax) {
    if (qmax < 1) throw std::domain_error("cf_approx: qmax must be >= 1");
    // Convergents via continued fraction of theta in extended precision.
    long double x = theta;
    mpz_class p_prev = 1, q_prev = 0;  // p_{-1}/q_{-1}
    mpz_class p_cur, q_cur;            // p_0/q_0 after first step
    long double frac = x;
    mpz_class best_a, best_q = 1;
    {
        long double a0 = std::floor(x);
        p_cur = mpz_class(static_cast<long>(a0));
        q_cur = 1;
        best_a = p_cur;
        frac = x - a0;
    }
    long double best_err = std::fabs(static_cast<long double>(best_q.get_d()) * x -
                                     static_cast<long double>(best_a.get_d()));
    const mpz_class qcap(static_cast<unsigned long>(qmax));
    for (int iter = 0; iter < 64; ++iter) {
        if (frac < 1e-18L) break;
        long double inv = 1.0L / frac;
        long double ai = std::floor(inv);
        if (ai > 1e18L) break;
        mpz_class a(static_cast<long>(ai));
        mpz_class p_next = a * p_cur + p_prev;
        mpz_class q_next = a * q_cur + q_prev;
        if (q_next > qcap) break;
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p_next;
        q_cur = q_next;
        long double err = std::fabs(q_cur.get_d() * x - p_cur.get_d());
        if (err < best_err) {
            best_err = err;
            best_a = p_cur;
            best_q = q_cur;
        }
        frac = inv - ai;
    }
    Rational r;
    r.num = best_a;
    r.den = best_q;
    return r;
}

namespace {

double simpson(double fa, double fm, double fb, double h) { return h / 6.0 * (fa + 4.0 * fm + fb); }

double adaptive_simpson(double (*f)(double), double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson(fa, flm, fm, m - a);
    double right = simpson(fm, frm, fb, b - m);
    double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double inv_log(double t) { return 1.0 / std::log(t); }

}  // namespace

double li(double x) {
    if (x < 2.0) throw std::domain_error("li: x must be >= 2");
    if (x == 2.0) return 0.0;
    // Scale the absolute tolerance by a crude magnitude estimate to achieve
    // relative accuracy 1e-8.
    double rough = (x - 2.0) / std::log(0.5 * (x + 2.0));
    double tol = 1e-8 * std::max(rough, 1.0);
    double fa = inv_log(2.0), fb = inv_log(x), fm = inv_log(0.5 * (2.0 + x));
    double whole = simpson(fa, fm, fb, x - 2.0);
    return adaptive_simpson(&inv_log, 2.0, x, fa, fm, fb, whole, tol, 60);
}

mpz_class gcd_dth_power_part(const mpz_class& H, const mpz_class& W, unsigned d) {
    if (d < 1) throw std::domain_error("gcd_dth_power_part: d must be >= 1");
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), H.get_mpz_t(), W.get_mpz_t());
    if (g == 0) return 1;
    if (d == 1) return g;
    mpz_class m = 1;
    for (const auto& [p, e] : factorize(g)) {
        unsigned k = e / d;
        if (k == 0) continue;
        mpz_class pk;
        mpz_pow_ui(pk.get_mpz_t(), p.get_mpz_t(), k);
        m *= pk;
    }
    return m;
}

uint64_t comparability_threshold(const IntPoly& P, double eta) {
    if (P.degree() < 1 || P.leading() <= 0)
        throw std::domain_error("comparability_threshold: need deg >= 1 and positive leading coefficient");
    if (!(eta > 0.0 && eta < 1.0)) throw std::domain_error("comparability_threshold: eta in (0,1)");
    const int d = P.degree();
    const double etad = std::pow(eta, d);
    auto grid_ok = [&](uint64_t M0) {
        double x = static_cast<double>(M0) / eta;
        for (int j = 0; j <= 1000; ++j) {
            double px = P.eval_double(x);
            double pex = P.eval_double(eta * x);
            if (!std::isfinite(px) || !std::isfinite(pex)) break;
            if (!(etad * px <= 3.0 * pex && 3.0 * pex <= 9.0 * etad * px)) return false;
            x *= 1.01;
        }
        return true;
    };
    for (uint64_t M0 = 1;; ++M0) {
        if (grid_ok(M0)) return M0;
        if (M0 > (1ull << 40)) throw std::runtime_error("comparability_threshold: scan exceeded bound");
    }
}

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

uint64_t powmod_u64(uint64_t base, uint64_t exp, uint64_t m) {
    if (m == 1) return 0;
    uint64_t r = 1;
    base %= m;
    while (exp) {
        if (exp & 1) r = mulmod_u64(r, base, m);
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    return r;
}

std::vector<std::pair<mpz_class, unsigned>> factorize(mpz_class n) {
    if (n < 0) n = -n;
    std::vector<std::pair<mpz_class, unsigned>> fs;
    if (n <= 1) return fs;
    for (mpz_class p = 2; p * p <= n && p < 2000000; p += (p == 2 ? 1 : 2)) {
        if (n % p != 0) continue;
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        fs.emplace_back(p, e);
    }
    if (n > 1) {
        // Remaining cofactor: either prime or a perfect power of a prime
        // (desk-scale inputs are smooth, so this is a backstop).
        unsigned long k = 1;
        mpz_class root = n;
        for (unsigned long e = 2; e <= 64; ++e) {
            mpz_class r;
            if (mpz_root(r.get_mpz_t(), n.get_mpz_t(), e) != 0) {
                root = r;
                k = e;
            }
        }
        if (mpz_probab_prime_p(root.get_mpz_t(), 30) == 0)
            throw std::runtime_error("factorize: cofactor not a prime power at desk scale");
        fs.emplace_back(root, static_cast<unsigned>(k));
    }
    std::sort(fs.begin(), fs.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return fs;
}

std::vector<std::pair<uint64_t, unsigned>> factorize_u64(uint64_t n) {
    std::vector<std::pair<uint64_t, unsigned>> fs;
    for (uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p) continue;
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        fs.emplace_back(p, e);
    }
    if (n > 1) fs.emplace_back(n, 1);
    return fs;
}

mpz_class euler_phi(const mpz_class& n) {
    if (n <= 0) throw std::domain_error("euler_phi: n must be positive");
    mpz_class phi = 1;
    for (const auto& [p, e] : factorize(n)) {
        mpz_class pe;
        mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e - 1);
        phi *= pe * (p - 1);
    }
    return phi;
}

unsigned omega_u64(uint64_t n) { return static_cast<unsigned>(factorize_u64(n).size()); }

}  // namespace prt
