#include "prt/expsums.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace prt {

cplx unit_phase(double frac) {
    double ang = 2.0 * M_PI * frac;
    return {std::cos(ang), std::sin(ang)};
}

double frac_scaled(double theta, const mpz_class& n, const mpz_class& den) {
    if (den <= 0) throw std::domain_error("frac_scaled: denominator must be positive");
    if (theta == 0.0 || n == 0) return 0.0;
    // theta = t * 2^e2 exactly, t odd-ish 53-bit integer
    int e2 = 0;
    double mant = std::frexp(theta, &e2);  // theta = mant * 2^e2, |mant| in [0.5,1)
    long long t = std::llround(std::ldexp(mant, 53));
    e2 -= 53;
    // value = t * n * 2^e2 / den; fractional part computed exactly
    mpz_class num = mpz_class(static_cast<long>(t)) * n;
    mpz_class D = den;
    if (e2 >= 0) {
        mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), e2);
    } else {
        mpz_mul_2exp(D.get_mpz_t(), D.get_mpz_t(), -e2);
    }
    mpz_class r = num % D;
    if (r < 0) r += D;
    // r / D in [0,1): top bits suffice for a double
    mpf_class fr(0, 96);
    fr = mpf_class(r, 96) / mpf_class(D, 96);
    return fr.get_d();
}

double ArcParams::Cd() const { return std::ldexp(sigma, 8 * static_cast<int>(d)); }

double ArcParams::log_power_threshold() const {
    double lg = std::log(X);
    double v = std::pow(lg, 2.0 * Cd());
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

ArcParams ArcParams::make(unsigned d, double X) {
    ArcParams p;
    p.d = d;
    p.X = X;
    p.sigma = 2.0 * d + 10.0;
    return p;
}

ArcParams ArcParams::with_sigma(unsigned d, double X, double sigma) {
    ArcParams p;
    p.d = d;
    p.X = X;
    p.sigma = sigma;
    return p;
}

ArcClassification classify_arc(double alpha, const ArcParams& params) {
    if (params.X < 16) throw std::domain_error("classify_arc: X must be >= 16");
    const double T = params.log_power_threshold();
    const double Xd = std::pow(params.X, static_cast<double>(params.d));
    ArcClassification res;

    // The minimal admissible q is a convergent denominator: walk convergents
    // in increasing q and test Eq-(5.2)-style admissibility.
    long double x = alpha;
    long double frac = x - std::floor(x);
    mpz_class p_prev = 1, q_prev = 0;
    mpz_class p_cur(static_cast<long>(std::floor(x))), q_cur = 1;
    for (int iter = 0; iter < 64; ++iter) {
        if (!q_cur.fits_ulong_p()) break;
        double qd = q_cur.get_d();
        if (qd > T) break;
        long double err = std::fabs(q_cur.get_d() * x - p_cur.get_d());
        if (static_cast<double>(err) * Xd <= T) {
            res.major = true;
            res.q = q_cur.get_ui();
            res.a = p_cur;
            return res;
        }
        if (frac < 1e-18L) break;
        long double inv = 1.0L / frac;
        long double ai = std::floor(inv);
        if (ai > 1e18L) break;
        mpz_class a(static_cast<long>(ai));
        mpz_class p_next = a * p_cur + p_prev;
        mpz_class q_next = a * q_cur + q_prev;
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p_next;
        q_cur = q_next;
        frac = inv - ai;
    }
    res.major = false;
    return res;
}

namespace {

void check_divisibility_4_3(const IntPoly& f, const mpz_class& Q, const mpz_class& m,
                            const mpz_class& b) {
    // (f(b+mx) - f(b))/Q must be an integer polynomial
    IntPoly shifted = taylor_shift(f, b, m) - IntPoly::constant(f(b));
    try {
        (void)shifted.divide_exact(Q);
    } catch (const std::domain_error&) {
        throw std::invalid_argument("complete sum spec: (f(b+mx)-f(b))/Q is not integral");
    }
}

}  // namespace

cplx complete_sum(const CompleteSumSpec& spec) {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), spec.a.get_mpz_t(), mpz_class(static_cast<unsigned long>(spec.q)).get_mpz_t());
    if (g != 1) throw std::invalid_argument("complete sum spec: gcd(a,q) != 1");
    mpz_class gb;
    mpz_gcd(gb.get_mpz_t(), spec.b.get_mpz_t(), spec.m.get_mpz_t());
    if (gb != 1) throw std::invalid_argument("complete sum spec: gcd(b,m) != 1");
    check_divisibility_4_3(spec.f, spec.Q, spec.m, spec.b);

    mpz_class mq = spec.m * spec.q;
    if (!mq.fits_ulong_p()) throw std::overflow_error("complete_sum: mq too large");
    unsigned long MQ = mq.get_ui();
    mpz_class Qq = spec.Q * spec.q;

    cplx acc{0.0, 0.0};
    mpz_class bm = spec.b % spec.m;
    if (bm < 0) bm += spec.m;
    for (unsigned long t = 0; t < MQ; ++t) {
        mpz_class T(t);
        if ((T - bm) % spec.m != 0) continue;
        mpz_class gq;
        mpz_gcd_ui(gq.get_mpz_t(), T.get_mpz_t(), spec.q);
        if (gq != 1) continue;
        mpz_class ph = (spec.a * spec.f(T)) % Qq;
        if (ph < 0) ph += Qq;
        acc += unit_phase(mpz_get_d(ph.get_mpz_t()) / mpz_get_d(Qq.get_mpz_t()));
    }
    return acc;
}

cplx restricted_complete_sum(const IntPoly& g, const mpz_class& W, const mpz_class& b, uint64_t q,
                             const mpz_class& a) {
    cplx acc{0.0, 0.0};
    if (q < (1ull << 31)) {
        // uint64 fast path: everything reduces mod q
        std::vector<uint64_t> c(g.coeffs().size());
        for (size_t i = 0; i < c.size(); ++i) c[i] = mpz_fdiv_ui(g.coeffs()[i].get_mpz_t(), q);
        uint64_t Wq = mpz_fdiv_ui(W.get_mpz_t(), q);
        uint64_t bq = mpz_fdiv_ui(b.get_mpz_t(), q);
        uint64_t aq = mpz_fdiv_ui(a.get_mpz_t(), q);
        for (uint64_t l = 0; l < q; ++l) {
            uint64_t t = (mulmod_u64(Wq, l, q) + bq) % q;
            if (std::gcd(t, q) != 1) continue;
            uint64_t val = 0;
            for (size_t i = c.size(); i-- > 0;) val = (mulmod_u64(val, l, q) + c[i]) % q;
            uint64_t ph = mulmod_u64(aq, val, q);
            acc += unit_phase(static_cast<double>(ph) / static_cast<double>(q));
        }
        return acc;
    }
    mpz_class Q(static_cast<unsigned long>(q));
    for (uint64_t l = 0; l < q; ++l) {
        mpz_class t = W * static_cast<unsigned long>(l) + b;
        mpz_class gg;
        mpz_gcd(gg.get_mpz_t(), t.get_mpz_t(), Q.get_mpz_t());
        if (gg != 1) continue;
        mpz_class ph = (a * g(mpz_class(static_cast<unsigned long>(l)))) % Q;
        if (ph < 0) ph += Q;
        acc += unit_phase(mpz_get_d(ph.get_mpz_t()) / static_cast<double>(q));
    }
    return acc;
}

double verify_rice_bound(const IntPoly& h, uint64_t qmax, unsigned trials_per_q, uint64_t seed) {
    if (h.degree() < 2) throw std::domain_error("verify_rice_bound: deg h >= 2 required");
    const unsigned k = static_cast<unsigned>(h.degree());
    const mpz_class cont = content_nonconstant(h);
    const mpz_class lead = h.leading();
    uint64_t rng = seed ^ 0xd1b54a32d192ed03ull;
    auto next = [&rng]() {
        rng = rng * 6364136223846793005ull + 1442695040888963407ull;
        return rng >> 16;
    };
    double worst = 1.0;
    for (uint64_t q = 2; q <= qmax; ++q) {
        for (unsigned trial = 0; trial < trials_per_q; ++trial) {
            uint64_t a = 1 + next() % (q - 1);
            while (std::gcd(a, q) != 1) a = 1 + next() % (q - 1);
            uint64_t W = 1 + next() % 30;
            uint64_t b = next() % (30 * W + 1);
            cplx s = restricted_complete_sum(h, mpz_class(static_cast<unsigned long>(W)),
                                             mpz_class(static_cast<unsigned long>(b)), q,
                                             mpz_class(static_cast<unsigned long>(a)));
            // q = q1 q2 with q2 the greatest divisor of q coprime to W
            uint64_t q2 = 1;
            for (auto [pf, e] : factorize_u64(q)) {
                if (W % pf != 0) {
                    uint64_t pe = 1;
                    for (unsigned i = 0; i < e; ++i) pe *= pf;
                    q2 *= pe;
                }
            }
            uint64_t q1 = q / q2;
            mpz_class g1, g2;
            mpz_gcd_ui(g1.get_mpz_t(), cont.get_mpz_t(), q1);
            mpz_gcd_ui(g2.get_mpz_t(), lead.get_mpz_t(), q2);
            double base = std::pow(g1.get_d() * g2.get_d(), 1.0 / k) *
                          std::pow(static_cast<double>(q), 1.0 - 1.0 / k);
            double ratio = std::abs(s) / base;
            if (ratio > 1.0) {
                double c_needed = std::pow(ratio, 1.0 / omega_u64(q));
                if (c_needed > worst) worst = c_needed;
            }
        }
    }
    if (!std::isfinite(worst)) throw std::runtime_error("verify_rice_bound: non-finite constant");
    return worst;
}

cplx prime_weyl_sum(const WeylSpec& spec, const PrimeTable& primes) {
    if (primes.limit < spec.P) throw std::domain_error("prime_weyl_sum: sieve does not reach P");
    mpz_class gb;
    mpz_gcd(gb.get_mpz_t(), spec.b.get_mpz_t(), spec.m.get_mpz_t());
    if (gb != 1) throw std::invalid_argument("prime_weyl_sum: gcd(b,m) != 1");
    mpz_class fb = spec.subtract_fb ? spec.h(spec.b) : mpz_class(0);
    mpz_class bm = spec.b % spec.m;
    if (bm < 0) bm += spec.m;
    IntPoly deriv = spec.h.derivative();

    cplx acc{0.0, 0.0};
    for (uint64_t p : primes.primes) {
        if (p > spec.P) break;
        mpz_class P(static_cast<unsigned long>(p));
        if (spec.subtract_fb && P <= spec.b) continue;
        if ((P - bm) % spec.m != 0) continue;
        mpz_class delta = spec.h(P) - fb;
        double fr = frac_scaled(spec.theta, delta, spec.lambda);
        double g = 1.0;
        switch (spec.weight) {
            case WeylWeight::Unit: g = 1.0; break;
            case WeylWeight::Log: g = std::log(static_cast<double>(p)); break;
            case WeylWeight::Deriv: g = deriv.eval_double(static_cast<double>(p)); break;
            case WeylWeight::DerivLog:
                g = deriv.eval_double(static_cast<double>(p)) * std::log(static_cast<double>(p));
                break;
        }
        acc += g * unit_phase(fr);
    }
    return acc;
}

namespace {

cplx composite_simpson(const IntPoly& f, const IntPoly* G, double Qd, double beta, double lo,
                       double hi, size_t n) {
    // n even panel count
    auto integrand = [&](double t) -> cplx {
        double ph = beta * f.eval_double(t) / Qd;
        double g = G ? G->eval_double(t) : 1.0;
        return g * unit_phase(ph - std::floor(ph));
    };
    double hstep = (hi - lo) / static_cast<double>(n);
    cplx acc = integrand(lo) + integrand(hi);
    for (size_t i = 1; i < n; ++i)
        acc += integrand(lo + hstep * static_cast<double>(i)) * ((i & 1) ? 4.0 : 2.0);
    return acc * (hstep / 3.0);
}

}  // namespace

cplx oscillatory_integral(const IntPoly& f, const IntPoly* G, const mpz_class& Q, double beta,
                          double P) {
    if (P < 2.0) throw std::domain_error("oscillatory_integral: P must be >= 2");
    if (P == 2.0) return {0.0, 0.0};
    double Qd = mpz_get_d(Q.get_mpz_t());
    // Step bound from the phase derivative |beta f'(t)/Q| on [2, P].
    IntPoly fp = f.derivative();
    double maxder = 0.0;
    for (int i = 0; i <= 64; ++i) {
        double t = 2.0 + (P - 2.0) * static_cast<double>(i) / 64.0;
        maxder = std::max(maxder, std::fabs(beta * fp.eval_double(t) / Qd));
    }
    size_t n = 128;
    double want = 8.0 * maxder * (P - 2.0);
    if (std::isfinite(want) && want > static_cast<double>(n))
        n = static_cast<size_t>(std::min(want, 3e7));
    n += n & 1;  // even
    cplx prev = composite_simpson(f, G, Qd, beta, 2.0, P, n);
    for (int round = 0; round < 8 && n < 60000000; ++round) {
        n *= 2;
        cplx cur = composite_simpson(f, G, Qd, beta, 2.0, P, n);
        double scale = std::max(std::abs(cur), 1e-12);
        if (std::abs(cur - prev) <= 1e-6 * scale) return cur;
        prev = cur;
    }
    return prev;
}

cplx major_arc_prediction(const WeylSpec& spec, uint64_t q, const mpz_class& a) {
    if (spec.weight != WeylWeight::Log && spec.weight != WeylWeight::DerivLog)
        throw std::invalid_argument("major_arc_prediction: weight must include the log factor");
    // f = h - h(b) (or h itself), G = 1 or h'
    IntPoly f = spec.h;
    if (spec.subtract_fb) f = f - IntPoly::constant(spec.h(spec.b));
    IntPoly deriv = spec.h.derivative();
    const IntPoly* G = (spec.weight == WeylWeight::DerivLog) ? &deriv : nullptr;

    double beta = spec.theta - mpz_get_d(a.get_mpz_t()) / static_cast<double>(q);
    cplx I = oscillatory_integral(f, G, spec.lambda, beta, static_cast<double>(spec.P));

    CompleteSumSpec cs;
    cs.f = f;
    cs.Q = spec.lambda;
    cs.q = q;
    cs.a = a;
    cs.m = spec.m;
    cs.b = spec.b;
    cplx S = complete_sum(cs);

    mpz_class mq = spec.m * static_cast<unsigned long>(q);
    double phi = mpz_get_d(euler_phi(mq).get_mpz_t());
    return I * S / phi;
}

}  // namespace prt
