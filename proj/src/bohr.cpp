#include "prt/bohr.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace prt {

BohrSpec make_bohr_spec(const IntPoly& h, const mpz_class& D, std::vector<double> alpha, double rho,
                        uint64_t P) {
    BohrSpec s;
    s.h = h;
    s.D = D;
    if (D == 1) {
        s.lambda = 1;
        s.r_D = 0;
    } else {
        AuxPolyData aux = aux_poly(h, D);
        s.lambda = aux.lambda;
        s.r_D = aux.r_D;
    }
    s.alpha = std::move(alpha);
    s.rho = rho;
    s.P = P;
    return s;
}

namespace {

double dist_to_int(double frac) { return std::min(frac, 1.0 - frac); }

// Collects the eligible primes (p <= P, p = r_D mod D) with their exact
// scaled values n_p = h(p)/lambda.
struct EligiblePrime {
    uint64_t p;
    mpz_class n;  // h(p)/lambda, exact
};

std::vector<EligiblePrime> eligible_primes(const BohrSpec& spec, const PrimeTable& primes) {
    if (primes.limit < spec.P) throw std::domain_error("bohr: sieve does not reach P");
    std::vector<EligiblePrime> out;
    mpz_class rmod = spec.r_D % spec.D;
    if (rmod < 0) rmod += spec.D;
    for (uint64_t p : primes.primes) {
        if (p > spec.P) break;
        mpz_class pp(static_cast<unsigned long>(p));
        if ((pp - rmod) % spec.D != 0) continue;
        mpz_class val = spec.h(pp);
        mpz_class n, rem;
        mpz_tdiv_qr(n.get_mpz_t(), rem.get_mpz_t(), val.get_mpz_t(), spec.lambda.get_mpz_t());
        if (rem != 0) throw std::runtime_error("bohr: lambda does not divide h(p) on the progression");
        out.push_back({p, n});
    }
    return out;
}

bool is_member(const BohrSpec& spec, const mpz_class& n) {
    for (double a : spec.alpha) {
        double fr = frac_scaled(a, n, 1);
        if (!(dist_to_int(fr) < spec.rho)) return false;
    }
    return true;
}

}  // namespace

BohrCensus bohr_enumerate(const BohrSpec& spec, const PrimeTable& primes) {
    if (!(spec.rho > 0.0 && spec.rho < 1.0)) throw std::domain_error("bohr: rho in (0,1)");
    if (spec.K() < 1) throw std::domain_error("bohr: K >= 1");
    BohrCensus c;
    for (const auto& ep : eligible_primes(spec, primes)) {
        double lg = std::log(static_cast<double>(ep.p));
        if (is_member(spec, ep.n)) {
            ++c.member_count;
            c.log_mass += lg;
        } else {
            ++c.complement_count;
            c.complement_log_mass += lg;
        }
    }
    c.eligible_count = c.member_count + c.complement_count;
    c.eligible_log_mass = c.log_mass + c.complement_log_mass;
    return c;
}

uint64_t delta_exponent(unsigned K, unsigned d) {
    if (K < 1) throw std::domain_error("delta_exponent: K >= 1");
    if (K > 48) throw std::overflow_error("delta_exponent: K too large");
    uint64_t E = d + 3;  // base case
    for (unsigned k = 2; k <= K; ++k) E = 3 + static_cast<uint64_t>(k) * d + 2 * E;
    return E;
}

DensityReport density_certificate(const BohrSpec& spec, const PrimeTable& primes) {
    DensityReport rep;
    rep.census = bohr_enumerate(spec, primes);
    unsigned d = static_cast<unsigned>(std::max(spec.h.degree(), 1));
    rep.exponent = delta_exponent(spec.K(), d);
    rep.floor_value = std::pow(spec.rho, static_cast<double>(rep.exponent));
    double phiD = mpz_get_d(euler_phi(spec.D).get_mpz_t());
    rep.measured = rep.census.log_mass * phiD / static_cast<double>(spec.P);
    rep.pass = rep.measured >= rep.floor_value;
    return rep;
}

HarmanWitness harman_search(const BohrSpec& spec, const PrimeTable& primes) {
    if (!(spec.rho > 0.0 && spec.rho < 1.0)) throw std::domain_error("harman: rho in (0,1)");
    const unsigned K = spec.K();
    if (K < 1) throw std::domain_error("harman: K >= 1");

    HarmanWitness w;
    // complement class and per-prime fractional coordinates
    std::vector<double> logp;
    std::vector<std::vector<double>> fracs;  // [prime][coordinate]
    double complement_logmass = 0.0;
    for (const auto& ep : eligible_primes(spec, primes)) {
        if (is_member(spec, ep.n)) continue;
        std::vector<double> f(K);
        for (unsigned i = 0; i < K; ++i) f[i] = frac_scaled(spec.alpha[i], ep.n, 1);
        fracs.push_back(std::move(f));
        logp.push_back(std::log(static_cast<double>(ep.p)));
        complement_logmass += logp.back();
    }
    if (fracs.empty()) {
        w.degenerate = true;
        w.inequality_holds = true;  // both sides zero
        return w;
    }

    const int64_t B = static_cast<int64_t>(std::floor(K / spec.rho));
    double candidates = std::pow(2.0 * B + 1.0, static_cast<double>(K)) - 1.0;
    if (candidates > 1e6)
        throw std::overflow_error("harman_search: candidate box exceeds 1e6 vectors");

    std::vector<int64_t> m(K, -B);
    std::vector<int64_t> best;
    double best_abs = -1.0;
    cplx best_sum{0.0, 0.0};
    while (true) {
        bool all_zero = std::all_of(m.begin(), m.end(), [](int64_t x) { return x == 0; });
        if (!all_zero) {
            cplx acc{0.0, 0.0};
            for (size_t idx = 0; idx < fracs.size(); ++idx) {
                double ph = 0.0;
                for (unsigned i = 0; i < K; ++i)
                    ph += static_cast<double>(m[i]) * fracs[idx][i];
                ph -= std::floor(ph);
                acc += logp[idx] * unit_phase(ph);
            }
            double a = std::abs(acc);
            // strict improvement required: ties keep the earlier candidate,
            // which is the lexicographically smallest by iteration order
            if (a > best_abs + 1e-12) {
                best_abs = a;
                best = m;
                best_sum = acc;
            }
        }
        // advance odometer (lexicographic order from most significant)
        unsigned pos = K;
        while (pos > 0) {
            if (++m[pos - 1] <= B) break;
            m[pos - 1] = -B;
            --pos;
        }
        if (pos == 0) break;
    }

    w.m = best;
    w.sum_value = best_sum;
    w.lhs = std::pow(2.0 * K + 1.0, static_cast<double>(K)) * best_abs;
    w.rhs = std::pow(spec.rho, static_cast<double>(K)) / (4.0 * K * K - 1.0) * complement_logmass;
    w.inequality_holds = w.lhs >= w.rhs;
    return w;
}

LowMajorArcReport low_major_arc(double theta, double L, uint64_t P, unsigned d,
                                const mpz_class& lambda) {
    LowMajorArcReport rep;
    double qmax_d = std::pow(L, static_cast<double>(d) + 1.0);
    uint64_t qmax = qmax_d > 1e18 ? static_cast<uint64_t>(1e18)
                                  : std::max<uint64_t>(1, static_cast<uint64_t>(qmax_d));
    Rational r = cf_approx(theta, qmax);
    rep.q = static_cast<uint64_t>(r.den.get_ui());
    rep.gap = std::fabs(r.den.get_d() * theta - r.num.get_d());
    double Ld = std::pow(L, static_cast<double>(d));
    rep.q_bound_holds = static_cast<double>(rep.q) <= Ld;
    double Pd = std::pow(static_cast<double>(P), static_cast<double>(d));
    rep.gap_bound_holds = rep.gap <= static_cast<double>(rep.q) * Ld *
                                         mpz_get_d(lambda.get_mpz_t()) / Pd;
    return rep;
}

}  // namespace prt
