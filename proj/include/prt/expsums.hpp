#ifndef PRT_EXPSUMS_HPP
#define PRT_EXPSUMS_HPP

#include <complex>
#include <cstdint>

#include "prt/intpoly.hpp"
#include "prt/numtheory.hpp"

namespace prt {

using cplx = std::complex<double>;

// e(x) = exp(2 pi i x)
cplx unit_phase(double frac);

// Exact fractional part of theta * n / den, with theta treated as the exact
// dyadic rational its double representation is. Deterministic.
double frac_scaled(double theta, const mpz_class& n, const mpz_class& den);

struct ArcParams {
    unsigned d = 2;       // polynomial degree
    double sigma = 14.0;  // sigma_d; the asymptotic regime wants this large in d
    double X = 1e6;       // scale

    double Cd() const;                   // 2^(8d) * sigma
    double log_power_threshold() const;  // (log X)^(2 Cd), +inf on overflow

    static ArcParams make(unsigned d, double X);  // sigma = 2d + 10
    static ArcParams with_sigma(unsigned d, double X, double sigma);
};

struct ArcClassification {
    bool major = false;
    uint64_t q = 0;  // only for major
    mpz_class a;
};

// Major/minor dichotomy: major iff some q <= (log X)^(2Cd) satisfies
// X^d |q alpha - a| <= (log X)^(2Cd); returns the minimal such q (always a
// continued-fraction convergent denominator).
ArcClassification classify_arc(double alpha, const ArcParams& params);

struct CompleteSumSpec {
    IntPoly f;
    mpz_class Q = 1;  // (f(b+mx)-f(b))/Q must be integral
    uint64_t q = 1;   // modulus
    mpz_class a = 0;  // gcd(a, q) = 1
    mpz_class m = 1;  // progression modulus
    mpz_class b = 0;  // gcd(b, m) = 1
};

// S(q,a;m) = sum over t mod mq, (t,q)=1, t=b mod m of e_{Qq}(a f(t)).
// Exact phase reduction in integer arithmetic. Throws std::invalid_argument
// when the spec invariants fail.
cplx complete_sum(const CompleteSumSpec& spec);

// sum_{l=0,(Wl+b,q)=1}^{q-1} e_q(a g(l))
cplx restricted_complete_sum(const IntPoly& g, const mpz_class& W, const mpz_class& b, uint64_t q,
                             const mpz_class& a);

// Smallest empirical constant C making the complete-sum bound
// |S| <= C^omega(q) (gcd(cont g, q1) gcd(lead g, q2))^(1/k) q^(1-1/k)
// hold over all sampled (q <= qmax, a, W, b); q2 is the largest divisor of q
// coprime to W.
double verify_rice_bound(const IntPoly& h, uint64_t qmax, unsigned trials_per_q, uint64_t seed);

enum class WeylWeight { Unit, Log, Deriv, DerivLog };

struct WeylSpec {
    IntPoly h;
    double theta = 0.0;
    mpz_class lambda = 1;  // divisor scale
    uint64_t P = 100;      // range
    mpz_class m = 1;       // progression modulus
    mpz_class b = 0;       // residue, gcd(b, m) = 1
    WeylWeight weight = WeylWeight::Log;
    bool subtract_fb = true;  // phase uses f(p) - f(b) when set
};

// sum over b < p <= P, p = b (mod m) of e(theta (h(p)-h(b))/lambda) G(p),
// with G selected by the weight. Exact phase reduction per term.
cplx prime_weyl_sum(const WeylSpec& spec, const PrimeTable& primes);

// I_{f,G}(beta) = integral_2^P e_Q(beta f(t)) G(t) dt, adaptive with step
// bounded by the phase derivative and refined to relative error 1e-6.
// G = 1 for Unit/Log weights, h' for Deriv/DerivLog.
cplx oscillatory_integral(const IntPoly& f, const IntPoly* G, const mpz_class& Q, double beta,
                          double P);

// Main-term prediction I_{f,G}(beta) S(q,a;m) / phi(mq) for the prime Weyl
// sum at theta near a/q; weight must carry the log factor (Log or DerivLog).
cplx major_arc_prediction(const WeylSpec& spec, uint64_t q, const mpz_class& a);

}  // namespace prt

#endif
