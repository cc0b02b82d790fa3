#ifndef PRT_NUMTHEORY_HPP
#define PRT_NUMTHEORY_HPP

#include <gmpxx.h>

#include <cstdint>
#include <vector>

#include "prt/intpoly.hpp"

namespace prt {

struct PrimeTable {
    uint64_t limit = 0;
    std::vector<uint64_t> primes;

    bool contains(uint64_t n) const;
    // Number of primes <= n (n must be <= limit).
    size_t count_leq(uint64_t n) const;
};

// Complete ascending list of primes <= limit; throws std::domain_error for
// limit < 2.
PrimeTable sieve_primes(uint64_t limit);

struct Rational {
    mpz_class num;
    mpz_class den;  // > 0, coprime to num
};

// Unique residue mod prod(moduli) congruent to each residue. Moduli need not
// be pairwise coprime; inconsistent systems throw std::domain_error. Result
// is the least nonnegative residue mod lcm(moduli).
mpz_class crt_solve(const std::vector<mpz_class>& residues, const std::vector<mpz_class>& moduli);

// Best continued-fraction convergent (a, q) of theta with q <= qmax,
// minimizing |q*theta - a|; ties broken by smaller q. theta = 0 gives (0, 1).
Rational cf_approx(double theta, uint64_t qmax);

// Logarithmic integral from 2 to x by adaptive Simpson quadrature,
// relative tolerance 1e-8. Throws std::domain_error for x < 2.
double li(double x);

// Largest m >= 1 with m^d | gcd(H, W); d >= 1.
mpz_class gcd_dth_power_part(const mpz_class& H, const mpz_class& W, unsigned d);

// Smallest M0 >= 1 such that eta^d P(x) <= 3 P(eta x) <= 9 eta^d P(x) holds
// on the geometric grid x = M0/eta * 1.01^j, 0 <= j <= 1000. Requires
// deg P >= 1 and positive leading coefficient.
uint64_t comparability_threshold(const IntPoly& P, double eta);

// ---- small helpers used across modules ----

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m);
uint64_t powmod_u64(uint64_t base, uint64_t exp, uint64_t m);

// Trial-division factorization (with perfect-power backstop); fine at desk
// scale where inputs are smooth or small.
std::vector<std::pair<mpz_class, unsigned>> factorize(mpz_class n);
std::vector<std::pair<uint64_t, unsigned>> factorize_u64(uint64_t n);

mpz_class euler_phi(const mpz_class& n);
unsigned omega_u64(uint64_t n);

}  // namespace prt

#endif
