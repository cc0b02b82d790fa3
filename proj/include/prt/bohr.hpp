#ifndef PRT_BOHR_HPP
#define PRT_BOHR_HPP

#include <complex>
#include <cstdint>
#include <vector>

#include "prt/expsums.hpp"
#include "prt/intersective.hpp"
#include "prt/numtheory.hpp"

namespace prt {

struct BohrSpec {
    IntPoly h;
    mpz_class D = 1;
    mpz_class lambda = 1;
    mpz_class r_D = 0;
    std::vector<double> alpha;  // phase vector in T^K
    double rho = 0.1;           // radius in (0,1)
    uint64_t P = 1000;          // range

    unsigned K() const { return static_cast<unsigned>(alpha.size()); }
};

// Builds a spec with lambda and r_D from the auxiliary data of (h, D).
BohrSpec make_bohr_spec(const IntPoly& h, const mpz_class& D, std::vector<double> alpha, double rho,
                        uint64_t P);

struct BohrCensus {
    uint64_t member_count = 0;
    uint64_t complement_count = 0;
    uint64_t eligible_count = 0;
    double log_mass = 0.0;             // sum of log p over members
    double complement_log_mass = 0.0;  // over the complement class C
    double eligible_log_mass = 0.0;    // member + complement by construction
};

// Exact membership census of the prime polynomial Bohr set
//   { p <= P : p = r_D (mod D), ||alpha h(p)/lambda|| < rho }.
// h(p)/lambda is an exact integer for eligible p; phases reduce exactly.
BohrCensus bohr_enumerate(const BohrSpec& spec, const PrimeTable& primes);

// E(K) with all implied constants 1 and eps = 0:
// E(1) = d+3, E(K) = 3 + K d + 2 E(K-1).
uint64_t delta_exponent(unsigned K, unsigned d);

struct DensityReport {
    double measured = 0.0;  // log_mass * phi(D) / P
    double floor_value = 0.0;  // rho^E(K,d)
    uint64_t exponent = 0;
    bool pass = false;
    BohrCensus census;
};

DensityReport density_certificate(const BohrSpec& spec, const PrimeTable& primes);

struct HarmanWitness {
    std::vector<int64_t> m;  // maximizer, 0 < |m|_inf <= K/rho
    cplx sum_value{0.0, 0.0};
    double lhs = 0.0;  // (2K+1)^K |sum|
    double rhs = 0.0;  // (rho^K/(4K^2-1)) sum_{p in C} log p
    bool inequality_holds = false;
    bool degenerate = false;  // complement empty (rho > 1/2 case)
};

// Exhaustive maximizer search over the integer box 0 < |m|_inf <= floor(K/rho)
// of |sum_{p in C} e(h(p) m.alpha / lambda) log p|; ties broken by the
// lexicographically smallest m. Refuses boxes beyond 1e6 candidates.
HarmanWitness harman_search(const BohrSpec& spec, const PrimeTable& primes);

struct LowMajorArcReport {
    uint64_t q = 0;
    double gap = 0.0;  // |q theta - a|
    bool q_bound_holds = false;    // q <= L^d
    bool gap_bound_holds = false;  // gap <= q L^d lambda / P^d
};

// Rational approximation step of the density recursion: cf_approx with
// Qmax = L^(d+1); bounds reported with all constants 1 (diagnostic only).
LowMajorArcReport low_major_arc(double theta, double L, uint64_t P, unsigned d,
                                const mpz_class& lambda);

}  // namespace prt

#endif
