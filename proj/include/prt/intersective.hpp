#ifndef PRT_INTERSECTIVE_HPP
#define PRT_INTERSECTIVE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "prt/intpoly.hpp"
#include "prt/numtheory.hpp"

namespace prt {

/// Certified p-adic unit root residue: h(z) = 0 (mod p^k), gcd(z, p) = 1.
/// `hensel` marks residues that provably extend to genuine roots in the
/// p-adic integers; `vp_deriv` is the valuation of the derivative of the
/// squarefree factor the root belongs to.
struct PadicRootCert {
    uint64_t p = 0;
    unsigned k = 0;
    mpz_class z;
    unsigned multiplicity = 1;
    bool unit = true;
    bool hensel = true;
    unsigned vp_deriv = 0;
    unsigned factor_index = 0;  // index into squarefree_decomposition(h)
};

// All genuine p-adic unit roots of h reported at precision p^k, with their
// multiplicities as zeros of h. Residues that solve the congruence mod p^k
// without extending to p-adic roots are not listed. The reported
// multiplicity is the number of times (x - z) divides h in (Z/p^k)[x],
// which agrees with the true multiplicity once p^k separates the roots.
std::vector<PadicRootCert> padic_unit_roots(const IntPoly& h, uint64_t p, unsigned k);

struct IntersectivityVerdict {
    enum class Status { CertifiedYes, YesUpToBound, No };
    Status status = Status::No;
    int trivial_root = 0;                     // CertifiedYes: 1, -1, or 0 (zero poly)
    mpz_class witness;                        // No: minimal prime power with no coprime root
    bool witness_verified = false;            // exhaustive unit scan done mod witness
    // No: the smallest n at which h has roots mod n but none coprime to n
    // (the obstruction specific to the second kind); 0 when none was found
    // below the scan cap. For x^2 this equals the witness (2); for x^2-13
    // the witness is 5 (no root at all mod 5) while this field is 13.
    mpz_class strict_second_kind_witness;
    uint64_t bound = 0;                       // YesUpToBound
    std::vector<PadicRootCert> certificates;  // one per prime <= bound

    bool is_no() const { return status == Status::No; }
};

// Decides intersectivity of the second kind up to the prime bound:
//   - CertifiedYes when h is zero or h(1) = 0 or h(-1) = 0;
//   - No(n) with the minimal prime-power witness n when some p^j <= cap
//     admits no unit root (composites are covered by CRT);
//   - YesUpToBound(B) with a Hensel certificate per prime p <= B otherwise.
IntersectivityVerdict is_intersective_second_kind(const IntPoly& h, uint64_t prime_bound);

// Canonical z_p: minimal multiplicity first, then smallest residue at the
// comparison precision. Throws std::domain_error when h has no genuine
// p-adic unit root.
PadicRootCert choose_zp(const IntPoly& h, uint64_t p);

// Lifts the certified root to a residue mod p^k for any k (Newton within the
// root's squarefree factor).
mpz_class lift_root(const IntPoly& h, const PadicRootCert& cert, unsigned k);

// lambda(D) = prod_{p | D} p^{m_p ord_p(D)}; completely multiplicative.
mpz_class lambda_of(const IntPoly& h, const mpz_class& D);

// Unique r_D in (-D, 0] with r_D = z_p mod p^{ord_p(D)} for every p | D;
// gcd(r_D, D) = 1. r_1 = 0.
mpz_class compute_rD(const IntPoly& h, const mpz_class& D);

struct AuxPolyData {
    mpz_class D;
    mpz_class lambda;
    mpz_class r_D;
    IntPoly h_D;  // h(r_D + D x) / lambda, exact
};

// Auxiliary polynomial data; throws std::runtime_error if the exact
// division fails (never expected for valid z_p choices).
AuxPolyData aux_poly(const IntPoly& h, const mpz_class& D);

struct ContentScan {
    std::map<uint64_t, mpz_class> content;  // D -> gcd(h_D - h_D(0))
    mpz_class max_content;
};

ContentScan content_bound_scan(const IntPoly& h, uint64_t Dmax);

// Smallest n <= bound such that F(t,...,t) = (sum a_i) h(t) - b is nonzero
// mod n for every unit t mod n; nullopt when none exists below the bound.
std::optional<mpz_class> obstruction_witness(const std::vector<mpz_class>& a, const mpz_class& b,
                                             const IntPoly& h, uint64_t bound);

// Roots of f mod p in [0, p), ascending (deterministic); p prime.
std::vector<uint64_t> poly_roots_mod_p(const IntPoly& f, uint64_t p);

}  // namespace prt

#endif
