#ifndef PRT_RAMSEY_HPP
#define PRT_RAMSEY_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "prt/intersective.hpp"
#include "prt/intpoly.hpp"
#include "prt/numtheory.hpp"

namespace prt {

struct EquationSpec {
    std::vector<mpz_class> a;  // s nonzero coefficients
    mpz_class b = 0;
    IntPoly h;

    size_t s() const { return a.size(); }
    void validate() const;  // throws on zero coefficients or empty a
};

struct RegularityVerdict {
    bool pr = false;
    std::vector<unsigned> I;  // 1-based indices of the zero-sum subset
    mpz_class m = 0;          // shift with b = (sum a) m
    IntersectivityVerdict shift_verdict;
    std::string pr_reason;  // set when pr = false
    bool dr = false;
};

// Decidable regularity verdicts. PR requires a nonempty zero-sum coefficient
// subset (found by meet-in-the-middle) together with an integer shift m,
// b = (sum a) m, whose shifted polynomial h - m passes the second-kind
// intersectivity check up to the bound. DR is the literal test
// b = sum a = 0. Guard: s <= 30.
RegularityVerdict pr_verdict(const EquationSpec& spec, uint64_t intersectivity_bound);
bool dr_verdict(const EquationSpec& spec);

struct ThresholdReport {
    unsigned d = 2;
    uint64_t T_upper = 0;
    uint64_t s0_upper = 0;  // 2 T_upper + 1
    uint64_t s0_lower = 0;  // 2d + 1
};

// T(2) <= 2, T(3) <= 4, T(d) <= d(d-1)/2 + floor(sqrt(2d+2)) for d >= 4.
ThresholdReport s0_threshold(unsigned d);

// Exact count of s-tuples from A (pairwise distinct) with
// sum a_i h(x_i) = b. Meet-in-the-middle over value distributions with
// inclusion-exclusion over coordinate-equality patterns for s <= 8;
// direct filtered enumeration otherwise. Throws std::overflow_error when
// the dense value range exceeds the memory budget.
uint64_t count_solutions(const std::vector<uint64_t>& A, const EquationSpec& spec,
                         size_t memory_budget_bytes = size_t(1) << 30);

// Reference implementation: plain enumeration with distinctness filter.
uint64_t count_solutions_brute(const std::vector<uint64_t>& A, const EquationSpec& spec);

struct Coloring {
    unsigned r = 1;
    std::string policy;  // "random" | "residue" | "blocks"
    uint64_t seed = 0;
    std::map<uint64_t, unsigned> assignment;  // prime -> color in [0, r)
};

Coloring make_random_coloring(const std::vector<uint64_t>& primes, unsigned r, uint64_t seed);
// Colors by p mod modulus (r = modulus).
Coloring make_residue_coloring(const std::vector<uint64_t>& primes, uint64_t modulus);
Coloring make_block_coloring(const std::vector<uint64_t>& primes, unsigned r);

struct ColorReport {
    std::vector<uint64_t> class_sizes;
    std::vector<uint64_t> counts;   // monochromatic S(C_k) per color
    std::vector<double> ratios;     // count * N^d (log N / N)^s
    unsigned best_class = 0;        // argmax count
    uint64_t total_count = 0;       // S over all of P_N (r = 1 reference)
    // When a zero-sum split I is supplied: the mixed counts
    // #{(x, y) in P_N^s x C_k^t : L1(h(x)) = L2(h(y))} with
    // L1 = sum_{i in I} a_i x_i and L2 = -sum_{j notin I} a_j y_j,
    // plus their ratios count * N^d (log N / N)^(s+t).
    std::vector<double> mixed_counts;
    std::vector<double> mixed_ratios;
};

// `split_I` (1-based indices of a zero-sum subset, e.g. from pr_verdict)
// additionally drives the mixed two-sided count per color class.
ColorReport color_experiment(uint64_t N, const Coloring& coloring, const EquationSpec& spec,
                             const PrimeTable& primes,
                             const std::vector<unsigned>* split_I = nullptr);

struct DenseReport {
    uint64_t count = 0;
    double ratio = 0.0;  // count * N^d (log N / N)^s
    size_t subset_size = 0;
};

// policy: "random" (seeded delta-subset), "top" (largest delta fraction),
// "ap" (primes in a fixed residue class mod 3 intersected to delta fraction)
DenseReport dense_experiment(uint64_t N, double delta, const std::string& policy,
                             const EquationSpec& spec, const PrimeTable& primes, uint64_t seed);

}  // namespace prt

#endif
