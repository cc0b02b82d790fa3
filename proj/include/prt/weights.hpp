#ifndef PRT_WEIGHTS_HPP
#define PRT_WEIGHTS_HPP

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "prt/expsums.hpp"
#include "prt/intersective.hpp"
#include "prt/intpoly.hpp"
#include "prt/numtheory.hpp"

namespace prt {

struct WTrickParams {
    IntPoly h;
    unsigned w = 2;      // smoothness cutoff
    unsigned gamma = 1;  // exponent on prod_{p<=w} p (asymptotic analyses take 100 d w)
    mpz_class C = 1;     // threshold constant
    mpz_class M;         // C d^2 10^(4w)
    mpz_class W;         // (prod_{p<=w} p)^gamma
    mpz_class D;         // W^2
    mpz_class lambda;    // lambda(D)
    mpz_class r_D;
    mpz_class b;         // residue with (b,W)=1, (h'(b),W) | sqrt(W)
    mpz_class hpb_gcd;   // (h'(b), W)
    mpz_class kappa;     // lambda(D) / (W (h'(b),W)), w-smooth
    mpz_class X, Z, N;   // X = r_D (mod D); Z = (X-r_D)/D; N = h_D(Z)
    IntPoly h_D;

    mpz_class Wkappa() const { return W * kappa; }
};

// Builds the double-W-trick parameters with density-free smallest-b choice.
// X must satisfy D | X - r_D (use align_X). Throws std::domain_error when no
// valid residue b exists, std::overflow_error when W exceeds the numeric
// budget.
WTrickParams build_wtrick(const IntPoly& h, unsigned w, unsigned gamma, const mpz_class& C,
                          const mpz_class& X);

// Largest X' <= X with D | X' - r_D for the given (h, w, gamma).
mpz_class align_X(const IntPoly& h, unsigned w, unsigned gamma, const mpz_class& X);

struct WeightTable {
    int64_t support_bound = 0;                      // N
    std::vector<std::pair<int64_t, double>> entries;  // sorted by n, n in [1, N]

    double mass() const;
    double at(int64_t n) const;  // 0 when absent
    void add(int64_t n, double v);
    void sort_entries();

    std::string to_json(const std::string& params_hash) const;
    static WeightTable from_json(const std::string& text);
};

// nu(n) = (phi(W)/(W (h'(b),W))) sum_{b<p<=X, p=b (mod Wk), h(p)-h(b)=n lambda} h'(p) log p
WeightTable build_nu(const WTrickParams& params, const PrimeTable& primes,
                     const std::vector<uint64_t>* A_filter = nullptr);

// mu(n) = (1/(h'(b),W)) sum over all integers b<x<=X in the progression
WeightTable build_mu(const WTrickParams& params);

// nu_D(n) = (phi(D)/lambda(D)) sum_{p<=X, p=r_D (mod D), h(p)=n lambda} h'(p) log p
WeightTable build_nu_D(const IntPoly& h, const mpz_class& D, const mpz_class& X,
                       const PrimeTable& primes);

// mu_D(n) = (N D / X) #{z <= Z : h_D(z) = n}
WeightTable build_mu_D(const IntPoly& h, const mpz_class& D, const mpz_class& X);

// f_hat(alpha) = sum f(n) e(alpha n), exact dyadic phase reduction.
cplx fourier_eval(const WeightTable& table, double alpha);

// Evaluations at alpha = j/M for j = 0..M-1 (integer phase reduction).
std::vector<cplx> fourier_grid(const WeightTable& table, uint64_t M);

// Closed form for the transform of 1_[N].
cplx indicator_transform(int64_t N, double alpha);

struct DecayReport {
    double max_deviation = 0.0;  // max |nu_hat - 1_[N]_hat| / N over samples
    double at_zero = 0.0;        // | ||nu||_1 - N | / N
    std::vector<std::pair<double, double>> samples;  // (alpha, deviation)
};

// Measures Fourier-decay over a uniform grid plus rationals a/q, q <= 30.
DecayReport decay_report(const WeightTable& nu, int64_t N, unsigned grid_samples);

struct MomentReport {
    double exponent = 0.0;
    double value = 0.0;
    double normalized = 0.0;  // value / N^(E-1)
    std::string method;       // "exact-orthogonality" | "quadrature"
};

// L^E restriction moment of the table's Fourier transform. The exact method
// (even integer E) counts weighted solutions of the symmetric equation by
// sparse convolution; quadrature integrates |f_hat|^E on a grid of spacing
// 1/(4 E N), exact for trigonometric polynomials of that bandwidth.
MomentReport restriction_moment_exact(const WeightTable& table, unsigned E);
MomentReport restriction_moment_quadrature(const WeightTable& table, double E);

// Weighted count of solutions of L1(n) = L2(m):
//   sum f_1(n_1).. f_s(n_s) g_1(m_1).. g_t(m_t) over L1(n) = L2(m).
// Meet-in-the-middle on the value distribution of each side.
double phi_count(const std::vector<const WeightTable*>& fs, const std::vector<int64_t>& L1,
                 const std::vector<const WeightTable*>& gs, const std::vector<int64_t>& L2);

// Inverse of h_D on [eta Z, Z] (strictly increasing there): the unique
// preimage of t, or 0 when t is not attained. Monotonicity verified on a
// grid; violations throw std::domain_error.
mpz_class qz_inverse(const IntPoly& h_D, const mpz_class& Z, double eta, const mpz_class& t);

double nu_mass_on(const WeightTable& nu, const std::vector<int64_t>& A);

// S(q,a) of the W-tricked weight (vanishes for gcd(q, W) > 1).
cplx wtrick_S(const WTrickParams& params, uint64_t q, const mpz_class& a);

}  // namespace prt

#endif
