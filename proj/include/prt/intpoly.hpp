#ifndef PRT_INTPOLY_HPP
#define PRT_INTPOLY_HPP

#include <gmpxx.h>

#include <string>
#include <utility>
#include <vector>

namespace prt {

/// Integer polynomial stored as ascending coefficients. The zero polynomial
/// has an empty coefficient vector; otherwise the leading coefficient is
/// nonzero. All arithmetic is exact (GMP).
class IntPoly {
public:
    IntPoly() = default;
    explicit IntPoly(std::vector<mpz_class> ascending_coeffs);

    static IntPoly zero() { return IntPoly{}; }
    static IntPoly constant(mpz_class c);
    static IntPoly monomial(mpz_class c, unsigned degree);

    // Accepts either comma-separated ascending coefficients ("-13,0,1")
    // or a product of bracketed sums of monomials in x
    // ("(x^2-13)(x^2-17)(x^2-221)"); a bare sum like "x^2-13" also parses.
    static IntPoly parse(const std::string& text);

    bool is_zero() const { return coeffs_.empty(); }
    // Degree of the zero polynomial is -1.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<mpz_class>& coeffs() const { return coeffs_; }
    const mpz_class& leading() const;
    mpz_class coeff(size_t i) const;

    mpz_class operator()(const mpz_class& x) const;
    double eval_double(double x) const;

    IntPoly derivative() const;

    IntPoly operator+(const IntPoly& o) const;
    IntPoly operator-(const IntPoly& o) const;
    IntPoly operator*(const IntPoly& o) const;
    IntPoly operator*(const mpz_class& c) const;
    IntPoly operator-() const;
    bool operator==(const IntPoly& o) const { return coeffs_ == o.coeffs_; }

    // gcd of all coefficients (0 for the zero polynomial).
    mpz_class content() const;
    IntPoly primitive_part() const;

    // Exact division; throws std::domain_error if the division is not exact.
    IntPoly divide_exact(const mpz_class& c) const;
    IntPoly divide_exact(const IntPoly& divisor) const;

    std::string to_string() const;        // human form, e.g. "x^2 - 13"
    std::string to_coeff_string() const;  // comma form, e.g. "-13,0,1"

private:
    void normalize();
    std::vector<mpz_class> coeffs_;
};

// Coefficients of x -> h(b + m*x), exact.
IntPoly taylor_shift(const IntPoly& h, const mpz_class& b, const mpz_class& m);

// gcd of the non-constant coefficients; throws std::domain_error when
// deg g < 1.
mpz_class content_nonconstant(const IntPoly& g);

// Primitive gcd over the integers (sign-normalized to positive leading
// coefficient).
IntPoly poly_gcd(IntPoly a, IntPoly b);

// Yun decomposition h = content * prod_i g_i^i with the g_i primitive,
// squarefree and pairwise coprime. Returns (g_i, i) for the nontrivial g_i.
std::vector<std::pair<IntPoly, unsigned>> squarefree_decomposition(const IntPoly& h);

}  // namespace prt

#endif
