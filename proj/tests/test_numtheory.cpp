#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "prt/numtheory.hpp"

using namespace prt;

namespace {

bool trial_division_prime(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

}  // namespace

TEST_CASE("sieve: small exhaustive and counts") {
    PrimeTable t = sieve_primes(10);
    CHECK(t.primes == std::vector<uint64_t>{2, 3, 5, 7});
    CHECK_THROWS_AS(sieve_primes(1), std::domain_error);

    PrimeTable big = sieve_primes(1000000);
    CHECK(big.primes.size() == 78498);

    // completeness against trial division on a window
    for (uint64_t n = 2; n <= 2000; ++n) CHECK(big.contains(n) == trial_division_prime(n));

    // primes <= 1e4 with p = 1 mod 4 (frozen via independent enumeration)
    size_t count = 0;
    for (uint64_t p : big.primes) {
        if (p > 10000) break;
        if (p % 4 == 1) ++count;
    }
    CHECK(count == 609);
}

TEST_CASE("sieve agrees with an independent segmented sieve") {
    const uint64_t limit = 1000000, seg = 4096;
    PrimeTable t = sieve_primes(limit);
    // independent segmented enumeration: base primes to sqrt(limit) by trial
    // division, then mark each window
    std::vector<uint64_t> base;
    for (uint64_t n = 2; n * n <= limit; ++n) {
        bool prime = true;
        for (uint64_t d : base) {
            if (d * d > n) break;
            if (n % d == 0) {
                prime = false;
                break;
            }
        }
        if (prime) base.push_back(n);
    }
    std::vector<uint64_t> segmented;
    std::vector<bool> window(seg);
    for (uint64_t lo = 2; lo <= limit; lo += seg) {
        uint64_t hi = std::min(lo + seg - 1, limit);
        std::fill(window.begin(), window.end(), false);
        for (uint64_t p : base) {
            uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
            for (uint64_t m = start; m <= hi; m += p) window[m - lo] = true;
        }
        for (uint64_t n = lo; n <= hi; ++n)
            if (!window[n - lo] && n >= 2) segmented.push_back(n);
    }
    CHECK(segmented == t.primes);
}

TEST_CASE("cf_approx satisfies the Dirichlet error bound") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        double theta = std::ldexp(static_cast<double>(rng() % (1ull << 52)), -52);
        uint64_t qmax = 5 + rng() % 500;
        Rational r = cf_approx(theta, qmax);
        CHECK(r.den >= 1);
        CHECK(r.den <= qmax);
        long double err = std::fabs(r.den.get_d() * (long double)theta - r.num.get_d());
        // irrational-in-practice samples always have a next convergent
        CHECK(static_cast<double>(err) <= 1.0 / static_cast<double>(qmax + 1) + 1e-15);
    }
}

TEST_CASE("crt_solve") {
    CHECK(crt_solve({1, 2}, {2, 3}) == 5);
    CHECK(crt_solve({4}, {7}) == 4);
    // (3 mod 4, 2 mod 9, 4 mod 5): exhaustive scan oracle
    mpz_class expect = -1;
    for (int x = 0; x < 180; ++x)
        if (x % 4 == 3 && x % 9 == 2 && x % 5 == 4) {
            expect = x;
            break;
        }
    REQUIRE(expect == 119);
    CHECK(crt_solve({3, 2, 4}, {4, 9, 5}) == expect);
    // round trip invariant
    mpz_class r = crt_solve({3, 2, 4}, {4, 9, 5});
    CHECK(r % 4 == 3);
    CHECK(r % 9 == 2);
    CHECK(r % 5 == 4);
    // inconsistent non-coprime system
    CHECK_THROWS_AS(crt_solve({1, 2}, {4, 6}), std::domain_error);
    // consistent non-coprime system
    CHECK(crt_solve({1, 3}, {4, 6}) == 9);
}

TEST_CASE("cf_approx") {
    Rational r = cf_approx(1.0 / 3.0, 10);
    CHECK(r.num == 1);
    CHECK(r.den == 3);

    Rational z = cf_approx(0.0, 50);
    CHECK(z.num == 0);
    CHECK(z.den == 1);

    Rational pi = cf_approx(3.14159265358979323846, 120);
    CHECK(pi.num == 355);
    CHECK(pi.den == 113);

    // brute force optimality check for a few thetas
    for (double theta : {3.14159265358979, 0.7234104, 1.0 / 7.0, 0.99991}) {
        Rational best = cf_approx(theta, 40);
        long double err = std::fabs(best.den.get_d() * (long double)theta - best.num.get_d());
        for (int q = 1; q <= 40; ++q) {
            long double target = (long double)theta * q;
            long double brute = std::fabs(target - std::roundl(target));
            CHECK(err <= brute + 1e-15L);
        }
        CHECK(best.den <= 40);
    }
}

TEST_CASE("li") {
    CHECK(li(2.0) == 0.0);
    // frozen by an independent high-resolution quadrature oracle
    CHECK(li(1e6) == doctest::Approx(78626.5039956820644).epsilon(1e-8));
    CHECK(li(1e5) == doctest::Approx(9628.7638372706807).epsilon(1e-8));
    CHECK(li(1e5) < li(1e6));
    CHECK_THROWS_AS(li(1.5), std::domain_error);
}

TEST_CASE("gcd_dth_power_part") {
    CHECK(gcd_dth_power_part(16, 16, 2) == 4);
    CHECK(gcd_dth_power_part(12, 12, 2) == 2);
    // (H,W) = p^5, d=2 -> p^2, exhaustive m scan oracle
    for (uint64_t p : {2ull, 3ull, 7ull}) {
        mpz_class P5;
        mpz_ui_pow_ui(P5.get_mpz_t(), p, 5);
        mpz_class got = gcd_dth_power_part(P5, P5, 2);
        mpz_class best = 1;
        for (mpz_class m = 1; m * m <= P5; ++m)
            if (P5 % (m * m) == 0) best = m;
        CHECK(got == best);
        CHECK(got == mpz_class(static_cast<unsigned long>(p * p)));
    }
    CHECK(gcd_dth_power_part(36, 48, 2) == 2);  // gcd=12
    CHECK(gcd_dth_power_part(0, 7, 3) == 1);    // gcd(0,7)=7, largest cube divisor 1
}

TEST_CASE("comparability_threshold") {
    IntPoly x2 = IntPoly::parse("0,0,1");
    CHECK(comparability_threshold(x2, 0.5) == 1);
    CHECK(comparability_threshold(x2, 0.09) == 1);

    auto verify_grid = [](const IntPoly& P, double eta, uint64_t M0) {
        int d = P.degree();
        double x = static_cast<double>(M0) / eta;
        for (int j = 0; j <= 1000; ++j) {
            double px = P.eval_double(x), pex = P.eval_double(eta * x);
            if (!std::isfinite(px) || !std::isfinite(pex)) break;
            double lhs = std::pow(eta, d) * px;
            if (!(lhs <= 3 * pex && 3 * pex <= 9 * lhs)) return false;
            x *= 1.01;
        }
        return true;
    };

    IntPoly p1 = IntPoly::parse("0,-100,1");  // x^2-100x
    uint64_t m1 = comparability_threshold(p1, 0.5);
    CHECK(verify_grid(p1, 0.5, m1));
    CHECK((m1 == 1 || !verify_grid(p1, 0.5, m1 - 1)));

    IntPoly p2 = IntPoly::parse("0,1,0,1");  // x^3+x
    uint64_t m2 = comparability_threshold(p2, 0.9);
    CHECK(verify_grid(p2, 0.9, m2));
}

TEST_CASE("factorize / phi / omega helpers") {
    auto f = factorize(mpz_class(360));
    REQUIRE(f.size() == 3);
    CHECK(f[0] == std::make_pair(mpz_class(2), 3u));
    CHECK(f[1] == std::make_pair(mpz_class(3), 2u));
    CHECK(f[2] == std::make_pair(mpz_class(5), 1u));
    CHECK(euler_phi(mpz_class(1)) == 1);
    CHECK(euler_phi(mpz_class(36)) == 12);
    CHECK(omega_u64(60) == 3);
    CHECK(powmod_u64(2, 10, 1000) == 24);
    CHECK(mulmod_u64(1ull << 62, 8, (1ull << 63) - 25) > 0);
}
