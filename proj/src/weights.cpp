#include "prt/weights.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "prt/parallel.hpp"

namespace prt {

namespace {

std::atomic<unsigned> g_threads{1};

mpz_class primorial_pow(unsigned w, unsigned gamma) {
    mpz_class W = 1;
    for (uint64_t p : sieve_primes(std::max<unsigned>(w, 2)).primes) {
        if (p > w) break;
        mpz_class pp;
        mpz_ui_pow_ui(pp.get_mpz_t(), p, gamma);
        W *= pp;
    }
    return W;
}

int64_t to_i64(const mpz_class& v, const char* what) {
    if (!v.fits_slong_p()) throw std::overflow_error(std::string(what) + " exceeds int64 range");
    return static_cast<int64_t>(v.get_si());
}

}  // namespace

void set_thread_count(unsigned n) { g_threads.store(n == 0 ? 1 : n); }
unsigned thread_count() { return g_threads.load(); }

mpz_class align_X(const IntPoly& h, unsigned w, unsigned gamma, const mpz_class& X) {
    mpz_class W = primorial_pow(w, gamma);
    mpz_class D = W * W;
    mpz_class rD = compute_rD(h, D);
    mpz_class rem = (X - rD) % D;
    if (rem < 0) rem += D;
    return X - rem;
}

WTrickParams build_wtrick(const IntPoly& h, unsigned w, unsigned gamma, const mpz_class& C,
                          const mpz_class& X) {
    if (h.degree() < 1) throw std::domain_error("build_wtrick: deg h >= 1 required");
    WTrickParams P;
    P.h = h;
    P.w = w;
    P.gamma = gamma;
    P.C = C;
    const unsigned d = static_cast<unsigned>(h.degree());

    P.W = primorial_pow(w, gamma);
    if (mpz_sizeinbase(P.W.get_mpz_t(), 2) > 63)
        throw std::overflow_error(
            "build_wtrick: W exceeds 2^63; full-scale parameters are accepted only symbolically");
    P.D = P.W * P.W;

    mpz_class tenw;
    mpz_ui_pow_ui(tenw.get_mpz_t(), 10, 4 * w);
    P.M = C * d * d * tenw;

    P.lambda = lambda_of(h, P.D);
    P.r_D = compute_rD(h, P.D);

    // smallest b in [1, W] with (b, W) = 1 and (h'(b), W)^2 | W
    IntPoly hp = h.derivative();
    uint64_t Wu = P.W.get_ui();
    bool found = false;
    for (uint64_t b = 1; b <= Wu; ++b) {
        mpz_class B(static_cast<unsigned long>(b));
        mpz_class g1;
        mpz_gcd(g1.get_mpz_t(), B.get_mpz_t(), P.W.get_mpz_t());
        if (g1 != 1) continue;
        mpz_class g;
        mpz_class hpb = hp(B);
        mpz_gcd(g.get_mpz_t(), hpb.get_mpz_t(), P.W.get_mpz_t());
        if (P.W % (g * g) != 0) continue;  // (h'(b),W) must divide sqrt(W)
        P.b = B;
        P.hpb_gcd = g;
        found = true;
        break;
    }
    if (!found)
        throw std::domain_error("build_wtrick: no residue b with (b,W)=1 and (h'(b),W) | sqrt(W)");

    mpz_class denom = P.W * P.hpb_gcd;
    if (P.lambda % denom != 0)
        throw std::runtime_error("build_wtrick: kappa not integral (integrity violation)");
    P.kappa = P.lambda / denom;

    // X alignment: D | X - r_D
    if ((X - P.r_D) % P.D != 0)
        throw std::domain_error("build_wtrick: D does not divide X - r_D (use align_X)");
    P.X = X;
    P.Z = (X - P.r_D) / P.D;
    IntPoly shifted = taylor_shift(h, P.r_D, P.D);
    P.h_D = shifted.divide_exact(P.lambda);
    P.N = P.h_D(P.Z);
    if (P.N <= 0) throw std::domain_error("build_wtrick: N = h_D(Z) must be positive");
    // identity N lambda = h(X)
    if (P.N * P.lambda != h(X))
        throw std::runtime_error("build_wtrick: N lambda != h(X) (integrity violation)");
    return P;
}

double WeightTable::mass() const {
    double m = 0.0;
    for (const auto& [n, v] : entries) m += v;
    return m;
}

double WeightTable::at(int64_t n) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), n,
                               [](const auto& e, int64_t key) { return e.first < key; });
    if (it != entries.end() && it->first == n) return it->second;
    return 0.0;
}

void WeightTable::add(int64_t n, double v) {
    entries.emplace_back(n, v);
}

void WeightTable::sort_entries() {
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    // merge duplicates additively, in ascending key order
    std::vector<std::pair<int64_t, double>> merged;
    merged.reserve(entries.size());
    for (const auto& [n, v] : entries) {
        if (!merged.empty() && merged.back().first == n)
            merged.back().second += v;
        else
            merged.emplace_back(n, v);
    }
    entries = std::move(merged);
}

std::string WeightTable::to_json(const std::string& params_hash) const {
    nlohmann::json j;
    j["N"] = support_bound;
    j["params_hash"] = params_hash;
    nlohmann::json es = nlohmann::json::array();
    for (const auto& [n, v] : entries) es.push_back({n, v});
    j["entries"] = std::move(es);
    return j.dump();
}

WeightTable WeightTable::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    WeightTable t;
    t.support_bound = j.at("N").get<int64_t>();
    for (const auto& e : j.at("entries")) t.entries.emplace_back(e[0].get<int64_t>(), e[1].get<double>());
    return t;
}

WeightTable build_nu(const WTrickParams& P, const PrimeTable& primes,
                     const std::vector<uint64_t>* A_filter) {
    if (mpz_class(static_cast<unsigned long>(primes.limit)) < P.X)
        throw std::domain_error("build_nu: sieve does not reach X");
    WeightTable t;
    t.support_bound = to_i64(P.N, "build_nu: N");
    const double prefactor = mpz_get_d(euler_phi(P.W).get_mpz_t()) /
                             (mpz_get_d(P.W.get_mpz_t()) * mpz_get_d(P.hpb_gcd.get_mpz_t()));
    IntPoly hp = P.h.derivative();
    mpz_class Wk = P.Wkappa();
    mpz_class bmod = P.b % Wk;
    if (bmod < 0) bmod += Wk;
    mpz_class hb = P.h(P.b);
    for (uint64_t p : primes.primes) {
        mpz_class pp(static_cast<unsigned long>(p));
        if (pp > P.X) break;
        if (pp <= P.b) continue;
        if ((pp - bmod) % Wk != 0) continue;
        if (A_filter && !std::binary_search(A_filter->begin(), A_filter->end(), p)) continue;
        mpz_class num = P.h(pp) - hb;
        mpz_class n, rem;
        mpz_tdiv_qr(n.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), P.lambda.get_mpz_t());
        if (rem != 0) throw std::runtime_error("build_nu: lambda does not divide h(p)-h(b)");
        if (n < 1 || n > P.N) continue;
        double val = prefactor * hp.eval_double(static_cast<double>(p)) *
                     std::log(static_cast<double>(p));
        t.add(to_i64(n, "build_nu: n"), val);
    }
    t.sort_entries();
    return t;
}

WeightTable build_mu(const WTrickParams& P) {
    WeightTable t;
    t.support_bound = to_i64(P.N, "build_mu: N");
    const double prefactor = 1.0 / mpz_get_d(P.hpb_gcd.get_mpz_t());
    IntPoly hp = P.h.derivative();
    mpz_class Wk = P.Wkappa();
    mpz_class hb = P.h(P.b);
    for (mpz_class x = P.b + Wk; x <= P.X; x += Wk) {
        mpz_class num = P.h(x) - hb;
        mpz_class n, rem;
        mpz_tdiv_qr(n.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), P.lambda.get_mpz_t());
        if (rem != 0) throw std::runtime_error("build_mu: lambda does not divide h(x)-h(b)");
        if (n < 1 || n > P.N) continue;
        t.add(to_i64(n, "build_mu: n"), prefactor * hp.eval_double(x.get_d()));
    }
    t.sort_entries();
    return t;
}

WeightTable build_nu_D(const IntPoly& h, const mpz_class& D, const mpz_class& X,
                       const PrimeTable& primes) {
    if (mpz_class(static_cast<unsigned long>(primes.limit)) < X)
        throw std::domain_error("build_nu_D: sieve does not reach X");
    AuxPolyData aux = aux_poly(h, D);
    WeightTable t;
    mpz_class Z = (X - aux.r_D) / D;
    t.support_bound = to_i64(aux.h_D(Z), "build_nu_D: N");
    const double prefactor =
        mpz_get_d(euler_phi(D).get_mpz_t()) / mpz_get_d(aux.lambda.get_mpz_t());
    IntPoly hp = h.derivative();
    mpz_class rmod = aux.r_D % D;
    if (rmod < 0) rmod += D;
    for (uint64_t p : primes.primes) {
        mpz_class pp(static_cast<unsigned long>(p));
        if (pp > X) break;
        if ((pp - rmod) % D != 0) continue;
        mpz_class n, rem;
        mpz_class hpval = h(pp);
        mpz_tdiv_qr(n.get_mpz_t(), rem.get_mpz_t(), hpval.get_mpz_t(), aux.lambda.get_mpz_t());
        if (rem != 0) throw std::runtime_error("build_nu_D: lambda does not divide h(p)");
        if (n < 1 || n > t.support_bound) continue;
        t.add(to_i64(n, "build_nu_D: n"),
              prefactor * hp.eval_double(static_cast<double>(p)) * std::log(static_cast<double>(p)));
    }
    t.sort_entries();
    return t;
}

WeightTable build_mu_D(const IntPoly& h, const mpz_class& D, const mpz_class& X) {
    AuxPolyData aux = aux_poly(h, D);
    WeightTable t;
    mpz_class Z = (X - aux.r_D) / D;
    mpz_class N = aux.h_D(Z);
    t.support_bound = to_i64(N, "build_mu_D: N");
    const double unit = mpz_get_d(N.get_mpz_t()) * mpz_get_d(D.get_mpz_t()) / mpz_get_d(X.get_mpz_t());
    for (mpz_class z = 1; z <= Z; ++z) {
        mpz_class n = aux.h_D(z);
        if (n < 1 || n > N) continue;
        t.add(to_i64(n, "build_mu_D: n"), unit);
    }
    t.sort_entries();
    return t;
}

cplx fourier_eval(const WeightTable& table, double alpha) {
    cplx acc{0.0, 0.0};
    for (const auto& [n, v] : table.entries)
        acc += v * unit_phase(frac_scaled(alpha, mpz_class(static_cast<long>(n)), 1));
    return acc;
}

std::vector<cplx> fourier_grid(const WeightTable& table, uint64_t M) {
    if (M == 0) throw std::domain_error("fourier_grid: M must be positive");
    std::vector<cplx> out(M);
    // twiddle table e(k/M)
    std::vector<cplx> tw(M);
    for (uint64_t k = 0; k < M; ++k) tw[k] = unit_phase(static_cast<double>(k) / static_cast<double>(M));
    auto chunk = [&](size_t lo, size_t hi) {
        for (size_t j = lo; j < hi; ++j) {
            cplx acc{0.0, 0.0};
            for (const auto& [n, v] : table.entries) {
                uint64_t nn = static_cast<uint64_t>(n % static_cast<int64_t>(M));
                acc += v * tw[mulmod_u64(j, nn, M)];
            }
            out[j] = acc;
        }
        return 0;
    };
    chunked_reduce<int>(M, 0, chunk, [](int a, int b) { return a + b; }, 64);
    return out;
}

cplx indicator_transform(int64_t N, double alpha) {
    double fr = alpha - std::floor(alpha);
    if (fr == 0.0) return {static_cast<double>(N), 0.0};
    // sum_{n=1}^N e(alpha n) = e(alpha) (e(alpha N) - 1) / (e(alpha) - 1)
    cplx ea = unit_phase(fr);
    cplx eN = unit_phase(frac_scaled(alpha, mpz_class(static_cast<long>(N)), 1));
    return ea * (eN - 1.0) / (ea - 1.0);
}

DecayReport decay_report(const WeightTable& nu, int64_t N, unsigned grid_samples) {
    DecayReport rep;
    double Nd = static_cast<double>(N);
    rep.at_zero = std::fabs(nu.mass() - Nd) / Nd;
    auto probe = [&](double alpha) {
        double dev = std::abs(fourier_eval(nu, alpha) - indicator_transform(N, alpha)) / Nd;
        rep.samples.emplace_back(alpha, dev);
        rep.max_deviation = std::max(rep.max_deviation, dev);
    };
    for (unsigned j = 0; j < grid_samples; ++j)
        probe(static_cast<double>(j) / static_cast<double>(grid_samples));
    for (uint64_t q = 1; q <= 30; ++q)
        for (uint64_t a = 0; a < q; ++a) {
            if (std::gcd(a, q) != 1 && !(a == 0 && q == 1)) continue;
            probe(static_cast<double>(a) / static_cast<double>(q));
        }
    return rep;
}

namespace {

// Dense nonnegative-key distribution with offset; used for moment counts.
struct DenseDist {
    int64_t lo = 0;
    std::vector<double> v;

    double& at(int64_t key) { return v[static_cast<size_t>(key - lo)]; }
};

DenseDist conv(const DenseDist& a, const WeightTable& t) {
    DenseDist r;
    r.lo = a.lo + t.entries.front().first;
    int64_t hi = (a.lo + static_cast<int64_t>(a.v.size()) - 1) + t.entries.back().first;
    r.v.assign(static_cast<size_t>(hi - r.lo + 1), 0.0);
    for (size_t i = 0; i < a.v.size(); ++i) {
        if (a.v[i] == 0.0) continue;
        int64_t base = a.lo + static_cast<int64_t>(i);
        for (const auto& [n, w] : t.entries) r.at(base + n) += a.v[i] * w;
    }
    return r;
}

}  // namespace

MomentReport restriction_moment_exact(const WeightTable& table, unsigned E) {
    if (E < 2 || E % 2 != 0)
        throw std::domain_error("restriction_moment_exact: E must be an even integer >= 2");
    MomentReport rep;
    rep.exponent = E;
    rep.method = "exact-orthogonality";
    if (table.entries.empty()) return rep;
    unsigned half = E / 2;
    int64_t span = (table.entries.back().first - table.entries.front().first + 1);
    double total = 0.0;
    if (span * static_cast<int64_t>(half) <= (1ll << 25)) {
        DenseDist dist;
        dist.lo = table.entries.front().first;
        dist.v.assign(static_cast<size_t>(span), 0.0);
        for (const auto& [n, v] : table.entries) dist.at(n) = v;
        for (unsigned i = 1; i < half; ++i) dist = conv(dist, table);
        for (double x : dist.v) total += x * x;
    } else {
        // sparse convolution keyed by exact sums; cost scales with the
        // support, not the value range
        std::map<int64_t, double> dist;
        for (const auto& [n, v] : table.entries) dist[n] += v;
        for (unsigned i = 1; i < half; ++i) {
            if (dist.size() * table.entries.size() > (1ull << 27))
                throw std::overflow_error("restriction_moment_exact: sparse convolution exceeds budget");
            std::map<int64_t, double> next;
            for (const auto& [v, wv] : dist)
                for (const auto& [n, wn] : table.entries) next[v + n] += wv * wn;
            dist = std::move(next);
        }
        for (const auto& [v, wv] : dist) total += wv * wv;
    }
    rep.value = total;
    double Nd = static_cast<double>(table.support_bound);
    rep.normalized = total / std::pow(Nd, static_cast<double>(E) - 1.0);
    return rep;
}

MomentReport restriction_moment_quadrature(const WeightTable& table, double E) {
    if (E <= 0) throw std::domain_error("restriction_moment_quadrature: E must be positive");
    MomentReport rep;
    rep.exponent = E;
    rep.method = "quadrature";
    if (table.entries.empty()) return rep;
    int64_t N = table.support_bound;
    uint64_t M = static_cast<uint64_t>(std::ceil(4.0 * E * static_cast<double>(N))) + 1;
    if (static_cast<double>(M) * static_cast<double>(table.entries.size()) > 6e9)
        throw std::overflow_error("restriction_moment_quadrature: grid budget exceeded");

    // twiddle table when it fits; direct phase evaluation otherwise
    std::vector<cplx> tw;
    if (M <= (1ull << 25)) {
        tw.resize(M);
        for (uint64_t k = 0; k < M; ++k)
            tw[k] = unit_phase(static_cast<double>(k) / static_cast<double>(M));
    }
    auto chunk = [&](size_t lo, size_t hi) {
        double part = 0.0;
        for (size_t j = lo; j < hi; ++j) {
            cplx acc{0.0, 0.0};
            for (const auto& [n, v] : table.entries) {
                uint64_t k = mulmod_u64(j, static_cast<uint64_t>(n) % M, M);
                acc += v * (tw.empty()
                                ? unit_phase(static_cast<double>(k) / static_cast<double>(M))
                                : tw[k]);
            }
            part += std::pow(std::abs(acc), E);
        }
        return part;
    };
    double sum =
        chunked_reduce<double>(M, 0.0, chunk, [](double a, double b) { return a + b; }, 256);
    rep.value = sum / static_cast<double>(M);
    rep.normalized = rep.value / std::pow(static_cast<double>(N), E - 1.0);
    return rep;
}

namespace {

// Sparse value distribution built by exact-key convolution; deterministic
// (ordered map accumulation).
std::map<int64_t, double> side_distribution(const std::vector<const WeightTable*>& tables,
                                            const std::vector<int64_t>& coeffs) {
    if (tables.size() != coeffs.size())
        throw std::invalid_argument("phi_count: coefficient/table count mismatch");
    std::map<int64_t, double> dist;
    dist[0] = 1.0;
    for (size_t i = 0; i < tables.size(); ++i) {
        if (coeffs[i] == 0) throw std::invalid_argument("phi_count: degenerate (zero) coefficient");
        std::map<int64_t, double> next;
        for (const auto& [v, wv] : dist)
            for (const auto& [n, wn] : tables[i]->entries) next[v + coeffs[i] * n] += wv * wn;
        dist = std::move(next);
    }
    return dist;
}

}  // namespace

double phi_count(const std::vector<const WeightTable*>& fs, const std::vector<int64_t>& L1,
                 const std::vector<const WeightTable*>& gs, const std::vector<int64_t>& L2) {
    if (fs.empty()) throw std::invalid_argument("phi_count: s >= 1 required");
    std::map<int64_t, double> left = side_distribution(fs, L1);
    std::map<int64_t, double> right = side_distribution(gs, L2);
    double total = 0.0;
    for (const auto& [v, wv] : left) {
        auto it = right.find(v);
        if (it != right.end()) total += wv * it->second;
    }
    return total;
}

mpz_class qz_inverse(const IntPoly& h_D, const mpz_class& Z, double eta, const mpz_class& t) {
    if (!(eta > 0.0 && eta < 1.0)) throw std::domain_error("qz_inverse: eta in (0,1)");
    IntPoly dp = h_D.derivative();
    double Zd = Z.get_d();
    for (int j = 0; j <= 100; ++j) {
        double z = eta * Zd + (Zd - eta * Zd) * j / 100.0;
        if (dp.eval_double(z) <= 0.0)
            throw std::domain_error("qz_inverse: h_D not strictly increasing on [eta Z, Z]");
    }
    mpz_class lo = mpz_class(static_cast<long>(std::ceil(eta * Zd)));
    if (lo < 1) lo = 1;
    mpz_class hi = Z;
    while (lo <= hi) {
        mpz_class mid = (lo + hi) / 2;
        mpz_class val = h_D(mid);
        if (val == t) return mid;
        if (val < t)
            lo = mid + 1;
        else
            hi = mid - 1;
    }
    return 0;
}

double nu_mass_on(const WeightTable& nu, const std::vector<int64_t>& A) {
    double total = 0.0;
    for (int64_t n : A) total += nu.at(n);
    return total;
}

cplx wtrick_S(const WTrickParams& P, uint64_t q, const mpz_class& a) {
    mpz_class Wk = P.Wkappa();
    IntPoly shifted = taylor_shift(P.h, P.b, Wk) - IntPoly::constant(P.h(P.b));
    IntPoly g = shifted.divide_exact(P.lambda);
    return restricted_complete_sum(g, Wk, P.b, q, a);
}

}  // namespace prt
