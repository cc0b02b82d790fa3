// prt: desk-scale experiments around polynomial equations in prime variables:
// intersectivity certificates, auxiliary polynomials, exponential sums,
// transference weights, prime polynomial Bohr sets, and solution counting.
#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "prt/bohr.hpp"
#include "prt/expsums.hpp"
#include "prt/intersective.hpp"
#include "prt/intpoly.hpp"
#include "prt/numtheory.hpp"
#include "prt/parallel.hpp"
#include "prt/ramsey.hpp"
#include "prt/weights.hpp"

using json = nlohmann::json;
using namespace prt;

namespace {

constexpr const char* kVersion = "0.2.0";

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(uint64_t v) {
    char buf[17];
    snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::vector<mpz_class> parse_int_list(const std::string& text) {
    std::vector<mpz_class> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.emplace_back(item);
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    return out;
}

std::vector<uint64_t> parse_u64_list(const std::string& text) {
    std::vector<uint64_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stoull(item));
    }
    return out;
}

json cert_json(const PadicRootCert& c) {
    return json{{"p", c.p},   {"k", c.k},          {"z", c.z.get_str()},
                {"m_p", c.multiplicity}, {"unit", c.unit}, {"hensel", c.hensel}};
}

json verdict_json(const IntersectivityVerdict& v) {
    json j;
    switch (v.status) {
        case IntersectivityVerdict::Status::CertifiedYes:
            j["status"] = "CERTIFIED_YES";
            j["root"] = v.trivial_root;
            break;
        case IntersectivityVerdict::Status::YesUpToBound:
            j["status"] = "YES_UP_TO_BOUND";
            j["bound"] = v.bound;
            break;
        case IntersectivityVerdict::Status::No:
            j["status"] = "NO";
            j["witness"] = v.witness.get_str();
            j["witness_verified"] = v.witness_verified;
            if (v.strict_second_kind_witness != 0)
                j["strict_second_kind_witness"] = v.strict_second_kind_witness.get_str();
            break;
    }
    return j;
}

json cplx_json(const cplx& z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

struct Output {
    std::string command;
    json params;
    uint64_t seed = 0;
    json result;
    int exit_code = 0;

    int emit(const std::string& out_path, std::chrono::steady_clock::time_point t0) const {
        auto t1 = std::chrono::steady_clock::now();
        std::string payload = result.dump();
        json manifest{{"command", command},
                      {"params", params},
                      {"seed", seed},
                      {"version", kVersion},
                      {"wall_ms", std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count()},
                      {"digest", hex64(fnv1a(payload))}};
        json full{{"manifest", manifest}, {"result", result}};
        std::string text = full.dump(2);
        if (out_path.empty()) {
            std::cout << text << "\n";
        } else {
            std::string path = out_path;
            const char* dir = std::getenv("PRT_OUT_DIR");
            if (dir && !out_path.empty() && out_path.front() != '/') path = std::string(dir) + "/" + out_path;
            std::ofstream f(path);
            if (!f) {
                std::cerr << "cannot open output file " << path << "\n";
                return 1;
            }
            f << text << "\n";
        }
        return exit_code;
    }
};

}  // namespace

int main(int argc, char** argv) {
    auto t0 = std::chrono::steady_clock::now();
    CLI::App app{"prt: polynomial equations over primes, desk-scale toolkit"};
    app.set_config("--config");
    std::string out_path;
    uint64_t seed = 0;
    set_thread_count(1);
    // applied while parsing, before any subcommand callback runs
    app.add_option_function<unsigned>(
        "--threads", [](unsigned n) { set_thread_count(n); },
        "worker threads (results are thread-count independent)");
    app.add_option("--out", out_path, "write the JSON report here (PRT_OUT_DIR applies)");
    app.add_option("--seed", seed, "seed for randomized policies");

    Output out;
    out.result = json::object();

    // ---- intersective ----
    auto* cmd_inter = app.add_subcommand("intersective", "second-kind intersectivity");
    auto* cmd_icheck = cmd_inter->add_subcommand("check", "certify or refute up to a prime bound");
    std::string ipoly;
    uint64_t ibound = 100000;
    bool icerts = false;
    cmd_icheck->add_option("--poly", ipoly, "polynomial")->required();
    cmd_icheck->add_option("--bound", ibound, "prime bound");
    cmd_icheck->add_flag("--certificates", icerts, "include all per-prime certificates");
    cmd_icheck->callback([&] {
        IntPoly h = IntPoly::parse(ipoly);
        IntersectivityVerdict v = is_intersective_second_kind(h, ibound);
        out.command = "intersective check";
        out.params = {{"poly", ipoly}, {"bound", ibound}};
        out.result = verdict_json(v);
        if (v.status == IntersectivityVerdict::Status::YesUpToBound) {
            out.result["certificate_count"] = v.certificates.size();
            if (icerts) {
                json cs = json::array();
                for (const auto& c : v.certificates) cs.push_back(cert_json(c));
                out.result["certificates"] = std::move(cs);
            } else if (!v.certificates.empty()) {
                out.result["first_certificate"] = cert_json(v.certificates.front());
            }
        }
        out.exit_code = v.is_no() ? 2 : 0;
    });

    // ---- auxpoly ----
    auto* cmd_aux = app.add_subcommand("auxpoly", "auxiliary intersective data lambda(D), r_D, h_D");
    std::string apoly;
    uint64_t aD = 1, aDmax = 0;
    cmd_aux->add_option("--poly", apoly, "polynomial")->required();
    cmd_aux->add_option("--D", aD, "modulus D");
    cmd_aux->add_option("--Dmax", aDmax, "scan 1..Dmax and report the content bound");
    cmd_aux->callback([&] {
        IntPoly h = IntPoly::parse(apoly);
        out.command = "auxpoly";
        out.params = {{"poly", apoly}, {"D", aD}, {"Dmax", aDmax}};
        if (aDmax > 0) {
            ContentScan scan = content_bound_scan(h, aDmax);
            out.result["max_content"] = scan.max_content.get_str();
            json per = json::object();
            for (const auto& [D, c] : scan.content) per[std::to_string(D)] = c.get_str();
            out.result["content"] = std::move(per);
        } else {
            AuxPolyData aux = aux_poly(h, mpz_class(static_cast<unsigned long>(aD)));
            out.result = {{"D", aux.D.get_str()},
                          {"lambda", aux.lambda.get_str()},
                          {"r_D", aux.r_D.get_str()},
                          {"h_D", aux.h_D.to_coeff_string()}};
        }
    });

    // ---- expsum ----
    auto* cmd_exp = app.add_subcommand("expsum", "exponential sums over primes and residues");
    auto* cmd_complete = cmd_exp->add_subcommand("complete", "complete sum S(q,a;m)");
    std::string epoly = "0,0,1";
    uint64_t eq = 1;
    long ea = 0, em = 1, eb = 0, eQ = 1;
    cmd_complete->add_option("--poly", epoly, "f");
    cmd_complete->add_option("--q", eq)->required();
    cmd_complete->add_option("--a", ea)->required();
    cmd_complete->add_option("--m", em, "progression modulus");
    cmd_complete->add_option("--b", eb, "progression residue");
    cmd_complete->add_option("--Q", eQ, "phase denominator scale");
    cmd_complete->callback([&] {
        CompleteSumSpec cs;
        cs.f = IntPoly::parse(epoly);
        cs.q = eq;
        cs.a = ea;
        cs.m = em;
        cs.b = eb;
        cs.Q = eQ;
        cplx v = complete_sum(cs);
        out.command = "expsum complete";
        out.params = {{"poly", epoly}, {"q", eq}, {"a", ea}, {"m", em}, {"b", eb}, {"Q", eQ}};
        out.result = cplx_json(v);
        out.result["abs"] = std::abs(v);
    });

    auto* cmd_weyl = cmd_exp->add_subcommand("weyl", "prime Weyl sum");
    std::string wpoly = "0,0,1", wweight = "log";
    double wtheta = 0.0;
    uint64_t wP = 100000;
    long wlambda = 1, wm = 1, wb = 0;
    cmd_weyl->add_option("--poly", wpoly, "polynomial (coefficients or product form)");
    cmd_weyl->add_option("--theta", wtheta)->required();
    cmd_weyl->add_option("--P", wP, "range bound");
    cmd_weyl->add_option("--lambda", wlambda, "divisor scale");
    cmd_weyl->add_option("--m", wm, "progression modulus");
    cmd_weyl->add_option("--b", wb, "progression residue");
    cmd_weyl->add_option("--weight", wweight, "unit|log|hprime|hprime_log");
    bool wraw = false;
    cmd_weyl->add_flag("--raw-phase", wraw, "phase uses h(p) instead of h(p)-h(b)");
    cmd_weyl->callback([&] {
        WeylSpec ws;
        ws.h = IntPoly::parse(wpoly);
        ws.theta = wtheta;
        ws.P = wP;
        ws.lambda = wlambda;
        ws.m = wm;
        ws.b = wb;
        ws.subtract_fb = !wraw;
        if (wweight == "unit") ws.weight = WeylWeight::Unit;
        else if (wweight == "log") ws.weight = WeylWeight::Log;
        else if (wweight == "hprime") ws.weight = WeylWeight::Deriv;
        else if (wweight == "hprime_log") ws.weight = WeylWeight::DerivLog;
        else throw CLI::ValidationError("--weight", "unknown weight");
        PrimeTable pt = sieve_primes(wP);
        cplx v = prime_weyl_sum(ws, pt);
        out.command = "expsum weyl";
        out.params = {{"poly", wpoly}, {"theta", wtheta}, {"P", wP},     {"lambda", wlambda},
                      {"m", wm},       {"b", wb},         {"weight", wweight}};
        out.result = cplx_json(v);
        out.result["abs"] = std::abs(v);
    });

    auto* cmd_pred = cmd_exp->add_subcommand("predict", "major-arc prediction vs direct sum");
    std::string ppoly = "0,0,1", pweight = "log";
    double ptheta = 0.0;
    uint64_t pP = 100000, pq = 1;
    long pa = 0, pm = 1, pb = 0, plambda = 1;
    cmd_pred->add_option("--poly", ppoly, "polynomial (coefficients or product form)");
    cmd_pred->add_option("--theta", ptheta)->required();
    cmd_pred->add_option("--q", pq)->required();
    cmd_pred->add_option("--a", pa)->required();
    cmd_pred->add_option("--P", pP, "range bound");
    cmd_pred->add_option("--m", pm, "progression modulus");
    cmd_pred->add_option("--b", pb, "progression residue");
    cmd_pred->add_option("--lambda", plambda, "divisor scale");
    cmd_pred->add_option("--weight", pweight, "log|hprime_log");
    cmd_pred->callback([&] {
        WeylSpec ws;
        ws.h = IntPoly::parse(ppoly);
        ws.theta = ptheta;
        ws.P = pP;
        ws.lambda = plambda;
        ws.m = pm;
        ws.b = pb;
        ws.weight = (pweight == "hprime_log") ? WeylWeight::DerivLog : WeylWeight::Log;
        PrimeTable pt = sieve_primes(pP);
        cplx direct = prime_weyl_sum(ws, pt);
        cplx pred = major_arc_prediction(ws, pq, mpz_class(pa));
        out.command = "expsum predict";
        out.params = {{"poly", ppoly}, {"theta", ptheta}, {"q", pq}, {"a", pa},
                      {"P", pP},       {"m", pm},         {"b", pb}, {"weight", pweight}};
        out.result = {{"direct", cplx_json(direct)},
                      {"prediction", cplx_json(pred)},
                      {"abs_direct", std::abs(direct)},
                      {"abs_prediction", std::abs(pred)}};
        if (std::abs(pred) > 0)
            out.result["relative_error"] = std::abs(direct - pred) / std::abs(pred);
    });

    // ---- arc ----
    auto* cmd_arc = app.add_subcommand("arc", "major/minor arc classification");
    auto* cmd_classify = cmd_arc->add_subcommand("classify", "classify a phase");
    double calpha = 0.0, csigma = 0.0, cX = 1e6;
    unsigned cd = 2;
    cmd_classify->add_option("--alpha", calpha)->required();
    cmd_classify->add_option("--X", cX, "range bound");
    cmd_classify->add_option("--d", cd, "polynomial degree");
    cmd_classify->add_option("--sigma", csigma, "sigma_d (default 2d+10)");
    cmd_classify->callback([&] {
        ArcParams params = (csigma > 0.0) ? ArcParams::with_sigma(cd, cX, csigma)
                                          : ArcParams::make(cd, cX);
        double T = params.log_power_threshold();
        ArcClassification c = classify_arc(calpha, params);
        out.command = "arc classify";
        out.params = {{"alpha", calpha}, {"X", cX}, {"d", cd}, {"sigma", params.sigma}};
        out.result = {{"kind", c.major ? "major" : "minor"}, {"threshold", T}};
        if (std::pow(cX, 0.25) <= T)
            out.result["warning"] = "(log X)^(2Cd) >= X^(1/4): the dichotomy degenerates at this scale";
        if (c.major) {
            out.result["q"] = c.q;
            out.result["a"] = c.a.get_str();
        }
    });

    // ---- weights ----
    auto* cmd_weights = app.add_subcommand("weights", "W-trick weights and measurements");
    auto* cmd_build = cmd_weights->add_subcommand("build", "build nu/mu and serialize");
    std::string bpoly = "-19,0,0,1", btable = "nu", btable_out;
    unsigned bw = 2, bgamma = 2;
    uint64_t bX = 10000, bD = 0;
    cmd_build->add_option("--poly", bpoly, "polynomial (coefficients or product form)");
    cmd_build->add_option("--w", bw, "smoothness cutoff");
    cmd_build->add_option("--gamma", bgamma, "primorial exponent");
    cmd_build->add_option("--X", bX, "range bound");
    cmd_build->add_option("--table", btable, "nu|mu|nu_D|mu_D");
    cmd_build->add_option("--D", bD, "modulus for nu_D/mu_D");
    cmd_build->add_option("--table-out", btable_out, "serialize the table to this file");
    cmd_build->callback([&] {
        IntPoly h = IntPoly::parse(bpoly);
        out.command = "weights build";
        out.params = {{"poly", bpoly}, {"w", bw}, {"gamma", bgamma}, {"X", bX}, {"table", btable}, {"D", bD}};
        WeightTable table;
        if (btable == "nu" || btable == "mu") {
            mpz_class X = align_X(h, bw, bgamma, bX);
            WTrickParams params = build_wtrick(h, bw, bgamma, 1, X);
            if (btable == "nu") {
                PrimeTable pt = sieve_primes(bX);
                table = build_nu(params, pt);
            } else {
                table = build_mu(params);
            }
            out.result["wtrick"] = {{"W", params.W.get_str()},   {"D", params.D.get_str()},
                                    {"lambda", params.lambda.get_str()}, {"r_D", params.r_D.get_str()},
                                    {"b", params.b.get_str()},   {"kappa", params.kappa.get_str()},
                                    {"X", params.X.get_str()},   {"Z", params.Z.get_str()},
                                    {"N", params.N.get_str()}};
        } else if (btable == "nu_D" || btable == "mu_D") {
            if (bD == 0) throw CLI::ValidationError("--D", "required for nu_D/mu_D");
            mpz_class D(static_cast<unsigned long>(bD));
            mpz_class rD = compute_rD(h, D);
            mpz_class X = bX - (((mpz_class(bX) - rD) % D + D) % D);
            if (btable == "nu_D") {
                PrimeTable pt = sieve_primes(bX);
                table = build_nu_D(h, D, X, pt);
            } else {
                table = build_mu_D(h, D, X);
            }
        } else {
            throw CLI::ValidationError("--table", "unknown table kind");
        }
        std::string params_hash = hex64(fnv1a(out.params.dump()));
        out.result["support"] = table.entries.size();
        out.result["mass"] = table.mass();
        out.result["N"] = table.support_bound;
        if (!btable_out.empty()) {
            std::ofstream f(btable_out);
            f << table.to_json(params_hash) << "\n";
            out.result["table_file"] = btable_out;
        }
    });

    auto* cmd_decay = cmd_weights->add_subcommand("decay", "Fourier-decay measurement of nu");
    std::string dpoly = "-19,0,0,1";
    unsigned dw = 2, dgamma = 2, dsamples = 128;
    uint64_t dX = 10000;
    cmd_decay->add_option("--poly", dpoly, "polynomial (coefficients or product form)");
    cmd_decay->add_option("--w", dw, "smoothness cutoff");
    cmd_decay->add_option("--gamma", dgamma, "primorial exponent");
    cmd_decay->add_option("--X", dX, "range bound");
    cmd_decay->add_option("--samples", dsamples, "grid sample count");
    cmd_decay->callback([&] {
        IntPoly h = IntPoly::parse(dpoly);
        mpz_class X = align_X(h, dw, dgamma, dX);
        WTrickParams params = build_wtrick(h, dw, dgamma, 1, X);
        PrimeTable pt = sieve_primes(dX);
        WeightTable nu = build_nu(params, pt);
        DecayReport rep = decay_report(nu, nu.support_bound, dsamples);
        out.command = "weights decay";
        out.params = {{"poly", dpoly}, {"w", dw}, {"gamma", dgamma}, {"X", dX}, {"samples", dsamples}};
        out.result = {{"max_deviation", rep.max_deviation}, {"at_zero", rep.at_zero},
                      {"N", nu.support_bound}, {"mass", nu.mass()}};
    });

    auto* cmd_moment = cmd_weights->add_subcommand("moment", "restriction moment of a table");
    std::string mtable_file, mmethod = "both";
    double mE = 4.0;
    cmd_moment->add_option("--table-file", mtable_file, "serialized table")->required();
    cmd_moment->add_option("--E", mE, "moment exponent");
    cmd_moment->add_option("--method", mmethod, "exact|quadrature|both");
    cmd_moment->callback([&] {
        std::ifstream f(mtable_file);
        if (!f) throw CLI::ValidationError("--table-file", "cannot open file");
        std::stringstream ss;
        ss << f.rdbuf();
        WeightTable table = WeightTable::from_json(ss.str());
        out.command = "weights moment";
        out.params = {{"table_file", mtable_file}, {"E", mE}, {"method", mmethod}};
        // with "both", an infeasible method reports its refusal instead of
        // failing the run, as long as the other one succeeds
        bool any = false;
        if (mmethod == "exact" || mmethod == "both") {
            try {
                MomentReport r = restriction_moment_exact(table, static_cast<unsigned>(mE));
                out.result["exact"] = {{"value", r.value}, {"normalized", r.normalized}};
                any = true;
            } catch (const std::exception& e) {
                if (mmethod == "exact") throw;
                out.result["exact"] = {{"error", e.what()}};
            }
        }
        if (mmethod == "quadrature" || mmethod == "both") {
            try {
                MomentReport r = restriction_moment_quadrature(table, mE);
                out.result["quadrature"] = {{"value", r.value}, {"normalized", r.normalized}};
                any = true;
            } catch (const std::exception& e) {
                if (mmethod == "quadrature") throw;
                out.result["quadrature"] = {{"error", e.what()}};
            }
        }
        if (!any) throw std::runtime_error("weights moment: no method applicable to this table");
    });

    auto* cmd_vanish = cmd_weights->add_subcommand("vanish", "S(q,a) vanishing check for gcd(q,W)>1");
    std::string vpoly = "-19,0,0,1";
    unsigned vw = 2, vgamma = 2;
    uint64_t vX = 10000, vqmax = 50;
    cmd_vanish->add_option("--poly", vpoly, "polynomial (coefficients or product form)");
    cmd_vanish->add_option("--w", vw, "smoothness cutoff");
    cmd_vanish->add_option("--gamma", vgamma, "primorial exponent");
    cmd_vanish->add_option("--X", vX, "range bound");
    cmd_vanish->add_option("--qmax", vqmax, "modulus bound");
    cmd_vanish->callback([&] {
        IntPoly h = IntPoly::parse(vpoly);
        mpz_class X = align_X(h, vw, vgamma, vX);
        WTrickParams params = build_wtrick(h, vw, vgamma, 1, X);
        double worst = 0.0;
        unsigned checked = 0;
        for (uint64_t q = 2; q <= vqmax; ++q) {
            mpz_class g;
            mpz_class Q(static_cast<unsigned long>(q));
            mpz_gcd(g.get_mpz_t(), Q.get_mpz_t(), params.W.get_mpz_t());
            if (g == 1) continue;
            for (mpz_class a = 1; a < Q; ++a) {
                mpz_class ga;
                mpz_gcd(ga.get_mpz_t(), a.get_mpz_t(), Q.get_mpz_t());
                if (ga != 1) continue;
                worst = std::max(worst, std::abs(wtrick_S(params, q, a)));
                ++checked;
            }
        }
        out.command = "weights vanish";
        out.params = {{"poly", vpoly}, {"w", vw}, {"gamma", vgamma}, {"X", vX}, {"qmax", vqmax}};
        out.result = {{"checked", checked}, {"max_abs", worst}, {"pass", worst < 1e-9}};
        out.exit_code = worst < 1e-9 ? 0 : 2;
    });

    // ---- bohr ----
    auto* cmd_bohr = app.add_subcommand("bohr", "prime polynomial Bohr sets");
    auto* cmd_census = cmd_bohr->add_subcommand("census", "membership census");
    std::string hpoly = "0,0,1", halpha = "0.0";
    uint64_t hD = 1, hP = 100000;
    double hrho = 0.1;
    cmd_census->add_option("--poly", hpoly, "polynomial (coefficients or product form)");
    cmd_census->add_option("--D", hD, "auxiliary modulus");
    cmd_census->add_option("--alpha", halpha, "comma list");
    cmd_census->add_option("--rho", hrho, "Bohr radius in (0,1)");
    cmd_census->add_option("--P", hP, "range bound");
    auto census_json = [](const BohrCensus& c) {
        return json{{"member_count", c.member_count},
                    {"complement_count", c.complement_count},
                    {"eligible_count", c.eligible_count},
                    {"log_mass", c.log_mass},
                    {"complement_log_mass", c.complement_log_mass},
                    {"eligible_log_mass", c.eligible_log_mass}};
    };
    cmd_census->callback([&] {
        BohrSpec spec = make_bohr_spec(IntPoly::parse(hpoly), mpz_class(static_cast<unsigned long>(hD)),
                                       parse_double_list(halpha), hrho, hP);
        PrimeTable pt = sieve_primes(hP);
        BohrCensus c = bohr_enumerate(spec, pt);
        out.command = "bohr census";
        out.params = {{"poly", hpoly}, {"D", hD}, {"alpha", halpha}, {"rho", hrho}, {"P", hP}};
        out.result = census_json(c);
    });

    auto* cmd_certify = cmd_bohr->add_subcommand("certify", "density certificate vs the recursion floor");
    cmd_certify->add_option("--poly", hpoly, "polynomial (coefficients or product form)");
    cmd_certify->add_option("--D", hD, "auxiliary modulus");
    cmd_certify->add_option("--alpha", halpha, "phase list (comma separated)");
    cmd_certify->add_option("--rho", hrho, "Bohr radius in (0,1)");
    cmd_certify->add_option("--P", hP, "range bound");
    cmd_certify->callback([&] {
        BohrSpec spec = make_bohr_spec(IntPoly::parse(hpoly), mpz_class(static_cast<unsigned long>(hD)),
                                       parse_double_list(halpha), hrho, hP);
        PrimeTable pt = sieve_primes(hP);
        DensityReport rep = density_certificate(spec, pt);
        out.command = "bohr certify";
        out.params = {{"poly", hpoly}, {"D", hD}, {"alpha", halpha}, {"rho", hrho}, {"P", hP}};
        out.result = {{"measured", rep.measured},
                      {"floor", rep.floor_value},
                      {"exponent", rep.exponent},
                      {"pass", rep.pass},
                      {"census", census_json(rep.census)}};
        out.exit_code = rep.pass ? 0 : 2;
    });

    auto* cmd_harman = cmd_bohr->add_subcommand("harman", "dichotomy witness search");
    cmd_harman->add_option("--poly", hpoly, "polynomial (coefficients or product form)");
    cmd_harman->add_option("--D", hD, "auxiliary modulus");
    cmd_harman->add_option("--alpha", halpha, "phase list (comma separated)");
    cmd_harman->add_option("--rho", hrho, "Bohr radius in (0,1)");
    cmd_harman->add_option("--P", hP, "range bound");
    cmd_harman->callback([&] {
        BohrSpec spec = make_bohr_spec(IntPoly::parse(hpoly), mpz_class(static_cast<unsigned long>(hD)),
                                       parse_double_list(halpha), hrho, hP);
        PrimeTable pt = sieve_primes(hP);
        HarmanWitness w = harman_search(spec, pt);
        out.command = "bohr harman";
        out.params = {{"poly", hpoly}, {"D", hD}, {"alpha", halpha}, {"rho", hrho}, {"P", hP}};
        out.result = {{"degenerate", w.degenerate},
                      {"m", w.m},
                      {"sum", cplx_json(w.sum_value)},
                      {"lhs", w.lhs},
                      {"rhs", w.rhs},
                      {"inequality_holds", w.inequality_holds}};
    });

    auto* cmd_expo = cmd_bohr->add_subcommand("exponent", "density recursion exponent E(K,d)");
    unsigned xK = 1, xd = 2;
    cmd_expo->add_option("--K", xK)->required();
    cmd_expo->add_option("--d", xd)->required();
    cmd_expo->callback([&] {
        out.command = "bohr exponent";
        out.params = {{"K", xK}, {"d", xd}};
        out.result = {{"exponent", delta_exponent(xK, xd)}};
    });

    // ---- regular ----
    auto* cmd_reg = app.add_subcommand("regular", "partition/density regularity verdicts");
    auto* cmd_verdict = cmd_reg->add_subcommand("verdict", "decide PR and DR");
    std::string ra, rpoly;
    std::string rb = "0";
    uint64_t rbound = 1000;
    cmd_verdict->add_option("--a", ra, "comma list of coefficients")->required();
    cmd_verdict->add_option("--b", rb, "right-hand side");
    cmd_verdict->add_option("--poly", rpoly, "polynomial h")->required();
    cmd_verdict->add_option("--bound", rbound, "intersectivity bound");
    cmd_verdict->callback([&] {
        EquationSpec spec;
        spec.a = parse_int_list(ra);
        spec.b = mpz_class(rb);
        spec.h = IntPoly::parse(rpoly);
        RegularityVerdict v = pr_verdict(spec, rbound);
        out.command = "regular verdict";
        out.params = {{"a", ra}, {"b", rb}, {"poly", rpoly}, {"bound", rbound}};
        out.result["pr"] = v.pr;
        out.result["dr"] = v.dr;
        if (v.pr) {
            out.result["I"] = v.I;
            out.result["m"] = v.m.get_str();
            out.result["shift_verdict"] = verdict_json(v.shift_verdict);
        } else {
            out.result["reason"] = v.pr_reason;
        }
        out.exit_code = v.pr ? 0 : 2;
    });

    auto* cmd_thresh = cmd_reg->add_subcommand("threshold", "variable-count thresholds");
    unsigned td = 2;
    cmd_thresh->add_option("--d", td)->required();
    cmd_thresh->callback([&] {
        ThresholdReport r = s0_threshold(td);
        out.command = "regular threshold";
        out.params = {{"d", td}};
        out.result = {{"d", r.d}, {"T_upper", r.T_upper}, {"s0_upper", r.s0_upper}, {"s0_lower", r.s0_lower}};
    });

    auto* cmd_obstruct = cmd_reg->add_subcommand("obstruction", "smallest modulus obstruction");
    std::string oa, opoly;
    std::string ob = "0";
    uint64_t obound = 1000;
    cmd_obstruct->add_option("--a", oa)->required();
    cmd_obstruct->add_option("--b", ob, "progression residue");
    cmd_obstruct->add_option("--poly", opoly)->required();
    cmd_obstruct->add_option("--bound", obound, "search bound");
    cmd_obstruct->callback([&] {
        auto w = obstruction_witness(parse_int_list(oa), mpz_class(ob), IntPoly::parse(opoly), obound);
        out.command = "regular obstruction";
        out.params = {{"a", oa}, {"b", ob}, {"poly", opoly}, {"bound", obound}};
        if (w) {
            out.result = {{"found", true}, {"witness", w->get_str()}};
            out.exit_code = 2;
        } else {
            out.result = {{"found", false}};
        }
    });

    // ---- count ----
    auto* cmd_count = app.add_subcommand("count", "solution counting");
    auto* cmd_exact = cmd_count->add_subcommand("exact", "S(P_N) with pairwise-distinct entries");
    std::string xa, xpoly, xladder, xcsv;
    std::string xb = "0";
    uint64_t xN = 1000;
    cmd_exact->add_option("--a", xa)->required();
    cmd_exact->add_option("--b", xb, "progression residue");
    cmd_exact->add_option("--poly", xpoly)->required();
    cmd_exact->add_option("--N", xN, "prime range bound");
    cmd_exact->add_option("--ladder", xladder, "comma list of N values");
    cmd_exact->add_option("--csv", xcsv, "write the ladder as CSV (N,count,ratio)");
    cmd_exact->callback([&] {
        EquationSpec spec;
        spec.a = parse_int_list(xa);
        spec.b = mpz_class(xb);
        spec.h = IntPoly::parse(xpoly);
        out.command = "count exact";
        out.params = {{"a", xa}, {"b", xb}, {"poly", xpoly}, {"N", xN}, {"ladder", xladder}};
        std::vector<uint64_t> Ns = xladder.empty() ? std::vector<uint64_t>{xN} : parse_u64_list(xladder);
        uint64_t maxN = *std::max_element(Ns.begin(), Ns.end());
        PrimeTable pt = sieve_primes(maxN);
        json ladder = json::array();
        std::ostringstream csv;
        csv << "N,count,ratio\n";
        const unsigned d = static_cast<unsigned>(spec.h.degree());
        for (uint64_t N : Ns) {
            std::vector<uint64_t> A;
            for (uint64_t p : pt.primes)
                if (p <= N) A.push_back(p);
            uint64_t c = count_solutions(A, spec);
            double ratio = static_cast<double>(c) *
                           std::pow(static_cast<double>(N), static_cast<double>(d)) *
                           std::pow(std::log(static_cast<double>(N)) / static_cast<double>(N),
                                    static_cast<double>(spec.s()));
            ladder.push_back({{"N", N}, {"count", c}, {"ratio", ratio}});
            csv << N << "," << c << "," << ratio << "\n";
        }
        out.result["ladder"] = std::move(ladder);
        if (Ns.size() > 1) {
            // scaling diagnostic: normalized ratios stable within factor 4
            double mx = 0.0, mn = std::numeric_limits<double>::infinity();
            bool all_positive = true;
            for (const auto& row : out.result["ladder"]) {
                double r = row["ratio"].get<double>();
                mx = std::max(mx, r);
                mn = std::min(mn, r);
                all_positive &= row["count"].get<uint64_t>() > 0;
            }
            double spread = (mn > 0.0) ? mx / mn : std::numeric_limits<double>::infinity();
            out.result["ratio_spread"] = spread;
            out.result["scaling_pass"] = all_positive && spread <= 4.0;
        }
        if (!xcsv.empty()) {
            std::ofstream f(xcsv);
            f << csv.str();
            out.result["csv_file"] = xcsv;
        }
    });

    auto* cmd_mono = cmd_count->add_subcommand("mono", "per-color monochromatic counts");
    std::string ca, cpoly, cpolicy = "random";
    std::string cb = "0";
    uint64_t cN = 1000, cmod = 2;
    unsigned cr = 2;
    cmd_mono->add_option("--a", ca)->required();
    cmd_mono->add_option("--b", cb, "progression residue");
    cmd_mono->add_option("--poly", cpoly)->required();
    cmd_mono->add_option("--N", cN, "prime range bound");
    cmd_mono->add_option("--colors", cr, "number of color classes");
    cmd_mono->add_option("--policy", cpolicy, "random|residue|blocks");
    cmd_mono->add_option("--modulus", cmod, "for the residue policy");
    std::string csplit, cfile;
    cmd_mono->add_option("--split", csplit,
                         "zero-sum subset indices for the mixed count (default: from the verdict)");
    cmd_mono->add_option("--coloring-file", cfile,
                         "JSON coloring: {policy, r, seed} or {r, assignment:{prime:color}}");
    cmd_mono->callback([&] {
        EquationSpec spec;
        spec.a = parse_int_list(ca);
        spec.b = mpz_class(cb);
        spec.h = IntPoly::parse(cpoly);
        PrimeTable pt = sieve_primes(cN);
        std::vector<uint64_t> primes;
        for (uint64_t p : pt.primes)
            if (p <= cN) primes.push_back(p);
        Coloring col;
        if (!cfile.empty()) {
            std::ifstream f(cfile);
            if (!f) throw CLI::ValidationError("--coloring-file", "cannot open file");
            json cj = json::parse(f);
            if (cj.contains("assignment")) {
                col.r = cj.at("r").get<unsigned>();
                col.policy = "explicit";
                for (const auto& [key, val] : cj.at("assignment").items()) {
                    unsigned color = val.get<unsigned>();
                    if (color >= col.r) throw CLI::ValidationError("--coloring-file", "color out of range");
                    col.assignment[std::stoull(key)] = color;
                }
            } else {
                std::string pol = cj.at("policy").get<std::string>();
                unsigned r = cj.at("r").get<unsigned>();
                uint64_t sd = cj.value("seed", seed);
                if (pol == "random") col = make_random_coloring(primes, r, sd);
                else if (pol == "residue") col = make_residue_coloring(primes, cj.value("modulus", cmod));
                else if (pol == "blocks") col = make_block_coloring(primes, r);
                else throw CLI::ValidationError("--coloring-file", "unknown policy in file");
            }
        } else if (cpolicy == "random") col = make_random_coloring(primes, cr, seed);
        else if (cpolicy == "residue") col = make_residue_coloring(primes, cmod);
        else if (cpolicy == "blocks") col = make_block_coloring(primes, cr);
        else throw CLI::ValidationError("--policy", "unknown policy");
        // when the PR criterion holds, also run the mixed two-sided count
        // with the linear forms split at a zero-sum subset (the verdict's I
        // unless --split overrides it)
        RegularityVerdict rv = pr_verdict(spec, 1000);
        std::vector<unsigned> split_idx;
        if (!csplit.empty()) {
            for (const auto& v : parse_u64_list(csplit)) split_idx.push_back(static_cast<unsigned>(v));
            mpz_class si = 0;
            for (unsigned idx : split_idx) {
                if (idx < 1 || idx > spec.s()) throw CLI::ValidationError("--split", "index out of range");
                si += spec.a[idx - 1];
            }
            if (si != 0) throw CLI::ValidationError("--split", "subset does not sum to zero");
        } else if (rv.pr) {
            split_idx = rv.I;
        }
        ColorReport rep = color_experiment(cN, col, spec, pt, split_idx.empty() ? nullptr : &split_idx);
        out.command = "count mono";
        out.params = {{"a", ca}, {"b", cb},       {"poly", cpoly},     {"N", cN},
                      {"colors", col.r}, {"policy", cpolicy}, {"modulus", cmod}};
        out.seed = seed;
        out.result = {{"class_sizes", rep.class_sizes},
                      {"counts", rep.counts},
                      {"ratios", rep.ratios},
                      {"best_class", rep.best_class},
                      {"total_count", rep.total_count}};
        if (!rep.mixed_counts.empty()) {
            out.result["mixed_counts"] = rep.mixed_counts;
            out.result["mixed_ratios"] = rep.mixed_ratios;
        }
    });

    auto* cmd_dense = cmd_count->add_subcommand("dense", "dense-subset counts");
    std::string da, dpoly2, dpolicy = "random";
    std::string db = "0";
    uint64_t dN = 1000;
    double ddelta = 0.5;
    cmd_dense->add_option("--a", da)->required();
    cmd_dense->add_option("--b", db, "progression residue");
    cmd_dense->add_option("--poly", dpoly2)->required();
    cmd_dense->add_option("--N", dN, "prime range bound");
    cmd_dense->add_option("--delta", ddelta, "density in (0,1]");
    cmd_dense->add_option("--policy", dpolicy, "random|top|ap");
    cmd_dense->callback([&] {
        EquationSpec spec;
        spec.a = parse_int_list(da);
        spec.b = mpz_class(db);
        spec.h = IntPoly::parse(dpoly2);
        PrimeTable pt = sieve_primes(dN);
        DenseReport rep = dense_experiment(dN, ddelta, dpolicy, spec, pt, seed);
        out.command = "count dense";
        out.params = {{"a", da}, {"b", db}, {"poly", dpoly2}, {"N", dN}, {"delta", ddelta}, {"policy", dpolicy}};
        out.seed = seed;
        out.result = {{"count", rep.count}, {"ratio", rep.ratio}, {"subset_size", rep.subset_size}};
    });

    app.require_subcommand(1);
    // global options may appear after subcommand arguments
    std::function<void(CLI::App*)> allow_fallthrough = [&](CLI::App* a) {
        for (CLI::App* sc : a->get_subcommands([](const CLI::App*) { return true; })) {
            sc->fallthrough();
            allow_fallthrough(sc);
        }
    };
    allow_fallthrough(&app);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return out.emit(out_path, t0);
}
