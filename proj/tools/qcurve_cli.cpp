// qcurve: parameter validation, paper-example reproduction, scalar
// decomposition, endomorphism-accelerated multiplication, model inspection,
// order machinery and benchmarks for the Q-curve endomorphism families.
//
// Exit codes: 0 pass, 1 check failure, 2 usage error.
#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qcurve/qcurve.hpp"

using namespace qcurve;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

Int parse_int(const std::string& s) {
    if (s.rfind("0x", 0) == 0 || s.rfind("-0x", 0) == 0) {
        std::string t = s;
        t.erase(t.find("0x"), 2);
        return from_hex(t);
    }
    Int n;
    if (n.set_str(s, 10) != 0 && n.set_str(s, 16) != 0)
        throw usage_error("not an integer: '" + s + "'");
    return n;
}

struct CurveOpts {
    std::string file;
    std::string p, delta, s, a4, a6;
    int d = 2;
    bool twisted = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--curve", file, "curve record file");
        cmd->add_option("--p", p, "prime p (decimal or 0x hex)");
        cmd->add_option("--delta", delta, "nonsquare Delta (default: smallest magnitude)");
        cmd->add_option("--d", d, "family degree: 1 (GLS), 2 or 3")
            ->check(CLI::IsMember({1, 2, 3}));
        cmd->add_option("--s", s, "family parameter s");
        cmd->add_option("--a4", a4, "subfield a4 (d=1 only)");
        cmd->add_option("--a6", a6, "subfield a6 (d=1 only)");
        cmd->add_flag("--twisted", twisted, "use the quadratic twist");
    }

    CurveRecord record() const {
        if (!file.empty()) return CurveRecord::load(file);
        if (p.empty()) throw usage_error("need --curve FILE or --p (plus --s / --a4,--a6)");
        CurveRecord r;
        r.p = parse_int(p);
        r.delta = delta.empty() ? default_delta(r.p) : parse_int(delta);
        r.d = d;
        r.twisted = twisted;
        if (d == 1) {
            if (a4.empty() || a6.empty()) throw usage_error("d=1 needs --a4 and --a6");
            r.gls_a4 = parse_int(a4);
            r.gls_a6 = parse_int(a6);
        } else {
            if (s.empty()) throw usage_error("d=2,3 need --s");
            r.s = parse_int(s);
        }
        return r;
    }
};

json curve_json(const CurveRecord& rec) {
    json j;
    j["p"] = to_hex(rec.p);
    j["delta"] = to_hex(rec.delta);
    j["d"] = rec.d;
    j["s"] = to_hex(rec.s);
    j["twisted"] = rec.twisted;
    if (rec.cert) {
        j["order"] = to_hex(rec.cert->order);
        j["n"] = to_hex(rec.cert->n);
        j["h"] = to_hex(rec.cert->h);
        j["r"] = to_hex(rec.cert->r);
        j["t"] = to_hex(rec.cert->t);
    }
    return j;
}

struct CheckList {
    bool all_ok = true;
    bool json_out;
    json checks = json::array();

    explicit CheckList(bool js) : json_out(js) {}

    void add(const std::string& name, bool ok, const std::string& detail = "") {
        all_ok &= ok;
        if (json_out) {
            checks.push_back({{"check", name}, {"ok", ok}, {"detail", detail}});
        } else {
            std::printf("[%s] %s%s%s\n", ok ? " OK " : "FAIL", name.c_str(),
                        detail.empty() ? "" : ": ", detail.c_str());
        }
    }
};

FamilyCurve build_with_params(const CurveRecord& rec, Rng& rng) {
    FamilyCurve F = rec.build();
    if (rec.cert) F.attach_params(rec.cert->order, rec.cert->n, rng);
    return F;
}

int cmd_validate(const CurveOpts& opts, int trials, bool js, Rng& rng) {
    CurveRecord rec = opts.record();
    CheckList out(js);
    FamilyCurve F = rec.build(); // p primality, delta nonsquare, discriminant
    out.add("p prime (64-round Miller-Rabin)", true);
    out.add("delta nonsquare mod p", true);
    out.add("curve nonsingular", true);
    if (F.degree == 2) out.add("eps_p = -legendre(-2, p)", F.eps_p == -legendre(-2, F.p()));
    if (F.degree == 3) out.add("eps_p = -legendre(-3, p)", F.eps_p == -legendre(-3, F.p()));
    if (F.degree != 1)
        out.add("sqrt(-d)^2 = -d",
                F.sqrt_md * F.sqrt_md == Fp2::from_int(-F.degree, F.curve.ctx().get()));
    if (F.degree == 3 && !F.twisted) {
        Point K = F.kernel_point();
        out.add("3-torsion kernel point at x=3", F.curve.mul(K, 3).is_infinity());
    }
    Point P = F.curve.random_point(rng);
    out.add("psi^2 = [eps d]P on a random point", F.verify_psi_square(P));
    if (rec.cert)
        out.add("certificate (" + std::to_string(trials) + " random points)",
                verify_certificate(F, *rec.cert, trials, rng));
    if (js) {
        json j = curve_json(rec);
        j["checks"] = out.checks;
        j["ok"] = out.all_ok;
        std::cout << j.dump(2) << "\n";
    }
    return out.all_ok ? 0 : 1;
}

int cmd_decompose(const CurveOpts& opts, const std::string& mstr, bool js, Rng& rng) {
    CurveRecord rec = opts.record();
    if (!rec.cert) throw usage_error("decompose needs a record with a certificate");
    FamilyCurve F = build_with_params(rec, rng);
    DecompBasis B = build_basis(F);
    Int m = mod(parse_int(mstr), B.n);
    Decomposition ab = decompose(m, B);
    if (js) {
        json j = curve_json(rec);
        j["lambda"] = to_hex(B.lambda);
        j["m"] = to_hex(m);
        j["a"] = to_hex(ab.a);
        j["b"] = to_hex(ab.b);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "m      = " << m << " (0x" << to_hex(m) << ", " << bit_length(m)
                  << " bits)\n";
        std::cout << "lambda = " << B.lambda << "\n";
        std::cout << "a      = " << ab.a << " (" << bit_length(abs(ab.a)) << " bits)\n";
        std::cout << "b      = " << ab.b << " (" << bit_length(abs(ab.b)) << " bits)\n";
    }
    if (mod(ab.a + ab.b * B.lambda, B.n) != m) throw inconsistency_error("congruence failed");
    return 0;
}

int cmd_mul(const CurveOpts& opts, const std::string& mstr, const std::string& ptstr,
            const std::string& strategy, bool count_ops, bool js, Rng& rng) {
    CurveRecord rec = opts.record();
    if (!rec.cert) throw usage_error("mul needs a record with a certificate");
    FamilyCurve F = build_with_params(rec, rng);
    Int m = parse_int(mstr);
    Point P = Point::infinity();
    if (ptstr.empty()) {
        while (P.is_infinity())
            P = F.curve.mul(F.curve.random_point(rng), F.params->h);
    } else {
        P = F.curve.parse_point(ptstr);
    }
    OpCounts cnt;
    Point R = strategy == "endo" ? mul_with_endo(F, P, m, &cnt)
                                 : F.curve.mul(P, mod(m, F.params->n), &cnt);
    if (js) {
        json j = curve_json(rec);
        j["strategy"] = strategy;
        j["point"] = P.str();
        j["result"] = R.str();
        if (count_ops) {
            j["doubles"] = cnt.doubles;
            j["adds"] = cnt.adds;
            j["psi_evals"] = cnt.psi_evals;
        }
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "P      = " << P.str() << "\n";
        std::cout << "[m]P   = " << R.str() << "\n";
        if (count_ops)
            std::cout << "ops    = " << cnt.doubles << " doubles, " << cnt.adds
                      << " adds, " << cnt.psi_evals << " psi\n";
    }
    return 0;
}

int cmd_models(const CurveOpts& opts, bool js, Rng&) {
    CurveRecord rec = opts.record();
    FamilyCurve F = rec.build();
    if (F.twisted) throw usage_error("models: use the untwisted curve");
    json j = curve_json(rec);
    CheckList out(js);
    if (F.degree == 2) {
        auto M = to_montgomery(F);
        if (M) {
            j["montgomery"] = {{"present", true},
                               {"A", M->curve().A.str()},
                               {"B", M->B().str()}};
            EdwardsModel ed(M->curve());
            j["edwards"] = {{"a", ed.curve().a.str()}, {"d", ed.curve().d.str()}};
            if (!js) {
                std::cout << "Montgomery: B y^2 = x(x^2 + A x + 1)\n  A = "
                          << M->curve().A.str() << "\n  B = " << M->B().str() << "\n";
                std::cout << "Twisted Edwards: a x1^2 + x2^2 = 1 + d x1^2 x2^2\n  a = "
                          << ed.curve().a.str() << "\n  d = " << ed.curve().d.str() << "\n";
            }
        } else {
            j["montgomery"] = {{"present", false}};
            if (!js)
                std::cout << "Montgomery: absent (2C nonsquare; the model belongs to "
                             "the quadratic twist)\n";
        }
    }
    auto Dk = to_dik(F);
    if (Dk) {
        const char* variant =
            Dk->variant() == DikModel::Variant::doubling ? "doubling" : "tripling";
        j["dik"] = {{"present", true}, {"variant", variant}, {"coeff", Dk->coeff().str()}};
        if (!js) {
            if (Dk->variant() == DikModel::Variant::doubling)
                std::cout << "DIK doubling: v^2 = u(u^2 + D u + 16D)\n  D = "
                          << Dk->coeff().str() << "\n";
            else
                std::cout << "DIK tripling: v^2 = u^3 + 3 a3 (u+1)^2\n  a3 = "
                          << Dk->coeff().str() << "\n";
        }
    } else {
        j["dik"] = {{"present", false}};
        if (!js) std::cout << "DIK: absent (required square root not in F_p^2)\n";
    }
    if (js) std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_count(const CurveOpts& opts, const std::string& method, bool slow,
              const std::string& nstr, const std::string& save, bool js, Rng& rng) {
    CurveRecord rec = opts.record();
    FamilyCurve F = rec.build();
    OrderCertificate cert;
    if (method == "exhaustive") {
        cert = certify_exhaustive(F, rng);
    } else {
        if (F.p() > (Int(1) << 40) && !slow)
            throw usage_error("BSGS at this size needs --slow (minutes of CPU and "
                              "hundreds of MB)");
        Int r = recover_r(F, rng);
        Int t = F.eps_eff() * (Int(F.degree) * r * r - 2 * F.p());
        cert.r = r;
        cert.t = t;
        cert.order = F.p() * F.p() + 1 - t;
        cert.method = OrderCertificate::Method::bsgs;
        if (!nstr.empty()) {
            cert.n = parse_int(nstr);
            cert.h = cert.order / cert.n;
            if (cert.h * cert.n != cert.order)
                throw usage_error("--n does not divide the recovered order");
        } else if (cert.order < (Int(1) << 40)) {
            auto [n, h] = choose_subgroup(cert.order);
            cert.n = n;
            cert.h = h;
        } else {
            cert.n = cert.order; // factorization unknown at this size
            cert.h = 1;
        }
    }
    if (js) {
        json j = curve_json(rec);
        j["order"] = to_hex(cert.order);
        j["n"] = to_hex(cert.n);
        j["h"] = to_hex(cert.h);
        j["r"] = to_hex(cert.r);
        j["t"] = to_hex(cert.t);
        j["method"] = method_name(cert.method);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "order = " << cert.order << "\n";
        std::cout << "t     = " << cert.t << "\n";
        std::cout << "r     = " << cert.r << "\n";
        std::cout << "n     = " << cert.n << "  h = " << cert.h << "  ("
                  << method_name(cert.method) << ")\n";
    }
    if (!save.empty()) {
        CurveRecord out = rec;
        out.cert = cert;
        out.save(save);
        if (!js) std::cout << "saved " << save << "\n";
    }
    return 0;
}

int cmd_recover_r(const CurveOpts& opts, bool slow, bool js, Rng& rng) {
    CurveRecord rec = opts.record();
    FamilyCurve F = rec.build();
    if (F.p() > (Int(1) << 40) && !slow)
        throw usage_error("recover-r at this size needs --slow");
    Int r = recover_r(F, rng);
    if (js) {
        json j = curve_json(rec);
        j["r"] = to_hex(r);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "r = " << r << "\n";
    }
    return 0;
}

int cmd_verify_cert(const std::string& file, int trials, bool js, Rng& rng) {
    CurveRecord rec = CurveRecord::load(file);
    if (!rec.cert) throw usage_error("record has no certificate");
    FamilyCurve F = rec.build();
    bool ok = verify_certificate(F, *rec.cert, trials, rng);
    if (js) {
        json j = curve_json(rec);
        j["ok"] = ok;
        j["trials"] = trials;
        std::cout << j.dump(2) << "\n";
    } else {
        std::printf("[%s] certificate (%d random points)\n", ok ? " OK " : "FAIL", trials);
    }
    return ok ? 0 : 1;
}

int cmd_bench(const CurveOpts& opts, int trials, bool js, Rng& rng) {
    CurveRecord rec = opts.record();
    if (!rec.cert) throw usage_error("bench needs a record with a certificate");
    FamilyCurve F = build_with_params(rec, rng);
    Point P = Point::infinity();
    while (P.is_infinity())
        P = F.curve.mul(F.curve.random_point(rng), F.params->h);
    std::vector<Int> ms;
    for (int i = 0; i < trials; ++i) ms.push_back(rng.below(F.params->n));

    OpCounts base, endo;
    auto tb0 = Clock::now();
    for (const Int& m : ms) F.curve.mul(P, m, &base);
    auto tb1 = Clock::now();
    for (const Int& m : ms) mul_with_endo(F, P, m, &endo, /*verify_membership=*/false);
    auto tb1e = Clock::now();

    auto ns = [](Clock::time_point a, Clock::time_point b) {
        return std::chrono::duration_cast<std::chrono::nanoseconds>(b - a).count();
    };
    double ratio = double(endo.doubles) / double(base.doubles);
    if (js) {
        json j = curve_json(rec);
        j["iterations"] = trials;
        j["baseline"] = {{"doubles", base.doubles},
                         {"adds", base.adds},
                         {"psi_evals", base.psi_evals},
                         {"wall_ns", ns(tb0, tb1)}};
        j["endo"] = {{"doubles", endo.doubles},
                     {"adds", endo.adds},
                     {"psi_evals", endo.psi_evals},
                     {"wall_ns", ns(tb1, tb1e)}};
        j["doubling_ratio"] = ratio;
        std::cout << j.dump(2) << "\n";
    } else {
        std::printf("strategy  doubles      adds         psi   wall(ns)\n");
        std::printf("baseline  %-12llu %-12llu %-5llu %lld\n",
                    (unsigned long long)base.doubles, (unsigned long long)base.adds,
                    (unsigned long long)base.psi_evals, (long long)ns(tb0, tb1));
        std::printf("endo      %-12llu %-12llu %-5llu %lld\n",
                    (unsigned long long)endo.doubles, (unsigned long long)endo.adds,
                    (unsigned long long)endo.psi_evals, (long long)ns(tb1, tb1e));
        std::printf("doubling ratio = %.4f over %d iterations\n", ratio, trials);
    }
    return 0;
}

int cmd_repro(const std::string& data_dir, int trials, bool js, Rng& rng) {
    CheckList out(js);

    // Example 1: twist-secure degree-2 curve at p = 2^80-93
    for (const char* name : {"example1.rec", "example1_twist.rec"}) {
        CurveRecord rec = CurveRecord::load(data_dir + "/" + name);
        FamilyCurve F = build_with_params(rec, rng);
        out.add(std::string(name) + ": n prime", miller_rabin(rec.cert->n, 64));
        out.add(std::string(name) + ": certificate",
                verify_certificate(F, *rec.cert, 100, rng));
        DecompBasis B = build_basis(F);
        bool okd = true;
        for (int i = 0; i < 2000; ++i) {
            Int m = rng.below(B.n);
            auto ab = decompose(m, B);
            if (mod(ab.a + ab.b * B.lambda, B.n) != m) okd = false;
            if (std::max(abs(ab.a), abs(ab.b)) > F.p() + 1) okd = false;
            auto ab2 = babai_round(m, B.e1, B.e2);
            if (ab2.a != ab.a || ab2.b != ab.b) okd = false;
        }
        out.add(std::string(name) + ": decomposition bounds (2000 scalars)", okd);
        Point P = Point::infinity();
        while (P.is_infinity())
            P = F.curve.mul(F.curve.random_point(rng), F.params->h);
        bool okm = true;
        for (int i = 0; i < 50; ++i) {
            Int m = rng.below(B.n);
            if (mul_with_endo(F, P, m, nullptr, false) != F.curve.mul(P, m)) okm = false;
        }
        out.add(std::string(name) + ": mul_with_endo = baseline (50 scalars)", okm);
    }

    // Examples 2 and 3: relation checks at 2^127-1 and 2^255-19
    for (const char* base : {"example2", "example3"}) {
        for (const char* suffix : {".rec", "_twist.rec"}) {
            std::string name = std::string(base) + suffix;
            CurveRecord rec = CurveRecord::load(data_dir + "/" + name);
            FamilyCurve F = rec.build();
            bool ok = true;
            for (int i = 0; i < trials; ++i)
                if (!F.verify_psi_square(F.curve.random_point(rng))) ok = false;
            out.add(name + ": psi^2 = [" + std::to_string(F.eps_eff() * F.degree) +
                        "]P (" + std::to_string(trials) + " points)",
                    ok);
            if (!F.twisted) {
                Point K = F.kernel_point();
                out.add(name + ": (3, C^p) has order 3",
                        F.curve.mul(K, 3).is_infinity() && !F.curve.dbl(K).is_infinity());
            }
        }
    }

    // tiny-p cross checks: GLS case plus the counting oracles
    {
        auto c11 = FieldCtx::create(11, 2);
        auto F = FamilyCurve::build_gls(c11, 1, 1, false);
        Int np = subfield_count(11, 1, 1);
        Int fixed = 0;
        for (const auto& P : enumerate_points(F.curve))
            if (F.psi(P) == P) ++fixed;
        out.add("gls: pi0 fixes p+1-t0 points", fixed == np);
        auto Ft = FamilyCurve::build_gls(c11, 1, 1, true);
        bool okg = true;
        for (const auto& P : enumerate_points(Ft.curve))
            if (Ft.psi(Ft.psi(P)) != Ft.curve.negate(P)) okg = false;
        out.add("gls: (psi')^2 = -pi on the twist", okg);
        auto ep = Ft.derive_params(exhaustive_count(Ft.curve), 13, rng);
        out.add("gls: lambda^2 = -1 (mod N)", mod(ep.lambda * ep.lambda, 13) == 12);

        auto F2 = FamilyCurve::build_e2(c11, 1, false);
        OrderCertificate cert = certify_exhaustive(F2, rng);
        out.add("tiny: exhaustive certificate verifies",
                verify_certificate(F2, cert, 20, rng));
        out.add("tiny: bsgs r = exhaustive r", recover_r(F2, rng) == cert.r);
        auto census = j_census(c11, 2);
        out.add("tiny: j census (d=2, p=11)",
                census.distinct >= 8 && census.closed_form_matches);
    }

    if (js) {
        json j;
        j["checks"] = out.checks;
        j["ok"] = out.all_ok;
        std::cout << j.dump(2) << "\n";
    }
    return out.all_ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Q-curve endomorphism families over F_p^2"};
    app.require_subcommand(1);
    app.fallthrough();
    unsigned long seed = 0x51CA8E;
    bool js = false;
    app.add_option("--seed", seed, "seed for randomized checks");
    app.add_flag("--json", js, "machine-readable output");

    CurveOpts vopts, dopts, mopts, modopts, copts, ropts, bopts;
    int vtrials = 20, certtrials = 100, btrials = 100, rtrials = 1000;
    std::string mstr, ptstr, strategy = "baseline", method = "exhaustive";
    std::string nstr, save, certfile, datadir = "data";
    bool count_ops = false, slow = false;

    auto* validate = app.add_subcommand("validate", "build a curve and run sanity checks");
    vopts.attach(validate);
    validate->add_option("--trials", vtrials, "certificate trials");

    auto* repro = app.add_subcommand("repro", "re-run the paper-example checks");
    repro->add_option("--data-dir", datadir, "directory with example records");
    repro->add_option("--trials", rtrials, "points per psi^2 relation check");

    auto* dec = app.add_subcommand("decompose", "short scalar decomposition");
    dopts.attach(dec);
    dec->add_option("-m,--m", mstr, "scalar")->required();

    auto* mul = app.add_subcommand("mul", "scalar multiplication");
    mopts.attach(mul);
    mul->add_option("-m,--m", mstr, "scalar")->required();
    mul->add_option("--point", ptstr, "point 'x,y' or 'inf' (default: random subgroup point)");
    mul->add_option("--strategy", strategy, "baseline or endo")
        ->check(CLI::IsMember({"baseline", "endo"}));
    mul->add_flag("--count-ops", count_ops, "report doubling/addition counts");

    auto* models = app.add_subcommand("models", "print model constants");
    modopts.attach(models);

    auto* count = app.add_subcommand("count", "order machinery");
    copts.attach(count);
    count->add_option("--method", method, "exhaustive or bsgs")
        ->check(CLI::IsMember({"exhaustive", "bsgs"}));
    count->add_flag("--slow", slow, "allow BSGS at cryptographic sizes");
    count->add_option("--n", nstr, "known subgroup order to embed in the certificate");
    count->add_option("--save", save, "write the certified record here");

    auto* rr = app.add_subcommand("recover-r", "recover r from the psi relation");
    ropts.attach(rr);
    rr->add_flag("--slow", slow, "allow BSGS at cryptographic sizes");

    auto* vc = app.add_subcommand("verify-cert", "verify an order certificate");
    vc->add_option("--file", certfile, "record with certificate")->required();
    vc->add_option("--trials", certtrials, "random points");

    auto* bench = app.add_subcommand("bench", "baseline vs endomorphism scalar mult");
    bopts.attach(bench);
    bench->add_option("--trials", btrials, "iterations");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    Rng rng(seed);
    try {
        if (validate->parsed()) return cmd_validate(vopts, vtrials, js, rng);
        if (repro->parsed()) return cmd_repro(datadir, rtrials, js, rng);
        if (dec->parsed()) return cmd_decompose(dopts, mstr, js, rng);
        if (mul->parsed()) return cmd_mul(mopts, mstr, ptstr, strategy, count_ops, js, rng);
        if (models->parsed()) return cmd_models(modopts, js, rng);
        if (count->parsed()) return cmd_count(copts, method, slow, nstr, save, js, rng);
        if (rr->parsed()) return cmd_recover_r(ropts, slow, js, rng);
        if (vc->parsed()) return cmd_verify_cert(certfile, certtrials, js, rng);
        if (bench->parsed()) return cmd_bench(bopts, btrials, js, rng);
    } catch (const usage_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const error& e) {
        std::cerr << "check failed: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
