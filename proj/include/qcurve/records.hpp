#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "qcurve/counting.hpp"

namespace qcurve {

/// Parsed curve description: everything needed to rebuild a FamilyCurve,
/// plus an optional order certificate. Serializes as a versioned plain-text
/// record, one key per line, big integers in hex.
struct CurveRecord {
    Int p;
    Int delta; // as given (signed); reduced when building the context
    int d = 2;
    Int s = 0;
    Int gls_a4 = 0, gls_a6 = 0; // d = 1 only
    bool twisted = false;
    std::optional<std::string> mu; // serialized canonical twisting nonsquare
    std::optional<OrderCertificate> cert;

    static constexpr const char* kMagic = "qcurve-record 1";

    std::string write() const {
        std::ostringstream o;
        o << kMagic << "\n";
        o << "d = " << d << "\n";
        o << "p = " << to_hex(p) << "\n";
        o << "delta = " << to_hex(delta) << "\n";
        if (d == 1) {
            o << "a4 = " << to_hex(gls_a4) << "\n";
            o << "a6 = " << to_hex(gls_a6) << "\n";
        } else {
            o << "s = " << to_hex(s) << "\n";
        }
        o << "twisted = " << (twisted ? 1 : 0) << "\n";
        if (mu) o << "mu = " << *mu << "\n";
        if (cert) {
            o << "order = " << to_hex(cert->order) << "\n";
            o << "n = " << to_hex(cert->n) << "\n";
            o << "h = " << to_hex(cert->h) << "\n";
            o << "r = " << to_hex(cert->r) << "\n";
            o << "t = " << to_hex(cert->t) << "\n";
            o << "method = " << method_name(cert->method) << "\n";
        }
        return o.str();
    }

    static CurveRecord parse(const std::string& text) {
        std::istringstream in(text);
        std::string line;
        if (!std::getline(in, line) || trim(line) != kMagic)
            throw usage_error("not a qcurve record (bad or missing version line)");
        std::map<std::string, std::string> kv;
        while (std::getline(in, line)) {
            std::string t = trim(line);
            if (t.empty() || t[0] == '#') continue;
            auto eq = t.find('=');
            if (eq == std::string::npos) throw usage_error("bad record line: '" + t + "'");
            kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
        }
        auto need = [&](const std::string& k) -> const std::string& {
            auto it = kv.find(k);
            if (it == kv.end()) throw usage_error("record is missing key '" + k + "'");
            return it->second;
        };
        CurveRecord r;
        r.d = std::stoi(need("d"));
        r.p = from_hex(need("p"));
        r.delta = from_hex(need("delta"));
        if (r.d == 1) {
            r.gls_a4 = from_hex(need("a4"));
            r.gls_a6 = from_hex(need("a6"));
        } else {
            r.s = from_hex(need("s"));
        }
        r.twisted = need("twisted") == "1";
        if (kv.count("mu")) r.mu = kv["mu"];
        if (kv.count("order")) {
            OrderCertificate c;
            c.order = from_hex(need("order"));
            c.n = from_hex(need("n"));
            c.h = from_hex(need("h"));
            c.r = from_hex(need("r"));
            c.t = from_hex(need("t"));
            c.method = method_from_name(kv.count("method") ? kv["method"] : "claimed");
            r.cert = c;
        }
        return r;
    }

    static CurveRecord load(const std::string& path) {
        std::ifstream f(path);
        if (!f) throw usage_error("cannot open record file '" + path + "'");
        std::ostringstream ss;
        ss << f.rdbuf();
        return parse(ss.str());
    }

    void save(const std::string& path) const {
        std::ofstream f(path);
        if (!f) throw usage_error("cannot write record file '" + path + "'");
        f << write();
    }

    /// Rebuild the curve. The stored mu, if any, must match the canonical
    /// twisting nonsquare (twists by other nonsquares are isomorphic but not
    /// coefficient-identical, so points would not round-trip).
    FamilyCurve build() const {
        FieldCtxPtr ctx = FieldCtx::create(p, delta);
        FamilyCurve F = d == 1 ? FamilyCurve::build_gls(ctx, gls_a4, gls_a6, twisted)
                      : d == 2 ? FamilyCurve::build_e2(ctx, s, twisted)
                               : FamilyCurve::build_e3(ctx, s, twisted);
        if (twisted && mu && Fp2::parse(*mu, ctx.get()) != F.mu)
            throw usage_error("record stores a non-canonical twisting nonsquare");
        return F;
    }

    static CurveRecord of(const FamilyCurve& F, const Int& delta_as_given,
                          std::optional<OrderCertificate> cert = std::nullopt) {
        CurveRecord r;
        r.p = F.p();
        r.delta = delta_as_given;
        r.d = F.degree;
        if (F.degree == 1) {
            r.gls_a4 = F.gls_a4;
            r.gls_a6 = F.gls_a6;
        } else {
            r.s = F.s;
        }
        r.twisted = F.twisted;
        if (F.twisted) r.mu = F.mu.str();
        r.cert = std::move(cert);
        return r;
    }

private:
    static std::string trim(const std::string& s) {
        auto b = s.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) return "";
        auto e = s.find_last_not_of(" \t\r\n");
        return s.substr(b, e - b + 1);
    }
};

} // namespace qcurve
