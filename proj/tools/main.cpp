// ymsphere: batch front end for the sphere master-field library.
//
// Commands: density, simple, loop, verify, spectral, planar, duality.
// Reports are '#'-prefixed lines; everything else is plot-ready CSV.
// Exit codes: 0 success, 2 usage, 3 parse/validation, 4 non-convergence.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ymsphere/equilibrium.hpp"
#include "ymsphere/loop_gen.hpp"
#include "ymsphere/master.hpp"
#include "ymsphere/oracle.hpp"
#include "ymsphere/simple_field.hpp"

namespace {

struct Args {
    std::map<std::string, std::string> kv;
    bool has(const std::string& k) const { return kv.count(k) > 0; }
    std::string str(const std::string& k, const std::string& dflt = "") const {
        auto it = kv.find(k);
        return it == kv.end() ? dflt : it->second;
    }
    double num(const std::string& k, double dflt) const {
        auto it = kv.find(k);
        if (it == kv.end()) return dflt;
        size_t pos = 0;
        double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("bad number for --" + k);
        return v;
    }
    long long integer(const std::string& k, long long dflt) const {
        auto it = kv.find(k);
        if (it == kv.end()) return dflt;
        size_t pos = 0;
        long long v = std::stoll(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("bad integer for --" + k);
        return v;
    }
};

int usage(const char* msg) {
    std::fprintf(stderr, "error: %s\n", msg);
    std::fprintf(stderr,
                 "usage: ymsphere <command> [--key value ...]\n"
                 "  density  --T X [--grid N]            equilibrium density rho_T\n"
                 "  simple   --T X --n N --a1 A          simple-loop value, all methods\n"
                 "  loop     --file F [--method M] [--k F]  master field from a loop spec\n"
                 "  verify   --T X --a1 A --N n --n w [--sweeps S]  finite-N cross check\n"
                 "  spectral --T X --a1 A [--grid N]     spectral density of the holonomy\n"
                 "  planar   --n N --t X [--ladder T1,T2,..]  planar-limit gap table\n"
                 "  duality  --T X [--grid N]            density/support duality round trip\n"
                 "global: --tol X (1e-8)  --seed S (12345)  --threads K (1)\n");
    return 2;
}

struct Report {
    std::string command;
    std::vector<std::pair<std::string, std::string>> fields;
    Report() = default;
    Report(const std::string& cmd, const Args& a) : command(cmd) {
        addnum("tol", a.num("tol", 1e-8));
        add("seed", std::to_string(a.integer("seed", 12345)));
        add("threads", std::to_string(a.integer("threads", 1)));
    }
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    void add(const std::string& k, const std::string& v) { fields.emplace_back(k, v); }
    void addnum(const std::string& k, double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.12g", v);
        add(k, buf);
    }
    void print() const {
        std::printf("# command: %s\n", command.c_str());
        for (const auto& [k, v] : fields) std::printf("# %s: %s\n", k.c_str(), v.c_str());
        double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                        .count();
        std::printf("# wall_ms: %.1f\n", ms);
    }
};

int cmd_density(const Args& a) {
    double T = a.num("T", 0.0);
    long long grid = a.integer("grid", 200);
    if (!(T > 0.0)) return usage("density: need --T > 0");
    if (grid < 2) return usage("density: need --grid >= 2");
    ymsphere::EquilibriumMeasure m = ymsphere::solve_equilibrium(T);
    Report rep("density", a);
    rep.addnum("T", T);
    rep.add("regime", m.regime == ymsphere::Regime::Subcritical ? "subcritical" : "supercritical");
    rep.addnum("alpha", m.alpha);
    rep.addnum("beta", m.beta);
    rep.print();
    std::printf("x,rho\n");
    double lo = -m.beta - 0.1, hi = m.beta + 0.1;
    for (long long i = 0; i < grid; ++i) {
        double x = lo + (hi - lo) * i / double(grid - 1);
        std::printf("%.17g,%.17g\n", x, ymsphere::density(m, x));
    }
    return 0;
}

int cmd_simple(const Args& a) {
    double T = a.num("T", 0.0), a1 = a.num("a1", -1.0);
    long long n = a.integer("n", 1);
    if (!(T > 0.0)) return usage("simple: need --T > 0");
    if (a1 < 0.0 || a1 > T) return usage("simple: need 0 <= --a1 <= T");
    double quad = ymsphere::phi_simple((int)n, a1, T);
    double cont = ymsphere::contour_phi_simple((int)n, a1, T);
    bool series_ok = T <= M_PI * M_PI;
    double series = series_ok ? ymsphere::phi_simple_subcritical_series((int)n, a1, T) : 0.0;
    Report rep("simple", a);
    rep.addnum("T", T);
    rep.add("n", std::to_string(n));
    rep.addnum("a1", a1);
    double spread = std::abs(quad - cont);
    if (series_ok) spread = std::max(spread, std::abs(quad - series));
    rep.addnum("method_spread", spread);
    rep.print();
    std::printf("method,value\n");
    std::printf("quadrature,%.17g\n", quad);
    std::printf("contour,%.17g\n", cont);
    if (series_ok)
        std::printf("series,%.17g\n", series);
    else
        std::printf("series,n/a\n");
    return 0;
}

int cmd_loop(const Args& a) {
    std::string file = a.str("file");
    if (file.empty()) return usage("loop: need --file");
    std::string method = a.str("method", "recursion");
    if (method != "recursion" && method != "contour" && method != "both")
        return usage("loop: --method must be recursion, contour or both");
    std::ifstream in(file);
    if (!in) {
        std::fprintf(stderr, "error: cannot open %s\n", file.c_str());
        return 3;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    auto [loop, areas] = ymsphere::parse_loop_spec(ss.str());
    int k = (int)a.integer("k", 0);
    if (k < 0 || k >= loop.graph.p) return usage("loop: --k out of range");
    Report rep("loop", a);
    rep.add("file", file);
    rep.add("faces", std::to_string(loop.graph.p));
    rep.add("intersections", std::to_string(loop.n_self));
    rep.addnum("T", areas.T);
    bool want_rec = method != "contour";
    bool want_con = method != "recursion";
    double rec = 0.0, con = 0.0, rec_err = 0.0;
    bool have_con = false;
    if (want_rec) {
        ymsphere::MasterFieldValue v = ymsphere::master_field(loop, areas);
        rec = v.value;
        rec_err = v.err_est;
    }
    if (want_con) {
        try {
            con = ymsphere::splittable_contour_value(loop, areas, k).value;
            have_con = true;
        } catch (const ymsphere::NotSplittableError&) {
            rep.add("warning", "loop is not splittable; contour method unavailable");
            if (!want_rec) {  // downgrade: fall back to the recursion
                ymsphere::MasterFieldValue v = ymsphere::master_field(loop, areas);
                rec = v.value;
                rec_err = v.err_est;
                want_rec = true;
            }
        }
    }
    if (want_rec && have_con) rep.addnum("method_delta", std::abs(rec - con));
    rep.print();
    std::printf("method,value,err_est\n");
    if (want_rec) std::printf("recursion,%.17g,%.3g\n", rec, rec_err);
    if (have_con) std::printf("contour,%.17g,%.3g\n", con, 1e-9);
    return 0;
}

int cmd_verify(const Args& a) {
    double T = a.num("T", 1.0), a1 = a.num("a1", 0.5 * T);
    int N = (int)a.integer("N", 3);
    int n = (int)a.integer("n", 1);
    long long sweeps = a.integer("sweeps", 20000);
    unsigned long long seed = (unsigned long long)a.integer("seed", 12345);
    if (!(T > 0.0) || a1 <= 0.0 || a1 >= T) return usage("verify: need --T > 0, 0 < --a1 < T");
    if (N < 2 || n == 0) return usage("verify: need --N >= 2 and --n != 0");
    double b = T - a1;
    bool exact_ok = N <= 6;
    double exact = 0.0;
    if (exact_ok)
        exact = ymsphere::charsum_moment(ymsphere::CharacterSumConfig{N, 0, T, a1, b}, 0, n);
    auto chain = ymsphere::mcmc_sample(N, T, (int)sweeps, 1000, seed);
    std::vector<double> xs;
    xs.reserve(chain.size());
    for (const auto& st : chain) xs.push_back(ymsphere::contour_observable(st, n, b).real());
    auto [mean, se] = ymsphere::batch_means(xs);
    double limit = ymsphere::phi_simple(std::abs(n), a1, T);
    Report rep("verify", a);
    rep.addnum("T", T);
    rep.addnum("a1", a1);
    rep.add("N", std::to_string(N));
    rep.add("n", std::to_string(n));
    rep.add("samples", std::to_string(chain.size()));
    if (!exact_ok) rep.add("warning", "character sum needs N <= 6; exact part skipped");
    rep.print();
    std::printf("quantity,value,stderr\n");
    if (exact_ok) std::printf("charsum,%.17g,0\n", exact);
    std::printf("mcmc,%.17g,%.3g\n", mean, se);
    std::printf("phi_simple,%.17g,0\n", limit);
    if (exact_ok) {
        bool pass = std::abs(mean - exact) <= 3.0 * se + 1e-12;
        std::printf("# 3-sigma check: %s (|mcmc-charsum| = %.3g, 3*se = %.3g)\n",
                    pass ? "PASS" : "FAIL", std::abs(mean - exact), 3.0 * se);
    }
    return 0;
}

int cmd_spectral(const Args& a) {
    double T = a.num("T", 0.0), a1 = a.num("a1", -1.0);
    long long grid = a.integer("grid", 200);
    if (!(T > 0.0)) return usage("spectral: need --T > 0");
    if (a1 <= 0.0 || a1 >= T) return usage("spectral: need 0 < --a1 < T");
    if (grid < 2) return usage("spectral: need --grid >= 2");
    Report rep("spectral", a);
    rep.addnum("T", T);
    rep.addnum("a1", a1);
    rep.print();
    std::printf("theta,density\n");
    for (long long i = 0; i < grid; ++i) {
        double th = -M_PI + 2.0 * M_PI * i / double(grid - 1);
        std::printf("%.17g,%.17g\n", th, ymsphere::spectral_density_simple(T, a1, th));
    }
    return 0;
}

int cmd_planar(const Args& a) {
    int n = (int)a.integer("n", 1);
    double t = a.num("t", 1.0);
    if (n < 1 || !(t > 0.0)) return usage("planar: need --n >= 1 and --t > 0");
    std::vector<double> ladder;
    {
        std::stringstream ss(a.str("ladder", "50,100,200,400"));
        std::string tok;
        while (std::getline(ss, tok, ',')) ladder.push_back(std::stod(tok));
    }
    double planar = ymsphere::phi_planar(n, t);
    Report rep("planar", a);
    rep.add("n", std::to_string(n));
    rep.addnum("t", t);
    rep.addnum("phi_planar", planar);
    rep.print();
    std::printf("T,phi_simple,phi_planar,gap\n");
    for (double T : ladder) {
        if (t >= T) return usage("planar: ladder entries must exceed --t");
        double v = ymsphere::phi_simple(n, t, T);
        std::printf("%.17g,%.17g,%.17g,%.17g\n", T, v, planar, std::abs(v - planar));
    }
    return 0;
}

int cmd_duality(const Args& a) {
    double T = a.num("T", 0.0);
    long long grid = a.integer("grid", 50);
    if (!(T > 0.0)) return usage("duality: need --T > 0");
    if (grid < 2) return usage("duality: need --grid >= 2");
    ymsphere::EquilibriumMeasure m = ymsphere::solve_equilibrium(T);
    // pi*rho_T maps (alpha,beta) onto (0, theta_max)
    double theta_max = (m.regime == ymsphere::Regime::Subcritical) ? std::sqrt(T) : M_PI;
    Report rep("duality", a);
    rep.addnum("T", T);
    rep.addnum("theta_max", theta_max);
    rep.print();
    std::printf("theta,x,residual\n");
    for (long long i = 0; i < grid; ++i) {
        double th = theta_max * (i + 0.5) / double(grid);
        double x = M_PI * ymsphere::midpoint_spectral_density(m, th);
        double back = M_PI * ymsphere::density(m, x);
        std::printf("%.17g,%.17g,%.3g\n", th, x, std::abs(back - th));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) return usage("missing command");
    std::string cmd = argv[1];
    Args args;
    for (int i = 2; i < argc; ++i) {
        const char* s = argv[i];
        if (std::strncmp(s, "--", 2) != 0) return usage("flags must look like --key value");
        if (i + 1 >= argc) return usage("missing value after last flag");
        args.kv[s + 2] = argv[++i];
    }
    try {
        if (cmd == "density") return cmd_density(args);
        if (cmd == "simple") return cmd_simple(args);
        if (cmd == "loop") return cmd_loop(args);
        if (cmd == "verify") return cmd_verify(args);
        if (cmd == "spectral") return cmd_spectral(args);
        if (cmd == "planar") return cmd_planar(args);
        if (cmd == "duality") return cmd_duality(args);
        return usage("unknown command");
    } catch (const ymsphere::ParseError& e) {
        std::fprintf(stderr, "parse error: %s\n", e.what());
        return 3;
    } catch (const ymsphere::ValidationError& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return 3;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::runtime_error& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 4;
    }
}
