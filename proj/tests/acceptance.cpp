// Acceptance run: one PASS/FAIL line per criterion with its fixed tolerance and time budget.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "diskdens/errors.hpp"
#include "diskdens/orbits.hpp"
#include "diskdens/profiles.hpp"
#include "diskdens/quantum.hpp"
#include "diskdens/semiclassical.hpp"
#include "diskdens/specfun.hpp"

using namespace diskdens;

namespace {

const double pi = std::acos(-1.0);

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void run(int id, const std::string& name, double budget_s, const std::function<Outcome()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = dt < budget_s;
    bool ok = o.pass && in_time;
    if (!ok) ++failures;
    std::printf("%s  %2d %-28s %s [%.2fs / %.0fs budget%s]\n", ok ? "PASS" : "FAIL", id, name.c_str(),
                o.detail.c_str(), dt, budget_s, in_time ? "" : ", over budget");
    std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

double p606() { return std::sqrt(smooth_fermi_energy(606)); }

// Removes everything slower than one radial-orbit wavelength pi/p by subtracting
// the running mean over that wavelength.
std::vector<double> radial_band(const std::vector<double>& x, int window) {
    std::vector<double> out(x.size());
    int half = window / 2;
    for (int i = 0; i < static_cast<int>(x.size()); ++i) {
        int a = std::max(0, i - half), b = std::min<int>(x.size() - 1, i + half);
        double m = 0;
        for (int j = a; j <= b; ++j) m += x[j];
        out[i] = x[i] - m / (b - a + 1);
    }
    return out;
}

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
    double ma = std::accumulate(a.begin(), a.end(), 0.0) / a.size();
    double mb = std::accumulate(b.begin(), b.end(), 0.0) / b.size();
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

}  // namespace

int main() {
    run(1, "fermi momentum N=606", 1, [] {
        double p = p606();
        return Outcome{std::abs(p - 35.8186) <= 5e-4, fmt("p=%.7f target 35.8186 +- 5e-4", p)};
    });

    run(2, "tangent bifurcation radii", 1, [] {
        auto t41 = tangent_bifurcation(4, 1);
        auto r51 = tangent_bifurcation_radius(5, 1);
        if (!t41 || !r51) return Outcome{false, "no tangent point found"};
        double s = std::sin(t41->alpha);
        bool ok = std::abs(t41->radius - 0.682489) <= 1e-6 && std::abs(s - 0.655889) <= 1e-6 &&
                  std::abs(*r51 - 0.8) <= 1e-10;
        return Outcome{ok, fmt("r41=%.8f (want 0.682489+-1e-6) sin a0=%.8f (want 0.655889+-1e-6) r51=%.12f", t41->radius,
                               s, *r51)};
    });

    run(3, "appendix oracle equivalence", 5, [] {
        const double p = p606();
        struct Case {
            AppendixClass c;
            int v, w;
            Branch b;
            double lo, hi;
        };
        double t41 = *tangent_bifurcation_radius(4, 1);
        std::vector<Case> cases = {
            {AppendixClass::Nabla21, 2, 1, Branch::plain, 0.02, 0.98},
            {AppendixClass::Lambda31, 3, 1, Branch::plain, 1.0 / 3 + 0.01, 0.99},
            {AppendixClass::P41, 4, 1, Branch::plain, t41 + 0.003, 0.997},
            {AppendixClass::P41Primed, 4, 1, Branch::primed, t41 + 0.003, 0.997},
            {AppendixClass::Q51, 5, 1, Branch::plain, 0.803, 0.997},
            {AppendixClass::Q51Primed, 5, 1, Branch::primed, 0.803, 0.997},
        };
        double worst = 0;
        int missing = 0;
        for (const auto& cs : cases) {
            for (int i = 0; i < 50; ++i) {
                double r = cs.lo + (cs.hi - cs.lo) * i / 49.0;
                auto ref = oracle_appendix(cs.c, r, p);
                bool found = false;
                for (const auto& g : solve_npo(cs.v, cs.w, r, p)) {
                    if (g.cls.branch != cs.b) continue;
                    found = true;
                    worst = std::max({worst, std::abs(g.length - ref.length), std::abs(g.jacobian - ref.jacobian),
                                      std::abs(g.q_mismatch - ref.q_mismatch)});
                }
                if (!found) ++missing;
            }
        }
        return Outcome{worst <= 1e-10 && missing == 0,
                       fmt("max |dL|,|dJ|,|dQ| = %.2e over 300 points (tol 1e-10), unmatched %g", worst, missing)};
    });

    run(4, "morse index suite", 5, [] {
        const double p = p606();
        std::vector<std::string> bad;
        auto expect = [&](const OrbitInstance& o, int want, const std::string& what) {
            if (!o.morse || *o.morse != want)
                bad.push_back(what + " got " + (o.morse ? std::to_string(*o.morse) : "none") + " want " +
                              std::to_string(want));
        };
        for (double r : {0.1, 0.2, 0.3}) expect(radial_orbit(1, +1, r, p), 8, "L+(1) below R/3");
        for (double r : {0.4, 0.6, 0.9}) expect(radial_orbit(1, +1, r, p), 7, "L+(1) above R/3");
        for (double r : {0.35, 0.4, 0.45}) expect(odd_npo_continued(1, r, p), 8, "Lambda below R/2");
        for (double r : {0.55, 0.75, 0.95}) expect(odd_npo_continued(1, r, p), 9, "Lambda above R/2");
        int po_checks = 0;
        for (int v = 3; v <= 6; ++v) {
            for (int w = 1; 2 * w < v; ++w) {
                if (std::gcd(v, w) != 1) continue;
                double c = units::R * std::cos(w * pi / v);
                for (int i = 1; i <= 7; ++i) {
                    double r = c + (units::R - c) * (i - 0.37) / 7.0;
                    OrbitInstance o = po_properties(v, w, r, p);
                    try {
                        o.morse = morse_index(o);
                    } catch (const CriticalStartError&) {
                        continue;
                    }
                    expect(o, 3 * v - 1, "PO(" + std::to_string(v) + "," + std::to_string(w) + ")");
                    ++po_checks;
                }
            }
        }
        for (int k = 0; k <= 3; ++k) {
            double rk = units::R / (2 * k + 1);
            for (double f : {0.3, 0.7}) {
                // r_0 = R, so L+(0) is always on the inner side
                expect(radial_orbit(k, +1, f * rk, p), 6 * k + 2, "L+(" + std::to_string(k) + ") inside");
                if (k > 0)
                    expect(radial_orbit(k, +1, rk + f * (units::R - rk), p), 6 * k + 1,
                           "L+(" + std::to_string(k) + ") outside");
                expect(radial_orbit(k, -1, f, p), 6 * k + 3, "L-(" + std::to_string(k) + ")");
            }
        }
        std::string detail = bad.empty() ? "all integer indices match (" + std::to_string(po_checks) + " PO samples)"
                                         : bad.front() + " (" + std::to_string(bad.size()) + " mismatches)";
        return Outcome{bad.empty() && po_checks > 0, detail};
    });

    run(5, "slope theorem at R/3", 1, [] {
        const double p = p606(), rb = units::R / 3, h = 1e-5;
        double child = (odd_npo_continued(1, rb + h, p).jacobian - odd_npo_continued(1, rb - h, p).jacobian) / (2 * h);
        double parent = (radial_orbit(1, +1, rb + h, p).jacobian - radial_orbit(1, +1, rb - h, p).jacobian) / (2 * h);
        bool ok = std::abs(child + 4 / p) <= 1e-6 && std::abs(parent - 2 / p) <= 1e-6;
        return Outcome{ok, fmt("dJ/dr child=%.10f (want %.10f) parent=%.10f (want %.10f)", child, -4 / p, parent, 2 / p)};
    });

    run(6, "pitchfork value at R/3", 1, [] {
        const double p = p606(), rb = units::R / 3;
        auto parent = [p](double x) { return radial_orbit(1, +1, x, p); };
        auto child = [p](double x) { return odd_npo_continued(1, x, p); };
        double got = uniform_pitchfork(rb, parent, child, rb, 7);
        double want = 9 * std::pow(p, 0.75) * gamma_quarter() / (32 * pi * pi) * std::cos(16 * p / 3 - 5 * pi / 8);
        double rel = std::abs(got - want) / std::abs(want);
        return Outcome{rel <= 1e-8, fmt("uniform=%.10f closed form=%.10f rel diff %.2e (tol 1e-8)", got, want, rel)};
    });

    run(7, "friedel crossover", 1, [] {
        const double p = p606();
        // relative to the local oscillation amplitude of the isolated term, since the term itself has zeros
        double worst = 0, r_worst = 0;
        for (int i = 1; i <= 9500; ++i) {
            double r = i * 1e-4;
            double iso = friedel_isolated(r, p);
            double env = std::abs(amplitude(radial_orbit(0, +1, r, p)));
            double d = std::abs(friedel_boundary(r, p) - iso) / env;
            if (d > worst) worst = d, r_worst = r;
        }
        double at_r = friedel_boundary(units::R, p);
        bool ok = worst <= 0.05 && std::isfinite(at_r);
        return Outcome{ok, fmt("max |uniform-isolated|/amplitude = %.4f at r=%.4f (tol 0.05); uniform(R)=%.4f", worst,
                               r_worst, at_r)};
    });

    run(8, "density agreement", 120, [] {
        auto grid = linear_grid(800, 0.02, 0.98);
        double worst = 0;
        std::string detail;
        for (int N : {606, 68}) {
            QuantumSystem qs(N);
            SemiclassicalDensity sc(N);
            auto q = quantum_profile(qs, Channel::rho, grid);
            auto s = semiclassical_profile(sc, N, Channel::rho, grid);
            double rel = rms_difference(q.values, s.values) / rms(q.values);
            worst = std::max(worst, rel);
            detail += fmt("N=%g rel RMS %.4f; ", N, rel);
        }
        return Outcome{worst <= 0.25, detail + "tol 0.25"};
    });

    run(9, "local virial theorem", 120, [] {
        const int N = 606;
        SemiclassicalDensity sc(N);
        const double lt = sc.lambda_tilde();
        auto grid = linear_grid(800, 0.02, sc.kinetic_truncation_radius());
        double num = 0, den = 0;
        for (double r : grid) {
            double t = sc(r, Channel::tau), rho = sc(r, Channel::rho);
            num = std::max(num, std::abs(t - lt * rho));
            den = std::max(den, std::abs(t));
        }
        double sc_dev = num / den;
        QuantumSystem qs(N);
        auto qgrid = linear_grid(800, 0.1, 0.8);
        double lq = smooth_fermi_energy(N);
        auto tf = tf_densities_for(lq);
        num = den = 0;
        for (double r : qgrid) {
            auto d = qs.at(r);
            double dt = d.tau - tf.tau, dr = d.rho - tf.rho;
            num = std::max(num, std::abs(dt - lq * dr));
            den = std::max(den, std::abs(dt));
        }
        double q_dev = num / den;
        return Outcome{sc_dev <= 1e-12 && q_dev <= 0.15,
                       fmt("semiclassical %.2e (tol 1e-12), quantum %.4f of peak (tol 0.15)", sc_dev, q_dev)};
    });

    run(10, "kinetic channel structure", 300, [] {
        const int N = 9834;
        SemiclassicalDensity sc(N);
        double radial_xi = 0;
        for (double r : linear_grid(400, 0.01, 0.99)) radial_xi = std::max(radial_xi, std::abs(sc.parts(r, Channel::xi).radial));
        QuantumSystem qs(N);
        const double lt = smooth_fermi_energy(N), p = std::sqrt(lt);
        auto tf = tf_densities_for(lt);
        // 0.03..0.22 so that the running mean is complete inside 0.05..0.2
        const int n = 3001;
        auto grid = linear_grid(n, 0.03, 0.22);
        double h = grid[1] - grid[0];
        std::vector<double> dt(n), dt1(n);
        for (int i = 0; i < n; ++i) {
            auto d = qs.at(grid[i]);
            dt[i] = d.tau - tf.tau;
            dt1[i] = d.tau1 - tf.tau;
        }
        int window = static_cast<int>(std::lround(pi / p / h)) | 1;
        auto a = radial_band(dt, window), b = radial_band(dt1, window);
        std::vector<double> as, bs;
        for (int i = 0; i < n; ++i)
            if (grid[i] >= 0.05 && grid[i] <= 0.2) as.push_back(a[i]), bs.push_back(b[i]);
        double c = correlation(as, bs);
        return Outcome{radial_xi == 0.0 && c <= -0.8,
                       fmt("N=9834 radial part of xi max %.1e (want 0); corr(dtau, dtau1) = %.4f (tol <= -0.8)",
                           radial_xi, c)};
    });

    run(11, "shell structure", 120, [] {
        auto spec = build_spectrum(1.2 * smooth_fermi_energy(650) + 50);
        std::vector<int> ns;
        std::vector<double> de;
        int count = 0;
        double e = 0;
        for (const auto& lv : spec.levels) {
            count += lv.degeneracy;
            e += lv.degeneracy * lv.energy;
            if (count > 650) break;
            ns.push_back(count);
            de.push_back(e - smooth_total_energy(smooth_fermi_energy(count)));
        }
        auto is_min = [&](int N) {
            auto it = std::find(ns.begin(), ns.end(), N);
            if (it == ns.end()) return false;
            std::size_t i = it - ns.begin();
            return i > 0 && i + 1 < ns.size() && de[i] < de[i - 1] && de[i] < de[i + 1];
        };
        bool minima = is_min(68) && is_min(606);
        double worst = 0;
        std::string detail;
        for (int N : {68, 606}) {
            double ex = shell_correction_exact(N), scv = shell_correction_semiclassical(N, 10, 3);
            double rel = std::abs(scv - ex) / std::abs(ex);
            worst = std::max(worst, rel);
            detail += fmt("N=%g exact %.3f sc %.3f (%.1f%%); ", N, ex, scv, 100 * rel);
        }
        return Outcome{minima && worst <= 0.10,
                       std::string(minima ? "local minima at 68 and 606; " : "68/606 not both local minima; ") + detail +
                           "tol 10%"};
    });

    run(12, "weyl counting mean", 30, [] {
        auto spec = build_spectrum(2100);
        double sum = 0;
        const int n = 1000;
        for (int i = 0; i < n; ++i) {
            double E = 100 + 1900.0 * i / (n - 1);
            sum += counting_exact(spec, E) - counting_weyl(E);
        }
        double mean = sum / n;
        return Outcome{std::abs(mean) < 0.5, fmt("mean dN = %.4f over 1000 energies in [100, 2000] (tol 0.5)", mean)};
    });

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
