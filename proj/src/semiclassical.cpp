#include "diskdens/semiclassical.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "diskdens/errors.hpp"
#include "diskdens/specfun.hpp"

namespace diskdens {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double R = units::R;
constexpr double hbar = units::hbar;
constexpr double m = units::mass;
// below this the (2k,k) Jacobian drops under the divergence guard; the term is flat there to O(p r^2)
constexpr double npo_floor = 1e-4 * R;
// inside this distance the separately computed actions lose too many digits in their difference
constexpr double pitchfork_bridge = 1e-4 * R;

double sign_of(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

double weighted_amplitude(const OrbitInstance& o, Channel ch) {
    return amplitude(o) * channel_weight(ch, o.p, o.q_mismatch);
}

}  // namespace

void TruncationConfig::validate() const {
    if (k_max_radial < 0) throw DomainError("k_max_radial must be >= 0");
    if (k_max_diameter < 0) throw DomainError("k_max_diameter must be >= 0");
    if (!(switch_fraction > 0 && switch_fraction < 1)) throw DomainError("switch_fraction must lie in (0, 1)");
    if (!(overlap_threshold >= 0)) throw DomainError("overlap_threshold must be >= 0");
    if (!(tangent_guard >= 0)) throw DomainError("tangent_guard must be >= 0");
    for (auto [v, w] : pitchfork_classes) {
        if (v != 2 * w + 1 || w < 1)
            throw DomainError("pitchfork class (" + std::to_string(v) + "," + std::to_string(w) +
                              ") is not of the (2k+1,k) type");
        if (w > k_max_radial)
            throw DomainError("pitchfork class (" + std::to_string(v) + "," + std::to_string(w) +
                              ") needs k_max_radial >= " + std::to_string(w));
    }
    for (int k = 1; k <= k_max_radial; ++k) {
        bool present = std::any_of(pitchfork_classes.begin(), pitchfork_classes.end(),
                                   [k](auto c) { return c.second == k; });
        if (!present)
            throw DomainError("radial repetition k=" + std::to_string(k) + " needs pitchfork class (" +
                              std::to_string(2 * k + 1) + "," + std::to_string(k) +
                              "): L+ has a vanishing Jacobian at R/(2k+1)");
    }
}

double amplitude(const OrbitInstance& o) {
    if (std::abs(o.jacobian) < 1e-12) throw DivergentAmplitude("amplitude diverges for " + o.cls.label());
    return 2 * m / (o.p * pi * std::sqrt(2 * pi * hbar) * o.period) / std::sqrt(std::abs(o.jacobian)) *
           o.degeneracy;
}

double channel_weight(Channel ch, double p, double q) {
    double kin = p * p / (2 * m);
    switch (ch) {
        case Channel::rho: return 1.0;
        case Channel::tau: return kin;
        case Channel::tau1: return kin * q;
        case Channel::xi: return kin * 0.5 * (1 + q);
    }
    return 0.0;
}

double isolated_contribution(const OrbitInstance& o, Channel ch) {
    if (!o.morse) throw DivergentAmplitude(o.cls.label() + " starts at a critical point");
    return weighted_amplitude(o, ch) * std::cos(o.action / hbar - *o.morse * pi / 2 - 3 * pi / 4);
}

double uniform_radial_sb_term(int k, double r, double p, Channel ch) {
    if (!(r >= 0 && r <= R)) throw DomainError("uniform_radial_sb: need 0 <= r <= R");
    const double v = 2 * k + 1;
    if (std::abs(v * r - R) < 1e-14) throw DivergentAmplitude("radial uniform used at its pitchfork radius");
    // amplitudes with sqrt(4 pi r p / hbar) absorbed, regular at r = 0
    double lp = 2 * (v * R - r), lm = 2 * (v * R + r);
    double ap = 2 * p * std::sqrt(R) / (pi * lp * std::sqrt(std::abs(v * r - R)));
    double am = 2 * p * std::sqrt(R) / (pi * lm * std::sqrt(v * r + R));
    double abar = 0.5 * (ap + am), da = 0.5 * (am - ap);
    double s0 = 2 * p * v * R / hbar;
    double x = 2 * r * p / hbar;
    double sgn = k % 2 == 0 ? 1.0 : -1.0;
    return sgn * channel_weight(ch, p, -1.0) *
           (abar * bessel_j(0, x) * std::cos(s0) - da * bessel_j(1, x) * std::sin(s0));
}

double uniform_radial_sb(double r, double p, int k_max, Channel ch) {
    double s = 0;
    for (int k = 0; k <= k_max; ++k) s += uniform_radial_sb_term(k, r, p, ch);
    return s;
}

double uniform_diameter_sb_term(int k, double r, double p, Channel ch) {
    if (k < 1) throw DomainError("diameter family starts at k = 1");
    if (!(r >= 0 && r <= R)) throw DomainError("uniform_diameter_sb: need 0 <= r <= R");
    const double re = std::max(r, npo_floor);
    const int v = 2 * k;
    auto sols = solve_npo(v, k, re, p);
    if (sols.size() != 1) throw DomainError("expected exactly one (2k,k) orbit");
    const auto& npo = sols.front();
    auto po = po_properties(v, k, re, p);
    double a_npo = weighted_amplitude(npo, ch);
    double a_po = weighted_amplitude(po, ch);
    double abar = 0.5 * (a_po + a_npo), da = 0.5 * (a_po - a_npo);
    // L - 2vR without the cancellation of the direct difference
    double a = npo.alpha;
    double excess = 2 * re * std::sin(2 * k * a) - 4 * v * R * std::pow(std::sin(a / 2), 2);
    double ds = p * excess / (2 * hbar);
    double sbar = p * (2 * v * R + excess / 2) / hbar;
    double mu0 = 6 * k - 0.5;
    double phase = sbar - mu0 * pi / 2 - 3 * pi / 4;
    return std::sqrt(2 * pi * ds) *
           (abar * bessel_j(0, ds) * std::cos(phase) + da * bessel_j(1, ds) * std::sin(phase));
}

double uniform_diameter_sb(double r, double p, int k_max, Channel ch) {
    double s = 0;
    for (int k = 1; k <= k_max; ++k) s += uniform_diameter_sb_term(k, r, p, ch);
    return s;
}

double pitchfork_value(const OrbitInstance& parent, const OrbitInstance& child, double r_b, double mu0, Channel ch) {
    using cd = std::complex<double>;
    const double r = parent.r;
    double a_c = weighted_amplitude(child, ch);
    double a_p = weighted_amplitude(parent, ch);
    double abar = a_c / 2 + a_p / std::sqrt(2.0);
    double da = a_c / 2 - a_p / std::sqrt(2.0);
    double sbar = 0.5 * (child.action + parent.action);
    double ds = 0.5 * (child.action - parent.action);
    double s0 = sign_of(r - r_b), s1 = sign_of(ds);
    double x = std::abs(ds) / hbar;
    auto e = [](double t) { return std::polar(1.0, t); };
    auto j = [x](int q) { return bessel_j(BesselOrder::quarter(q), x); };
    cd bracket = abar * (s0 * j(1) * e(s1 * pi / 8) + j(-1) * e(-s1 * pi / 8)) +
                 da * (j(3) * e(3 * s1 * pi / 8) + s0 * j(-3) * e(-3 * s1 * pi / 8));
    cd val = std::sqrt(pi * x / 2) * e(sbar / hbar - pi * mu0 / 2 - pi) * bracket;
    return val.real();
}

double uniform_pitchfork(double r, const OrbitProvider& parent, const OrbitProvider& child, double r_b, double mu0,
                         Channel ch) {
    if (std::abs(r - r_b) < pitchfork_bridge) {
        // cubic through r_b -+ h, r_b -+ 2h; the curvature of the profile matters at this scale
        const double h = pitchfork_bridge;
        const double nodes[4] = {-2 * h, -h, h, 2 * h};
        const double t = r - r_b;
        double sum = 0;
        for (int i = 0; i < 4; ++i) {
            double w = 1;
            for (int j = 0; j < 4; ++j)
                if (j != i) w *= (t - nodes[j]) / (nodes[i] - nodes[j]);
            double x = r_b + nodes[i];
            sum += w * pitchfork_value(parent(x), child(x), r_b, mu0, ch);
        }
        return sum;
    }
    return pitchfork_value(parent(r), child(r), r_b, mu0, ch);
}

double friedel_boundary(double r, double p) {
    if (!(r > 0 && r <= R)) throw DomainError("friedel_boundary: need 0 < r <= R");
    double x = 2 * (R - r) * p / hbar;
    double j1_over_x = x < 1e-4 ? 0.5 - x * x / 16 : bessel_j(1, x) / x;
    // J1(x)/(R - r) = (2p/hbar) J1(x)/x
    return -p / (2 * pi * hbar) * std::sqrt(R / r) * (2 * p / hbar) * j1_over_x;
}

double friedel_isolated(double r, double p) { return isolated_contribution(radial_orbit(0, +1, r, p)); }

std::string regime_name(Regime g) {
    switch (g) {
        case Regime::SymmetryBreakingRadial: return "symmetry_breaking_radial";
        case Regime::SymmetryBreakingDiameter: return "symmetry_breaking_diameter";
        case Regime::PitchforkUniform: return "pitchfork_uniform";
        case Regime::FriedelBoundary: return "friedel_boundary";
        case Regime::IsolatedSum: return "isolated_sum";
    }
    return "?";
}

const PlanRegion& PlanTrack::region_at(double r) const {
    for (const auto& g : regions)
        if (r <= g.hi) return g;
    return regions.back();
}

UniformPlan build_plan(int N, const TruncationConfig& config) {
    if (N < 2 || N % 2 != 0) throw DomainError("N must be an even integer >= 2");
    return build_plan_for_momentum(std::sqrt(smooth_fermi_energy(N)), config);
}

UniformPlan build_plan_for_momentum(double p, const TruncationConfig& cfg) {
    cfg.validate();
    if (!(p > 0)) throw DomainError("Fermi momentum must be positive");
    UniformPlan plan;
    plan.p = p;
    plan.config = cfg;
    const double f = cfg.switch_fraction;
    auto check_gap = [&](double ds, const std::string& what) {
        if (ds < cfg.overlap_threshold * hbar)
            throw OverlapError(what + ": action separation " + std::to_string(ds) + " hbar is below " +
                               std::to_string(cfg.overlap_threshold) + " hbar at p = " + std::to_string(p));
    };

    plan.critical_radii.push_back({0.0, "symmetry_breaking", "r=0"});
    plan.critical_radii.push_back({R, "boundary", "L+(0) boundary"});

    plan.tracks.push_back({"radial k=0",
                           {{0.0, f * R, Regime::SymmetryBreakingRadial, "L+-(0) uniform", 0},
                            {f * R, R, Regime::FriedelBoundary, "L+(0) boundary uniform + isolated L-(0)", 0}}});

    for (int k = 1; k <= cfg.k_max_radial; ++k) {
        int v = 2 * k + 1;
        double rk = R / v;
        double ck = R * std::cos(k * pi / v);
        plan.critical_radii.push_back({rk, "pitchfork", "L+(" + std::to_string(k) + ") -> NPO(" +
                                                            std::to_string(v) + "," + std::to_string(k) + ")"});
        plan.critical_radii.push_back({ck, "pitchfork", "NPO(" + std::to_string(v) + "," + std::to_string(k) +
                                                            ") -> PO(" + std::to_string(v) + "," +
                                                            std::to_string(k) + ")"});
        check_gap(p * 2 * rk / hbar, "L+(" + std::to_string(k) + ") between r=0 and R/" + std::to_string(v));
        double l_at_rk = 2 * (v * R - rk);
        double l_po = 2 * v * R * std::sin(k * pi / v);
        check_gap(p * std::abs(l_at_rk - l_po) / hbar,
                  "NPO(" + std::to_string(v) + "," + std::to_string(k) + ") between its two pitchforks");
        double s1 = f * rk, s2 = rk + f * (ck - rk);
        std::string chain = std::to_string(v) + "," + std::to_string(k);
        plan.tracks.push_back(
            {"radial k=" + std::to_string(k),
             {{0.0, s1, Regime::SymmetryBreakingRadial, "L+-(" + std::to_string(k) + ") uniform", k},
              {s1, s2, Regime::PitchforkUniform, "L+(" + std::to_string(k) + ") -> NPO(" + chain + ") uniform", k, rk,
               6.0 * k + 1, 1},
              {s2, R, Regime::PitchforkUniform, "NPO(" + chain + ") -> PO(" + chain + ") uniform", k, ck,
               6.0 * k + 2, 2}}});
    }

    if (cfg.k_max_diameter >= 1)
        plan.tracks.push_back(
            {"diameter",
             {{0.0, R, Regime::SymmetryBreakingDiameter, "(2k,k) uniform", cfg.k_max_diameter}}});

    if (cfg.include_tangent_pairs) {
        PlanTrack t{"tangent pairs", {{0.0, R, Regime::IsolatedSum, "isolated tangent pairs and their POs", 0}}};
        for (int v = 4; v <= cfg.v_max_tangent; ++v) {
            for (int w = 1; 2 * w + 1 < v; ++w) {
                auto tp = tangent_bifurcation(v, w);
                if (!tp) continue;
                double caustic = R * std::cos(w * pi / v);
                std::string name = std::to_string(v) + "," + std::to_string(w);
                plan.critical_radii.push_back({tp->radius, "tangent", "NPO(" + name + ")/(" + name + ")'"});
                plan.critical_radii.push_back({caustic, "pitchfork", "NPO(" + name + ") -> PO(" + name + ")"});
                double l_t = npo_instance(v, w, tp->alpha, tp->radius, p).length;
                double l_po = 2 * v * R * std::sin(w * pi / v);
                check_gap(p * std::abs(l_t - l_po) / hbar, "NPO(" + name + ") between tangent point and caustic");
                plan.tangent_classes.push_back({v, w, tp->radius, caustic});
            }
        }
        plan.tracks.push_back(std::move(t));
    }

    std::sort(plan.critical_radii.begin(), plan.critical_radii.end(),
              [](const auto& a, const auto& b) { return a.radius < b.radius; });
    return plan;
}

SemiclassicalDensity::SemiclassicalDensity(int N, TruncationConfig config)
    : plan_(build_plan(N, config)) {}

SemiclassicalDensity SemiclassicalDensity::from_momentum(double p, TruncationConfig config) {
    return SemiclassicalDensity(build_plan_for_momentum(p, config));
}

DensityParts SemiclassicalDensity::parts(double r, Channel ch) const {
    if (!(r >= 0 && r <= R)) throw DomainError("density: r must lie in [0, R]");
    const double p = plan_.p;
    const double r_wall = r;
    // orbits starting on the wall have no Morse index; their summands are continuous up to R
    r = std::min(r, R - 1e-8);
    DensityParts out;
    for (const auto& track : plan_.tracks) {
        const auto& g = track.region_at(r);
        const int k = g.k;
        switch (g.regime) {
            case Regime::SymmetryBreakingRadial: out.radial += uniform_radial_sb_term(k, r, p, ch); break;
            case Regime::FriedelBoundary:
                out.radial += isolated_contribution(radial_orbit(0, -1, r, p), ch);
                out.radial += channel_weight(ch, p, -1.0) * friedel_boundary(r_wall, p);
                break;
            case Regime::PitchforkUniform: {
                out.radial += isolated_contribution(radial_orbit(k, -1, r, p), ch);
                auto odd = [k, p](double x) { return odd_npo_continued(k, x, p); };
                if (g.stage == 1) {
                    auto lplus = [k, p](double x) { return radial_orbit(k, +1, x, p); };
                    out.pitchfork += uniform_pitchfork(r, lplus, odd, g.r_b, g.mu0, ch);
                } else {
                    out.radial += isolated_contribution(radial_orbit(k, +1, r, p), ch);
                    auto po = [k, p](double x) { return po_properties(2 * k + 1, k, x, p); };
                    out.pitchfork += uniform_pitchfork(r, odd, po, g.r_b, g.mu0, ch);
                }
                break;
            }
            case Regime::SymmetryBreakingDiameter: out.diameter += uniform_diameter_sb(r, p, k, ch); break;
            case Regime::IsolatedSum: out.tangent += tangent_part(r, ch); break;
        }
    }
    return out;
}

double SemiclassicalDensity::tangent_part(double r, Channel ch) const {
    if (r <= 0 || r >= R) return 0.0;
    const double p = plan_.p;
    const double guard = plan_.config.tangent_guard * hbar;
    double s = 0;
    for (const auto& tc : plan_.tangent_classes) {
        if (r <= tc.tangent_radius) continue;
        auto sols = solve_npo(tc.v, tc.w, r, p);
        const OrbitInstance* plain = nullptr;
        const OrbitInstance* primed = nullptr;
        for (const auto& o : sols) (o.cls.branch == Branch::plain ? plain : primed) = &o;
        if (!plain || !primed) continue;
        if (p * std::abs(plain->length - primed->length) / 2 < guard) continue;
        if (primed->morse) s += isolated_contribution(*primed, ch);
        auto po = po_properties(tc.v, tc.w, r, p);
        if (p * std::abs(plain->length - po.length) / 2 < guard) continue;
        if (plain->morse) s += isolated_contribution(*plain, ch);
        if (!po.ghost && po.morse) s += isolated_contribution(po, ch);
    }
    return s;
}

double delta_density(double r, int N, Channel ch, const TruncationConfig& config) {
    return SemiclassicalDensity(N, config)(r, ch);
}

TfDensities tf_densities_for(double lt) {
    return {m * lt / (pi * hbar * hbar), m * lt * lt / (2 * pi * hbar * hbar)};
}

TfDensities tf_densities(int N) { return tf_densities_for(smooth_fermi_energy(N)); }

double shell_correction_semiclassical(int N, int v_max, int w_max) {
    if (v_max < 2 || w_max < 1) throw DomainError("need v_max >= 2 and w_max >= 1");
    const double lt = smooth_fermi_energy(N);
    const double p = std::sqrt(lt);
    double s = 0;
    for (int w = 1; w <= w_max; ++w) {
        for (int v = 2 * w; v <= v_max; ++v) {
            double f = v == 2 * w ? 1.0 : 2.0;
            double sn = std::sin(w * pi / v);
            double l = 2 * v * R * sn;
            s += f / (v * v * std::sqrt(pi * v * sn)) * std::sin(p * l / hbar - 3 * v * pi / 2 + 3 * pi / 4);
        }
    }
    return 2 * std::pow(units::E0, 0.25) * std::pow(lt, 0.75) * s;
}

}  // namespace diskdens
