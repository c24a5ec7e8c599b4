#include "diskdens/orbits.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

#include "diskdens/errors.hpp"
#include "diskdens/quantum.hpp"

namespace diskdens {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double R = units::R;
constexpr double critical_tol = 1e-9;

int reflections(const OrbitClass& c) {
    switch (c.kind) {
        case OrbitKind::RadialPlus:
        case OrbitKind::RadialMinus: return 2 * c.k + 1;
        default: return c.v;
    }
}

double wrap_two_pi(double x) {
    x = std::fmod(x, 2 * pi);
    if (x < 0) x += 2 * pi;
    return x;
}

void fill_dynamics(OrbitInstance& o) {
    o.action = o.p * o.length / units::hbar;
    o.period = units::mass * o.length / o.p;
    if (o.ghost) return;
    try {
        o.morse = morse_index(o);
    } catch (const CriticalStartError&) {
        o.morse.reset();
    }
}

template <class F>
double bisect(F f, double a, double b, double fa) {
    for (int i = 0; i < 300 && std::abs(b - a) > 1e-15; ++i) {
        double m = 0.5 * (a + b);
        double fm = f(m);
        if (fm == 0.0) return m;
        if ((fm < 0) == (fa < 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

// Monotone pieces of r(alpha) inside the winding window, split at poles and extrema.
struct ClosureTable {
    struct Piece {
        double a0, a1;
        bool pole0, pole1;
        Branch branch;
    };
    std::vector<Piece> pieces;
    std::vector<double> minima;
};

ClosureTable make_table(int v, int w) {
    auto [lo, hi] = npo_alpha_window(v, w);
    auto slope_sign = [v, w](double a) {
        double b = (1 - w) * pi + (v - 1) * pi / 2 - v * a;
        return std::cos(a) * std::sin(b) + v * std::sin(a) * std::cos(b);
    };
    // alpha = 0 can itself be a zero of the denominator (the radial limit, 0/0)
    auto on_pole = [v](double a) { return std::abs(std::cos(v * pi / 2 - v * a)) < 1e-12; };
    std::vector<std::pair<double, bool>> cuts{{lo, on_pole(lo)}, {hi, on_pole(hi)}};
    for (int j = -2 * v; j <= 2 * v; ++j) {
        double a = (v - 1 - 2 * j) * pi / (2 * v);
        if (a > lo && a < hi) cuts.push_back({a, true});
    }
    std::vector<double> extrema;
    const int M = 40000;
    double prev_a = lo, prev_g = slope_sign(lo);
    for (int i = 1; i <= M; ++i) {
        double a = lo + (hi - lo) * i / M;
        double g = slope_sign(a);
        if (prev_g == 0.0) {
            if (i > 1) extrema.push_back(prev_a);
        } else if (g * prev_g < 0) {
            extrema.push_back(bisect(slope_sign, prev_a, a, prev_g));
        }
        prev_a = a;
        prev_g = g;
    }
    for (double e : extrema) cuts.push_back({e, false});
    std::sort(cuts.begin(), cuts.end());

    ClosureTable t;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        auto [a0, p0] = cuts[i];
        auto [a1, p1] = cuts[i + 1];
        if (a1 - a0 < 1e-15) continue;
        double g = slope_sign(0.5 * (a0 + a1));
        t.pieces.push_back({a0, a1, p0, p1, g > 0 ? Branch::plain : Branch::primed});
    }
    for (double e : extrema) {
        double h = 1e-7;
        double r = closure_radius(v, w, e);
        if (r > 0 && slope_sign(e - h) < 0 && slope_sign(e + h) > 0) t.minima.push_back(e);
    }
    return t;
}

const ClosureTable& closure_table(int v, int w) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, ClosureTable> cache;
    std::lock_guard lock(mu);
    auto key = std::make_pair(v, w);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, make_table(v, w)).first;
    return it->second;
}

OrbitInstance base_instance(const OrbitClass& c, double r, double p) {
    if (!(p > 0)) throw DomainError("Fermi momentum must be positive");
    OrbitInstance o;
    o.cls = c;
    o.r = r;
    o.p = p;
    return o;
}

}  // namespace

OrbitClass OrbitClass::radial_plus(int k) {
    if (k < 0) throw DomainError("radial repetition k must be >= 0");
    return {OrbitKind::RadialPlus, 2 * k + 1, 0, k, Branch::none};
}

OrbitClass OrbitClass::radial_minus(int k) {
    if (k < 0) throw DomainError("radial repetition k must be >= 0");
    return {OrbitKind::RadialMinus, 2 * k + 1, 0, k, Branch::none};
}

OrbitClass OrbitClass::npo(int v, int w, Branch b) {
    validate_npo_class(v, w);
    return {OrbitKind::NonRadialNPO, v, w, 0, b};
}

OrbitClass OrbitClass::po(int v, int w) {
    validate_po_class(v, w);
    return {OrbitKind::PeriodicOrbit, v, w, 0, Branch::none};
}

std::string OrbitClass::label() const {
    switch (kind) {
        case OrbitKind::RadialPlus: return "L+(" + std::to_string(k) + ")";
        case OrbitKind::RadialMinus: return "L-(" + std::to_string(k) + ")";
        case OrbitKind::NonRadialNPO:
            return "NPO(" + std::to_string(v) + "," + std::to_string(w) + ")" +
                   (branch == Branch::primed ? "'" : "");
        case OrbitKind::PeriodicOrbit: return "PO(" + std::to_string(v) + "," + std::to_string(w) + ")";
    }
    return "?";
}

std::string bifurcation_type_name(BifurcationType t) {
    switch (t) {
        case BifurcationType::SymmetryBreaking: return "symmetry_breaking";
        case BifurcationType::Pitchfork: return "pitchfork";
        case BifurcationType::Tangent: return "tangent";
        case BifurcationType::BoundaryCoalescence: return "boundary";
    }
    return "?";
}

void validate_npo_class(int v, int w) {
    if (v < 2 || w < 1 || w > v / 2)
        throw DomainError("invalid NPO class (" + std::to_string(v) + "," + std::to_string(w) +
                          "): need v >= 2 and 1 <= w <= floor(v/2)");
}

void validate_po_class(int v, int w) {
    if (w < 1 || v < 2 * w)
        throw DomainError("invalid PO class (" + std::to_string(v) + "," + std::to_string(w) +
                          "): need w >= 1 and v >= 2w");
}

NpoFamily npo_family(int v, int w) {
    validate_npo_class(v, w);
    if (v == 2 * w) return NpoFamily::Diameter;
    if (v == 2 * w + 1) return NpoFamily::Odd;
    return NpoFamily::Tangent;
}

double closure_radius(int v, int w, double alpha) {
    double c = std::cos(v * pi / 2 - v * alpha);
    if (std::abs(c) < 1e-300) throw DomainError("closure_radius: pole, no closed orbit at this alpha");
    return (w % 2 == 0 ? 1.0 : -1.0) * R * std::sin(alpha) / c;
}

double closure_slope(int v, int w, double alpha) {
    double b = (1 - w) * pi + (v - 1) * pi / 2 - v * alpha;
    double sb = std::sin(b);
    return R * (std::cos(alpha) * sb + v * std::sin(alpha) * std::cos(b)) / (sb * sb);
}

double npo_beta(int v, int w, double alpha) {
    double b = wrap_two_pi((1 - w) * pi + (v - 1) * pi / 2 - v * alpha);
    return b > pi ? 2 * pi - b : b;
}

std::pair<double, double> npo_alpha_window(int v, int w) {
    validate_npo_class(v, w);
    double lo = pi / 2 - pi * w / (v - 1);
    double hi = pi / 2 - pi * w / (v + 1);
    return {std::max(lo, 0.0), hi};
}

OrbitInstance npo_instance(int v, int w, double alpha, double r, double p) {
    auto o = base_instance(OrbitClass::npo(v, w, closure_slope(v, w, alpha) >= 0 ? Branch::plain : Branch::primed),
                           r, p);
    o.alpha = alpha;
    o.beta = npo_beta(v, w, alpha);
    o.length = npo_length(o);
    o.jacobian = npo_jacobian(o);
    o.q_mismatch = npo_q(o);
    o.degeneracy = 2;
    fill_dynamics(o);
    return o;
}

double npo_length(const OrbitInstance& o) {
    return 2 * (reflections(o.cls) * R * std::cos(o.alpha) + o.r * std::cos(o.beta));
}

double npo_jacobian(const OrbitInstance& o) {
    double cb = std::cos(o.beta);
    return 2 * o.r / o.p * cb * (1 + reflections(o.cls) * o.r / R * cb / std::cos(o.alpha));
}

double npo_q(const OrbitInstance& o) { return -std::cos(2 * o.beta); }

std::vector<OrbitInstance> solve_npo(int v, int w, double r, double p) {
    validate_npo_class(v, w);
    if (!(r > 0 && r <= R)) throw DomainError("solve_npo: need 0 < r <= R");
    const auto& table = closure_table(v, w);
    auto f = [v, w, r](double a) { return closure_radius(v, w, a) - r; };
    std::vector<double> roots;
    for (const auto& pc : table.pieces) {
        double a0 = pc.pole0 ? pc.a0 + 1e-13 : pc.a0;
        double a1 = pc.pole1 ? pc.a1 - 1e-13 : pc.a1;
        double f0 = f(a0), f1 = f(a1);
        double root;
        // r = R puts roots exactly on the window edges
        if (std::abs(f0) <= 1e-13 * R) {
            root = a0;
        } else if (std::abs(f1) <= 1e-13 * R) {
            root = a1;
        } else if ((f0 < 0) != (f1 < 0)) {
            root = bisect(f, a0, a1, f0);
        } else {
            continue;
        }
        bool dup = std::any_of(roots.begin(), roots.end(), [&](double x) { return std::abs(x - root) < 1e-12; });
        if (!dup) roots.push_back(root);
    }
    std::sort(roots.begin(), roots.end());
    std::vector<OrbitInstance> out;
    for (double a : roots) {
        if (closure_radius(v, w, a) <= 0) continue;
        // bisection also "converges" onto a jump of r(alpha)
        if (std::abs(closure_radius(v, w, a) - r) > 1e-9 * R) continue;
        out.push_back(npo_instance(v, w, a, r, p));
    }
    return out;
}

OrbitInstance radial_orbit(int k, int sign, double r, double p) {
    if (sign != 1 && sign != -1) throw DomainError("radial_orbit: sign must be +1 or -1");
    if (!(r >= 0 && r <= R)) throw DomainError("radial_orbit: need 0 <= r <= R");
    auto o = base_instance(sign > 0 ? OrbitClass::radial_plus(k) : OrbitClass::radial_minus(k), r, p);
    double v = 2 * k + 1;
    o.alpha = 0;
    o.beta = sign > 0 ? pi : 0.0;
    o.length = 2 * (v * R - sign * r);
    o.jacobian = 2 / (R * p) * r * (v * r - sign * R);
    o.q_mismatch = -1;
    o.degeneracy = 1;
    fill_dynamics(o);
    return o;
}

OrbitInstance po_properties(int v, int w, double r, double p) {
    if (!(r >= 0 && r <= R)) throw DomainError("po_properties: need 0 <= r <= R");
    auto o = base_instance(OrbitClass::po(v, w), r, p);
    double phi = w * pi / v;
    double caustic = R * std::cos(phi);
    o.alpha = pi / 2 - phi;
    o.length = 2 * v * R * std::sin(phi);
    o.jacobian = -2.0 * v / (R * p) * (r * r - caustic * caustic) / std::sin(phi);
    o.q_mismatch = 1;
    o.degeneracy = v == 2 * w ? 2 : 4;
    // below the caustic no member of the family passes through r; properties are continued
    o.ghost = r < caustic;
    if (o.ghost) {
        o.beta = pi / 2;
    } else if (r == 0) {
        o.beta = 0;
    } else {
        o.beta = std::asin(std::min(1.0, caustic / r));
    }
    fill_dynamics(o);
    return o;
}

OrbitInstance odd_npo_continued(int k, double r, double p) {
    if (k < 1) throw DomainError("odd_npo_continued: k must be >= 1");
    if (!(r > 0 && r <= R)) throw DomainError("odd_npo_continued: need 0 < r <= R");
    int v = 2 * k + 1;
    if (r >= R / v) {
        auto sols = solve_npo(v, k, r, p);
        if (sols.size() != 1) throw DomainError("odd_npo_continued: expected a single real (2k+1,k) orbit");
        return sols.front();
    }
    // alpha = i*eta turns the closure condition into sinh(eta)/sinh(v eta) = r/R
    auto f = [v, r](double e) { return std::sinh(e) / std::sinh(v * e) - r / R; };
    double hi = 1.0;
    while (f(hi) > 0) hi *= 2;
    double eta = bisect(f, 1e-12, hi, f(1e-12));
    auto o = base_instance(OrbitClass::npo(v, k, Branch::plain), r, p);
    o.ghost = true;
    o.alpha = eta;
    o.beta = std::numeric_limits<double>::quiet_NaN();
    double ca = std::cosh(eta), cb = -std::cosh(v * eta);
    o.length = 2 * (v * R * ca + r * cb);
    o.jacobian = 2 * r / p * cb * (1 + v * r / R * cb / ca);
    o.q_mismatch = -std::cosh(2 * v * eta);
    o.degeneracy = 2;
    fill_dynamics(o);
    return o;
}

std::optional<TangentPoint> tangent_bifurcation(int v, int w) {
    if (npo_family(v, w) != NpoFamily::Tangent) return std::nullopt;
    const auto& table = closure_table(v, w);
    std::optional<TangentPoint> best;
    for (double a : table.minima) {
        double r = closure_radius(v, w, a);
        if (r > 0 && r <= R && (!best || r < best->radius)) best = TangentPoint{r, a};
    }
    return best;
}

std::optional<double> tangent_bifurcation_radius(int v, int w) {
    auto t = tangent_bifurcation(v, w);
    if (!t) return std::nullopt;
    return t->radius;
}

int morse_index(const OrbitInstance& o) {
    if (o.ghost) throw DomainError("morse_index: ghost orbits have no real conjugate points");
    const int v = reflections(o.cls);
    const double P = R * std::cos(o.alpha);
    const double tol = critical_tol * R;
    const double rc = o.r * std::cos(o.beta);
    if (o.r < tol) throw CriticalStartError("start at the centre, where the orbit family is degenerate");
    if (std::abs(o.r - R) < tol) throw CriticalStartError("start at a reflection point");
    if (std::abs(rc) < tol) throw CriticalStartError("start at a caustic point");
    const double L = o.length;
    // Point source at position src, next reflection a distance s ahead. Each
    // step finds the next focus via the mirror equation 1/s + 1/s' = 2/P.
    double src = 0.0;
    double s = P + rc;
    int conj = 0;
    for (int guard = 0; guard < 4 * v + 8; ++guard) {
        double refl = src + s;
        double c, s_next;
        if (s >= 2 * P / 3) {
            double s1 = P - P * (s - P) / (2 * s - P);
            c = refl + s1;
            s_next = 2 * P - s1;
        } else {
            double t1 = P - P * (P - s) / (3 * P - 4 * s);
            c = refl + 2 * P + t1;
            s_next = 2 * P - t1;
        }
        if (std::abs(c - L) < tol) throw CriticalStartError("start point is conjugate to itself");
        if (c > L) break;
        // a focus sitting on the wall still counts once; the index may only jump where J = 0
        bool on_wall = s_next < tol || std::abs(s_next - 2 * P) < tol;
        ++conj;
        src = c;
        s = on_wall ? 2 * P : s_next;
    }
    return conj + 2 * v;
}

std::vector<OrbitInstance> enumerate_orbits(double r, double l_max, double p, int v_max) {
    if (!(r > 0 && r < R)) throw DomainError("enumerate_orbits: need 0 < r < R");
    if (!(l_max > 0)) throw DomainError("enumerate_orbits: l_max must be positive");
    const double eps = 1e-12;
    std::vector<OrbitInstance> out;
    for (int k = 0; 2 * ((2 * k + 1) * R - r) <= l_max + eps; ++k) {
        out.push_back(radial_orbit(k, +1, r, p));
        if (2 * ((2 * k + 1) * R + r) <= l_max + eps) out.push_back(radial_orbit(k, -1, r, p));
    }
    for (int v = 2; v <= v_max; ++v) {
        for (int w = 1; w <= v / 2; ++w) {
            // every (v,w) orbit is longer than its v-1 full chords
            if (2.0 * (v - 1) * R * std::sin(pi * w / (v + 1)) > l_max + eps) continue;
            for (auto& o : solve_npo(v, w, r, p))
                if (o.length <= l_max + eps) out.push_back(std::move(o));
            double phi = w * pi / v;
            if (r >= R * std::cos(phi) && 2 * v * R * std::sin(phi) <= l_max + eps)
                out.push_back(po_properties(v, w, r, p));
        }
    }
    return out;
}

std::vector<BifurcationEvent> bifurcations(int v, int w) {
    auto fam = npo_family(v, w);
    std::vector<BifurcationEvent> ev;
    auto plain = OrbitClass::npo(v, w, Branch::plain);
    switch (fam) {
        case NpoFamily::Diameter:
            ev.push_back({0.0, BifurcationType::SymmetryBreaking, OrbitClass::po(v, w), {plain}});
            ev.push_back({R, BifurcationType::BoundaryCoalescence, plain, {OrbitClass::po(v + 1, w)}});
            break;
        case NpoFamily::Odd:
            ev.push_back({R / v, BifurcationType::Pitchfork, OrbitClass::radial_plus(w), {plain}});
            ev.push_back({R * std::cos(w * pi / v), BifurcationType::Pitchfork, plain, {OrbitClass::po(v, w)}});
            ev.push_back({R, BifurcationType::BoundaryCoalescence, plain, {OrbitClass::po(v + 1, w)}});
            break;
        case NpoFamily::Tangent: {
            auto primed = OrbitClass::npo(v, w, Branch::primed);
            auto t = tangent_bifurcation(v, w);
            if (t) ev.push_back({t->radius, BifurcationType::Tangent, plain, {plain, primed}});
            ev.push_back({R * std::cos(w * pi / v), BifurcationType::Pitchfork, plain, {OrbitClass::po(v, w)}});
            ev.push_back({R, BifurcationType::BoundaryCoalescence, plain, {OrbitClass::po(v + 1, w)}});
            ev.push_back({R, BifurcationType::BoundaryCoalescence, primed, {OrbitClass::po(v - 1, w)}});
            break;
        }
    }
    std::stable_sort(ev.begin(), ev.end(), [](const auto& a, const auto& b) { return a.radius < b.radius; });
    return ev;
}

AppendixClass parse_appendix_class(const std::string& s) {
    if (s == "2,1") return AppendixClass::Nabla21;
    if (s == "3,1") return AppendixClass::Lambda31;
    if (s == "4,1") return AppendixClass::P41;
    if (s == "4,1'") return AppendixClass::P41Primed;
    if (s == "5,1") return AppendixClass::Q51;
    if (s == "5,1'") return AppendixClass::Q51Primed;
    throw DomainError("unknown appendix class '" + s + "'");
}

OrbitInstance oracle_appendix(AppendixClass c, double r, double p) {
    if (!(r > 0 && r <= R)) throw DomainError("oracle_appendix: need 0 < r <= R");
    OrbitInstance o;
    switch (c) {
        case AppendixClass::Nabla21: {
            double x = (std::sqrt(R * R + 8 * r * r) - R) / (4 * r);
            double a = std::asin(x);
            o = base_instance(OrbitClass::npo(2, 1, Branch::plain), r, p);
            o.alpha = a;
            o.beta = pi / 2 - 2 * a;
            o.length = 4 * R * std::pow(1 - x * x, 1.5) / (1 - 2 * x * x);
            o.jacobian = R / p * std::tan(2 * a) * (x + r / R * (1 + 6 * x * x));
            o.q_mismatch = 1 - 8 * x * x + 8 * x * x * x * x;
            break;
        }
        case AppendixClass::Lambda31: {
            o = base_instance(OrbitClass::npo(3, 1, Branch::plain), r, p);
            if (r >= R / 3) {
                double x = 0.5 * std::sqrt(3 - R / r);
                o.alpha = std::asin(x);
                o.beta = npo_beta(3, 1, o.alpha);
            } else {
                o.ghost = true;
                o.alpha = o.beta = std::numeric_limits<double>::quiet_NaN();
            }
            double s = std::sqrt((R + r) / r);
            o.length = 2 * s * (R + r);
            o.q_mismatch = R * R / (2 * r * r * r) * (3 * r - R) - 1;
            o.jacobian = 2 / (R * p) * (2 * r - R) * (3 * r - R) * s;
            break;
        }
        case AppendixClass::P41:
        case AppendixClass::P41Primed: {
            const double x0 = std::sqrt((2 + std::sqrt(10.0)) / 12);
            // r(1 - 8x^2 + 8x^4) + R x = 0, via the companion matrix of the monic quartic
            Eigen::Matrix4d comp = Eigen::Matrix4d::Zero();
            comp(1, 0) = comp(2, 1) = comp(3, 2) = 1;
            double a4 = 8 * r;
            comp(0, 3) = -(r) / a4;
            comp(1, 3) = -(R) / a4;
            comp(2, 3) = -(-8 * r) / a4;
            comp(3, 3) = 0;
            Eigen::EigenSolver<Eigen::Matrix4d> es(comp, false);
            std::vector<double> xs;
            for (int i = 0; i < 4; ++i) {
                auto ev = es.eigenvalues()[i];
                if (std::abs(ev.imag()) < 1e-7 && ev.real() >= 0.5 - 1e-9 && ev.real() <= std::sin(0.3 * pi) + 1e-9)
                    xs.push_back(ev.real());
            }
            bool upper = c == AppendixClass::P41;
            std::optional<double> x;
            for (double xi : xs)
                if (upper ? xi >= x0 - 1e-7 : xi <= x0 + 1e-7) x = upper ? std::max(x.value_or(xi), xi) : std::min(x.value_or(xi), xi);
            if (!x) throw DomainError("(4,1) orbits exist only above the tangent radius 0.682489R");
            // polish the eigenvalue on the quartic itself
            double xv = *x;
            for (int it = 0; it < 4; ++it) {
                double f = r * (1 - 8 * xv * xv + 8 * std::pow(xv, 4)) + R * xv;
                double df = r * (-16 * xv + 32 * std::pow(xv, 3)) + R;
                xv -= f / df;
            }
            double a = std::asin(xv);
            o = base_instance(OrbitClass::npo(4, 1, upper ? Branch::plain : Branch::primed), r, p);
            o.alpha = a;
            o.beta = 1.5 * pi - 4 * a;
            double cb = -std::sin(4 * a), ca = std::cos(a);
            o.length = 2 * (4 * R * ca + r * cb);
            o.jacobian = 2 * r / p * cb * (1 + 4 * r / R * cb / ca);
            o.q_mismatch = std::cos(8 * a);
            break;
        }
        case AppendixClass::Q51:
        case AppendixClass::Q51Primed: {
            if (r < 0.8 * R) throw DomainError("(5,1) orbits exist only for r >= 4R/5");
            double sg = c == AppendixClass::Q51 ? 1.0 : -1.0;
            double d = std::sqrt(std::max(0.0, 5 - 4 * R / r));
            double x = 0.5 * std::sqrt(0.5 * (5 + sg * d));
            double root = std::sqrt(0.5 * (3 - sg * d));
            o = base_instance(OrbitClass::npo(5, 1, sg > 0 ? Branch::plain : Branch::primed), r, p);
            o.alpha = std::asin(x);
            o.beta = npo_beta(5, 1, o.alpha);
            o.length = R * root * (4 + r / R + sg * r / R * d);
            // Q = -1 + 2 x^2 / r^2 from Q = -cos(2 beta) and sin(5 alpha) = -x R / r
            o.q_mismatch = -1 + R * R / (4 * r * r) * (5 + sg * d);
            o.jacobian = 1 / (R * p) * root * (4 * R * R + 30 * r * r - 29 * R * r + sg * r * (-9 * R + 10 * r) * d);
            break;
        }
    }
    o.degeneracy = 2;
    fill_dynamics(o);
    return o;
}

}  // namespace diskdens
