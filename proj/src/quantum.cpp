#include "diskdens/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "diskdens/errors.hpp"
#include "diskdens/specfun.hpp"

namespace diskdens {

namespace {
constexpr double pi = std::numbers::pi;

void require_valid_n(int N) {
    if (N < 2 || N % 2 != 0) throw DomainError("N must be an even integer >= 2, got " + std::to_string(N));
}
}  // namespace

QuantumSpectrum build_spectrum(double e_max) {
    if (!(e_max > 0.0)) throw DomainError("build_spectrum: e_max must be positive");
    QuantumSpectrum spec;
    spec.e_max = e_max;
    for (int l = 0;; ++l) {
        if (std::pow(bessel_zero(l, 0), 2) > e_max) break;
        for (int n = 0;; ++n) {
            double z = bessel_zero(l, n);
            if (z * z > e_max) break;
            spec.levels.push_back({z * z * units::E0, z, l, n, l == 0 ? 2 : 4});
        }
    }
    std::sort(spec.levels.begin(), spec.levels.end(),
              [](const Level& a, const Level& b) { return a.energy < b.energy; });
    return spec;
}

FermiState fermi_energy(int N) {
    require_valid_n(N);
    double e_max = 1.2 * smooth_fermi_energy(N) + 50.0;
    for (;;) {
        auto spec = build_spectrum(e_max);
        FermiState st;
        int count = 0;
        for (const auto& lv : spec.levels) {
            int before = count;
            count += lv.degeneracy;
            st.filled.push_back(lv);
            if (count == N) {
                st.lambda = lv.energy;
                return st;
            }
            if (count > N) throw OpenShellError(N, before, count);
        }
        e_max *= 2.0;
    }
}

double counting_weyl(double E) {
    if (E < 0.0) throw DomainError("counting_weyl: E must be non-negative");
    return E / (2.0 * units::E0) - std::sqrt(E / units::E0) + 1.0 / 3.0;
}

int counting_exact(const QuantumSpectrum& spec, double E) {
    if (E > spec.e_max) throw DomainError("counting_exact: spectrum incomplete above its e_max");
    int count = 0;
    for (const auto& lv : spec.levels) {
        if (lv.energy > E) break;
        count += lv.degeneracy;
    }
    return count;
}

int counting_exact(double E) {
    if (E < 0.0) throw DomainError("counting_exact: E must be non-negative");
    if (E == 0.0) return 0;
    return counting_exact(build_spectrum(E), E);
}

double smooth_fermi_energy(int N) {
    if (N < 2) throw DomainError("smooth_fermi_energy: N must be >= 2");
    // E/2 - sqrt(E) + 1/3 = N is a quadratic in sqrt(E); the larger root is the physical one.
    double s = 1.0 + std::sqrt(2.0 * N - 2.0 / 3.0 + 1.0);
    return s * s * units::E0;
}

double smooth_total_energy(double lt) {
    return lt * lt / (4.0 * units::E0) - std::pow(lt, 1.5) / (3.0 * std::sqrt(units::E0));
}

Channel parse_channel(const std::string& name) {
    if (name == "rho") return Channel::rho;
    if (name == "tau") return Channel::tau;
    if (name == "tau1") return Channel::tau1;
    if (name == "xi") return Channel::xi;
    throw DomainError("unknown channel '" + name + "'");
}

std::string channel_name(Channel c) {
    switch (c) {
        case Channel::rho: return "rho";
        case Channel::tau: return "tau";
        case Channel::tau1: return "tau1";
        case Channel::xi: return "xi";
    }
    return "?";
}

QuantumSystem::QuantumSystem(int N) : N_(N), state_(fermi_energy(N)) {
    c2_.reserve(state_.filled.size());
    for (const auto& lv : state_.filled) {
        double jl1 = bessel_j(lv.l + 1, lv.z);
        c2_.push_back(1.0 / (pi * units::R * units::R * jl1 * jl1));
    }
}

LocalDensities QuantumSystem::at(double r) const {
    if (r < 0.0 || r > units::R) throw DomainError("density: r must lie in [0, R]");
    double rho = 0, tau = 0, tau1 = 0;
    for (std::size_t i = 0; i < state_.filled.size(); ++i) {
        const auto& lv = state_.filled[i];
        double k = lv.z / units::R;
        double x = k * r;
        double w = lv.degeneracy * c2_[i];
        // Dirichlet wall: J_l(z_nl) vanishes identically, do not let rounding say otherwise
        double j = r == units::R ? 0.0 : bessel_j(lv.l, x);
        double jp = bessel_j_prime(lv.l, x);
        // (l/r) J_l(kr) = (k/2)(J_{l-1} + J_{l+1}), regular at r = 0
        double lj = (lv.l == 0 || r == units::R) ? 0.0 : 0.5 * k * (bessel_j(lv.l - 1, x) + bessel_j(lv.l + 1, x));
        rho += w * j * j;
        tau += w * k * k * j * j;
        tau1 += w * (k * k * jp * jp + lj * lj);
    }
    return {rho, tau, tau1, 0.5 * (tau + tau1), 2.0 * (tau1 - tau)};
}

double QuantumSystem::density(Channel c, double r) const {
    auto d = at(r);
    switch (c) {
        case Channel::rho: return d.rho;
        case Channel::tau: return d.tau;
        case Channel::tau1: return d.tau1;
        case Channel::xi: return d.xi;
    }
    return 0.0;
}

double density_rho(double r, int N) { return QuantumSystem(N).at(r).rho; }
double density_tau(double r, int N) { return QuantumSystem(N).at(r).tau; }
double density_tau1(double r, int N) { return QuantumSystem(N).at(r).tau1; }
double density_xi(double r, int N) { return QuantumSystem(N).at(r).xi; }

double shell_correction_exact(int N) {
    auto st = fermi_energy(N);
    double e = 0.0;
    for (const auto& lv : st.filled) e += lv.degeneracy * lv.energy;
    return e - smooth_total_energy(smooth_fermi_energy(N));
}

std::vector<int> closed_shell_numbers(int n_max) {
    std::vector<int> out;
    auto spec = build_spectrum(1.2 * smooth_fermi_energy(std::max(n_max, 2)) + 50.0);
    int count = 0;
    for (const auto& lv : spec.levels) {
        count += lv.degeneracy;
        if (count > n_max) break;
        out.push_back(count);
    }
    return out;
}

}  // namespace diskdens
