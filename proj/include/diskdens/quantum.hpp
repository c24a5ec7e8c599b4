#pragma once

#include <memory>
#include <string>
#include <vector>

namespace diskdens {

// hbar = 1, hbar^2/2m = 1 (m = 1/2), R = 1, so E0 = 1 and p = sqrt(E).
namespace units {
inline constexpr double hbar = 1.0;
inline constexpr double mass = 0.5;
inline constexpr double R = 1.0;
inline constexpr double E0 = 1.0;
}  // namespace units

struct Level {
    double energy;  // z^2 E0
    double z;       // Bessel zero z_{nl}
    int l;
    int n;
    int degeneracy;  // spin times +-l
};

struct QuantumSpectrum {
    std::vector<Level> levels;
    double e_max = 0.0;
};

QuantumSpectrum build_spectrum(double e_max);

struct FermiState {
    double lambda;
    std::vector<Level> filled;
};

FermiState fermi_energy(int N);

// Weyl counting function with spin, E/2E0 - sqrt(E/E0) + 1/3.
double counting_weyl(double E);
int counting_exact(double E);
int counting_exact(const QuantumSpectrum& spec, double E);
double smooth_fermi_energy(int N);

// 2 * integral_0^lambda E g(E) dE for the Weyl density.
double smooth_total_energy(double lambda_tilde);

enum class Channel { rho, tau, tau1, xi };
Channel parse_channel(const std::string& name);
std::string channel_name(Channel c);

struct LocalDensities {
    double rho, tau, tau1, xi;
    double laplacian_rho;  // 2 (tau1 - tau), exact for the Bessel sums
};

// Filled-level system for one N; immutable and safe to share between threads.
class QuantumSystem {
public:
    explicit QuantumSystem(int N);

    int N() const noexcept { return N_; }
    double lambda() const noexcept { return state_.lambda; }
    const std::vector<Level>& filled() const noexcept { return state_.filled; }

    LocalDensities at(double r) const;
    double density(Channel c, double r) const;

private:
    int N_;
    FermiState state_;
    std::vector<double> c2_;
};

double density_rho(double r, int N);
double density_tau(double r, int N);
double density_tau1(double r, int N);
double density_xi(double r, int N);

double shell_correction_exact(int N);

// Closed-subshell particle numbers (cumulative degeneracies) up to n_max.
std::vector<int> closed_shell_numbers(int n_max);

}  // namespace diskdens
