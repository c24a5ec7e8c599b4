#include "diskdens/profiles.hpp"

#include <cmath>

#include "diskdens/errors.hpp"

namespace diskdens {

std::vector<double> linear_grid(int n, double lo, double hi) {
    if (n < 2) throw DomainError("grid needs at least 2 points");
    if (!(lo >= 0 && hi <= units::R && lo < hi)) throw DomainError("grid must lie inside [0, R]");
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * i / (n - 1);
    g.back() = hi;
    return g;
}

double tf_value(Channel ch, double lt) {
    auto tf = tf_densities_for(lt);
    return ch == Channel::rho ? tf.rho : tf.tau;
}

DensityProfile quantum_profile(const QuantumSystem& sys, Channel ch, const std::vector<double>& grid, bool delta) {
    DensityProfile out;
    out.grid = grid;
    out.N = sys.N();
    out.method = "quantum";
    out.channel = (delta ? "delta_" : "") + channel_name(ch);
    const double smooth = delta ? tf_value(ch, smooth_fermi_energy(sys.N())) : 0.0;
    out.values.reserve(grid.size());
    for (double r : grid) out.values.push_back(sys.density(ch, r) - smooth);
    return out;
}

DensityProfile semiclassical_profile(const SemiclassicalDensity& sc, int N, Channel ch,
                                     const std::vector<double>& grid) {
    DensityProfile out;
    out.grid = grid;
    out.N = N;
    out.method = "semiclassical";
    out.channel = "delta_" + channel_name(ch);
    out.values.reserve(grid.size());
    for (double r : grid) out.values.push_back(sc(r, ch));
    return out;
}

double rms(const std::vector<double>& x) {
    double s = 0;
    for (double v : x) s += v * v;
    return std::sqrt(s / x.size());
}

double rms_difference(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw DomainError("rms_difference: size mismatch");
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s / a.size());
}

}  // namespace diskdens
