#pragma once

#include <string>
#include <vector>

#include "diskdens/quantum.hpp"
#include "diskdens/semiclassical.hpp"

namespace diskdens {

struct DensityProfile {
    std::vector<double> grid;
    std::vector<double> values;
    std::string channel;  // rho, tau, tau1, xi, or delta_<channel>
    int N = 0;
    std::string method;   // quantum or semiclassical
};

std::vector<double> linear_grid(int n, double lo = 0.0, double hi = units::R);

// Smooth (Thomas-Fermi) value subtracted to form the delta_ channels.
double tf_value(Channel ch, double lambda_tilde);

DensityProfile quantum_profile(const QuantumSystem& sys, Channel ch, const std::vector<double>& grid,
                               bool delta = true);
DensityProfile semiclassical_profile(const SemiclassicalDensity& sc, int N, Channel ch,
                                     const std::vector<double>& grid);

double rms(const std::vector<double>& x);
double rms_difference(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace diskdens
