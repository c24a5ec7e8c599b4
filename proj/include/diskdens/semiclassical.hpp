#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "diskdens/orbits.hpp"
#include "diskdens/quantum.hpp"

namespace diskdens {

struct TruncationConfig {
    int k_max_radial = 2;
    int k_max_diameter = 10;
    bool include_tangent_pairs = false;
    std::vector<std::pair<int, int>> pitchfork_classes{{3, 1}, {5, 2}};
    double switch_fraction = 0.5;    // 0.5 = midway between adjacent critical radii
    double overlap_threshold = 1.0;  // minimal action separation of neighbouring bifurcations, units of hbar
    double tangent_guard = 5.0;      // action half-difference below which tangent-pair terms are dropped
    int v_max_tangent = 6;

    void validate() const;
};

double amplitude(const OrbitInstance& inst);

// Per-orbit factor distinguishing the channels: 1, p^2/2m, Q p^2/2m, (1+Q) p^2/4m.
double channel_weight(Channel ch, double p, double q);

double isolated_contribution(const OrbitInstance& inst, Channel ch = Channel::rho);

double uniform_radial_sb_term(int k, double r, double p, Channel ch = Channel::rho);
double uniform_radial_sb(double r, double p, int k_max, Channel ch = Channel::rho);

double uniform_diameter_sb_term(int k, double r, double p, Channel ch = Channel::rho);
double uniform_diameter_sb(double r, double p, int k_max, Channel ch = Channel::rho);

using OrbitProvider = std::function<OrbitInstance(double r)>;

// Pitchfork uniform formula from instances already evaluated at the same r.
double pitchfork_value(const OrbitInstance& parent, const OrbitInstance& child, double r_b, double mu0,
                       Channel ch = Channel::rho);
// Same, but bridges |r - r_b| < 1e-4 R by cubic interpolation where sign(r - r_b) is ill-defined.
double uniform_pitchfork(double r, const OrbitProvider& parent, const OrbitProvider& child, double r_b, double mu0,
                         Channel ch = Channel::rho);

double friedel_boundary(double r, double p);
double friedel_isolated(double r, double p);

enum class Regime { SymmetryBreakingRadial, SymmetryBreakingDiameter, PitchforkUniform, FriedelBoundary, IsolatedSum };
std::string regime_name(Regime g);

struct CriticalRadius {
    double radius;
    std::string type;
    std::string label;
};

struct PlanRegion {
    double lo, hi;
    Regime regime;
    std::string label;
    int k = 0;        // radial repetition of the chain, or diameter-family cutoff
    double r_b = 0;   // bifurcation radius for pitchfork regions
    double mu0 = 0;
    int stage = 0;    // pitchfork chains: 1 = radial parent, 2 = periodic-orbit child
};

// One orbit group evaluated along (0, R]; its regions partition the interval.
struct PlanTrack {
    std::string name;
    std::vector<PlanRegion> regions;
    const PlanRegion& region_at(double r) const;
};

struct TangentClassPlan {
    int v, w;
    double tangent_radius;
    double caustic;
};

struct UniformPlan {
    double p = 0;
    TruncationConfig config;
    std::vector<CriticalRadius> critical_radii;
    std::vector<PlanTrack> tracks;
    std::vector<TangentClassPlan> tangent_classes;
};

UniformPlan build_plan(int N, const TruncationConfig& config = {});
UniformPlan build_plan_for_momentum(double p, const TruncationConfig& config = {});

struct DensityParts {
    double radial = 0;     // L+-^(k) families including the boundary term
    double diameter = 0;   // (2k,k) family
    double pitchfork = 0;  // (2k+1,k) orbits and their POs
    double tangent = 0;
    double total() const { return radial + diameter + pitchfork + tangent; }
};

class SemiclassicalDensity {
public:
    explicit SemiclassicalDensity(int N, TruncationConfig config = {});
    static SemiclassicalDensity from_momentum(double p, TruncationConfig config = {});

    double p() const noexcept { return plan_.p; }
    double lambda_tilde() const noexcept { return plan_.p * plan_.p; }
    const UniformPlan& plan() const noexcept { return plan_; }

    // Kinetic channels have no boundary regularization; values above this radius are flagged.
    double kinetic_truncation_radius() const noexcept { return units::R - units::hbar / plan_.p; }

    DensityParts parts(double r, Channel ch = Channel::rho) const;
    double operator()(double r, Channel ch = Channel::rho) const { return parts(r, ch).total(); }

private:
    explicit SemiclassicalDensity(UniformPlan plan) : plan_(std::move(plan)) {}
    double tangent_part(double r, Channel ch) const;
    UniformPlan plan_;
};

double delta_density(double r, int N, Channel ch = Channel::rho, const TruncationConfig& config = {});

struct TfDensities {
    double rho;
    double tau;
};
TfDensities tf_densities(int N);
TfDensities tf_densities_for(double lambda_tilde);

double shell_correction_semiclassical(int N, int v_max, int w_max);

}  // namespace diskdens
