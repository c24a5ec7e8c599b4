#pragma once

#include <optional>
#include <string>
#include <vector>

namespace diskdens {

enum class OrbitKind { RadialPlus, RadialMinus, NonRadialNPO, PeriodicOrbit };
enum class Branch { none, plain, primed };

// Which bifurcation scenario creates a non-radial (v,w) class.
enum class NpoFamily {
    Diameter,  // (2k,k): symmetry breaking of the diameter family at r = 0
    Odd,       // (2k+1,k): pitchfork from L+^(k) at R/(2k+1)
    Tangent,   // everything else: pairwise birth at a minimum of r(alpha)
};

struct OrbitClass {
    OrbitKind kind;
    int v = 0;
    int w = 0;
    int k = 0;  // repetition number, radial orbits only (v = 2k+1)
    Branch branch = Branch::none;

    static OrbitClass radial_plus(int k);
    static OrbitClass radial_minus(int k);
    static OrbitClass npo(int v, int w, Branch b);
    static OrbitClass po(int v, int w);

    std::string label() const;
    bool operator==(const OrbitClass&) const = default;
};

struct OrbitInstance {
    OrbitClass cls;
    double r = 0;
    double p = 0;      // Fermi momentum the Jacobian and action refer to
    double alpha = 0;  // reflection angle (imaginary part for ghosts)
    double beta = 0;   // starting angle
    double length = 0;
    double action = 0;
    double jacobian = 0;
    double q_mismatch = 0;
    std::optional<int> morse;  // empty at critical starting points and for ghosts
    double period = 0;
    int degeneracy = 1;
    bool ghost = false;
};

enum class BifurcationType { SymmetryBreaking, Pitchfork, Tangent, BoundaryCoalescence };
std::string bifurcation_type_name(BifurcationType t);

struct BifurcationEvent {
    double radius;
    BifurcationType type;
    OrbitClass parent;
    std::vector<OrbitClass> children;
};

NpoFamily npo_family(int v, int w);
void validate_npo_class(int v, int w);
void validate_po_class(int v, int w);

// (-1)^w R sin(a) / cos(v pi/2 - v a); throws DomainError on the poles.
double closure_radius(int v, int w, double alpha);
double closure_slope(int v, int w, double alpha);
double npo_beta(int v, int w, double alpha);

// Range of alpha in which the orbit really winds w times with v reflections.
std::pair<double, double> npo_alpha_window(int v, int w);

OrbitInstance npo_instance(int v, int w, double alpha, double r, double p);
std::vector<OrbitInstance> solve_npo(int v, int w, double r, double p);

double npo_length(const OrbitInstance& inst);
double npo_jacobian(const OrbitInstance& inst);
double npo_q(const OrbitInstance& inst);

OrbitInstance radial_orbit(int k, int sign, double r, double p);
OrbitInstance po_properties(int v, int w, double r, double p);

// (2k+1,k) orbit at any 0 < r <= R: the real orbit above R/(2k+1), its real
// ghost continuation (alpha = i*eta) below.
OrbitInstance odd_npo_continued(int k, double r, double p);

struct TangentPoint {
    double radius;
    double alpha;
};
std::optional<TangentPoint> tangent_bifurcation(int v, int w);
std::optional<double> tangent_bifurcation_radius(int v, int w);

int morse_index(const OrbitInstance& inst);

std::vector<OrbitInstance> enumerate_orbits(double r, double l_max, double p, int v_max = 64);

std::vector<BifurcationEvent> bifurcations(int v, int w);

enum class AppendixClass { Nabla21, Lambda31, P41, P41Primed, Q51, Q51Primed };
AppendixClass parse_appendix_class(const std::string& name);
OrbitInstance oracle_appendix(AppendixClass c, double r, double p);

}  // namespace diskdens
