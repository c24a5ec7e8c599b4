#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "diskdens/errors.hpp"
#include "diskdens/quantum.hpp"
#include "diskdens/semiclassical.hpp"
#include "diskdens/specfun.hpp"

using namespace diskdens;

namespace {

const double pi = std::acos(-1.0);

// composite Simpson of 2 pi r f(r) over [0, R], n even
template <class F>
double area_integral(F f, int n = 2000) {
    double h = units::R / n, s = 0;
    for (int i = 0; i <= n; ++i) {
        double r = i * h;
        double w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
        s += w * 2 * pi * r * f(r);
    }
    return s * h / 3;
}

}  // namespace

TEST_CASE("spectrum below small cutoffs") {
    auto s = build_spectrum(6.0);
    REQUIRE(s.levels.size() == 1);
    CHECK(s.levels[0].l == 0);
    CHECK(s.levels[0].degeneracy == 2);
    CHECK(s.levels[0].energy == doctest::Approx(5.783185962946784));
    CHECK(build_spectrum(0.5).levels.empty());
    CHECK_THROWS_AS(build_spectrum(0.0), DomainError);
}

TEST_CASE("spectrum is complete and sorted") {
    const double e_max = 900;
    auto s = build_spectrum(e_max);
    CHECK(std::is_sorted(s.levels.begin(), s.levels.end(),
                         [](const Level& a, const Level& b) { return a.energy < b.energy; }));
    // independent enumeration of all zeros below sqrt(e_max)
    int expected = 0;
    for (int l = 0; bessel_zero(l, 0) <= std::sqrt(e_max); ++l)
        for (int n = 0; bessel_zero(l, n) <= std::sqrt(e_max); ++n) ++expected;
    CHECK(static_cast<int>(s.levels.size()) == expected);
    for (const auto& lv : s.levels) {
        CHECK(lv.degeneracy == (lv.l == 0 ? 2 : 4));
        CHECK(lv.energy == doctest::Approx(lv.z * lv.z));
    }
    // two runs give the same list
    auto t = build_spectrum(e_max);
    REQUIRE(t.levels.size() == s.levels.size());
    for (std::size_t i = 0; i < s.levels.size(); ++i) CHECK(t.levels[i].energy == s.levels[i].energy);
    // particle count follows the Weyl law to O(sqrt(E))
    int count = 0;
    for (const auto& lv : s.levels) count += lv.degeneracy;
    CHECK(std::abs(count - counting_weyl(e_max)) < 3 * std::sqrt(e_max));
}

TEST_CASE("Fermi energy fills whole multiplets") {
    auto two = fermi_energy(2);
    CHECK(two.lambda == doctest::Approx(std::pow(bessel_zero(0, 0), 2)));
    CHECK(two.filled.size() == 1);
    auto six = fermi_energy(6);
    REQUIRE(six.filled.size() == 2);
    CHECK(six.filled[1].l == 1);
    CHECK(six.lambda == doctest::Approx(std::pow(bessel_zero(1, 0), 2)));
    CHECK_THROWS_AS(fermi_energy(7), DomainError);
    CHECK_THROWS_AS(fermi_energy(0), DomainError);
    try {
        fermi_energy(4);
        FAIL("4 splits the l = 1 multiplet");
    } catch (const OpenShellError& e) {
        CHECK(e.lower() == 2);
        CHECK(e.upper() == 6);
    }
    CHECK_THROWS_AS(fermi_energy(174), OpenShellError);
}

TEST_CASE("closed-subshell numbers") {
    auto ns = closed_shell_numbers(40);
    std::vector<int> want{2, 6, 10, 12, 16, 20, 24, 28, 30, 34, 38};
    CHECK(ns == want);
    for (int n : ns) CHECK(counting_exact(fermi_energy(n).lambda) == n);
}

TEST_CASE("smooth Fermi energy inverts the Weyl count") {
    for (int N : {2, 68, 606, 9834}) {
        double lt = smooth_fermi_energy(N);
        CHECK(counting_weyl(lt) == doctest::Approx(N).epsilon(1e-12));
    }
    double lt = smooth_fermi_energy(606);
    CHECK(std::sqrt(lt) == doctest::Approx(35.8186).epsilon(5e-4 / 35.8186));
    double asym = 2 * 606 + 2 * std::sqrt(2.0 * 606) + 4.0 / 3;
    CHECK(std::abs(lt - asym) < 5.0 / std::sqrt(606.0));
    double z = bessel_zero(0, 0);
    CHECK(counting_weyl(z * z) == doctest::Approx(z * z / 2 - z + 1.0 / 3));
}

TEST_CASE("exact counting function") {
    CHECK(counting_exact(0.0) == 0);
    CHECK(counting_exact(5.0) == 0);
    auto spec = build_spectrum(500);
    int prev = 0;
    for (double E = 0; E <= 500; E += 0.37) {
        int c = counting_exact(spec, E);
        CHECK(c >= prev);
        prev = c;
    }
    CHECK_THROWS_AS(counting_exact(spec, 600), DomainError);
}

TEST_CASE("density normalization and boundary values") {
    for (int N : {2, 68, 606}) {
        QuantumSystem qs(N);
        double n = area_integral([&](double r) { return qs.density(Channel::rho, r); });
        CHECK(n == doctest::Approx(N).epsilon(1e-3));
        auto wall = qs.at(units::R);
        CHECK(wall.rho == 0.0);
        CHECK(wall.tau == 0.0);
        CHECK(wall.tau1 > 0.0);
    }
    QuantumSystem two(2);
    double c = 1 / (std::sqrt(pi) * bessel_j(1, bessel_zero(0, 0)));
    CHECK(two.density(Channel::rho, 0.0) == doctest::Approx(2 * c * c));
    CHECK(density_rho(0.3, 68) == doctest::Approx(QuantumSystem(68).at(0.3).rho));
}

TEST_CASE("both kinetic densities integrate to the total energy") {
    QuantumSystem qs(68);
    double e = 0;
    for (const auto& lv : qs.filled()) e += lv.degeneracy * lv.energy;
    CHECK(area_integral([&](double r) { return qs.at(r).tau; }, 4000) == doctest::Approx(e).epsilon(1e-4));
    CHECK(area_integral([&](double r) { return qs.at(r).tau1; }, 4000) == doctest::Approx(e).epsilon(1e-4));
}

TEST_CASE("tau and tau1 sit symmetrically around xi with a finite-difference Laplacian") {
    QuantumSystem qs(68);
    const double h = 1e-4;
    for (double r : {0.1, 0.25, 0.5, 0.73, 0.9}) {
        auto rho = [&](double x) { return qs.at(x).rho; };
        double lap = (rho(r + h) - 2 * rho(r) + rho(r - h)) / (h * h) + (rho(r + h) - rho(r - h)) / (2 * h * r);
        auto d = qs.at(r);
        double scale = std::max(std::abs(d.tau), std::abs(d.tau1));
        CHECK(std::abs(d.tau - (d.xi - lap / 4)) <= 1e-4 * scale);
        CHECK(std::abs(d.tau1 - (d.xi + lap / 4)) <= 1e-4 * scale);
        CHECK(d.laplacian_rho == doctest::Approx(lap).epsilon(1e-4));
        CHECK(d.tau >= 0.0);
    }
}

TEST_CASE("quantum density oscillates around the Thomas-Fermi value") {
    const int N = 606;
    QuantumSystem qs(N);
    double tf = tf_densities(N).rho;
    double mean = 0;
    int n = 0;
    for (double r = 0.1; r <= 0.8; r += 0.0005, ++n) mean += qs.at(r).rho - tf;
    mean /= n;
    CHECK(std::abs(mean) < 0.05 * tf);
    CHECK(tf * pi * units::R * units::R != doctest::Approx(N).epsilon(1e-3));
}

TEST_CASE("channel names") {
    for (auto c : {Channel::rho, Channel::tau, Channel::tau1, Channel::xi}) CHECK(parse_channel(channel_name(c)) == c);
    CHECK_THROWS_AS(parse_channel("kappa"), DomainError);
}

TEST_CASE("exact shell correction: closed shells sit in minima") {
    auto ns = closed_shell_numbers(700);
    std::vector<double> de;
    for (int n : ns) de.push_back(shell_correction_exact(n));
    auto idx = [&](int N) { return std::find(ns.begin(), ns.end(), N) - ns.begin(); };
    for (int N : {68, 606}) {
        auto i = idx(N);
        REQUIRE(i > 0);
        CHECK(de[i] < de[i - 1]);
        CHECK(de[i] < de[i + 1]);
    }
    // mid-shell systems: 354 and, since 174 splits a multiplet, its neighbour 172 are local maxima
    for (int N : {172, 354}) {
        auto i = idx(N);
        CHECK(de[i] > de[i - 1]);
        CHECK(de[i] > de[i + 1]);
    }
    // the envelope grows: largest |dE| in the upper half exceeds that of the lower half
    double lo = 0, hi = 0;
    for (std::size_t i = 0; i < ns.size(); ++i) (ns[i] < 350 ? lo : hi) = std::max(ns[i] < 350 ? lo : hi, std::abs(de[i]));
    CHECK(hi > lo);
}
