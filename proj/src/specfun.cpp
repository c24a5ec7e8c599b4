#include "diskdens/specfun.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/bessel_prime.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "diskdens/errors.hpp"

namespace diskdens {

BesselOrder BesselOrder::integer(int l) {
    if (l < 0) throw DomainError("integer Bessel order must be >= 0, got " + std::to_string(l));
    return BesselOrder(static_cast<double>(l), true, l);
}

BesselOrder BesselOrder::quarter(int q) {
    if (q != -3 && q != -1 && q != 1 && q != 3)
        throw DomainError("fractional Bessel order must be one of +-1/4, +-3/4");
    return BesselOrder(q / 4.0, false, 0);
}

std::string BesselOrder::str() const {
    if (integer_) return std::to_string(l_);
    return (nu_ < 0 ? "-" : "") + std::to_string(static_cast<int>(std::abs(nu_) * 4)) + "/4";
}

double bessel_j(const BesselOrder& order, double x) {
    if (!(x >= 0.0)) throw DomainError("bessel_j: x must be non-negative");
    if (order.is_integer()) return bessel_j(order.as_int(), x);
    if (order.value() < 0.0 && x == 0.0)
        throw DomainError("bessel_j: J_" + order.str() + " diverges at x = 0");
    if (x == 0.0) return 0.0;
    return boost::math::cyl_bessel_j(order.value(), x);
}

double bessel_j(int l, double x) {
    if (l < 0) throw DomainError("bessel_j: negative integer order");
    if (x == 0.0) return l == 0 ? 1.0 : 0.0;
    return boost::math::cyl_bessel_j(l, x);
}

double bessel_j_prime(int l, double x) {
    if (l < 0) throw DomainError("bessel_j_prime: negative integer order");
    if (x == 0.0) return l == 1 ? 0.5 : 0.0;
    return boost::math::cyl_bessel_j_prime(l, x);
}

namespace {

class ZeroTable {
public:
    double get(int l, int n) {
        {
            std::shared_lock lock(mutex_);
            auto it = zeros_.find(l);
            if (it != zeros_.end() && static_cast<int>(it->second.size()) > n) return it->second[n];
        }
        std::unique_lock lock(mutex_);
        auto& zs = zeros_[l];
        while (static_cast<int>(zs.size()) <= n) zs.push_back(next_zero(l, zs.empty() ? -1.0 : zs.back()));
        return zs[n];
    }

private:
    static double next_zero(int l, double previous) {
        constexpr double step = std::numbers::pi / 4;
        // consecutive zeros are never closer than ~2.4, so the offset skips the previous one safely
        double a = previous < 0 ? std::max(0.5, static_cast<double>(l)) : previous + 0.5;
        double fa = bessel_j(l, a);
        double b = a + step;
        double fb = bessel_j(l, b);
        while (fa * fb > 0.0) {
            a = b;
            fa = fb;
            b += step;
            fb = bessel_j(l, b);
        }
        if (fb == 0.0) return b;
        auto f = [l](double x) { return bessel_j(l, x); };
        std::uintmax_t iters = 200;
        auto tol = [](double lo, double hi) { return std::abs(hi - lo) <= 1e-15 * hi; };
        auto [lo, hi] = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, iters);
        double mid = 0.5 * (lo + hi);
        return std::abs(bessel_j(l, lo)) < std::abs(bessel_j(l, mid)) ? lo : mid;
    }

    std::shared_mutex mutex_;
    std::unordered_map<int, std::vector<double>> zeros_;
};

ZeroTable& zero_table() {
    static ZeroTable table;
    return table;
}

}  // namespace

double bessel_zero(int l, int n) {
    if (l < 0 || n < 0) throw DomainError("bessel_zero: l and n must be non-negative");
    return zero_table().get(l, n);
}

double gamma_quarter() {
    static const double g = boost::math::tgamma(0.25);
    return g;
}

}  // namespace diskdens
