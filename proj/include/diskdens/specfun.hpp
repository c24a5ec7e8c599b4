#pragma once

#include <string>

namespace diskdens {

// Orders used anywhere in the density formulas: integers l >= 0 and the
// four quarter orders of the pitchfork uniform approximation.
class BesselOrder {
public:
    static BesselOrder integer(int l);
    static BesselOrder quarter(int q);  // q in {-3,-1,1,3}, order q/4

    double value() const noexcept { return nu_; }
    bool is_integer() const noexcept { return integer_; }
    int as_int() const noexcept { return l_; }
    std::string str() const;

private:
    BesselOrder(double nu, bool integer, int l) : nu_(nu), integer_(integer), l_(l) {}
    double nu_;
    bool integer_;
    int l_;
};

double bessel_j(const BesselOrder& order, double x);
double bessel_j(int l, double x);
double bessel_j_prime(int l, double x);

// n-th positive zero of J_l, n = 0 being the first.
double bessel_zero(int l, int n);

double gamma_quarter();

}  // namespace diskdens
