// Example 1: V cut out by Phi_2(X1, X2), Phi_2(X3, X4) and the diagonal in the
// (m_g, m_h) plane. Upper-triangular g, h give m = 1/2 at every quadratic point, so
// every such special image lands in V; a lower-triangular h does not.
#include <iostream>

#include "jderiv/varieties.hpp"

using namespace jderiv;

int main()
{
    const int prec = 256;
    const Variety w(2, {MPoly::var(2, 0) - MPoly::var(2, 1)});
    const Mat2Z g(2, 0, 0, 1), h_low(1, 0, 2, 2);
    Example1Variety v = example1_build(2, 2, w);
    for (std::size_t k = 0; k < v.v.polys.size(); ++k) {
        std::cout << "poly " << k << ": " << v.v.polys[k].terms().size() << " monomials\n";
    }
    Rng rng(2024);
    for (int k = 0; k < 5; ++k) {
        QuadraticPoint tau = random_quadratic(rng, 9), sigma = random_quadratic(rng, 9);
        for (const Mat2Z &h : {g, h_low}) {
            try {
                Example1Check c = example1_special_check(w, g, h, tau, sigma, prec);
                std::cout << tau.to_string() << " " << sigma.to_string() << " h=" << h.to_string() << "  m = ("
                          << c.m_tau << ", " << c.m_sigma << ")  " << (c.exact ? "in V" : "not in V")
                          << "  residual " << c.residual.to_sci(2) << "\n";
            } catch (const DenominatorLocusError &e) {
                std::cout << e.what() << "\n";
            }
        }
    }
}
