// The curves JClose{gamma tau} for one quadratic tau and a few gamma in SL2(Z).
// They share the X slot j(tau) but their Z slots separate as Im(gamma tau) changes,
// while w = j'(gamma tau) lands on J(gamma tau) itself.
#include <iostream>

#include "jderiv/varieties.hpp"

using namespace jderiv;

int main()
{
    const int prec = 192;
    const QuadraticPoint tau = qpoint(1, 0, 5);
    const HPComplex w = HPComplex::from_long(1, working_prec(prec)).tagged(prec);
    for (const Mat2Z &g : {Mat2Z::identity(), Mat2Z::S(), Mat2Z(1, 0, 1, 1), Mat2Z(2, 1, 1, 1)}) {
        JCloseCurve curve = jclose_curve(tau, prec, g);
        const HPComplex gt = g.act(tau.value(prec)).tagged(prec);
        JValues jv = eval_J(gt, prec);
        auto on = curve.at(jv.jp);
        std::cout << g.to_string() << "  Im(g tau) = " << curve.c().to_string(12) << "\n"
                  << "  Z at w=1        " << to_string(curve.at(w)[2], 15) << "\n"
                  << "  |p - j''(g tau)| " << relative_residual(on[2], jv.jpp).to_sci(2) << "\n";
    }
}
