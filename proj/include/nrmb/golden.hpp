// golden.hpp — golden-section search for the maximum of a unimodal function.

#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

namespace nrmb {

struct ScalarMax {
    double x = 0.0;
    double value = 0.0;
    int evaluations = 0;
};

// Maximizes f on [a, b] until the bracket is narrower than tol. The returned
// point is the better of the two interior probes of the final bracket.
template <class F>
ScalarMax golden_section_maximize(F&& f, double a, double b, double tol) {
    if (!(b > a)) throw std::invalid_argument("golden_section_maximize: need a < b");
    if (!(tol > 0.0)) throw std::invalid_argument("golden_section_maximize: tol must be positive");
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;

    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    int evals = 2;
    while (b - a > tol) {
        if (f1 >= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
        ++evals;
    }
    return f1 >= f2 ? ScalarMax{x1, f1, evals} : ScalarMax{x2, f2, evals};
}

}  // namespace nrmb
