#pragma once

#include <functional>

namespace levysim {

struct QuadratureOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-11;
    int max_depth = 60;
};

/// Adaptive Gauss-Kronrod (G7,K15) integration of f over [a, b].
/// Either endpoint may be +-infinity; infinite ranges are mapped onto a
/// bounded parameter before subdivision. Intervals are bisected until the
/// embedded error estimate meets abs_tol or rel_tol.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opt = {});

}  // namespace levysim
