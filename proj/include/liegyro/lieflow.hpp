#pragma once

#include "liegyro/polyalg.hpp"

#include <stdexcept>
#include <vector>

namespace liegyro {

// Scaled Taylor coefficients of a solution at an expansion point:
// coeffs[n] = (1/n!) d^n z / dt^n, so z(t) ~= sum_n coeffs[n] t^n.
struct Jet {
    std::vector<std::vector<double>> coeffs;  // (order + 1) vectors of size p

    int order() const { return static_cast<int>(coeffs.size()) - 1; }
};

struct FlowConfig {
    int order = 20;           // truncation order N of each expansion
    double step_safety = 0.5; // shrink factor on the ratio-test step estimate
    double abs_tol = 1e-12;   // target series tail per substep

    void validate() const;
};

// Thrown when the series stepping cannot continue (non-finite jet or a
// collapsed substep); t_reached is the time actually attained.
class FlowError : public std::runtime_error {
public:
    FlowError(const std::string& msg, double t_reached)
        : std::runtime_error(msg), t_reached_(t_reached) {}
    double t_reached() const { return t_reached_; }

private:
    double t_reached_;
};

// Taylor coefficients of the solution of dz/dt = field(z) with z(0) = z0,
// computed by the jet recurrence (coefficient n+1 of each component is the
// n-th series coefficient of the corresponding field polynomial evaluated on
// the truncated jets, divided by n + 1). Throws std::overflow_error naming
// the offending order if a coefficient turns non-finite.
Jet taylor_coefficients(const PolyVectorField& field, const std::vector<double>& z0, int order);

// Evaluate the flow of the field at time t (either sign). The expansion is
// re-centred whenever the ratio test on the trailing jet coefficients says
// the requested step would exceed abs_tol; long spans therefore become a
// composition of substeps.
std::vector<double> lie_propagate(const PolyVectorField& field, const std::vector<double>& z0,
                                  double t, const FlowConfig& cfg = {});

}  // namespace liegyro
