#include "qbsim/dispersive.hpp"

#include "qbsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qbsim::dispersive {

namespace {

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) throw ValidationError(std::string("dispersive: ") + name + " is not finite");
}

} // namespace

DispersiveParams dispersive_map(const CircuitParams& p) {
    require_finite(p.omega_a, "omega_a");
    require_finite(p.omega_q, "omega_q");
    require_finite(p.omega_b, "omega_b");
    require_finite(p.g_a, "g_a");
    require_finite(p.g_b, "g_b");
    require_finite(p.gamma, "gamma");
    if (p.omega_a <= 0.0) throw ValidationError("dispersive: omega_a must be > 0");
    if (p.gamma <= 0.0) throw ValidationError("dispersive: gamma must be > 0");

    DispersiveParams d;
    d.delta_a = p.omega_q - p.omega_a;
    d.delta_b = p.omega_q - p.omega_b;
    if (d.delta_a == 0.0)
        throw ValidationError("dispersive: detuning delta_a = omega_q - omega_a vanishes");
    if (d.delta_b == 0.0)
        throw ValidationError("dispersive: detuning delta_b = omega_q - omega_b vanishes");

    d.chi_a = p.g_a * p.g_a / d.delta_a;
    d.chi_b = p.g_b * p.g_b / d.delta_b;
    // omega_q = (omega_a + omega_b)/2 only holds to rounding, so a detuning sum
    // below the resolution of the inputs counts as an exact switch-off.
    double delta_sum = d.delta_a + d.delta_b;
    const double resolution =
        4.0 * std::numeric_limits<double>::epsilon() *
        std::max({std::abs(p.omega_a), std::abs(p.omega_b), std::abs(p.omega_q)});
    if (std::abs(delta_sum) <= resolution) delta_sum = 0.0;
    d.lambda_ab = delta_sum == 0.0 ? 0.0 : p.g_a * p.g_b * delta_sum / (d.delta_a * d.delta_b);
    d.ratio_a = std::abs(p.g_a) / std::abs(d.delta_a);
    d.ratio_b = std::abs(p.g_b) / std::abs(d.delta_b);
    return d;
}

bool ValidityReport::ok() const {
    for (const auto& f : flags)
        if (!f.ok) return false;
    return true;
}

ValidityReport validity_check(const DispersiveParams& d, double threshold) {
    ValidityReport r;
    r.flags.push_back({"ratio_a", d.ratio_a, threshold, d.ratio_a < threshold});
    r.flags.push_back({"ratio_b", d.ratio_b, threshold, d.ratio_b < threshold});
    return r;
}

double switch_frequency(double omega_a, double omega_b) {
    if (!std::isfinite(omega_a) || !std::isfinite(omega_b))
        throw ValidationError("switch_frequency: frequencies must be finite");
    if (omega_a == omega_b)
        throw ValidationError("switch_frequency: omega_a == omega_b, the switch-off point would be "
                              "resonant with both modes");
    return 0.5 * (omega_a + omega_b);
}

} // namespace qbsim::dispersive
