#include "qbsim/readout.hpp"

#include "qbsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qbsim::readout {

void ReadoutParams::validate() const {
    if (!std::isfinite(omega_q) || !std::isfinite(omega_a) || !std::isfinite(g_a) || !std::isfinite(line_rate))
        throw ValidationError("readout: parameters must be finite");
    if (!(line_rate > 0.0)) throw ValidationError("readout: line_rate must be > 0");
    if (delta_a() == 0.0) throw ValidationError("readout: delta_a = omega_q - omega_a vanishes");
}

double dressed_detuning(double omega_k, double n_bar, const ReadoutParams& p) {
    const double shift = p.g_a * p.g_a / p.delta_a();
    return (omega_k - p.omega_q) - 0.5 * shift - shift * n_bar;
}

std::complex<double> transmission_amplitude(double omega_k, double n_bar, const ReadoutParams& p) {
    p.validate();
    if (!(n_bar >= 0.0)) throw ValidationError("readout: n_bar must be >= 0");
    const std::complex<double> num(0.0, dressed_detuning(omega_k, n_bar, p));
    return num / (num - p.line_rate);
}

double line_shape(double detuning, double line_rate) {
    if (!(line_rate > 0.0) || !std::isfinite(line_rate)) throw ValidationError("readout: line_rate must be > 0");
    // |iD/(iD - Gamma)|^2 written without the complex division
    return detuning * detuning / (detuning * detuning + line_rate * line_rate);
}

double transmission(double omega_k, double n_bar, const ReadoutParams& p) {
    p.validate();
    if (!(n_bar >= 0.0)) throw ValidationError("readout: n_bar must be >= 0");
    return line_shape(dressed_detuning(omega_k, n_bar, p), p.line_rate);
}

double dip_frequency(double n_bar, const ReadoutParams& p) {
    p.validate();
    return p.omega_q + p.g_a * p.g_a * (0.5 + n_bar) / p.delta_a();
}

std::vector<double> linear_grid(double first, double last, std::size_t points) {
    if (points < 2) throw ValidationError("linear_grid: need at least 2 points");
    std::vector<double> g(points);
    const double step = (last - first) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) g[i] = first + step * static_cast<double>(i);
    g.back() = last;
    return g;
}

Spectrum spectrum_sweep(std::span<const double> probe_grid, double n_bar, const ReadoutParams& p) {
    p.validate();
    if (!(n_bar >= 0.0)) throw ValidationError("readout: n_bar must be >= 0");
    Spectrum s;
    s.n_bar = n_bar;
    s.probe.assign(probe_grid.begin(), probe_grid.end());
    s.transmission.reserve(s.probe.size());
    for (double w : s.probe) s.transmission.push_back(transmission(w, n_bar, p));
    if (!s.probe.empty()) {
        const double dip = dip_frequency(n_bar, p);
        const auto [lo, hi] = std::minmax_element(s.probe.begin(), s.probe.end());
        if (dip <= *lo || dip >= *hi) {
            std::ostringstream os;
            os << "dip at " << dip << " rad/s lies outside the probe window [" << *lo << ", " << *hi << "]";
            s.diagnostics.push_back(os.str());
        }
    }
    return s;
}

PhotonEstimate infer_photon_number(const Spectrum& spectrum, const ReadoutParams& p) {
    p.validate();
    const auto& w = spectrum.probe;
    const auto& t = spectrum.transmission;
    if (w.size() != t.size() || w.size() < 3) throw ValidationError("infer_photon_number: need >= 3 samples");

    const auto k = static_cast<std::size_t>(std::min_element(t.begin(), t.end()) - t.begin());
    if (k == 0 || k + 1 == t.size())
        throw ValidationError("infer_photon_number: transmission minimum on the grid boundary; "
                              "the dip lies outside the scanned window");

    // y = T/(1-T) = (D/Gamma)^2 is an exact parabola in omega_k.
    auto lift = [](double x) { return x / (1.0 - x); };
    const double x0 = w[k - 1], x1 = w[k], x2 = w[k + 1];
    const double y0 = lift(t[k - 1]), y1 = lift(t[k]), y2 = lift(t[k + 1]);
    double dip = x1;
    if (std::isfinite(y0) && std::isfinite(y2)) {
        // vertex of the interpolating parabola, general (unequal) spacing
        const double d01 = (y1 - y0) / (x1 - x0);
        const double d12 = (y2 - y1) / (x2 - x1);
        const double curvature = (d12 - d01) / (x2 - x0);
        if (curvature > 0.0) dip = 0.5 * (x0 + x1) - d01 / (2.0 * curvature);
    }

    PhotonEstimate est;
    est.dip_frequency = dip;
    est.n_bar = p.delta_a() * (dip - p.omega_q) / (p.g_a * p.g_a) - 0.5;
    if (est.n_bar < 0.0) {
        std::ostringstream os;
        os << "inferred photon number " << est.n_bar << " clamped to 0";
        est.diagnostics.push_back(os.str());
        est.n_bar = 0.0;
    }
    return est;
}

} // namespace qbsim::readout
