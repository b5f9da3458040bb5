#include "inpredict/filter.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace inpredict {

namespace {

using cplx = std::complex<double>;

// Jury criterion for z^2 + a1 z + a2: both roots strictly inside the unit
// circle iff |a2| < 1 and |a1| < 1 + a2.
bool section_stable(const Biquad& s) {
    return std::abs(s.a2) < 1.0 && std::abs(s.a1) < 1.0 + s.a2;
}

std::vector<double> poly_multiply(const std::vector<double>& p,
                                  const std::vector<double>& q) {
    std::vector<double> r(p.size() + q.size() - 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
    }
    return r;
}

cplx evaluate_section(const Biquad& s, cplx z) {
    const cplx zi = 1.0 / z;
    return (s.b0 + s.b1 * zi + s.b2 * zi * zi) / (1.0 + s.a1 * zi + s.a2 * zi * zi);
}

}  // namespace

FilterCoefficients design_butterworth_bandpass(double low_hz, double high_hz, int order,
                                               double rate_hz) {
    if (!(rate_hz > 0.0)) throw std::invalid_argument("sampling rate must be positive");
    if (order < 1) throw std::invalid_argument("filter order must be >= 1");
    if (!(low_hz > 0.0) || !(low_hz < high_hz) || !(high_hz < rate_hz / 2.0)) {
        throw std::invalid_argument("cutoffs must satisfy 0 < low < high < rate/2 (got " +
                                    std::to_string(low_hz) + ", " + std::to_string(high_hz) +
                                    " at " + std::to_string(rate_hz) + " Hz)");
    }

    const double pi = std::numbers::pi;
    // Pre-warped analog edge frequencies (bilinear with 2/T == 1).
    const double wl = std::tan(pi * low_hz / rate_hz);
    const double wh = std::tan(pi * high_hz / rate_hz);
    const double bw = wh - wl;
    const double w0_sq = wl * wh;

    // Analog prototype poles on the unit circle, left half-plane.
    // Band transform s_lp -> (s^2 + w0^2)/(bw * s): each prototype pole p
    // yields the two roots of s^2 - bw*p*s + w0^2.
    std::vector<cplx> analog_poles;
    analog_poles.reserve(2 * std::size_t(order));
    for (int k = 0; k < order; ++k) {
        const double theta = pi / 2.0 + pi * (2.0 * k + 1.0) / (2.0 * order);
        const cplx p{std::cos(theta), std::sin(theta)};
        const cplx half = bw * p / 2.0;
        const cplx disc = std::sqrt(half * half - w0_sq);
        analog_poles.push_back(half + disc);
        analog_poles.push_back(half - disc);
    }

    // Bilinear map z = (1 + s) / (1 - s).
    std::vector<cplx> digital_poles;
    digital_poles.reserve(analog_poles.size());
    for (const cplx& s : analog_poles) {
        digital_poles.push_back((1.0 + s) / (1.0 - s));
    }

    // Pair conjugate poles into sections; leftover real poles pair up in
    // sorted order (possible for wide bands at odd orders).
    std::vector<cplx> complex_poles;
    std::vector<double> real_poles;
    for (const cplx& p : digital_poles) {
        if (std::abs(p.imag()) > 1e-12) {
            if (p.imag() > 0.0) complex_poles.push_back(p);
        } else {
            real_poles.push_back(p.real());
        }
    }
    std::sort(complex_poles.begin(), complex_poles.end(), [](const cplx& a, const cplx& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    std::sort(real_poles.begin(), real_poles.end());

    FilterCoefficients fc;
    fc.order = order;
    fc.low_hz = low_hz;
    fc.high_hz = high_hz;
    fc.rate_hz = rate_hz;

    // Each section gets one zero at z=1 and one at z=-1: numerator z^2 - 1.
    for (const cplx& p : complex_poles) {
        Biquad s;
        s.b0 = 1.0;
        s.b1 = 0.0;
        s.b2 = -1.0;
        s.a1 = -2.0 * p.real();
        s.a2 = std::norm(p);
        fc.sections.push_back(s);
    }
    for (std::size_t i = 0; i + 1 < real_poles.size(); i += 2) {
        Biquad s;
        s.b0 = 1.0;
        s.b1 = 0.0;
        s.b2 = -1.0;
        s.a1 = -(real_poles[i] + real_poles[i + 1]);
        s.a2 = real_poles[i] * real_poles[i + 1];
        fc.sections.push_back(s);
    }

    // Normalize to unit gain at the warped band centre, spreading the
    // scale evenly across sections.
    const double omega0 = 2.0 * std::atan(std::sqrt(w0_sq));
    const cplx z0 = std::polar(1.0, omega0);
    cplx h0 = 1.0;
    for (const Biquad& s : fc.sections) h0 *= evaluate_section(s, z0);
    const double gain = 1.0 / std::abs(h0);
    const double section_gain = std::pow(gain, 1.0 / double(fc.sections.size()));
    for (Biquad& s : fc.sections) {
        s.b0 *= section_gain;
        s.b1 *= section_gain;
        s.b2 *= section_gain;
    }

    for (const Biquad& s : fc.sections) {
        if (!section_stable(s)) {
            throw std::runtime_error("designed filter section is unstable (low=" +
                                     std::to_string(low_hz) + ", high=" +
                                     std::to_string(high_hz) + ")");
        }
    }

    fc.numerator = {1.0};
    fc.denominator = {1.0};
    for (const Biquad& s : fc.sections) {
        fc.numerator = poly_multiply(fc.numerator, {s.b0, s.b1, s.b2});
        fc.denominator = poly_multiply(fc.denominator, {1.0, s.a1, s.a2});
    }
    return fc;
}

namespace {

// Transposed direct form II state for one section.
struct SectionState {
    double z1 = 0.0, z2 = 0.0;
};

double step_section(const Biquad& s, SectionState& st, double x) {
    const double y = s.b0 * x + st.z1;
    st.z1 = s.b1 * x - s.a1 * y + st.z2;
    st.z2 = s.b2 * x - s.a2 * y;
    return y;
}

double section_dc_gain(const Biquad& s) {
    return (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2);
}

// Filters in place with steady-state initial conditions for a step of
// height x0 (the sosfiltfilt convention: removes the startup transient).
void filter_with_state(const std::vector<Biquad>& sections, std::vector<double>& x,
                       double x0) {
    double level = x0;  // DC level entering the current section
    for (const Biquad& s : sections) {
        const double g = section_dc_gain(s);
        SectionState st;
        st.z1 = (g - s.b0) * level;
        st.z2 = (s.b2 - s.a2 * g) * level;
        for (double& v : x) v = step_section(s, st, v);
        level *= g;
    }
}

}  // namespace

std::vector<double> apply_zero_phase(const FilterCoefficients& filter,
                                     std::span<const double> signal) {
    const std::size_t pad = filter.pad_length();
    const std::size_t n = signal.size();
    if (n <= pad) {
        throw std::invalid_argument("signal too short for zero-phase filtering: " +
                                    std::to_string(n) + " samples, need > " +
                                    std::to_string(pad));
    }

    // Odd-symmetric reflection about the end points.
    std::vector<double> ext;
    ext.reserve(n + 2 * pad);
    for (std::size_t i = 0; i < pad; ++i) ext.push_back(2.0 * signal[0] - signal[pad - i]);
    ext.insert(ext.end(), signal.begin(), signal.end());
    for (std::size_t i = 0; i < pad; ++i) ext.push_back(2.0 * signal[n - 1] - signal[n - 2 - i]);

    filter_with_state(filter.sections, ext, ext.front());
    std::reverse(ext.begin(), ext.end());
    filter_with_state(filter.sections, ext, ext.front());
    std::reverse(ext.begin(), ext.end());

    return {ext.begin() + pad, ext.begin() + pad + n};
}

std::vector<double> apply_forward(const FilterCoefficients& filter,
                                  std::span<const double> signal) {
    std::vector<double> y(signal.begin(), signal.end());
    for (const Biquad& s : filter.sections) {
        SectionState st;
        for (double& v : y) v = step_section(s, st, v);
    }
    return y;
}

std::string describe(const FilterCoefficients& filter) {
    std::ostringstream os;
    os.precision(12);
    os << "butterworth bandpass order " << filter.order << " [" << filter.low_hz << ", "
       << filter.high_hz << "] Hz @ " << filter.rate_hz << " Hz\n";
    for (std::size_t i = 0; i < filter.sections.size(); ++i) {
        const Biquad& s = filter.sections[i];
        os << "  sos[" << i << "] b = [" << s.b0 << ", " << s.b1 << ", " << s.b2
           << "], a = [1, " << s.a1 << ", " << s.a2 << "]\n";
    }
    os << "  num = [";
    for (std::size_t i = 0; i < filter.numerator.size(); ++i) {
        os << (i ? ", " : "") << filter.numerator[i];
    }
    os << "]\n  den = [";
    for (std::size_t i = 0; i < filter.denominator.size(); ++i) {
        os << (i ? ", " : "") << filter.denominator[i];
    }
    os << "]";
    return os.str();
}

}  // namespace inpredict
