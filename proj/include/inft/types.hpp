#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "inft/error.hpp"

namespace inft {

using cd = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Sign selection of the Zakharov-Shabat system. Anomalous dispersion takes
/// the upper (minus) sign and admits a discrete spectrum; normal takes plus.
enum class Dispersion { anomalous, normal };

/// -1 for anomalous, +1 for normal: the coefficient of q* in the second ZS equation.
inline double zs_sign(Dispersion d) { return d == Dispersion::anomalous ? -1.0 : 1.0; }

enum class Side { left, right };

inline std::string to_string(Dispersion d) { return d == Dispersion::anomalous ? "anomalous" : "normal"; }
inline std::string to_string(Side s) { return s == Side::left ? "left" : "right"; }

inline Dispersion parse_dispersion(const std::string& s) {
    if (s == "anomalous") return Dispersion::anomalous;
    if (s == "normal") return Dispersion::normal;
    throw InvalidArgument("unknown dispersion '" + s + "'");
}

inline Side parse_side(const std::string& s) {
    if (s == "left") return Side::left;
    if (s == "right") return Side::right;
    throw InvalidArgument("unknown side '" + s + "'");
}

struct DiscreteEigenvalue {
    cd zeta;  // Im > 0
    cd norm;  // norming constant
};

/// Left (or time-reversed "right") scattering data: reflection coefficient on a
/// uniform xi-grid plus the discrete eigenvalue / norming-constant pairs.
struct SpectralData {
    Side side = Side::left;
    Dispersion dispersion = Dispersion::anomalous;
    double xi_min = -20.0;
    double xi_max = 20.0;
    std::vector<cd> reflection;
    std::vector<DiscreteEigenvalue> discrete;

    std::size_t nodes() const noexcept { return reflection.size(); }
    double xi_step() const { return (xi_max - xi_min) / static_cast<double>(nodes() - 1); }
    double xi(std::size_t j) const { return xi_min + static_cast<double>(j) * xi_step(); }

    void validate() const {
        require(reflection.size() >= 2, "spectral data needs at least two xi nodes");
        require(xi_max > xi_min, "xi grid must be strictly increasing");
        require(dispersion == Dispersion::anomalous || discrete.empty(),
                "normal dispersion cannot carry a discrete spectrum");
        for (const auto& d : discrete)
            require(d.zeta.imag() > 0.0, "discrete eigenvalue must lie in the upper half-plane");
    }
};

/// Uniform xi-grid of `nodes` points spanning [-width/2, width/2].
inline std::vector<double> xi_grid(double width, int nodes) {
    require(nodes >= 2 && width > 0.0, "xi grid needs >= 2 nodes and positive width");
    std::vector<double> xi(nodes);
    const double step = width / static_cast<double>(nodes - 1);
    for (int j = 0; j < nodes; ++j) xi[j] = -0.5 * width + step * j;
    return xi;
}

}  // namespace inft
