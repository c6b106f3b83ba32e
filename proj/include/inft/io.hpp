#pragma once

// Spectral data JSON and potential CSV.
//
//   {"side": "left", "dispersion": "anomalous", "xi_min": -20, "xi_max": 20,
//    "reflection": [[re, im], ...],
//    "discrete": [{"zeta": [re, im], "norm": [re, im]}, ...]}

#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "inft/glme.hpp"
#include "inft/types.hpp"

namespace inft {

namespace detail {

inline nlohmann::json complex_to_json(cd z) { return nlohmann::json::array({z.real(), z.imag()}); }

inline cd complex_from_json(const nlohmann::json& j) {
    require(j.is_array() && j.size() == 2, "complex value must be [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace detail

inline nlohmann::json to_json(const SpectralData& sd) {
    nlohmann::json j;
    j["side"] = to_string(sd.side);
    j["dispersion"] = to_string(sd.dispersion);
    j["xi_min"] = sd.xi_min;
    j["xi_max"] = sd.xi_max;
    auto& refl = j["reflection"] = nlohmann::json::array();
    for (const cd& l : sd.reflection) refl.push_back(detail::complex_to_json(l));
    auto& disc = j["discrete"] = nlohmann::json::array();
    for (const auto& d : sd.discrete)
        disc.push_back({{"zeta", detail::complex_to_json(d.zeta)}, {"norm", detail::complex_to_json(d.norm)}});
    return j;
}

inline SpectralData spectral_from_json(const nlohmann::json& j) {
    SpectralData sd;
    try {
        sd.side = parse_side(j.at("side").get<std::string>());
        sd.dispersion = parse_dispersion(j.at("dispersion").get<std::string>());
        sd.xi_min = j.at("xi_min").get<double>();
        sd.xi_max = j.at("xi_max").get<double>();
        for (const auto& v : j.at("reflection")) sd.reflection.push_back(detail::complex_from_json(v));
        if (j.contains("discrete"))
            for (const auto& d : j.at("discrete"))
                sd.discrete.push_back({detail::complex_from_json(d.at("zeta")), detail::complex_from_json(d.at("norm"))});
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("malformed spectral data: ") + e.what());
    }
    sd.validate();
    return sd;
}

inline void write_spectral(const SpectralData& sd, const std::string& path) {
    std::ofstream out(path);
    require(out.good(), "cannot open " + path + " for writing");
    // the serializer prints the shortest form that reads back to the same double
    out << to_json(sd).dump(1) << '\n';
}

inline SpectralData read_spectral(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument("cannot parse " + path + ": " + e.what());
    }
    return spectral_from_json(j);
}

/// Columns t, re(q), im(q), |q|, and eps(t) when a reference is supplied.
template <typename Reference>
void write_potential_csv(std::ostream& out, const RecoveredPotential& rp, const Reference* exact, double peak) {
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    out << "t,re_q,im_q,abs_q" << (exact ? ",eps" : "") << '\n';
    for (std::size_t j = 0; j < rp.t.size(); ++j) {
        out << rp.t[j] << ',' << rp.q[j].real() << ',' << rp.q[j].imag() << ',' << std::abs(rp.q[j]);
        if (exact) out << ',' << std::abs(rp.q[j] - (*exact)(rp.t[j])) / peak;
        out << '\n';
    }
}

}  // namespace inft
