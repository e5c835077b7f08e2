#pragma once

#include "distribution.hpp"
#include "ghost_series.hpp"
#include "polygon.hpp"
#include "prediction.hpp"
#include "slopes.hpp"

#include <json.hpp>

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

namespace ghost {

using Json = nlohmann::json;  // keys sorted, so dumps are canonical

inline Json to_json(const Rational& q) { return to_string(q); }
inline Json to_json(const Valuation& v) { return v.is_finite() ? to_json(v.value()) : Json("inf"); }

inline Json to_json(const GhostPolynomial& g) {
    Json zeros = Json::array();
    for (const auto& [k, m] : g.zeros) zeros.push_back({{"k", k}, {"mult", m}});
    return {{"n", g.n}, {"zeros", zeros}};
}

inline Json to_json(const std::vector<GhostPolynomial>& gs) {
    Json out = Json::array();
    for (const auto& g : gs) out.push_back(to_json(g));
    return out;
}

// "g_4(w) = (w - w_18)(w - w_24)^3..."
inline std::string render_ghost(const GhostPolynomial& g) {
    std::ostringstream os;
    os << "g_" << g.n << "(w) = ";
    if (g.zeros.empty()) os << "1";
    for (const auto& [k, m] : g.zeros) {
        os << "(w - w_" << k << ")";
        if (m > 1) os << "^" << m;
    }
    return os.str();
}

inline Json to_json(const std::vector<SlopeRun>& runs) {
    Json out = Json::array();
    for (const auto& r : runs) out.push_back({to_string(r.slope), r.mult});
    return out;
}

inline Json to_json(const RationalPolygon& poly) {
    Json verts = Json::array();
    for (const auto& v : poly.vertices) verts.push_back({v.x, to_string(v.y)});
    return {{"vertices", verts}, {"slopes", to_json(poly.slopes)}};
}

inline Json rational_array(const std::vector<Rational>& xs) {
    Json out = Json::array();
    for (const auto& x : xs) out.push_back(to_string(x));
    return out;
}

inline Json to_json(const ThresholdVector& tv) {
    Json prov = Json::array();
    for (auto p : tv.provenance) prov.push_back(p == Provenance::closed_form ? "closed" : "sweep");
    return {{"k", tv.k.k()}, {"local", rational_array(tv.local)}, {"provenance", prov}, {"global_mult", tv.global_mult}};
}

inline Json to_json(const SlopePrediction& sp) {
    return {{"k", sp.k.k()},
            {"linv_known", to_json(sp.linv_known)},
            {"floor", to_string(sp.linv_floor)},
            {"exceptional", sp.exceptional_count}};
}

inline Json to_json(const DerivativePolygon& dp) {
    Json raw = Json::array();
    for (const auto& x : dp.raw) raw.push_back(to_string(x));
    Json runs = Json::array();
    for (std::size_t i = 1; i <= dp.N(); ++i) runs.push_back({to_string(dp.s(i)), dp.r(i)});
    return {{"k", dp.k.k()},
            {"dims", {dp.dims.d_iw, dp.dims.d_ur, dp.dims.d_new}},
            {"m_of_k", to_json(dp.m_of_k)},
            {"delta", raw},
            {"slopes", runs},
            {"m_index", dp.m_index}};
}

inline std::string decimal(const Rational& q, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, to_double(q));
    return buf;
}

inline const char* kMomentCsvHeader = "k,kind,n,moment_num,moment_den,target_num,target_den,abs_error_decimal";

inline std::string moment_csv_row(const DistributionSample& s, std::size_t n, int precision) {
    Rational m = s.moment(n), target(1, static_cast<std::int64_t>(n + 1));
    std::ostringstream os;
    os << s.k.k() << ',' << kind_name(s.kind) << ',' << n << ',' << num(m) << ',' << den(m) << ',' << num(target)
       << ',' << den(target) << ',' << decimal(abs(m - target), precision);
    return os.str();
}

}  // namespace ghost
