#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "closed_form.hpp"
#include "geometry.hpp"
#include "grid.hpp"
#include "metrics.hpp"
#include "types.hpp"
#include "waveform.hpp"

namespace nfamb {

/// Nine significant digits; infinities as "inf"/"-inf", NaN as "nan".
inline std::string format_num(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

/// JSON number, or the string form for non-finite values.
inline nlohmann::json json_num(double v)
{
    if (std::isfinite(v))
        return v;
    return format_num(v);
}

inline double json_to_num(const nlohmann::json& j)
{
    if (j.is_number())
        return j.get<double>();
    const auto s = j.get<std::string>();
    if (s == "inf")
        return inf;
    if (s == "-inf")
        return -inf;
    if (s == "nan")
        return nan;
    throw InvalidInput("expected a number, got " + s);
}

/// FNV-1a 64-bit hash rendered as 16 hex digits.
inline std::string config_hash(const std::string& canonical)
{
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline void write_curve_header(std::ostream& os, const std::string& hash, bool with_label)
{
    os << "# config_hash=" << hash << '\n';
    if (with_label)
        os << "label,";
    os << "d_lambda,value_linear,value_db,provenance\n";
}

inline void write_curve_rows(std::ostream& os, const AmbiguityCurve& c, const std::string& label = {})
{
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (!label.empty())
            os << label << ',';
        os << format_num(c.grid.samples[i]) << ',' << format_num(c.values_linear[i]) << ','
           << format_num(c.values_db[i]) << ',' << to_string(c.provenance) << '\n';
    }
}

inline void write_curve_csv(std::ostream& os, const AmbiguityCurve& c, const std::string& hash)
{
    write_curve_header(os, hash, false);
    write_curve_rows(os, c);
}

inline nlohmann::json geometry_to_json(const ArrayGeometry& g)
{
    return {{"kind", to_string(g.kind())}, {"aperture_d", g.aperture_d()}, {"spacing", g.spacing()},
            {"elements", g.size()}};
}

/// Rebuilds a geometry from its description (kind, aperture_d, spacing).
inline ArrayGeometry geometry_from_json(const nlohmann::json& j)
{
    for (const auto& [key, _] : j.items())
        if (key != "kind" && key != "aperture_d" && key != "spacing" && key != "elements")
            throw InvalidInput("geometry: unknown key " + key);
    return build_array(parse_kind(j.at("kind").get<std::string>()), j.at("aperture_d").get<double>(),
                       j.value("spacing", 0.5));
}

inline void write_positions_csv(std::ostream& os, const ArrayGeometry& g)
{
    os << "index,x,y,z\n";
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto& e = g.element(i);
        os << i << ',' << format_num(e.x) << ',' << format_num(e.y) << ',' << format_num(e.z) << '\n';
    }
}

inline void write_window_csv(std::ostream& os, const WindowSpec& w)
{
    os << "index,weight\n";
    for (std::size_t i = 0; i < w.weights.size(); ++i)
        os << i << ',' << format_num(w.weights[i]) << '\n';
}

inline nlohmann::json to_json(const ConstraintReport& r)
{
    return {{"kind", to_string(r.kind)},
            {"mode", to_string(r.mode)},
            {"product", json_num(r.bf_dlambda)},
            {"limit", json_num(r.limit)},
            {"recomputed_limit", json_num(r.recomputed_limit)},
            {"satisfied_quarter", r.satisfied_quarter}};
}

inline nlohmann::json to_json(const MetricsReport& r)
{
    return {{"alpha", json_num(r.alpha)},
            {"bd_min", json_num(r.bd_min)},
            {"nf_region", {json_num(r.nf.lower), json_num(r.nf.upper)}},
            {"psl_db", json_num(r.psl_db)},
            {"isl_db", json_num(r.isl_db)},
            {"psl_gain_db", json_num(r.psl_gain_db)},
            {"isl_gain_db", json_num(r.isl_gain_db)},
            {"db_rmse", json_num(r.db_rmse)},
            {"b_f_min_psl", json_num(r.b_f_min_psl)}};
}

inline nlohmann::json to_json(const MinBwResult& r)
{
    return {{"kind", to_string(r.kind)},
            {"mode", to_string(r.mode)},
            {"window", to_string(r.window)},
            {"aperture_d", json_num(r.aperture_d)},
            {"target_psl_db", json_num(r.target_psl_db)},
            {"b_frac", json_num(r.b_frac)},
            {"ratio", json_num(r.ratio)},
            {"worst_d_prime", json_num(r.worst_d_prime)}};
}

} // namespace nfamb
