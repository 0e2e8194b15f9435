#pragma once

// JSON encodings for the exact types. Rationals travel as strings ("p" or
// "p/q") so nothing is rounded through doubles.

#include <string>
#include <vector>

#include <json.hpp>

#include "ivoa/errors.hpp"
#include "ivoa/lattice.hpp"
#include "ivoa/qseries.hpp"
#include "ivoa/rational.hpp"

namespace ivoa {

using nlohmann::json;

inline json qseries_to_json(const QSeries& f) {
    json coeffs = json::array();
    for (const Rat& c : f.coeffs()) coeffs.push_back(rat_str(c));
    return json{{"offset", rat_str(f.offset())}, {"order", f.order()}, {"coeffs", std::move(coeffs)}};
}

inline QSeries qseries_from_json(const json& j) {
    if (!j.is_object() || !j.contains("offset") || !j.contains("order") || !j.contains("coeffs"))
        throw Error("series JSON must be an object with offset, order, coeffs");
    Rat offset = parse_rat(j.at("offset").get<std::string>());
    const json& jc = j.at("coeffs");
    if (!jc.is_array() || jc.empty()) throw Error("series JSON needs a non-empty coeffs array");
    long long order = j.at("order").get<long long>();
    if (order + 1 != static_cast<long long>(jc.size()))
        throw Error("series JSON order does not match coeffs length");
    std::vector<Rat> coeffs;
    coeffs.reserve(jc.size());
    for (const json& c : jc) coeffs.push_back(parse_rat(c.get<std::string>()));
    return QSeries(std::move(offset), std::move(coeffs));
}

inline json lattice_to_json(const GramLattice& lat) {
    json rows = json::array();
    for (const auto& row : lat.gram()) {
        json r = json::array();
        for (const Rat& e : row) r.push_back(rat_str(e));
        rows.push_back(std::move(r));
    }
    return json{{"gram", std::move(rows)}};
}

inline GramLattice lattice_from_json(const json& j) {
    if (!j.is_object() || !j.contains("gram") || !j.at("gram").is_array())
        throw Error("lattice JSON must be an object with a gram array");
    std::vector<std::vector<Rat>> gram;
    for (const json& row : j.at("gram")) {
        if (!row.is_array()) throw Error("lattice JSON gram rows must be arrays");
        std::vector<Rat> r;
        for (const json& e : row) r.push_back(parse_rat(e.get<std::string>()));
        gram.push_back(std::move(r));
    }
    return GramLattice(std::move(gram));
}

inline std::vector<Rat> rat_vector_from_json(const json& j) {
    if (!j.is_array()) throw Error("expected a JSON array of rationals");
    std::vector<Rat> v;
    for (const json& e : j) v.push_back(parse_rat(e.get<std::string>()));
    return v;
}

}  // namespace ivoa
