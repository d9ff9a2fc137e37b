#pragma once

#include <json.hpp>

#include "btree.hpp"
#include "classify.hpp"
#include "density.hpp"
#include "eislocal.hpp"
#include "lengths.hpp"
#include "verify.hpp"

// Serialization into nlohmann json with insertion-ordered keys, so identical
// inputs give byte-identical output.  Rationals are "num/den" strings, never
// floats; unit classes are "1" or "D".

namespace qpl {

using ojson = nlohmann::ordered_json;

inline ojson to_json(const mpq_class& q) { return rat_str(q); }

inline ojson to_json(const DiagTerm& d) {
    ojson j;
    j["a"] = d.a;
    j["unit"] = d.delta ? "D" : "1";
    return j;
}

inline ojson to_json(const DiagonalForm& T) {
    ojson j = ojson::array();
    for (const DiagTerm& d : T.d) j.push_back(to_json(d));
    return j;
}

inline ojson to_json(const DensityPolynomial& f) {
    ojson j;
    ojson c = ojson::array();
    for (const mpq_class& v : f.c) c.push_back(rat_str(v));
    j["coefficients"] = c;
    if (!f.provenance.empty()) j["label"] = f.provenance;
    return j;
}

inline ojson to_json(const WhittakerValue& w) {
    ojson j;
    j["magnitude"] = rat_str(w.magnitude);
    j["gamma"] = w.gamma_token;
    j["logp"] = w.log_p_power;
    return j;
}

inline ojson to_json(const Place& v) { return v.str(); }

// wall time is deliberately omitted: identical argv + seed must give
// byte-identical output
inline ojson to_json(const CheckResult& r) {
    ojson j;
    j["name"] = r.name;
    j["identity"] = r.identity;
    j["status"] = r.status;
    j["detail"] = r.detail;
    return j;
}

// "a.b.c,value" rows, one per scalar leaf, for the csv output format.
inline void flatten_csv(const ojson& j, const std::string& prefix, std::string& out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten_csv(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    } else if (j.is_array()) {
        size_t i = 0;
        for (const auto& e : j) flatten_csv(e, prefix + "." + std::to_string(i++), out);
    } else {
        out += prefix + "," + (j.is_string() ? j.get<std::string>() : j.dump()) + "\n";
    }
}

}  // namespace qpl
