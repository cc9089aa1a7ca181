#include "toral/report.hpp"

#include <fstream>
#include <sstream>

namespace toral {

Json matrix_to_json(const IntMatrix& A) {
    Json j;
    j["l"] = A.n;
    Json rows = Json::array();
    for (int i = 0; i < A.n; ++i) {
        Json row = Json::array();
        for (int k = 0; k < A.n; ++k) row.push_back(A.at(i, k).convert_to<long long>());
        rows.push_back(row);
    }
    j["rows"] = rows;
    return j;
}

IntMatrix matrix_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("l") || !j.contains("rows"))
        throw ParseError("matrix JSON must be {\"l\": int, \"rows\": [[int,...],...]}");
    int l = 0;
    try {
        l = j.at("l").get<int>();
    } catch (const std::exception&) {
        throw ParseError("matrix JSON: \"l\" must be an integer");
    }
    if (l < 2) throw ParseError("matrix JSON: l >= 2 required");
    const Json& rows = j.at("rows");
    if (!rows.is_array() || static_cast<int>(rows.size()) != l)
        throw ParseError("matrix JSON: \"rows\" must hold l rows");
    IntMatrix A(l);
    for (int i = 0; i < l; ++i) {
        const Json& row = rows.at(i);
        if (!row.is_array() || static_cast<int>(row.size()) != l)
            throw ParseError("matrix JSON: row " + std::to_string(i) + " must hold l integers");
        for (int k = 0; k < l; ++k) {
            if (!row.at(k).is_number_integer())
                throw ParseError("matrix JSON: entries must be integers");
            A.at(i, k) = row.at(k).get<long long>();
        }
    }
    return A;
}

Json spectral_to_json(const SpectralData& sd) {
    Json j;
    j["l"] = sd.l;
    j["char_poly"] = sd.characteristic.str();
    Json coeffs = Json::array();
    for (const BigInt& c : sd.characteristic.c) coeffs.push_back(c.str());
    j["char_poly_coeffs"] = coeffs;
    Json roots = Json::array();
    for (const Root& r : sd.roots) {
        Json rr;
        rr["re"] = r.value.real();
        rr["im"] = r.value.imag();
        rr["modulus"] = std::abs(r.value);
        rr["multiplicity"] = r.multiplicity;
        rr["residual"] = r.residual;
        roots.push_back(rr);
    }
    j["roots"] = roots;
    j["chi"] = sd.chi;
    j["zeta"] = sd.zeta;
    j["zeta_total"] = sd.zeta_total;
    j["zeta_rest"] = sd.zeta_rest;
    j["h_top"] = sd.h_top;
    j["hyperbolic"] = sd.flags.hyperbolic;
    j["ergodic"] = sd.flags.ergodic;
    j["irreducible"] = sd.flags.irreducible;
    j["unit_modulus_count"] = sd.unit_modulus_count;
    j["self_reciprocal"] = sd.self_reciprocal;
    j["cyclotomic_factors"] = sd.cyclotomic_factors;
    return j;
}

Json certificate_to_json(const EntropyCertificate& cert) {
    Json j;
    j["matrix"] = matrix_to_json(cert.matrix);
    j["beta"] = Json::array({cert.beta1, cert.beta2});
    j["epsilon"] = cert.epsilon;
    j["k"] = cert.k;
    j["r"] = cert.r;
    j["log_g"] = Json::array({cert.log_g_minus, cert.log_g_plus});
    j["contained"] = cert.containment;
    Json as;
    as["expansion_gt_2"] = cert.assumptions.expansion_gt_2;
    as["radius_floor"] = cert.assumptions.radius_floor;
    as["cube"] = cert.assumptions.cube;
    j["assumptions"] = as;
    j["per_k_entropy_window"] = Json::array({cert.window_lo, cert.window_hi});
    j["h_top"] = cert.h_top;
    j["path"] = cert.path_used;
    j["irreducible_warning"] = cert.irreducible_warning;
    Json params;
    params["grouping_tol"] = cert.grouping_tol;
    params["alpha0_margin"] = cert.alpha0_margin;
    params["tau_safety"] = cert.tau_safety;
    j["params"] = params;
    return j;
}

EntropyCertificate certificate_from_json(const Json& j) {
    EntropyCertificate c;
    try {
        c.matrix = matrix_from_json(j.at("matrix"));
        c.beta1 = j.at("beta").at(0).get<double>();
        c.beta2 = j.at("beta").at(1).get<double>();
        c.epsilon = j.at("epsilon").get<double>();
        c.k = j.at("k").get<int>();
        c.r = j.at("r").get<std::vector<double>>();
        c.log_g_minus = j.at("log_g").at(0).get<double>();
        c.log_g_plus = j.at("log_g").at(1).get<double>();
        c.containment = j.at("contained").get<bool>();
        const Json& as = j.at("assumptions");
        c.assumptions.expansion_gt_2 = as.at("expansion_gt_2").get<bool>();
        c.assumptions.radius_floor = as.at("radius_floor").get<bool>();
        c.assumptions.cube = as.at("cube").get<bool>();
        c.window_lo = j.at("per_k_entropy_window").at(0).get<double>();
        c.window_hi = j.at("per_k_entropy_window").at(1).get<double>();
        c.h_top = j.value("h_top", 0.0);
        c.path_used = j.value("path", std::string("diagonal"));
        c.irreducible_warning = j.value("irreducible_warning", false);
        const Json& params = j.at("params");
        c.grouping_tol = params.at("grouping_tol").get<double>();
        c.alpha0_margin = params.at("alpha0_margin").get<double>();
        c.tau_safety = params.at("tau_safety").get<double>();
    } catch (const Json::exception& e) {
        throw ParseError(std::string("certificate JSON: ") + e.what());
    }
    return c;
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    Json j;
    try {
        in >> j;
    } catch (const Json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return j;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << content;
}

} // namespace toral
