#include "rbm/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

namespace rbm::io {

RawParams parse_raw_params(const json& j) {
    if (!j.is_object()) throw ParseError("model file must hold a JSON object");
    static const std::set<std::string> known = {"sigma1", "sigma2", "rho", "mu1",
                                                "mu2",    "r1",     "r2",  "wedge"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key())) throw ParseError("unknown key: " + it.key());

    auto need = [&](const char* k) -> double {
        if (!j.contains(k)) throw ParseError(std::string("missing key: ") + k);
        if (!j.at(k).is_number()) throw ParseError(std::string("key not numeric: ") + k);
        return j.at(k).get<double>();
    };
    RawParams r;
    r.sigma1 = need("sigma1");
    r.sigma2 = need("sigma2");
    r.rho = need("rho");
    r.mu1 = need("mu1");
    r.mu2 = need("mu2");
    r.r1 = need("r1");
    r.r2 = need("r2");
    if (j.contains("wedge")) {
        const std::string w = j.at("wedge").get<std::string>();
        if (w == "three_quarter")
            r.wedge = Wedge::ThreeQuarter;
        else if (w == "quarter")
            r.wedge = Wedge::Quarter;
        else
            throw ParseError("wedge must be \"three_quarter\" or \"quarter\"");
    }
    return r;
}

RawParams load_raw_params(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open model file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ParseError("bad JSON in " + path + ": " + e.what());
    }
    return parse_raw_params(j);
}

double round12(double x) {
    if (x == 0.0 || !std::isfinite(x)) return x == 0.0 ? 0.0 : x;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::strtod(buf, nullptr);
}

json num(double x) { return round12(x); }

json num(Complex z) { return json{{"im", round12(z.imag())}, {"re", round12(z.real())}}; }

json params_to_json(const ModelParams& m) {
    json j;
    j["sigma1"] = num(m.sigma1);
    j["sigma2"] = num(m.sigma2);
    j["rho"] = num(m.rho);
    j["mu1"] = num(m.mu1);
    j["mu2"] = num(m.mu2);
    j["r1"] = num(m.r1);
    j["r2"] = num(m.r2);
    j["wedge"] = (m.wedge == Wedge::ThreeQuarter) ? "three_quarter" : "quarter";
    j["beta"] = num(m.beta);
    if (m.quarter_convention) j["quarter_ergodicity_convention"] = true;
    return j;
}

std::string dump_sorted(const json& j) {
    // nlohmann's default object storage is key-sorted already
    return j.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write: " + path);
    out << contents;
    if (!out) throw ParseError("write failed: " + path);
}

}  // namespace rbm::io
