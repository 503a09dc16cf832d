#include "enttest/json_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace enttest {

using nlohmann::json;

std::string state_to_json(const DensityOperator& rho) {
    json j;
    j["factor_dims"] = rho.factor_dims();
    json entries = json::array();
    const int n = rho.dim();
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            entries.push_back({rho.matrix()(i, k).real(), rho.matrix()(i, k).imag()});
    j["entries"] = std::move(entries);
    return j.dump();
}

DensityOperator state_from_json(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FileFormatError(origin + ": JSON parse error at byte " + std::to_string(e.byte) +
                              ": " + e.what());
    }
    if (!j.is_object() || !j.contains("factor_dims") || !j.contains("entries"))
        throw FileFormatError(origin + ": expected object with factor_dims and entries");
    std::vector<int> dims;
    try {
        dims = j.at("factor_dims").get<std::vector<int>>();
    } catch (const json::exception& e) {
        throw FileFormatError(origin + ": factor_dims must be an integer array: " + e.what());
    }
    int n = 1;
    for (int d : dims) {
        if (d <= 0) throw FileFormatError(origin + ": factor_dims entries must be positive");
        n *= d;
    }
    const json& entries = j.at("entries");
    if (!entries.is_array() || entries.size() != static_cast<size_t>(n) * n)
        throw FileFormatError(origin + ": entries must hold dim^2 = " + std::to_string(n * n) +
                              " [re,im] pairs, got " + std::to_string(entries.size()));
    ComplexMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const json& e = entries[static_cast<size_t>(i) * n + k];
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                throw FileFormatError(origin + ": entry " + std::to_string(i * n + k) +
                                      " is not a [re,im] pair");
            m(i, k) = cplx(e[0].get<double>(), e[1].get<double>());
        }
    return DensityOperator(std::move(m), std::move(dims));
}

DensityOperator load_state(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileFormatError(path + ": cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    return state_from_json(ss.str(), path);
}

void save_state(const DensityOperator& rho, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw FileFormatError(path + ": cannot open file for writing");
    out << state_to_json(rho) << "\n";
}

}  // namespace enttest
