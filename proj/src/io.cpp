#include "qsu22/io.hpp"

#include <fstream>

#include <json.hpp>

namespace qsu22 {

namespace {

using ojson = nlohmann::ordered_json;

ojson basis_json(int M) {
    ojson arr = ojson::array();
    for (const auto& s : enumerate_basis(M)) arr.push_back({s.m, s.n, s.k, s.l});
    return arr;
}

}  // namespace

void export_matrix(const OperatorMatrix& S, const ExportMeta& meta,
                   const std::string& path) {
    if (S.rows.factors.size() != 2)
        throw std::invalid_argument("export_matrix: expects a two-particle matrix");
    ojson doc;
    doc["basis1"] = basis_json(S.rows.factors[0]);
    doc["basis2"] = basis_json(S.rows.factors[1]);
    ojson rows = ojson::array();
    for (int i = 0; i < S.entries.rows(); ++i) {
        ojson row = ojson::array();
        for (int j = 0; j < S.entries.cols(); ++j)
            row.push_back({{"re", S.entries(i, j).real()}, {"im", S.entries(i, j).imag()}});
        rows.push_back(std::move(row));
    }
    doc["entries"] = std::move(rows);
    ojson params;  // std::map iteration gives deterministic key order
    for (const auto& [k, v] : meta.params) params[k] = v;
    doc["params"] = std::move(params);
    ojson residuals;
    for (const auto& [k, v] : meta.residuals) residuals[k] = v;
    doc["residuals"] = std::move(residuals);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("export_matrix: cannot open " + path);
    out << doc.dump(1) << "\n";
    if (!out) throw std::runtime_error("export_matrix: write failed for " + path);
}

ImportedMatrix read_matrix(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_matrix: cannot open " + path);
    ojson doc = ojson::parse(in);
    ImportedMatrix im;
    const int d1 = int(doc.at("basis1").size());
    const int d2 = int(doc.at("basis2").size());
    im.S.rows = im.S.cols = BasisDesc{{d1 / 4, d2 / 4}};
    im.S.entries.resize(d1 * d2, d1 * d2);
    const auto& rows = doc.at("entries");
    for (int i = 0; i < d1 * d2; ++i)
        for (int j = 0; j < d1 * d2; ++j) {
            const auto& e = rows.at(i).at(j);
            im.S.entries(i, j) = Cplx(e.at("re").get<double>(), e.at("im").get<double>());
        }
    for (const auto& [k, v] : doc.at("params").items())
        im.meta.params[k] = v.get<std::string>();
    for (const auto& [k, v] : doc.at("residuals").items())
        im.meta.residuals[k] = v.get<double>();
    return im;
}

}  // namespace qsu22
