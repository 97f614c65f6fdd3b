#pragma once

#include <map>
#include <string>

#include "qsu22/repspace.hpp"

// Structured-text export of operator matrices with explicit basis labels.

namespace qsu22 {

struct ExportMeta {
    std::map<std::string, std::string> params;     // run parameters, incl. seed
    std::map<std::string, double> residuals;       // named residuals
};

/// Writes {"basis1": [[m,n,k,l]...], "basis2": [...], "entries": [[{re,im}...]],
/// "params": {...}, "residuals": {...}} with deterministic key order.
void export_matrix(const OperatorMatrix& S, const ExportMeta& meta,
                   const std::string& path);

struct ImportedMatrix {
    OperatorMatrix S;
    ExportMeta meta;
};

/// Reads a document produced by export_matrix; entries round-trip exactly.
ImportedMatrix read_matrix(const std::string& path);

}  // namespace qsu22
