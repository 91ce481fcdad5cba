#pragma once

#include <string>

#include <json.hpp>

#include "ptsym/complex_matrix.hpp"

namespace ptsym {

inline constexpr const char* kVersion = "ptsym 0.1.0";

/// Matrix exchange schema: {"n": int, "entries": [[re, im], ...]} row-major.
ComplexMatrix matrix_from_json(const nlohmann::json& j);
nlohmann::ordered_json matrix_to_json(const ComplexMatrix& m);

/// Reads .json (schema above) or .csv ("re,im" per line, row-major, square).
ComplexMatrix read_matrix_file(const std::string& path);

nlohmann::ordered_json complex_to_json(Complex z);

/// FNV-1a digest of raw bytes, hex-encoded; identifies inputs in reports.
std::string digest_hex(const std::string& bytes);

/// Deterministic serialization: ordered keys, floats at 17 significant
/// digits, no locale dependence. Reports must be byte-identical across runs.
std::string dump_g17(const nlohmann::ordered_json& j);

}  // namespace ptsym
