#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "qtl/perturb.hpp"
#include "qtl/tensor.hpp"

namespace qtl::io {

/// Tensor file: a JSON document
///   {"dims": [n1, n2, n3], "w": [...], "x": [...], "y": [...], "z": [...]}
/// where each component array is indexed [slice][row][col] and holds the
/// real coefficient of 1, i, j or k respectively. Numbers are written in
/// shortest round-trip form.
QTensor parse_tensor(const std::string& text);
std::string format_tensor(const QTensor& a);

QTensor read_tensor(const std::filesystem::path& path);
void write_tensor(const QTensor& a, const std::filesystem::path& path);

/// Lowercase hex SHA-256 of the file's bytes.
std::string file_digest(const std::filesystem::path& path);

/// Everything in a report file that does not come from the computation.
struct ReportMeta {
  std::string tool_version = QTL_VERSION;
  std::map<std::string, std::string> input_digests;  ///< label -> sha256
  std::map<std::string, double> tolerances;          ///< extra caller tolerances
  std::optional<std::string> timestamp;              ///< omitted when empty
};

/// Flat key-value JSON document, keys sorted. Non-finite and absent values
/// are omitted.
std::string render_report_json(const PerturbReport& r, const ReportMeta& meta);

/// Human-readable rendering: hypotheses, norms, identities, bound chain.
std::string render_report_text(const PerturbReport& r, const ReportMeta& meta);

}  // namespace qtl::io
