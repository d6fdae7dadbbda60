#pragma once

#include <filesystem>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ties/evalharness.hpp"
#include "ties/features.hpp"
#include "ties/matrix.hpp"
#include "ties/persistence.hpp"

namespace ties {

/// RFC 4180 field splitting (double-quoted fields, "" escapes).
std::vector<std::string> split_csv_line(std::string_view line);
std::string csv_escape(std::string_view field);

/// Square or rectangular numeric CSV; a leading non-numeric row is treated as a header and skipped.
Matrix read_matrix_csv(const std::filesystem::path& path);
void write_matrix_csv(std::ostream& out, const Matrix& m);

/// Rows "hdim,birth,death" after a header line; essential classes have death "inf".
void write_diagram_csv(std::ostream& out, const PersistenceDiagram& dg);
PersistenceDiagram read_diagram_csv(const std::filesystem::path& path);

/// One extracted document ready to persist.
struct FeatureRecord {
  std::string id;
  std::set<std::string> labels;
  TiesFeatureVector features;
};

enum class FeatureFormat { kCsv, kJsonl };

/// `.jsonl` / `.json` -> JSONL, anything else CSV.
FeatureFormat feature_format_for(const std::filesystem::path& path);

/// CSV header is `id,labels,v0_1..v0_D,v1_1..v1_D`; labels are joined with ';'.
void write_feature_csv_header(std::ostream& out, std::size_t dim);
void write_feature_csv_row(std::ostream& out, const FeatureRecord& rec);
void write_feature_jsonl_row(std::ostream& out, const FeatureRecord& rec);

/// Reads either format back into classifier rows (v0 then v1).
std::vector<FeatureRow> read_feature_file(const std::filesystem::path& path);

}  // namespace ties
