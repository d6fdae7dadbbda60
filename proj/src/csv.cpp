#include "ties/csv.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "ties/error.hpp"
#include "ties/format.hpp"

namespace ties {

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  out.push_back(std::move(field));
  return out;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

namespace {

bool parse_number(std::string_view s, double& v) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  if (s == "inf" || s == "+inf" || s == "Infinity") {
    v = std::numeric_limits<double>::infinity();
    return true;
  }
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc{} && p == s.data() + s.size();
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

}  // namespace

Matrix read_matrix_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto fields = split_csv_line(line);
    std::vector<double> row(fields.size());
    bool numeric = true;
    for (std::size_t k = 0; k < fields.size() && numeric; ++k) numeric = parse_number(fields[k], row[k]);
    if (!numeric) {
      if (rows.empty() && line_no == 1) continue;
      throw ParseError("non-numeric matrix entry", line_no);
    }
    if (!rows.empty() && row.size() != rows.front().size()) throw ParseError("ragged matrix row", line_no);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("matrix file is empty: " + path.string(), 0);
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
  return m;
}

void write_matrix_csv(std::ostream& out, const Matrix& m) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      out << format_double(m(r, c));
    }
    out << '\n';
  }
}

void write_diagram_csv(std::ostream& out, const PersistenceDiagram& dg) {
  out << "hdim,birth,death\n";
  for (const auto& p : dg.points) out << p.hdim << ',' << format_double(p.birth) << ',' << format_double(p.death) << '\n';
}

PersistenceDiagram read_diagram_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  PersistenceDiagram dg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto f = split_csv_line(line);
    double hdim = 0, birth = 0, death = 0;
    if (f.size() != 3 || !parse_number(f[0], hdim) || !parse_number(f[1], birth) || !parse_number(f[2], death)) {
      if (line_no == 1) continue;  // header
      throw ParseError("expected hdim,birth,death", line_no);
    }
    if (hdim != 0 && hdim != 1) throw ParseError("homology dimension must be 0 or 1", line_no);
    dg.points.push_back({birth, death, static_cast<int>(hdim)});
  }
  std::sort(dg.points.begin(), dg.points.end());
  return dg;
}

FeatureFormat feature_format_for(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  return ext == ".jsonl" || ext == ".json" ? FeatureFormat::kJsonl : FeatureFormat::kCsv;
}

namespace {

std::string join_labels(const std::set<std::string>& labels) {
  std::string s;
  for (const auto& l : labels) {
    if (!s.empty()) s += ';';
    s += l;
  }
  return s;
}

std::set<std::string> split_labels(std::string_view s) {
  std::set<std::string> out;
  std::size_t i = 0;
  while (i <= s.size()) {
    auto j = s.find(';', i);
    if (j == std::string_view::npos) j = s.size();
    if (j > i) out.emplace(s.substr(i, j - i));
    i = j + 1;
  }
  return out;
}

}  // namespace

void write_feature_csv_header(std::ostream& out, std::size_t dim) {
  out << "id,labels";
  for (int h = 0; h < 2; ++h) {
    for (std::size_t d = 1; d <= dim; ++d) out << ",v" << h << '_' << d;
  }
  out << '\n';
}

void write_feature_csv_row(std::ostream& out, const FeatureRecord& rec) {
  out << csv_escape(rec.id) << ',' << csv_escape(join_labels(rec.labels));
  for (double v : rec.features.v0) out << ',' << format_double(v);
  for (double v : rec.features.v1) out << ',' << format_double(v);
  out << '\n';
}

void write_feature_jsonl_row(std::ostream& out, const FeatureRecord& rec) {
  const auto& md = rec.features.metadata;
  nlohmann::json j;
  j["id"] = rec.id;
  j["labels"] = rec.labels;
  j["v0"] = rec.features.v0;
  j["v1"] = rec.features.v1;
  j["metadata"] = {{"window_size", md.window_size},
                   {"window_kind", std::string(to_string(md.window_kind))},
                   {"metric", std::string(to_string(md.metric))},
                   {"dim", md.dim},
                   {"tokens", md.tokens},
                   {"smoothed_length", md.smoothed_length},
                   {"oov_count", md.oov_count}};
  out << j.dump() << '\n';
}

std::vector<FeatureRow> read_feature_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::vector<FeatureRow> rows;
  std::string line;
  std::size_t line_no = 0;

  if (feature_format_for(path) == FeatureFormat::kJsonl) {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        auto j = nlohmann::json::parse(line);
        FeatureRow r;
        r.id = j.at("id").get<std::string>();
        if (j.contains("labels")) r.labels = j["labels"].get<std::set<std::string>>();
        r.x = j.at("v0").get<std::vector<double>>();
        auto v1 = j.at("v1").get<std::vector<double>>();
        r.x.insert(r.x.end(), v1.begin(), v1.end());
        rows.push_back(std::move(r));
      } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad feature record: ") + e.what(), line_no);
      }
    }
  } else {
    std::size_t width = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      auto f = split_csv_line(line);
      if (line_no == 1) {
        if (f.size() < 2 || f[0] != "id" || f[1] != "labels") throw ParseError("feature CSV must start with id,labels", 1);
        width = f.size() - 2;
        continue;
      }
      if (f.size() != width + 2) throw ParseError("feature row has the wrong number of columns", line_no);
      FeatureRow r;
      r.id = f[0];
      r.labels = split_labels(f[1]);
      r.x.resize(width);
      for (std::size_t k = 0; k < width; ++k) {
        if (!parse_number(f[k + 2], r.x[k])) throw ParseError("non-numeric feature value", line_no);
      }
      rows.push_back(std::move(r));
    }
  }
  return rows;
}

}  // namespace ties
