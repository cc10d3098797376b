#include "activecover/dataset_io.hpp"

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "activecover/csv.hpp"
#include "activecover/errors.hpp"

namespace activecover {

namespace {

bool looks_like_header(const std::vector<std::string>& fields) {
  for (const std::string& f : fields) {
    if (!csv::parse_double(f).has_value()) return true;
  }
  return false;
}

}  // namespace

Dataset load_dataset(std::istream& in) {
  Dataset data;
  std::string line;
  std::size_t line_no = 0;

  // Column layout: default is coordinates then a trailing label column;
  // a header line may name the label and in_support columns explicitly.
  std::vector<std::size_t> coord_cols;
  std::size_t label_col = 0;
  std::size_t support_col = 0;
  bool has_support_col = false;
  bool layout_known = false;
  std::size_t expected_fields = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields = csv::split_line(line);
    if (fields.size() == 1 && fields[0].empty()) continue;

    if (!layout_known && looks_like_header(fields)) {
      bool saw_label = false;
      for (std::size_t c = 0; c < fields.size(); ++c) {
        if (fields[c] == "label") {
          label_col = c;
          saw_label = true;
        } else if (fields[c] == "in_support") {
          support_col = c;
          has_support_col = true;
        } else {
          coord_cols.push_back(c);
        }
      }
      if (!saw_label) throw FormatError(line_no, "header has no label column");
      if (coord_cols.empty()) throw FormatError(line_no, "header has no coordinate columns");
      expected_fields = fields.size();
      layout_known = true;
      continue;
    }
    if (!layout_known) {
      if (fields.size() < 2) {
        throw FormatError(line_no, "need at least one coordinate column and a label column");
      }
      for (std::size_t c = 0; c + 1 < fields.size(); ++c) coord_cols.push_back(c);
      label_col = fields.size() - 1;
      expected_fields = fields.size();
      layout_known = true;
    }

    if (fields.size() != expected_fields) {
      throw FormatError(line_no, "expected " + std::to_string(expected_fields) +
                                     " fields, got " + std::to_string(fields.size()));
    }
    if (data.dim == 0) data.dim = coord_cols.size();
    for (const std::size_t c : coord_cols) {
      const auto v = csv::parse_double(fields[c]);
      if (!v) throw FormatError(line_no, "non-numeric coordinate '" + fields[c] + "'");
      data.points.push_back(*v);
    }
    const std::string& lf = fields[label_col];
    if (lf == "1") {
      data.labels.push_back(1);
    } else if (lf == "0") {
      data.labels.push_back(0);
    } else {
      throw FormatError(line_no, "label must be 0 or 1, got '" + lf + "'");
    }
    if (has_support_col) {
      const std::string& sf = fields[support_col];
      if (sf != "0" && sf != "1") {
        throw FormatError(line_no, "in_support must be 0 or 1, got '" + sf + "'");
      }
    }
    // Ground-truth membership is only trusted when produced by sampling.
    data.in_support.push_back(SupportFlag::kUnknown);
  }

  if (data.labels.empty()) throw FormatError("no data rows");
  return data;
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  return load_dataset(in);
}

void write_dataset_csv(std::ostream& out, const Dataset& data,
                       const std::string& metadata_line) {
  if (!metadata_line.empty()) out << "# " << metadata_line << "\n";
  const bool with_support = data.support_known();
  for (std::size_t d = 0; d < data.dim; ++d) out << "x" << d << ",";
  out << "label";
  if (with_support) out << ",in_support";
  out << "\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto p = data.point(i);
    for (std::size_t d = 0; d < data.dim; ++d) out << csv::format_double(p[d]) << ",";
    out << (data.labels[i] ? "1" : "0");
    if (with_support) out << "," << (data.in_support[i] == SupportFlag::kYes ? "1" : "0");
    out << "\n";
  }
}

void write_dataset_csv(const std::string& path, const Dataset& data,
                       const std::string& metadata_line) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  write_dataset_csv(out, data, metadata_line);
  out.flush();
  if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace activecover
