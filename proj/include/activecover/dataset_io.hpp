#pragma once

// Dataset CSV ingestion and export.
//
// Layout: one row per point, D numeric coordinate columns, then an integer
// label column (1 = positive, 0 = negative), optionally followed by an
// in_support column (1/0). A single header line is optional on input and
// always written on output; with a header, the label and in_support columns
// are located by name. Loaded datasets always carry unknown support flags:
// ground truth comes from sampling, never from a file.

#include <iosfwd>
#include <string>

#include "activecover/distribution.hpp"

namespace activecover {

Dataset load_dataset(const std::string& path);
Dataset load_dataset(std::istream& in);

// metadata_line, when nonempty, is written first as a '#' comment.
void write_dataset_csv(const std::string& path, const Dataset& data,
                       const std::string& metadata_line);
void write_dataset_csv(std::ostream& out, const Dataset& data,
                       const std::string& metadata_line);

}  // namespace activecover
