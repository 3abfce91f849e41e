// Copyright 2026 The pap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "pap/model.hpp"
#include "pap/types.hpp"

// File emitters for the command-line tool: CSV tables, self-contained SVG
// plots, and JSON manifests. All numeric text uses %.12g, so outputs are
// byte-stable given identical inputs.

namespace pap::cli {

std::string format_real(double v);

// Column-oriented CSV: one header row, one row per index.
void write_csv_columns(const std::filesystem::path& file,
                       const std::vector<std::string>& headers,
                       const std::vector<const RealVector<double>*>& columns);

// Matrix CSV: cell (0,0) holds `corner`, the first row the column axis, the
// first column the row axis.
void write_csv_matrix(const std::filesystem::path& file,
                      const std::string& corner,
                      const RealVector<double>& row_axis,
                      const RealVector<double>& col_axis,
                      const RealMatrix<double>& data);

// Heatmap with axes, tick labels, and a colorbar. `cyclic` selects a hue
// wheel suited to phases (the two ends of the scale meet).
void write_svg_heatmap(const std::filesystem::path& file,
                       const std::string& title, const std::string& xlabel,
                       const std::string& ylabel,
                       const std::string& colorbar_label,
                       const RealVector<double>& row_axis,
                       const RealVector<double>& col_axis,
                       const RealMatrix<double>& data, bool cyclic);

// Line chart of one or more named series over a shared abscissa.
void write_svg_lines(const std::filesystem::path& file,
                     const std::string& title, const std::string& xlabel,
                     const std::string& ylabel,
                     const RealVector<double>& x,
                     const std::vector<std::pair<std::string,
                                                 RealVector<double>>>& series);

std::uint64_t fnv64(const std::string& text);

// Order-stable hash of the physical content of a level system.
std::uint64_t model_hash(const LevelSystem<double>& sys);

// Root directory for outputs: $PAP_OUTPUT_ROOT if set, else ./out.
std::filesystem::path output_root();

// Writes the manifest JSON (2-space indent, stable key order).
void write_manifest(const std::filesystem::path& file,
                    const nlohmann::json& manifest);

}  // namespace pap::cli
