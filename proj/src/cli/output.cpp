#include "flicker/cli/output.hpp"

#include <cstdio>
#include <fstream>

#include "flicker/model.hpp"

namespace flicker::cli {

using nlohmann::json;

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "," : "") + parts[i];
  return out;
}

}  // namespace

void ArtifactSet::add_series(const std::string& stem, const std::vector<std::string>& header,
                             const std::vector<Eigen::VectorXd>& columns, json meta) {
  if (header.size() != columns.size() || columns.empty()) throw DomainError("add_series: header/column mismatch");
  const Eigen::Index rows = columns.front().size();
  for (const auto& c : columns)
    if (c.size() != rows) throw DomainError("add_series: ragged columns");
  std::string csv = join(header) + "\n";
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) csv += (c ? "," : "") + format_number(columns[c][r]);
    csv += "\n";
  }
  meta["file"] = stem + ".csv";
  meta["columns"] = header;
  meta["rows"] = rows;
  files_.push_back({stem + ".csv", std::move(csv)});
  add_json(stem + ".meta.json", meta);
}

void ArtifactSet::add_field(const std::string& stem, const WignerField& field, json meta) {
  std::string csv = "x,y,W\n";
  for (Eigen::Index j = 0; j < field.im_grid.size(); ++j)
    for (Eigen::Index i = 0; i < field.re_grid.size(); ++i)
      csv += format_number(field.re_grid[i]) + "," + format_number(field.im_grid[j]) + "," +
             format_number(field.values(i, j)) + "\n";
  meta["file"] = stem + ".csv";
  meta["columns"] = {"x", "y", "W"};
  meta["time"] = field.time;
  meta["state"] = field.state_label;
  meta["grid_points"] = field.re_grid.size();
  meta["extent"] = field.re_grid[field.re_grid.size() - 1];
  meta["normalization"] = field.normalization;
  files_.push_back({stem + ".csv", std::move(csv)});
  add_json(stem + ".meta.json", meta);
}

void ArtifactSet::add_json(const std::string& name, const json& value) { files_.push_back({name, value.dump(2) + "\n"}); }

void ArtifactSet::append(ArtifactSet other) {
  for (auto& f : other.files_) files_.push_back(std::move(f));
}

std::vector<std::filesystem::path> ArtifactSet::write(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  for (const auto& f : files_) {
    const auto path = dir / f.name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << f.content;
    if (!out) throw std::runtime_error("cannot write " + path.string());
    written.push_back(path);
  }
  return written;
}

}  // namespace flicker::cli
