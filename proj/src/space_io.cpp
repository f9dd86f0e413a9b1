#include "snowprobe/space_io.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "snowprobe/json_value.hpp"

namespace snowprobe {

namespace {

FiniteMetricSpace space_from_rows(const std::vector<std::vector<double>>& rows,
                                  std::vector<std::string> labels) {
  const std::size_t n = rows.size();
  std::vector<double> m;
  m.reserve(n * n);
  for (const auto& row : rows) {
    if (row.size() != n) {
      throw std::invalid_argument("matrix is not square");
    }
    m.insert(m.end(), row.begin(), row.end());
  }
  return FiniteMetricSpace(std::move(m), n, std::move(labels));
}

}  // namespace

LoadedSpace read_space_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad json: ") + e.what());
  }
  if (!j.is_object() || !j.contains("matrix")) {
    throw std::invalid_argument("json space needs a \"matrix\" member");
  }
  std::vector<std::vector<double>> rows;
  for (const auto& row : j.at("matrix")) {
    rows.emplace_back();
    for (const auto& v : row) {
      if (!v.is_number()) throw std::invalid_argument("matrix entries must be numbers");
      rows.back().push_back(v.get<double>());
    }
  }
  std::vector<std::string> labels;
  if (j.contains("labels") && !j.at("labels").is_null()) {
    for (const auto& l : j.at("labels")) labels.push_back(l.get<std::string>());
  }
  LoadedSpace out{space_from_rows(rows, std::move(labels)), ""};
  if (j.contains("descriptor") && j.at("descriptor").is_string()) {
    out.descriptor = j.at("descriptor").get<std::string>();
  }
  return out;
}

LoadedSpace read_space_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::vector<std::string> labels;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (first) {
      first = false;
      // A non-numeric first row is the label header.
      char* end = nullptr;
      std::strtod(cells[0].c_str(), &end);
      if (end == cells[0].c_str()) {
        labels = cells;
        continue;
      }
    }
    rows.emplace_back();
    for (const auto& c : cells) {
      char* end = nullptr;
      const double v = std::strtod(c.c_str(), &end);
      if (end == c.c_str()) throw std::invalid_argument("bad csv number: " + c);
      rows.back().push_back(v);
    }
  }
  return LoadedSpace{space_from_rows(rows, std::move(labels)), ""};
}

LoadedSpace read_space_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0) {
    return read_space_csv(in);
  }
  return read_space_json(in);
}

std::string space_to_json(const FiniteMetricSpace& space,
                          const std::string& descriptor) {
  JsonValue doc = JsonValue::object();
  if (!space.labels().empty()) {
    JsonValue labels = JsonValue::array();
    for (const auto& l : space.labels()) labels.push_back(l);
    doc["labels"] = std::move(labels);
  }
  JsonValue matrix = JsonValue::array();
  const std::size_t n = space.size();
  for (std::size_t i = 0; i < n; ++i) {
    JsonValue row = JsonValue::array();
    for (std::size_t j = 0; j < n; ++j) {
      row.push_back(space(static_cast<PointId>(i), static_cast<PointId>(j)));
    }
    matrix.push_back(std::move(row));
  }
  doc["matrix"] = std::move(matrix);
  if (!descriptor.empty()) doc["descriptor"] = descriptor;
  return doc.dump(1);
}

std::string space_to_csv(const FiniteMetricSpace& space) {
  std::string out;
  const std::size_t n = space.size();
  if (!space.labels().empty()) {
    for (std::size_t i = 0; i < n; ++i) {
      if (i) out += ',';
      out += space.labels()[i];
    }
    out += '\n';
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j) out += ',';
      out += format_real(space(static_cast<PointId>(i), static_cast<PointId>(j)));
    }
    out += '\n';
  }
  return out;
}

}  // namespace snowprobe
