#include "xgraph/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "xgraph/errors.hpp"

namespace xgraph {

namespace {

using nlohmann::json;

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open " + path.string());
  }
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot write " + path.string());
  }
  out << std::setprecision(17);
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ls(line);
  while (std::getline(ls, field, ',')) {
    // Trim surrounding whitespace.
    const auto begin = field.find_first_not_of(" \t\r");
    const auto end = field.find_last_not_of(" \t\r");
    fields.push_back(begin == std::string::npos
                         ? std::string()
                         : field.substr(begin, end - begin + 1));
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

Matrix json_matrix(const json& rows, const std::string& what) {
  if (!rows.is_array() || rows.empty() || !rows.front().is_array()) {
    throw ConfigError(what + " must be an array of arrays");
  }
  const auto r = rows.size();
  const auto c = rows.front().size();
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) {
      throw ConfigError(what + " rows must have equal length");
    }
    for (std::size_t j = 0; j < c; ++j) {
      if (!rows[i][j].is_number()) {
        throw ConfigError(what + " entries must be numbers");
      }
      m(i, j) = rows[i][j].get<double>();
    }
  }
  return m;
}

}  // namespace

Matrix read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_csv_line(line);
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& field : fields) {
      if (field == "NA" || field == "nan" || field == "NaN") {
        row.push_back(std::numeric_limits<double>::quiet_NaN());
        continue;
      }
      try {
        std::size_t used = 0;
        const double value = std::stod(field, &used);
        if (used != field.size()) throw std::invalid_argument(field);
        row.push_back(value);
      } catch (const std::exception&) {
        throw DataError(path.string() + ": bad numeric field '" + field + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw DataError(path.string() + ": ragged rows");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw DataError(path.string() + ": empty matrix");
  }
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(i, j) = rows[i][j];
    }
  }
  return m;
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m) {
  std::ofstream out = open_output(path);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ",";
      if (std::isnan(m(i, j))) {
        out << "NA";
      } else {
        out << m(i, j);
      }
    }
    out << "\n";
  }
}

DataMatrix read_data_csv(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError(path.string() + ": empty data file");
  }
  DataMatrix data;
  data.names = split_csv_line(line);
  if (data.names.empty()) {
    throw DataError(path.string() + ": missing header row");
  }
  const std::size_t d = data.names.size();

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != d) {
      ++data.dropped_rows;
      continue;
    }
    std::vector<double> row;
    row.reserve(d);
    bool ok = true;
    for (const auto& field : fields) {
      if (field.empty() || field == "NA") {
        ok = false;
        break;
      }
      try {
        std::size_t used = 0;
        const double value = std::stod(field, &used);
        if (used != field.size() || !std::isfinite(value)) {
          ok = false;
          break;
        }
        row.push_back(value);
      } catch (const std::exception&) {
        ok = false;
        break;
      }
    }
    if (!ok) {
      ++data.dropped_rows;
      continue;
    }
    rows.push_back(std::move(row));
  }
  if (rows.size() < 2) {
    throw DataError(path.string() + ": fewer than two usable observations");
  }
  data.values.resize(rows.size(), d);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      data.values(i, j) = rows[i][j];
    }
  }
  return data;
}

void write_data_csv(const std::filesystem::path& path, const Matrix& values,
                    const std::vector<std::string>& names) {
  if (names.size() != static_cast<std::size_t>(values.cols())) {
    throw DataError("column name count does not match data");
  }
  std::ofstream out = open_output(path);
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (j) out << ",";
    out << names[j];
  }
  out << "\n";
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      if (j) out << ",";
      out << values(i, j);
    }
    out << "\n";
  }
}

UndirectedGraph read_edge_list_file(const std::filesystem::path& path,
                                    int num_nodes) {
  std::ifstream in = open_input(path);
  return read_edge_list(in, num_nodes);
}

void write_edge_list_file(const std::filesystem::path& path,
                          const UndirectedGraph& g) {
  std::ofstream out = open_output(path);
  write_edge_list(out, g);
}

SimSpec parse_sim_spec(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("model spec is not valid JSON: ") +
                      e.what());
  }
  SimSpec spec;
  if (!doc.contains("kind") || !doc["kind"].is_string()) {
    throw ConfigError("model spec needs a string field 'kind'");
  }
  spec.kind = doc["kind"].get<std::string>();
  if (!doc.contains("n") || !doc["n"].is_number_integer() ||
      doc["n"].get<std::int64_t>() < 1) {
    throw ConfigError("model spec needs a positive integer 'n'");
  }
  spec.n = doc["n"].get<int>();
  spec.seed = doc.value("seed", std::uint64_t{0});
  spec.normalize = doc.value("normalize", false);

  if (spec.kind == "hr") {
    if (!doc.contains("gamma")) {
      throw ConfigError("hr model spec needs 'gamma'");
    }
    spec.gamma = json_matrix(doc["gamma"], "gamma");
  } else if (spec.kind == "maxlinear") {
    if (!doc.contains("A")) {
      throw ConfigError("maxlinear model spec needs 'A'");
    }
    spec.coeff = json_matrix(doc["A"], "A");
  } else if (spec.kind == "recml") {
    if (!doc.contains("dag") || !doc["dag"].is_array()) {
      throw ConfigError("recml model spec needs a 'dag' arc array");
    }
    std::ostringstream arcs;
    for (const auto& item : doc["dag"]) {
      if (!item.is_string()) {
        throw ConfigError("recml 'dag' must list arcs as strings 'i -> j'");
      }
      arcs << item.get<std::string>() << "\n";
    }
    if (!doc.contains("weights") || !doc["weights"].is_object() ||
        !doc["weights"].contains("edges") ||
        !doc["weights"].contains("nodes")) {
      throw ConfigError("recml model spec needs weights.edges and "
                        "weights.nodes");
    }
    const auto& nodes = doc["weights"]["nodes"];
    if (!nodes.is_array() || nodes.empty()) {
      throw ConfigError("weights.nodes must be a non-empty array");
    }
    std::istringstream arc_stream(arcs.str());
    Dag dag = read_dag_edge_list(arc_stream, static_cast<int>(nodes.size()));
    RecursiveMLSpec rec{std::move(dag), {}, Vector(nodes.size())};
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      rec.node_weight[static_cast<Eigen::Index>(i)] = nodes[i].get<double>();
    }
    for (const auto& e : doc["weights"]["edges"]) {
      if (!e.is_array() || e.size() != 3) {
        throw ConfigError("weights.edges entries must be [from, to, weight]");
      }
      const int from = e[0].get<int>() - 1;
      const int to = e[1].get<int>() - 1;
      rec.edge_weight[{from, to}] = e[2].get<double>();
    }
    try {
      rec.validate();
    } catch (const DataError& err) {
      throw ConfigError(std::string("invalid recml spec: ") + err.what());
    }
    spec.recursive = std::move(rec);
  } else {
    throw ConfigError("unknown model kind '" + spec.kind +
                      "' (expected hr, maxlinear, or recml)");
  }
  return spec;
}

SimSpec read_sim_spec(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_sim_spec(buffer.str());
}

std::string content_hash(const std::string& text) {
  std::uint64_t hash = 0xCBF29CE484222325ull;
  for (unsigned char ch : text) {
    hash ^= ch;
    hash *= 0x100000001B3ull;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << hash;
  return out.str();
}

}  // namespace xgraph
