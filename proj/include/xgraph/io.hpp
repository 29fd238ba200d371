#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "xgraph/graph.hpp"
#include "xgraph/linalg.hpp"
#include "xgraph/simulate.hpp"

namespace xgraph {

// Raw observations: n rows by d columns plus optional column names.
struct DataMatrix {
  Matrix values;
  std::vector<std::string> names;
  int dropped_rows = 0;  // rows removed because of missing fields
};

// Square matrix CSV: d rows by d columns, no header; the token "NA" marks
// unknown entries (read back as NaN).
Matrix read_matrix_csv(const std::filesystem::path& path);
void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);

// Data CSV: header row of variable names, one observation per row. Rows with
// any missing/non-numeric field are dropped and counted.
DataMatrix read_data_csv(const std::filesystem::path& path);
void write_data_csv(const std::filesystem::path& path, const Matrix& values,
                    const std::vector<std::string>& names);

UndirectedGraph read_edge_list_file(const std::filesystem::path& path,
                                    int num_nodes = 0);
void write_edge_list_file(const std::filesystem::path& path,
                          const UndirectedGraph& g);

// A simulation model description:
//   {"kind": "hr",        "gamma": [[...]], "n": 100, "seed": 1}
//   {"kind": "maxlinear", "A": [[...]], "n": ..., "seed": ...,
//    "normalize": true}
//   {"kind": "recml",     "dag": ["1 -> 2", ...],
//    "weights": {"edges": [[k, i, c], ...], "nodes": [c_11, ...]},
//    "n": ..., "seed": ...}
struct SimSpec {
  std::string kind;
  std::optional<Matrix> gamma;
  std::optional<Matrix> coeff;
  std::optional<RecursiveMLSpec> recursive;
  bool normalize = false;
  int n = 0;
  std::uint64_t seed = 0;
};

SimSpec parse_sim_spec(const std::string& json_text);
SimSpec read_sim_spec(const std::filesystem::path& path);

// Stable 64-bit FNV-1a content hash used to tag simulation outputs.
std::string content_hash(const std::string& text);

}  // namespace xgraph
