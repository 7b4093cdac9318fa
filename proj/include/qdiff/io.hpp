#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qdiff/nevanlinna.hpp"
#include "qdiff/qode.hpp"

namespace qdiff {

/// "1.5", "-2i", "i", "0.5+1e-3i", "3-i". Throws schema_error.
cplx parse_complex(std::string_view text);
std::string format_complex(cplx z);
/// Comma-separated complex list; empty text gives an empty list.
std::vector<cplx> parse_complex_list(std::string_view text);

/// Problem file:
///   {"k": 1, "q": [0.5, 0], "A": {"num": [[-1, 0]], "den": [[1, 0]]},
///    "B": {"num": [], "den": [[1, 0]]}, "initial": [[1, 0]], "N": 30}
/// Coefficients ascend; "den" defaults to 1 and "B" to the zero function.
struct ProblemFile {
  QdeProblem problem;
  int N = 30;
};

/// Throws schema_error; syntax errors name the line and column.
ProblemFile parse_problem(std::string_view text);
ProblemFile load_problem(const std::string& path);

/// Model file, one of
///   {"kind": "rational", "num": [...], "den": [...]}
///   {"kind": "series", "coeffs": [...]}
/// with an optional "q": [re, im] carried as the model's q.
struct ModelFile {
  std::optional<RationalFunction> rational;
  std::optional<TruncatedSeries> series;
  std::optional<QParam> qp;
};

ModelFile parse_model(std::string_view text);
ModelFile load_model(const std::string& path);

/// JSON array of sample objects with the CSV column names as keys; columns
/// that are not computable are null.
std::string samples_json(const std::vector<NevanlinnaSample>& samples);

}  // namespace qdiff
