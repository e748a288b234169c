#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "sepkit/basis.hpp"
#include "sepkit/factorization.hpp"
#include "sepkit/linalg.hpp"
#include "sepkit/search.hpp"
#include "sepkit/separability.hpp"

namespace sepkit {

using Json = nlohmann::json;

// Complex numbers are [re, im] pairs; vectors are arrays of pairs; matrices
// are arrays of rows.
Json complex_to_json(Complex z);
Complex complex_from_json(const Json& j, const std::string& field);
Json vector_to_json(const ComplexVector& v);
ComplexVector vector_from_json(const Json& j, const std::string& field);
Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j, const std::string& field);

// Files more than this far from unit norm are rejected.
inline constexpr double kFileNormTol = 1e-6;

struct LoadedState {
  FactorStructure structure;
  State state;
  std::vector<std::string> warnings;
};

struct LoadedBasis {
  OrthonormalBasis basis;
  std::vector<std::string> warnings;
};

struct LoadedOperator {
  FactorStructure structure;
  HermitianOperator op;
};

// {"dims": [...], "amplitudes": [[re, im], ...]}. Near-unit vectors are
// renormalized with a warning.
LoadedState state_from_json(const Json& j);
// {"dims": [...], "vectors": [[[re, im], ...], ...]}
LoadedBasis basis_from_json(const Json& j);
// {"dims": [...], "matrix": [[[re, im], ...], ...]}
LoadedOperator operator_from_json(const Json& j);

Json state_to_json(const FactorStructure& structure, const State& state);
Json basis_to_json(const OrthonormalBasis& basis);
Json operator_to_json(const FactorStructure& structure, const HermitianOperator& op);

// Reads and parses a JSON file; errors name the path.
Json read_json_file(const std::filesystem::path& path);

// FNV-1a 64-bit, rendered as 16 hex digits.
std::string fnv1a_hex(std::string_view data);

// Shortest round-trip rendering, identical to the JSON serializer's.
std::string format_number(double x);

void to_json(Json& j, const MinorViolation& v);
void from_json(const Json& j, MinorViolation& v);
void to_json(Json& j, const BasisType& t);
void from_json(const Json& j, BasisType& t);
void to_json(Json& j, const BasisClassification& c);
void from_json(const Json& j, BasisClassification& c);
void to_json(Json& j, const SeedTrace& t);
void from_json(const Json& j, SeedTrace& t);
void to_json(Json& j, const ConjectureRow& r);
void from_json(const Json& j, ConjectureRow& r);
void to_json(Json& j, const ConjectureReport& r);
void from_json(const Json& j, ConjectureReport& r);

// Verdicts carry complex factor vectors; these are explicit rather than ADL
// hooks.
Json verdict_to_json(const SeparabilityVerdict& v);
SeparabilityVerdict verdict_from_json(const Json& j);
Json search_result_to_json(const SearchResult& r);
SearchResult search_result_from_json(const Json& j);

}  // namespace sepkit
