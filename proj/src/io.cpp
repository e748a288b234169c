#include "sepkit/io.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "sepkit/error.hpp"

namespace sepkit {

namespace {

const Json& require(const Json& j, const char* key) {
  if (!j.is_object()) throw InvalidInput("expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw InvalidInput(std::string("missing field '") + key + "'");
  return *it;
}

FactorStructure dims_from_json(const Json& j) {
  const Json& dims = require(j, "dims");
  if (!dims.is_array() || dims.empty()) throw InvalidInput("field 'dims' must be a non-empty array");
  std::vector<std::size_t> out;
  for (const auto& d : dims) {
    if (!d.is_number_unsigned()) throw InvalidInput("field 'dims' must hold positive integers");
    out.push_back(d.get<std::size_t>());
  }
  try {
    return FactorStructure(std::move(out));
  } catch (const InvalidInput& e) {
    throw InvalidInput(std::string("field 'dims': ") + e.what());
  }
}

// Renormalizes with a warning between kStateNormTol and kFileNormTol.
State checked_state(ComplexVector v, const std::string& field, std::vector<std::string>& warnings) {
  double n = v.norm();
  double err = std::abs(n - 1.0);
  if (!(err <= kFileNormTol)) {
    throw InvalidInput("field '" + field + "': norm " + format_number(n) + " is not within " +
                       format_number(kFileNormTol) + " of 1");
  }
  if (err > kStateNormTol) {
    warnings.push_back("field '" + field + "': renormalized (norm was " + format_number(n) + ")");
    return State::normalized(std::move(v));
  }
  return State(std::move(v));
}

}  // namespace

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j, const std::string& field) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw InvalidInput("field '" + field + "' must hold [re, im] pairs");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Json vector_to_json(const ComplexVector& v) {
  Json out = Json::array();
  for (const auto& z : v) out.push_back(complex_to_json(z));
  return out;
}

ComplexVector vector_from_json(const Json& j, const std::string& field) {
  if (!j.is_array()) throw InvalidInput("field '" + field + "' must be an array");
  ComplexVector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = complex_from_json(j[i], field);
  return v;
}

Json matrix_to_json(const ComplexMatrix& m) {
  Json out = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

ComplexMatrix matrix_from_json(const Json& j, const std::string& field) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    throw InvalidInput("field '" + field + "' must be an array of rows");
  }
  std::size_t rows = j.size();
  std::size_t cols = j[0].size();
  ComplexMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      throw DimensionMismatch("field '" + field + "': ragged rows");
    }
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = complex_from_json(j[r][c], field);
  }
  return m;
}

LoadedState state_from_json(const Json& j) {
  FactorStructure structure = dims_from_json(j);
  ComplexVector v = vector_from_json(require(j, "amplitudes"), "amplitudes");
  if (v.dim() != structure.total_dim()) {
    throw DimensionMismatch("field 'amplitudes': length " + std::to_string(v.dim()) +
                            " does not match product(dims) = " +
                            std::to_string(structure.total_dim()));
  }
  std::vector<std::string> warnings;
  State s = checked_state(std::move(v), "amplitudes", warnings);
  return {std::move(structure), std::move(s), std::move(warnings)};
}

LoadedBasis basis_from_json(const Json& j) {
  FactorStructure structure = dims_from_json(j);
  const Json& vs = require(j, "vectors");
  if (!vs.is_array()) throw InvalidInput("field 'vectors' must be an array");
  if (vs.size() != structure.total_dim()) {
    throw DimensionMismatch("field 'vectors': " + std::to_string(vs.size()) +
                            " vectors for dimension " + std::to_string(structure.total_dim()));
  }
  std::vector<std::string> warnings;
  std::vector<State> states;
  for (std::size_t k = 0; k < vs.size(); ++k) {
    std::string field = "vectors[" + std::to_string(k) + "]";
    ComplexVector v = vector_from_json(vs[k], field);
    if (v.dim() != structure.total_dim()) {
      throw DimensionMismatch("field '" + field + "': length " + std::to_string(v.dim()) +
                              " does not match product(dims) = " +
                              std::to_string(structure.total_dim()));
    }
    states.push_back(checked_state(std::move(v), field, warnings));
  }
  return {OrthonormalBasis(std::move(structure), std::move(states)), std::move(warnings)};
}

LoadedOperator operator_from_json(const Json& j) {
  FactorStructure structure = dims_from_json(j);
  ComplexMatrix m = matrix_from_json(require(j, "matrix"), "matrix");
  if (m.rows() != structure.total_dim() || m.cols() != structure.total_dim()) {
    throw DimensionMismatch("field 'matrix': shape " + std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()) + " does not match product(dims) = " +
                            std::to_string(structure.total_dim()));
  }
  try {
    return {std::move(structure), HermitianOperator(std::move(m))};
  } catch (const InvalidInput& e) {
    throw InvalidInput(std::string("field 'matrix': ") + e.what());
  }
}

Json state_to_json(const FactorStructure& structure, const State& state) {
  return {{"dims", structure.dims()}, {"amplitudes", vector_to_json(state.amplitudes())}};
}

Json basis_to_json(const OrthonormalBasis& basis) {
  Json vs = Json::array();
  for (const auto& s : basis.vectors()) vs.push_back(vector_to_json(s.amplitudes()));
  return {{"dims", basis.structure().dims()}, {"vectors", std::move(vs)}};
}

Json operator_to_json(const FactorStructure& structure, const HermitianOperator& op) {
  return {{"dims", structure.dims()}, {"matrix", matrix_to_json(op.matrix())}};
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open file '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InvalidInput("file '" + path.string() + "' is not valid JSON: " + e.what());
  }
}

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

std::string format_number(double x) { return Json(x).dump(); }

void to_json(Json& j, const MinorViolation& v) {
  j = {{"i", v.i}, {"j", v.j}, {"a", v.a}, {"b", v.b}, {"magnitude", v.magnitude}};
}

void from_json(const Json& j, MinorViolation& v) {
  j.at("i").get_to(v.i);
  j.at("j").get_to(v.j);
  j.at("a").get_to(v.a);
  j.at("b").get_to(v.b);
  j.at("magnitude").get_to(v.magnitude);
}

void to_json(Json& j, const BasisType& t) { j = {{"p", t.p}, {"q", t.q}}; }

void from_json(const Json& j, BasisType& t) {
  j.at("p").get_to(t.p);
  j.at("q").get_to(t.q);
}

void to_json(Json& j, const BasisClassification& c) {
  j = {{"type", c.type}, {"separable", c.separable}, {"measures", c.measures}};
}

void from_json(const Json& j, BasisClassification& c) {
  j.at("type").get_to(c.type);
  c.separable = j.at("separable").get<std::vector<bool>>();
  j.at("measures").get_to(c.measures);
}

void to_json(Json& j, const SeedTrace& t) {
  j = {{"master_seed", t.master_seed}, {"restart_seeds", t.restart_seeds}};
}

void from_json(const Json& j, SeedTrace& t) {
  j.at("master_seed").get_to(t.master_seed);
  j.at("restart_seeds").get_to(t.restart_seeds);
}

namespace {

SearchStatus status_from_json(const Json& j) {
  std::string s = j.get<std::string>();
  if (s == to_string(SearchStatus::kFound)) return SearchStatus::kFound;
  if (s == to_string(SearchStatus::kNotFound)) return SearchStatus::kNotFound;
  throw InvalidInput("unknown search status '" + s + "'");
}

}  // namespace

void to_json(Json& j, const ConjectureRow& r) {
  j = {{"target", r.target},
       {"status", to_string(r.status)},
       {"best_residual", r.best_residual},
       {"restarts_run", r.restarts_run},
       {"conjectured_infeasible", r.conjectured_infeasible},
       {"single_entangled", r.single_entangled}};
}

void from_json(const Json& j, ConjectureRow& r) {
  j.at("target").get_to(r.target);
  r.status = status_from_json(j.at("status"));
  j.at("best_residual").get_to(r.best_residual);
  j.at("restarts_run").get_to(r.restarts_run);
  j.at("conjectured_infeasible").get_to(r.conjectured_infeasible);
  j.at("single_entangled").get_to(r.single_entangled);
}

void to_json(Json& j, const ConjectureReport& r) {
  j = {{"dims", r.dims},
       {"split", r.split},
       {"tau", r.tau},
       {"success_tol", r.success_tol},
       {"master_seed", r.master_seed},
       {"rows", r.rows}};
}

void from_json(const Json& j, ConjectureReport& r) {
  j.at("dims").get_to(r.dims);
  j.at("split").get_to(r.split);
  j.at("tau").get_to(r.tau);
  j.at("success_tol").get_to(r.success_tol);
  j.at("master_seed").get_to(r.master_seed);
  j.at("rows").get_to(r.rows);
}

Json verdict_to_json(const SeparabilityVerdict& v) {
  Json j = {{"separable", v.separable},
            {"measure", v.measure},
            {"violation_count", v.violation_count},
            {"worst_violation", nullptr},
            {"schmidt_rank", v.schmidt_rank},
            {"schmidt_coefficients", v.schmidt_coefficients},
            {"factors", nullptr}};
  if (v.worst_violation) j["worst_violation"] = *v.worst_violation;
  if (v.factors) {
    j["factors"] = {{"left", vector_to_json(v.factors->first)},
                    {"right", vector_to_json(v.factors->second)}};
  }
  return j;
}

SeparabilityVerdict verdict_from_json(const Json& j) {
  SeparabilityVerdict v;
  j.at("separable").get_to(v.separable);
  j.at("measure").get_to(v.measure);
  j.at("violation_count").get_to(v.violation_count);
  if (!j.at("worst_violation").is_null()) v.worst_violation = j["worst_violation"].get<MinorViolation>();
  j.at("schmidt_rank").get_to(v.schmidt_rank);
  j.at("schmidt_coefficients").get_to(v.schmidt_coefficients);
  if (!j.at("factors").is_null()) {
    const Json& f = j["factors"];
    v.factors = std::make_pair(vector_from_json(f.at("left"), "factors.left"),
                               vector_from_json(f.at("right"), "factors.right"));
  }
  return v;
}

Json search_result_to_json(const SearchResult& r) {
  return {{"status", to_string(r.status)},
          {"best_residual", r.best_residual},
          {"best_restart", r.best_restart},
          {"best_measures", r.best_measures},
          {"per_restart_residuals", r.per_restart_residuals},
          {"seed_trace", r.seed_trace},
          {"best_basis", basis_to_json(r.best_basis)}};
}

SearchResult search_result_from_json(const Json& j) {
  const Json& b = j.at("best_basis");
  std::vector<State> states;
  for (const auto& v : b.at("vectors")) {
    states.push_back(State(vector_from_json(v, "best_basis.vectors"), kFileNormTol));
  }
  SearchResult r{
      .status = status_from_json(j.at("status")),
      .best_basis = OrthonormalBasis(FactorStructure(b.at("dims").get<std::vector<std::size_t>>()),
                                     std::move(states)),
      .best_residual = j.at("best_residual").get<double>(),
      .best_restart = j.at("best_restart").get<std::size_t>(),
      .best_measures = j.at("best_measures").get<std::vector<double>>(),
      .per_restart_residuals = j.at("per_restart_residuals").get<std::vector<double>>(),
      .seed_trace = j.at("seed_trace").get<SeedTrace>(),
  };
  return r;
}

}  // namespace sepkit
