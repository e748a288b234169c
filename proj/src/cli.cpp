#include "sepkit/cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <vector>

#include <CLI11.hpp>

#include "sepkit/basis.hpp"
#include "sepkit/error.hpp"
#include "sepkit/io.hpp"
#include "sepkit/search.hpp"

namespace sepkit::cli {

namespace {

using Lines = std::vector<std::string>;

struct Report {
  std::string command;
  Json results = Json::object();
  Json seed_trace = nullptr;
  std::vector<std::string> warnings;
  Lines text;
  std::string digest_material;
  int exit_code = kExitOk;
};

// Thrown after a report has been filled in, to keep it on stdout while
// exiting with the validation code.
struct Refusal {
  std::string message;
};

std::string num(double x) { return format_number(x); }

std::string complex_text(Complex z) {
  if (z.imag() == 0.0) return num(z.real());
  std::string im = num(z.imag());
  return num(z.real()) + (im.front() == '-' ? "" : "+") + im + "i";
}

std::string utc_now() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

template <typename F>
auto for_field(const std::string& field, F&& f) {
  try {
    return f();
  } catch (const InvalidInput& e) {
    throw InvalidInput(field + ": " + e.what());
  }
}

Json load_file(const std::string& path, Report& report) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string raw = buf.str();
  report.digest_material += raw;
  report.digest_material.push_back('\0');
  try {
    return Json::parse(raw);
  } catch (const Json::parse_error& e) {
    throw InvalidInput("file '" + path + "' is not valid JSON: " + e.what());
  }
}

Bipartition split_for(const std::string& split, const FactorStructure& structure) {
  return for_field("--split", [&] { return Bipartition::parse(split, structure); });
}

void check_tol(double tol, const std::string& field) {
  if (!(tol > 0.0) || !std::isfinite(tol)) throw InvalidInput(field + ": must be positive and finite");
}

std::string verdict_word(bool separable) { return separable ? "separable" : "entangled"; }

// One-based digit labels of the block's basis states, as in |12>.
std::vector<std::string> block_labels(const FactorStructure& structure,
                                      const std::vector<std::size_t>& block) {
  std::vector<std::size_t> dims;
  for (auto f : block) dims.push_back(structure.dim(f));
  std::vector<std::string> labels;
  std::vector<std::size_t> digits(dims.size(), 0);
  while (true) {
    std::string s = "|";
    for (auto d : digits) s += std::to_string(d + 1);
    labels.push_back(s + ">");
    std::size_t k = dims.size();
    while (k > 0) {
      --k;
      if (++digits[k] < dims[k]) break;
      digits[k] = 0;
      if (k == 0) return labels;
    }
    if (dims.empty()) return labels;
  }
}

std::string block_text(const std::vector<std::size_t>& block) {
  std::string s = "{";
  for (std::size_t i = 0; i < block.size(); ++i) s += (i ? "," : "") + std::to_string(block[i] + 1);
  return s + "}";
}

// --- check-separable -------------------------------------------------------

struct CheckOptions {
  std::string state;
  std::string split;
  double tol = kDefaultSeparabilityTol;
};

void check_separable(const CheckOptions& o, Report& r) {
  check_tol(o.tol, "--tol");
  LoadedState ls = for_field("--state", [&] { return state_from_json(load_file(o.state, r)); });
  r.warnings = ls.warnings;
  Bipartition bip = split_for(o.split, ls.structure);
  CoefficientMatrix c = coefficient_matrix(ls.state, ls.structure, bip);
  SeparabilityVerdict v = is_separable(c, o.tol);
  std::vector<MinorViolation> violations = microsingularity_violations(c, o.tol);

  r.results = {{"split", bip.to_string()},
               {"tol", o.tol},
               {"verdict", verdict_to_json(v)},
               {"violations", violations}};

  r.text.push_back("split " + bip.to_string() + ": " + verdict_word(v.separable));
  r.text.push_back("measure " + num(v.measure));
  r.text.push_back("schmidt rank " + std::to_string(v.schmidt_rank));
  std::string coeffs = "schmidt coefficients";
  for (double s : v.schmidt_coefficients) coeffs += " " + num(s);
  r.text.push_back(coeffs);
  r.text.push_back("violations " + std::to_string(violations.size()));
  for (const auto& m : violations) {
    r.text.push_back("  i=" + std::to_string(m.i) + " j=" + std::to_string(m.j) +
                     " a=" + std::to_string(m.a) + " b=" + std::to_string(m.b) +
                     " |minor|=" + num(m.magnitude));
  }
}

// --- classify-basis ----------------------------------------------------------

struct ClassifyBasisOptions {
  std::string basis;
  std::string split;
  double tol = kDefaultSeparabilityTol;
};

void classify_basis_cmd(const ClassifyBasisOptions& o, Report& r) {
  check_tol(o.tol, "--tol");
  LoadedBasis lb = for_field("--basis", [&] { return basis_from_json(load_file(o.basis, r)); });
  r.warnings = lb.warnings;
  Bipartition bip = split_for(o.split, lb.basis.structure());
  BasisClassification c = for_field("--basis", [&] { return classify_basis(lb.basis, bip, o.tol); });

  Json elements = Json::array();
  for (std::size_t k = 0; k < c.measures.size(); ++k) {
    elements.push_back({{"index", k}, {"separable", bool(c.separable[k])}, {"measure", c.measures[k]}});
  }
  r.results = {{"split", bip.to_string()}, {"tol", o.tol}, {"type", c.type}, {"elements", elements}};

  r.text.push_back("split " + bip.to_string() + ": type " + c.type.to_string());
  for (std::size_t k = 0; k < c.measures.size(); ++k) {
    r.text.push_back("  " + std::to_string(k) + " " + verdict_word(c.separable[k]) + " measure " +
                     num(c.measures[k]));
  }
}

// --- classify-operator -------------------------------------------------------

struct ClassifyOperatorOptions {
  std::string op;
  std::vector<std::string> ops;
  std::string split;
  double tol = kDefaultSeparabilityTol;
  double degeneracy_tol = kDefaultDegeneracyTol;
};

std::string_view refusal_kind(const InvalidInput& e) {
  if (dynamic_cast<const DegenerateSpectrum*>(&e)) return "DegenerateSpectrum";
  if (dynamic_cast<const NotCommuting*>(&e)) return "NotCommuting";
  if (dynamic_cast<const IncompleteSet*>(&e)) return "IncompleteSet";
  return {};
}

void classify_operator_cmd(const ClassifyOperatorOptions& o, Report& r) {
  check_tol(o.tol, "--tol");
  check_tol(o.degeneracy_tol, "--degeneracy-tol");
  std::vector<std::string> paths = o.ops;
  if (!o.op.empty()) paths.insert(paths.begin(), o.op);
  if (paths.empty()) throw InvalidInput("--op: one of --op or --ops is required");

  std::vector<HermitianOperator> ops;
  std::optional<FactorStructure> structure;
  for (const auto& path : paths) {
    LoadedOperator lo = for_field(path, [&] { return operator_from_json(load_file(path, r)); });
    if (structure && !(lo.structure == *structure)) {
      throw DimensionMismatch(path + ": field 'dims' differs from the first operator");
    }
    structure = lo.structure;
    ops.push_back(std::move(lo.op));
  }
  Bipartition bip = split_for(o.split, *structure);

  OperatorClassification oc = [&] {
    try {
      if (ops.size() == 1) return classify_operator(ops[0], *structure, bip, o.tol, o.degeneracy_tol);
      return classify_commuting_set(ops, *structure, bip, o.tol, o.degeneracy_tol);
    } catch (const InvalidInput& e) {
      std::string_view kind = refusal_kind(e);
      if (kind.empty()) throw;
      r.results = {{"split", bip.to_string()},
                   {"refusal", {{"kind", kind}, {"message", e.what()}}}};
      r.text.push_back("split " + bip.to_string() + ": refused (" + std::string(kind) + ")");
      r.text.push_back(e.what());
      throw Refusal{std::string(kind) + ": " + e.what()};
    }
  }();

  const BasisClassification& c = oc.classification;
  Json elements = Json::array();
  for (std::size_t k = 0; k < oc.basis.size(); ++k) {
    elements.push_back({{"index", k},
                        {"eigenvalues", oc.eigenvalues[k]},
                        {"separable", bool(c.separable[k])},
                        {"measure", c.measures[k]},
                        {"vector", vector_to_json(oc.basis[k].amplitudes())}});
  }
  r.results = {{"split", bip.to_string()}, {"tol", o.tol}, {"type", c.type}, {"elements", elements}};

  r.text.push_back("split " + bip.to_string() + ": type " + c.type.to_string());
  for (std::size_t k = 0; k < oc.basis.size(); ++k) {
    std::string ev;
    for (double x : oc.eigenvalues[k]) ev += (ev.empty() ? "" : ",") + num(x);
    r.text.push_back("  " + std::to_string(k) + " eigenvalues (" + ev + ") " +
                     verdict_word(c.separable[k]) + " measure " + num(c.measures[k]));
  }
}

// --- search-basis / conjecture-report ---------------------------------------

struct SearchOptions {
  std::string dims;
  std::string split;
  std::string target;
  SearchConfig config;
  bool require_found = false;
};

constexpr std::string_view kEvidenceNote =
    "numerical evidence under the stated configuration, not a proof";

Json config_json(const SearchConfig& c) {
  return {{"restarts", c.restarts},      {"max_iters", c.max_iters},
          {"master_seed", c.master_seed}, {"tau", c.tau},
          {"success_tol", c.success_tol}, {"stop_at_first_found", c.stop_at_first_found}};
}

std::string config_text(const SearchConfig& c) {
  return "restarts=" + std::to_string(c.restarts) + " seed=" + std::to_string(c.master_seed) +
         " tau=" + num(c.tau) + " success_tol=" + num(c.success_tol) +
         " max_iters=" + std::to_string(c.max_iters);
}

void search_basis_cmd(SearchOptions o, Report& r) {
  FactorStructure structure = for_field("--dims", [&] { return parse_dims(o.dims); });
  Bipartition bip = split_for(o.split, structure);
  o.config.target = for_field("--target", [&] { return parse_basis_type(o.target); });
  for_field("--target", [&] {
    validate(o.config, structure);
    return 0;
  });
  SearchResult res = search_basis_type(structure, bip, o.config);
  const bool found = res.status == SearchStatus::kFound;

  r.seed_trace = res.seed_trace;
  r.results = {{"dims", structure.dims()},
               {"split", bip.to_string()},
               {"target", o.config.target},
               {"config", config_json(o.config)},
               {"result", search_result_to_json(res)}};
  if (!found) r.results["note"] = "no basis found under configuration; " + std::string(kEvidenceNote);

  r.text.push_back("target " + o.config.target.to_string() + " on split " + bip.to_string() + ": " +
                   std::string(to_string(res.status)));
  r.text.push_back("configuration " + config_text(o.config));
  r.text.push_back("best residual " + num(res.best_residual) + " (restart " +
                   std::to_string(res.best_restart) + ", " +
                   std::to_string(res.per_restart_residuals.size()) + " restarts run)");
  std::string ms = "best measures";
  for (double m : res.best_measures) ms += " " + num(m);
  r.text.push_back(ms);
  if (found) {
    r.text.push_back("basis vectors:");
    for (const auto& s : res.best_basis.vectors()) {
      std::string line = " ";
      for (const auto& z : s.amplitudes()) line += " " + complex_text(z);
      r.text.push_back(line);
    }
  } else {
    r.text.push_back("no basis found under configuration; " + std::string(kEvidenceNote));
    if (o.require_found) r.exit_code = kExitNotFound;
  }
}

void conjecture_report_cmd(SearchOptions o, Report& r) {
  FactorStructure structure = for_field("--dims", [&] { return parse_dims(o.dims); });
  Bipartition bip = split_for(o.split, structure);
  const std::size_t d = structure.total_dim();
  o.config.target = {0, d};
  for_field("--restarts", [&] {
    validate(o.config, structure);
    return 0;
  });
  ConjectureReport rep = for_field("--dims", [&] { return conjecture_report(structure, bip, o.config); });

  SeedTrace trace{o.config.master_seed, {}};
  for (std::size_t i = 0; i < o.config.restarts; ++i) {
    trace.restart_seeds.push_back(restart_seed(o.config.master_seed, i));
  }
  r.seed_trace = trace;
  r.results = {{"report", rep}, {"config", config_json(o.config)}, {"note", kEvidenceNote}};

  r.text.push_back("dims " + o.dims + " split " + bip.to_string() + " " + config_text(o.config));
  auto pad = [](std::string s, std::size_t w) { return s + std::string(w > s.size() ? w - s.size() : 1, ' '); };
  r.text.push_back(pad("type", 9) + pad("status", 10) + pad("best_residual", 24) + pad("restarts", 10) + "flags");
  for (const auto& row : rep.rows) {
    std::string line = pad(row.target.to_string(), 9) + pad(std::string(to_string(row.status)), 10) +
                       pad(num(row.best_residual), 24) + pad(std::to_string(row.restarts_run), 10);
    if (row.conjectured_infeasible) line += "conjectured-infeasible ";
    if (row.single_entangled) line += "single-entangled";
    while (!line.empty() && line.back() == ' ') line.pop_back();
    r.text.push_back(line);
  }
  r.text.push_back("flags are " + std::string(kEvidenceNote));
}

// --- count-conditions -------------------------------------------------------

struct CountOptions {
  std::optional<std::uint64_t> d1;
  std::optional<std::uint64_t> d2;
  bool log2 = false;
  std::optional<double> d1_log2;
  std::optional<double> d2_log2;
};

void count_conditions_cmd(const CountOptions& o, Report& r) {
  if (!o.log2) {
    if (!o.d1) throw InvalidInput("--d1: required");
    if (!o.d2) throw InvalidInput("--d2: required");
    if (*o.d1 == 0) throw InvalidInput("--d1: must be at least 1");
    if (*o.d2 == 0) throw InvalidInput("--d2: must be at least 1");
    std::uint64_t n = for_field("--d1/--d2", [&] { return condition_count(*o.d1, *o.d2); });
    r.results = {{"d1", *o.d1}, {"d2", *o.d2}, {"n_c", n}};
    r.text.push_back(std::to_string(n));
    return;
  }
  auto exponent = [](const std::optional<std::uint64_t>& d, const std::optional<double>& e,
                     const std::string& name) {
    if (e) {
      if (!(*e >= 0.0) || !std::isfinite(*e)) throw InvalidInput("--" + name + "-log2: must be finite and >= 0");
      return *e;
    }
    if (d) {
      if (*d == 0) throw InvalidInput("--" + name + ": must be at least 1");
      return std::log2(static_cast<double>(*d));
    }
    throw InvalidInput("--" + name + "-log2: required with --log2");
  };
  double x1 = exponent(o.d1, o.d1_log2, "d1");
  double x2 = exponent(o.d2, o.d2_log2, "d2");
  double l = condition_count_log2(x1, x2);
  Json lj = std::isfinite(l) ? Json(l) : Json("-inf");
  r.results = {{"d1_log2", x1}, {"d2_log2", x2}, {"log2_n_c", lj}};
  r.text.push_back(std::isfinite(l) ? num(l) : "-inf");
}

// --- demo --------------------------------------------------------------------

Json split_json(const FactorizationDemo& demo, const CoefficientMatrix& c,
                const SeparabilityVerdict& v) {
  return {{"split", c.bipartition.to_string()},
          {"row_labels", block_labels(demo.structure, c.bipartition.left())},
          {"column_labels", block_labels(demo.structure, c.bipartition.right())},
          {"coefficient_matrix", matrix_to_json(c.matrix)},
          {"verdict", verdict_to_json(v)}};
}

void split_text(const FactorizationDemo& demo, const CoefficientMatrix& c,
                const SeparabilityVerdict& v, Lines& text) {
  const auto& bip = c.bipartition;
  auto rows = block_labels(demo.structure, bip.left());
  auto cols = block_labels(demo.structure, bip.right());
  text.push_back("split " + block_text(bip.left()) + "|" + block_text(bip.right()) + " (" +
                 bip.to_string() + ")");
  std::size_t width = 6;
  for (std::size_t i = 0; i < c.matrix.rows(); ++i)
    for (std::size_t j = 0; j < c.matrix.cols(); ++j)
      width = std::max(width, complex_text(c.matrix(i, j)).size() + 2);
  auto pad = [](std::string s, std::size_t w) { return s + std::string(w > s.size() ? w - s.size() : 1, ' '); };
  std::string header = pad("", 7);
  for (const auto& l : cols) header += pad(l, width);
  while (!header.empty() && header.back() == ' ') header.pop_back();
  text.push_back(header);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::string line = pad(rows[i], 7);
    for (std::size_t j = 0; j < cols.size(); ++j) line += pad(complex_text(c.matrix(i, j)), width);
    while (!line.empty() && line.back() == ' ') line.pop_back();
    text.push_back(line);
  }
  text.push_back(verdict_word(v.separable) + ", measure " + num(v.measure) + ", violations " +
                 std::to_string(v.violation_count));
}

void demo_cmd(const std::string& name, Report& r) {
  if (name != "factorization-dependence") {
    throw InvalidInput("demo: unknown demo '" + name + "' (available: factorization-dependence)");
  }
  FactorizationDemo demo = factorization_demo();
  r.results = {{"demo", name},
               {"state", state_to_json(demo.structure, demo.state)},
               {"splits", Json::array({split_json(demo, demo.split_a, demo.verdict_a),
                                        split_json(demo, demo.split_b, demo.verdict_b)})}};
  r.text.push_back("state (a|11> + b|12> + c|21> + d|22>) (x) (alpha|1> + beta|2>), normalized,");
  r.text.push_back("with a = d = 1, b = c = 0, alpha = beta = 1/sqrt(2)");
  split_text(demo, demo.split_a, demo.verdict_a, r.text);
  split_text(demo, demo.split_b, demo.verdict_b, r.text);
}

// --- output ------------------------------------------------------------------

void emit(const Report& r, bool json, std::ostream& out, std::ostream& err) {
  if (json) {
    Json env = {{"command", r.command},
                {"tool_version", kToolVersion},
                {"inputs_digest", fnv1a_hex(r.digest_material)},
                {"seed_trace", r.seed_trace},
                {"results", r.results},
                {"warnings", r.warnings},
                {"metadata", {{"generated_at", utc_now()}}}};
    out << env.dump(2) << "\n";
    return;
  }
  for (const auto& w : r.warnings) err << "warning: " << w << "\n";
  for (const auto& line : r.text) out << line << "\n";
}

}  // namespace

FactorizationDemo factorization_demo(double a, double b, double c, double d, double alpha,
                                     double beta) {
  FactorStructure structure({2, 2, 2});
  ComplexVector amps(8);
  const double pair[4] = {a, b, c, d};
  const double third[2] = {alpha, beta};
  for (std::size_t k = 0; k < 4; ++k)
    for (std::size_t l = 0; l < 2; ++l) amps[2 * k + l] = pair[k] * third[l];
  State state = State::normalized(std::move(amps));
  Bipartition bip_a(structure, {0, 1}, {2});
  Bipartition bip_b(structure, {0}, {1, 2});
  CoefficientMatrix ca = coefficient_matrix(state, structure, bip_a);
  CoefficientMatrix cb = coefficient_matrix(state, structure, bip_b);
  SeparabilityVerdict va = is_separable(ca);
  SeparabilityVerdict vb = is_separable(cb);
  return {structure, state, std::move(ca), std::move(cb), std::move(va), std::move(vb)};
}

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Separability analysis of pure states, bases and operators", "sepkit"};
  app.require_subcommand(1);
  std::string format = "text";
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  auto add_sub = [&](const char* name, const char* desc) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->fallthrough();
    return sub;
  };

  CheckOptions check;
  auto* check_sub = add_sub("check-separable", "Decide separability of a state under a split");
  check_sub->add_option("--state", check.state, "State file")->required();
  check_sub->add_option("--split", check.split, "Split i,j,.../k,l,...")->required();
  check_sub->add_option("--tol", check.tol, "Tolerance")->capture_default_str();

  ClassifyBasisOptions cb;
  auto* cb_sub = add_sub("classify-basis", "Type (p,q) of an orthonormal basis");
  cb_sub->add_option("--basis", cb.basis, "Basis file")->required();
  cb_sub->add_option("--split", cb.split, "Split i,j,.../k,l,...")->required();
  cb_sub->add_option("--tol", cb.tol, "Tolerance")->capture_default_str();

  ClassifyOperatorOptions co;
  auto* co_sub = add_sub("classify-operator", "Type (r,s) of an operator eigenbasis");
  auto* op_opt = co_sub->add_option("--op", co.op, "Operator file");
  auto* ops_opt = co_sub->add_option("--ops", co.ops, "Commuting operator files")->delimiter(',');
  op_opt->excludes(ops_opt);
  co_sub->add_option("--split", co.split, "Split i,j,.../k,l,...")->required();
  co_sub->add_option("--tol", co.tol, "Separability tolerance")->capture_default_str();
  co_sub->add_option("--degeneracy-tol", co.degeneracy_tol, "Relative eigenvalue gap tolerance")
      ->capture_default_str();

  SearchOptions so;
  so.config.threads = 0;
  auto add_search_options = [&](CLI::App* sub) {
    sub->add_option("--dims", so.dims, "Factor dims D1xD2x...")->required();
    sub->add_option("--split", so.split, "Split i,j,.../k,l,...")->required();
    sub->add_option("--restarts", so.config.restarts, "Restarts")->capture_default_str();
    sub->add_option("--seed", so.config.master_seed, "Master seed")->capture_default_str();
    sub->add_option("--tau", so.config.tau, "Entanglement threshold")->capture_default_str();
    sub->add_option("--max-iters", so.config.max_iters, "Simplex iterations per run")
        ->capture_default_str();
    sub->add_option("--success-tol", so.config.success_tol, "Residual counted as found")
        ->capture_default_str();
    sub->add_option("--threads", so.config.threads, "Worker threads (0 = all cores)")
        ->capture_default_str();
  };
  auto* sb_sub = add_sub("search-basis", "Search for a basis of type (p,q)");
  add_search_options(sb_sub);
  sb_sub->add_option("--target", so.target, "Target P,Q")->required();
  sb_sub->add_flag("--require-found", so.require_found, "Exit 3 when no basis is found");
  auto* cr_sub = add_sub("conjecture-report", "Search every type (p, d-p)");
  add_search_options(cr_sub);

  CountOptions cc;
  auto* cc_sub = add_sub("count-conditions", "Number of micro-singularity conditions");
  cc_sub->add_option("--d1", cc.d1, "Left dimension");
  cc_sub->add_option("--d2", cc.d2, "Right dimension");
  cc_sub->add_flag("--log2", cc.log2, "Report log2 of the count");
  cc_sub->add_option("--d1-log2", cc.d1_log2, "log2 of the left dimension");
  cc_sub->add_option("--d2-log2", cc.d2_log2, "log2 of the right dimension");

  std::string demo_name;
  auto* demo_sub = add_sub("demo", "Worked examples");
  demo_sub->add_option("name", demo_name, "factorization-dependence")->required();

  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--format") {
      ++i;
      continue;
    }
    if (args[i].starts_with("-")) continue;
    bool known = false;
    for (const auto* sub : app.get_subcommands({})) known = known || sub->get_name() == args[i];
    if (!known) {
      err << "error: unknown command '" << args[i] << "'\n";
      return kExitInvalid;
    }
    break;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }

  Report report;
  for (const auto& a : args) {
    report.digest_material += a;
    report.digest_material.push_back('\0');
  }
  const bool json = format == "json";
  try {
    if (check_sub->parsed()) {
      report.command = "check-separable";
      check_separable(check, report);
    } else if (cb_sub->parsed()) {
      report.command = "classify-basis";
      classify_basis_cmd(cb, report);
    } else if (co_sub->parsed()) {
      report.command = "classify-operator";
      classify_operator_cmd(co, report);
    } else if (sb_sub->parsed()) {
      report.command = "search-basis";
      search_basis_cmd(so, report);
    } else if (cr_sub->parsed()) {
      report.command = "conjecture-report";
      conjecture_report_cmd(so, report);
    } else if (cc_sub->parsed()) {
      report.command = "count-conditions";
      count_conditions_cmd(cc, report);
    } else {
      report.command = "demo";
      demo_cmd(demo_name, report);
    }
  } catch (const Refusal& refusal) {
    emit(report, json, out, err);
    err << "error: " << refusal.message << "\n";
    return kExitInvalid;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const CriteriaDisagreement& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  emit(report, json, out, err);
  return report.exit_code;
}

}  // namespace sepkit::cli
