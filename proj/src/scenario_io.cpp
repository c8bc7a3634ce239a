#include "weakcorr/scenario_io.hpp"

#include "weakcorr/kernel.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace weakcorr {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

[[noreturn]] void parse_fail(const std::string& field, const std::string& why) {
  throw Error(Errc::parse_error, "field \"" + field + "\": " + why);
}

[[noreturn]] void validation_fail(const std::string& field, const std::string& why) {
  throw Error(Errc::validation_error, "field \"" + field + "\": " + why);
}

const json& require_field(const json& obj, const std::string& key,
                          const std::string& context) {
  if (!obj.is_object() || !obj.contains(key)) {
    parse_fail(context.empty() ? key : context + "." + key, "missing");
  }
  return obj.at(key);
}

std::complex<double> parse_complex(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    parse_fail(field, "expected a [re, im] pair of numbers");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

ComplexVector<double> parse_vector(const json& j, Index dim, const std::string& field) {
  if (!j.is_array()) parse_fail(field, "expected an array of [re, im] pairs");
  if (static_cast<Index>(j.size()) != dim) {
    std::ostringstream os;
    os << "expected " << dim << " entries, got " << j.size();
    validation_fail(field, os.str());
  }
  ComplexVector<double> v(dim);
  for (Index i = 0; i < dim; ++i) {
    v[i] = parse_complex(j[i], field);
  }
  if (!v.allFinite()) validation_fail(field, "non-finite entries");
  return v;
}

ComplexMatrix<double> parse_matrix(const json& j, Index dim, const std::string& field) {
  if (!j.is_array()) parse_fail(field, "expected an array of rows");
  if (static_cast<Index>(j.size()) != dim) {
    std::ostringstream os;
    os << "expected " << dim << " rows, got " << j.size();
    validation_fail(field, os.str());
  }
  ComplexMatrix<double> m(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    const json& row = j[i];
    if (!row.is_array()) parse_fail(field, "row is not an array");
    if (static_cast<Index>(row.size()) != dim) {
      std::ostringstream os;
      os << "row " << i << ": expected " << dim << " entries, got " << row.size();
      validation_fail(field, os.str());
    }
    for (Index k = 0; k < dim; ++k) {
      m(i, k) = parse_complex(row[k], field);
    }
  }
  if (!m.allFinite()) validation_fail(field, "non-finite entries");
  return m;
}

Observable<double> parse_observable(const json& j, Index dim, const std::string& field,
                                    const Tolerances& tol) {
  const ComplexMatrix<double> m = parse_matrix(j, dim, field);
  if (!is_hermitian(m, tol.hermiticity)) validation_fail(field, "matrix is not Hermitian");
  try {
    return Observable<double>(m, tol);
  } catch (const Error& e) {
    validation_fail(field, e.what());
  }
}

ComplexMatrix<double> parse_unitary(const json& j, Index dim, const std::string& field,
                                    const Tolerances& tol) {
  const ComplexMatrix<double> m = parse_matrix(j, dim, field);
  if (!is_unitary(m, tol.evolution_unitarity)) validation_fail(field, "matrix is not unitary");
  return m;
}

TwoStageEvolution<double> parse_evolution(const json& evo, Index dim,
                                          const Tolerances& tol) {
  const bool unitary_form = evo.contains("u1") || evo.contains("u2");
  const bool hamiltonian_form = evo.contains("h1") || evo.contains("h2") ||
                                evo.contains("t1_duration") || evo.contains("t2_duration");
  if (unitary_form == hamiltonian_form) {
    parse_fail("evolution",
               "expected exactly one form: {u1, u2} or {h1, h2, t1_duration, t2_duration}");
  }
  if (unitary_form) {
    return TwoStageEvolution<double>(
        parse_unitary(require_field(evo, "u1", "evolution"), dim, "evolution.u1", tol),
        parse_unitary(require_field(evo, "u2", "evolution"), dim, "evolution.u2", tol), tol);
  }
  const json& t1 = require_field(evo, "t1_duration", "evolution");
  const json& t2 = require_field(evo, "t2_duration", "evolution");
  if (!t1.is_number()) parse_fail("evolution.t1_duration", "expected a number");
  if (!t2.is_number()) parse_fail("evolution.t2_duration", "expected a number");
  const ComplexMatrix<double> h1 =
      parse_matrix(require_field(evo, "h1", "evolution"), dim, "evolution.h1");
  const ComplexMatrix<double> h2 =
      parse_matrix(require_field(evo, "h2", "evolution"), dim, "evolution.h2");
  if (!is_hermitian(h1, tol.hermiticity)) validation_fail("evolution.h1", "matrix is not Hermitian");
  if (!is_hermitian(h2, tol.hermiticity)) validation_fail("evolution.h2", "matrix is not Hermitian");
  return TwoStageEvolution<double>(unitary_from_hamiltonian(h1, t1.get<double>(), tol),
                                   unitary_from_hamiltonian(h2, t2.get<double>(), tol), tol);
}

ordered_json complex_to_json(const std::complex<double>& z) {
  return ordered_json::array({z.real(), z.imag()});
}

ordered_json matrix_to_json(const ComplexMatrix<double>& m) {
  ordered_json rows = ordered_json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

Scenario<double> parse_scenario(const std::string& text, const Tolerances& tol) {
  json root = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (root.is_discarded()) {
    throw Error(Errc::parse_error, "scenario is not well-formed JSON");
  }
  if (!root.is_object()) {
    throw Error(Errc::parse_error, "scenario root must be a JSON object");
  }

  const json& dim_field = require_field(root, "dim", "");
  if (!dim_field.is_number_integer() || dim_field.get<std::int64_t>() < 1) {
    parse_fail("dim", "expected a positive integer");
  }
  const Index dim = dim_field.get<Index>();

  const json& mode_field = require_field(root, "mode", "");
  Mode mode;
  if (mode_field == "real") {
    mode = Mode::real;
  } else if (mode_field == "complex") {
    mode = Mode::complex;
  } else {
    parse_fail("mode", "expected \"real\" or \"complex\"");
  }

  const ComplexVector<double> psi_raw =
      parse_vector(require_field(root, "psi", ""), dim, "psi");
  Ket<double> psi = [&] {
    try {
      return Ket<double>(psi_raw, tol);
    } catch (const Error& e) {
      validation_fail("psi", e.what());
    }
  }();

  Observable<double> obs_a =
      parse_observable(require_field(root, "obs_a", ""), dim, "obs_a", tol);
  Observable<double> obs_b =
      parse_observable(require_field(root, "obs_b", ""), dim, "obs_b", tol);
  TwoStageEvolution<double> evolution =
      parse_evolution(require_field(root, "evolution", ""), dim, tol);

  return Scenario<double>(std::move(psi), std::move(obs_a), std::move(obs_b),
                          std::move(evolution), mode);
}

Scenario<double> load_scenario(const std::filesystem::path& path, const Tolerances& tol) {
  std::ifstream in(path);
  if (!in) {
    throw Error(Errc::parse_error, "cannot open scenario file: " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str(), tol);
}

std::string serialize_scenario(const Scenario<double>& scenario) {
  ordered_json root;
  root["dim"] = scenario.dim();
  root["mode"] = mode_name(scenario.mode());
  ordered_json psi = ordered_json::array();
  for (Index i = 0; i < scenario.dim(); ++i) {
    psi.push_back(complex_to_json(scenario.psi().vector()[i]));
  }
  root["psi"] = std::move(psi);
  root["obs_a"] = matrix_to_json(scenario.obs_a().matrix());
  root["obs_b"] = matrix_to_json(scenario.obs_b().matrix());
  root["evolution"] = {{"u1", matrix_to_json(scenario.evolution().u1())},
                       {"u2", matrix_to_json(scenario.evolution().u2())}};
  return root.dump(2) + "\n";
}

}  // namespace weakcorr
