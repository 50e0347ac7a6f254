// Copyright 2026 The qment Authors
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

// qment: command-line front end.
//
//   qment state  SPEC|FILE
//   qment measure sep|phys SPEC|FILE [--mode bound|roof|both]
//   qment scan   TOKENS...
//   qment ppt    SPEC|FILE [--part 1,2]
//   qment smolin --n 4 --c 0.5,0.5,0.5
//
// Global flags: --eps --mode --seed --threads --max-dim --out, each also read
// from QMENT_EPS, QMENT_MODE, QMENT_SEED, QMENT_THREADS, QMENT_MAX_DIM,
// QMENT_OUT. Exit status 2 means the input was rejected (parse error,
// non-physical state, pure-only measure on a mixed state); 1 is an internal
// failure.

#include "qment/qment.hpp"
#include "qment/report_json.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using namespace qment;

struct Globals {
  double eps = 1e-9;
  std::string mode = "bound";
  std::uint64_t seed = 0x5eed;
  std::size_t threads = 1;
  std::size_t max_dim = 256;
  std::string out;
};

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_spec_argument(const std::string& arg) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) {
    std::ifstream in(arg);
    if (!in) throw InputError("cannot read " + arg);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }
  return arg;
}

MeasureOptions measure_options(const Globals& g) {
  MeasureOptions o;
  o.eps = g.eps;
  o.max_dim = g.max_dim;
  o.threads = g.threads;
  o.bound.max_dim = g.max_dim;
  o.roof.seed = g.seed;
  return o;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw InputError("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

std::string fmt(double v) { return format_number(v); }

void print_state_summary(std::ostream& out, const StateSpec& spec, const MultiState& s) {
  const auto& shape = s.shape();
  out << "state: " << spec.to_string() << "\n";
  out << "shape:";
  for (auto d : shape.dims()) out << ' ' << d;
  out << "\n";
  const ComplexMatrix rho = s.density_matrix();
  out << "pure: " << (s.is_pure_vector() ? "yes" : "no") << "\n";
  out << "trace: " << fmt(rho.trace().real()) << "\n";
  out << "purity: " << fmt(purity(s)) << "\n";
  out << "min_eigenvalue: " << fmt(shape.total() <= 1024 ? min_eigenvalue(rho) : 0.0) << "\n";
  out << "marginal_entropies:";
  for (std::size_t k = 0; k < shape.factors(); ++k)
    out << ' ' << fmt(canonical_entropy(partial_trace(s, SubsystemSet{k}).density_matrix()));
  out << "\n";
}

int cmd_state(const Globals& g, const std::string& arg) {
  Output o(g.out);
  const auto specs = parse_state_specs(read_spec_argument(arg));
  if (specs.empty()) throw SpecError("no state given", 1, 1);
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (i) o.stream() << "\n";
    print_state_summary(o.stream(), specs[i], build_state(specs[i]));
  }
  return 0;
}

int cmd_measure(const Globals& g, const std::string& which, const std::string& arg) {
  const auto spec = parse_state_spec(read_spec_argument(arg));
  const auto state = build_state(spec);
  const auto opt = measure_options(g);
  MeasureReport rep;
  if (which == "sep") {
    if (!state.is_pure_vector())
      throw NotPureError("the separability measure is defined for pure states only; '" + spec.family +
                         "' gives a mixed state (use 'measure phys' instead)");
    rep = separability_measure(state, opt);
  } else {
    rep = physical_hierarchy(state, parse_mode(g.mode), opt);
  }
  auto j = to_json(rep);
  j["state"] = spec.to_string();
  Output o(g.out);
  o.stream() << j.dump(2) << "\n";
  return 0;
}

int cmd_scan(const Globals& g, const std::vector<std::string>& raw) {
  std::vector<std::string> tokens;
  for (const auto& r : raw) {
    // A single quoted argument may hold the whole scan.
    std::istringstream in(r);
    for (std::string t; in >> t;) tokens.push_back(t);
  }
  const auto spec = parse_scan(tokens);
  ScanOptions opt;
  opt.mode = parse_mode(g.mode);
  opt.measure = measure_options(g);
  opt.threads = g.threads;
  const auto table = run_scan(spec, opt);
  Output o(g.out);
  write_csv(o.stream(), table);
  return 0;
}

int cmd_ppt(const Globals& g, const std::string& arg, const std::vector<std::size_t>& part) {
  const auto spec = parse_state_spec(read_spec_argument(arg));
  const auto state = build_state(spec);
  const auto r = ppt_check(state, SubsystemSet::from_one_based(part));
  nlohmann::ordered_json j;
  j["state"] = spec.to_string();
  j["part"] = part;
  j["min_eigenvalue"] = r.min_eigenvalue;
  j["npt"] = r.is_npt;
  Output o(g.out);
  o.stream() << j.dump(2) << "\n";
  return 0;
}

int cmd_smolin(const Globals& g, std::size_t n, const std::vector<double>& c) {
  if (c.size() != 3) throw InputError("smolin: --c takes three values");
  const Vec3 cv{c[0], c[1], c[2]};
  BoundOptions b;
  b.max_dim = g.max_dim;
  const auto r = smolin_closed_form(n, cv, b);
  nlohmann::ordered_json j;
  j["n"] = n;
  j["c"] = c;
  j["sign_vectors"] = smolin_sign_vectors(n);
  j["sign_max"] = r.sign_max;
  j["entangled"] = r.entangled;
  j["bound_value"] = r.bound_value;
  j["bound_detects"] = r.bound_detects;
  j["agree"] = r.entangled == r.bound_detects;
  Output o(g.out);
  o.stream() << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multipartite entanglement measures for qudit states"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--eps", g.eps, "zero-entropy tolerance of the separability delta")->envname("QMENT_EPS")->capture_default_str();
  app.add_option("--mode", g.mode, "physical measure: bound, roof or both")
      ->envname("QMENT_MODE")
      ->capture_default_str();
  app.add_option("--seed", g.seed, "seed of the convex-roof search")->envname("QMENT_SEED");
  app.add_option("--threads", g.threads, "worker threads")->envname("QMENT_THREADS")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--max-dim", g.max_dim, "largest total dimension accepted by the bound and roof code")
      ->envname("QMENT_MAX_DIM")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--out", g.out, "write output to this file instead of stdout")->envname("QMENT_OUT");

  std::string spec_arg, which;
  std::vector<std::string> scan_tokens;
  std::vector<std::size_t> part{1};
  std::size_t smolin_n = 4;
  std::vector<double> smolin_c;

  auto* state = app.add_subcommand("state", "print a summary of a state (inline spec or spec file)");
  state->add_option("spec", spec_arg, "state spec, e.g. \"ghz(n=3)\", or a file of specs")->required();

  auto* measure = app.add_subcommand("measure", "evaluate the separability (sep) or physical (phys) measure as JSON");
  measure->add_option("which", which, "sep or phys")->required()->check(CLI::IsMember({"sep", "phys"}));
  measure->add_option("spec", spec_arg, "state spec or spec file")->required();

  auto* scan = app.add_subcommand("scan", "grid scan over a family, CSV output");
  scan->add_option("tokens", scan_tokens, "family, sweeps and quantities")->required();

  auto* ppt = app.add_subcommand("ppt", "minimum eigenvalue of a partial transpose");
  ppt->add_option("spec", spec_arg, "state spec or spec file")->required();
  ppt->add_option("--part", part, "1-based factors to transpose")->delimiter(',')->capture_default_str();

  auto* smol = app.add_subcommand("smolin", "sign test and n-flip bound for a Smolin-type state");
  smol->add_option("--n", smolin_n, "even number of qubits")->capture_default_str();
  smol->add_option("--c", smolin_c, "three coefficients, e.g. 0.5,0.5,0.5")->delimiter(',')->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    parse_mode(g.mode);
    if (*state) return cmd_state(g, spec_arg);
    if (*measure) return cmd_measure(g, which, spec_arg);
    if (*scan) return cmd_scan(g, scan_tokens);
    if (*ppt) return cmd_ppt(g, spec_arg, part);
    if (*smol) return cmd_smolin(g, smolin_n, smolin_c);
  } catch (const std::invalid_argument& e) {  // SpecError, NotPureError
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {  // PositivityError
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::length_error& e) {  // size caps
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
