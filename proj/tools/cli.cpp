#include "cli.hpp"

#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ffd/aberration.hpp"
#include "ffd/catalog.hpp"
#include "ffd/design.hpp"
#include "ffd/models.hpp"
#include "ffd/optimal.hpp"
#include "ffd/recursion.hpp"
#include "ffd/verify.hpp"

namespace ffd::cli {

namespace {

using Json = nlohmann::ordered_json;

// Raised for flag combinations CLI11 cannot express.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Construction {
  int q = 0;
  std::string generators;
  std::string b;
  bool williams = false;
  std::string design_path;

  bool from_file() const { return !design_path.empty(); }
};

void add_construction(CLI::App* sub, Construction& c, bool allow_file) {
  auto* q = sub->add_option("--q", c.q, "Level count (odd prime)");
  auto* g = sub->add_option("--generators", c.generators, "Generator rows \"c11,c12;c21,c22\"");
  sub->add_option("--b", c.b, "Shifts of the dependent columns \"b1,b2,...\"");
  sub->add_flag("--williams", c.williams, "Apply the Williams transformation");
  if (allow_file) {
    auto* d = sub->add_option("--design", c.design_path, "Design file")->check(CLI::ExistingFile);
    d->excludes(q)->excludes(g);
  } else {
    q->required();
    g->required();
  }
}

GeneratorSet generators_of(const Construction& c) {
  return parse_generators(c.generators, check_odd_prime(c.q));
}

Design design_of(const Construction& c) {
  if (c.from_file()) return load_design(c.design_path);
  if (c.q == 0 || c.generators.empty()) throw UsageError("give --design, or both --q and --generators");
  const GeneratorSet gen = generators_of(c);
  const PermutationVector b =
      c.b.empty() ? PermutationVector::zeros(gen.level(), gen.dependent()) : parse_permutation(c.b, gen.level());
  return build(gen, b, c.williams ? Family::Williams : Family::Linear);
}

int check_kmax(int k_max, int n, int q) {
  const int top = n * (q - 1);
  if (k_max == 0) return top;
  if (k_max < 1 || k_max > top) {
    throw UsageError("--kmax " + std::to_string(k_max) + " outside 1.." + std::to_string(top) + " (K = n(q-1))");
  }
  return k_max;
}

std::string fixed(double v, int decimals) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(decimals) << (std::abs(v) < 0.5 * std::pow(10.0, -decimals) ? 0.0 : v);
  return s.str();
}

std::string pairs_text(const GeneratorSet& g) {
  std::string s;
  const LevelMatrix& c = g.coefficients();
  for (Index i = 0; i < c.rows(); ++i) {
    s += i ? " (" : "(";
    for (Index j = 0; j < c.cols(); ++j) s += (j ? "," : "") + std::to_string(c(i, j));
    s += ")";
  }
  return s;
}

std::string vector_text(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

// --- subcommands -----------------------------------------------------------

int cmd_construct(const Construction& c, const std::string& out_path, bool json, std::ostream& out) {
  const Design d = design_of(c);
  if (!out_path.empty()) save_design(out_path, d);
  const int t = strength(d, std::min<int>(3, static_cast<int>(d.factors())));
  const BetaPattern<double> beta = beta_pattern<double>(d, std::min<int>(4, static_cast<int>(d.factors()) * (d.q() - 1)));
  const double b3 = beta.size() >= 3 ? beta[3] : 0.0;
  const double b4 = beta.size() >= 4 ? beta[4] : 0.0;
  if (json) {
    Json j{{"q", d.q()}, {"N", d.runs()}, {"n", d.factors()}, {"strength", t}, {"beta3", b3}, {"beta4", b4}};
    if (!out_path.empty()) j["out"] = out_path;
    out << j.dump(2) << '\n';
  } else {
    out << "N=" << d.runs() << " n=" << d.factors() << " q=" << d.q() << " strength=" << t << " beta3=" << fixed(b3, 4)
        << " beta4=" << fixed(b4, 4) << '\n';
    if (!out_path.empty()) out << "wrote " << out_path << '\n';
  }
  return kOk;
}

int cmd_beta(const Construction& c, int k_max, bool json, std::ostream& out) {
  const Design d = design_of(c);
  k_max = check_kmax(k_max, static_cast<int>(d.factors()), d.q());
  const BetaPattern<double> beta = beta_pattern<double>(d, k_max);
  if (json) {
    out << Json{{"q", d.q()}, {"N", d.runs()}, {"n", d.factors()}, {"beta", beta.to_vector()}}.dump(2) << '\n';
    return kOk;
  }
  for (int k = 1; k <= beta.size(); ++k) out << (k > 1 ? " " : "") << fixed(beta[k], 4);
  out << '\n';
  return kOk;
}

int cmd_search(const Construction& c, const std::string& family, int k_max, int jobs, bool force, bool json,
               std::ostream& out) {
  const GeneratorSet gen = generators_of(c);
  SearchOptions opt;
  opt.k_max = check_kmax(k_max, gen.factors(), gen.q());
  opt.jobs = jobs;
  opt.force = force;
  const SearchReport r = best_b(gen, parse_family(family), opt);
  if (json) {
    out << to_json(r, 2) << '\n';
    return kOk;
  }
  out << "family=" << to_string(r.family) << " evaluations=" << r.evaluations << '\n';
  out << "winner b=" << vector_text(r.winner.b.to_vector()) << " beta3=" << fixed(r.beta[3], 4)
      << " beta4=" << fixed(r.beta.size() >= 4 ? r.beta[4] : 0.0, 4) << '\n';
  out << "ties=" << r.ties.size() << " deciding_k=" << r.deciding_k << '\n';
  for (const Candidate& t : r.ties) out << "  b=" << vector_text(t.b.to_vector()) << '\n';
  return kOk;
}

int cmd_classify(const Construction& c, bool json, std::ostream& out) {
  const GeneratorSet gen = generators_of(c);
  const RecursionWitness w = classify_with_witness(gen);
  auto names = [](const std::vector<int>& cols) {
    std::vector<std::string> s;
    for (int col : cols) s.push_back("x" + std::to_string(col + 1));
    return s;
  };
  if (json) {
    Json steps = Json::array();
    for (const auto& s : w.steps) steps.push_back(names(s));
    out << Json{{"type", std::string(to_string(w.type))}, {"initial", names(w.initial)}, {"steps", steps}}.dump(2)
        << '\n';
    return kOk;
  }
  out << to_string(w.type) << '\n';
  if (w.type == RecursiveType::NotRecursive) return kOk;
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : " ") + x;
    return s;
  };
  out << "T0: " << join(names(w.initial)) << '\n';
  for (std::size_t i = 0; i < w.steps.size(); ++i) out << "T" << i + 1 << " adds: " << join(names(w.steps[i])) << '\n';
  return kOk;
}

int cmd_count(int q, int n, int jobs, bool json, std::ostream& out) {
  const RecursiveCounts c = count_recursive(check_odd_prime(q), n, jobs);
  if (json) {
    out << Json{{"q", c.q}, {"n", c.n}, {"type_i", c.type_i}, {"type_ii", c.type_ii}, {"type_iii", c.type_iii},
                {"total", c.total}}
               .dump(2)
        << '\n';
    return kOk;
  }
  out << "q=" << c.q << " n=" << c.n << " type-I=" << c.type_i << " type-II=" << c.type_ii
      << " type-III=" << c.type_iii << " total=" << c.total << '\n';
  return kOk;
}

int cmd_searchq2(int q, int n, int jobs, bool force, const std::string& catalog, bool json, std::ostream& out,
                 const std::string& command) {
  SearchOptions opt;
  opt.jobs = jobs;
  opt.force = force;
  const Q2Report r = search_q2(check_odd_prime(q), n, opt);
  if (!catalog.empty()) {
    std::vector<CatalogEntry> entries;
    if (std::filesystem::exists(catalog)) entries = read_catalog(catalog);
    for (auto& e : catalog_entries(r, make_provenance(command))) upsert(entries, std::move(e));
    write_catalog(entries, catalog);
  }
  if (json) {
    out << to_json(r, 2) << '\n';
    return kOk;
  }
  out << "q=" << r.q << " n=" << r.n << " runs=" << r.q * r.q << '\n';
  out << "D      " << pairs_text(r.standard) << "  beta3=" << fixed(r.standard_beta[3], 3)
      << " beta4=" << fixed(r.standard_beta[4], 3) << '\n';
  for (const SearchReport* s : {&r.linear, &r.williams}) {
    out << (s->family == Family::Linear ? "D_b~   " : "E_b*   ") << pairs_text(s->winner.generators)
        << "  b=" << vector_text(s->winner.b.to_vector()) << "  beta3=" << fixed(s->beta[3], 3)
        << " beta4=" << fixed(s->beta[4], 3) << "  ties=" << s->ties.size() << "/" << s->evaluations
        << " deciding_k=" << s->deciding_k << '\n';
  }
  if (!catalog.empty()) out << "catalog " << catalog << " updated\n";
  return kOk;
}

int cmd_model(const Construction& c, bool csv, bool rounded, std::ostream& out) {
  const Design d = design_of(c);
  if (d.q() < 3) throw InvalidInput("second-order model needs q >= 3");
  const InfoSummary<double> info = information_matrix<double>(d);
  // M^T M is still worth showing when it cannot be inverted
  std::vector<std::pair<std::string, double>> variances;
  std::string singular;
  try {
    variances = estimate_variances<double>(d);
  } catch (const InvalidInput& e) {
    singular = e.what();
  }
  if (csv || rounded) {
    const int decimals = rounded ? 3 : -1;
    write_matrix_csv(out, info.labels, info.information, decimals);
    out << '\n';
    if (singular.empty()) {
      write_variances_csv(out, variances, decimals);
    } else {
      out << "term,variance\n# not estimable: " << singular << '\n';
    }
    return kOk;
  }
  out << "information matrix M^T M/" << d.runs() << '\n';
  out << std::setw(6) << "";
  for (const auto& l : info.labels) out << std::setw(8) << l;
  out << '\n';
  for (Index i = 0; i < info.information.rows(); ++i) {
    out << std::setw(6) << info.labels[static_cast<std::size_t>(i)];
    for (Index j = 0; j < info.information.cols(); ++j) out << std::setw(8) << fixed(info.information(i, j), 3);
    out << '\n';
  }
  if (!singular.empty()) {
    out << "variances: not estimable (" << singular << ")\n";
    return kOk;
  }
  out << "variances (x sigma^2)\n";
  for (const auto& [label, v] : variances) out << std::setw(6) << label << "  " << fixed(v, 3) << '\n';
  return kOk;
}

int cmd_reproduce(const std::string& table, int jobs, bool csv, std::ostream& out) {
  std::vector<std::string> ids = table == "all" ? table_ids() : std::vector<std::string>{table};
  bool ok = true;
  for (const auto& id : ids) {
    const Reproduction r = reproduce(id, {.jobs = jobs});
    if (csv) {
      render_csv(out, r);
    } else {
      render_text(out, r);
    }
    ok = ok && r.passed();
  }
  return ok ? kOk : kMismatch;
}

int cmd_verify(int theorem, int q, int n_max, int jobs, bool json, std::ostream& out) {
  const TheoremCheck c = verify_theorem(theorem, check_odd_prime(q), n_max, jobs);
  if (json) {
    out << Json{{"theorem", c.theorem}, {"q", c.q},           {"nmax", c.n_max},
                {"direct", c.direct},   {"certificates", c.certificates}, {"scope", c.scope},
                {"failures", c.failure_count}, {"examples", c.failures},  {"passed", c.passed()}}
               .dump(2)
        << '\n';
  } else {
    for (const auto& s : c.scope) out << "  " << s << '\n';
    for (const auto& f : c.failures) out << "  failure: " << f << '\n';
    out << (c.passed() ? "PASS" : "FAIL") << " theorem " << c.theorem << " q=" << c.q << ": " << c.direct
        << " designs, " << c.certificates << " certificates, " << c.failure_count << " failures\n";
  }
  return c.passed() ? kOk : kMismatch;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Level-permuted multilevel fractional factorial designs under minimum beta-aberration", "ffd"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  int jobs = default_jobs();
  bool json = false;
  bool csv = false;
  bool force = false;
  int k_max = 0;

  Construction construct_args;
  std::string out_path;
  auto* construct = app.add_subcommand("construct", "Build D_b or E_b from generators and write it");
  add_construction(construct, construct_args, false);
  construct->add_option("--out", out_path, "Design file to write");
  construct->add_flag("--json", json, "Machine-readable output");

  Construction beta_args;
  auto* beta = app.add_subcommand("beta", "Beta-wordlength pattern of a design");
  add_construction(beta, beta_args, true);
  beta->add_option("--kmax", k_max, "Largest order (default K = n(q-1))");
  beta->add_flag("--json", json, "Full-precision JSON");

  Construction search_args;
  std::string family;
  auto* search = app.add_subcommand("search", "Exhaustive search over all shifts b");
  add_construction(search, search_args, false);
  search->add_option("--family", family, "linear (D_b) or williams (E_b)")
      ->required()
      ->check(CLI::IsMember({"linear", "williams"}));
  search->add_option("--kmax", k_max, "Comparison depth (default K)");
  search->add_option("--jobs", jobs, "Worker threads (default $FFD_JOBS or 1)")->check(CLI::PositiveNumber);
  search->add_flag("--force", force, "Lift the evaluation caps");
  search->add_flag("--json", json, "SearchReport JSON");

  Construction classify_args;
  auto* classify_cmd = app.add_subcommand("classify", "Recursive type of a regular design");
  add_construction(classify_cmd, classify_args, false);
  classify_cmd->add_flag("--json", json, "Machine-readable output");

  int q = 0;
  int n = 0;
  auto* count = app.add_subcommand("count", "Recursive-type tallies over the reduced q^2-run space");
  count->add_option("--q", q, "Level count")->required();
  count->add_option("--n", n, "Number of factors")->required();
  count->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  count->add_flag("--json", json, "Machine-readable output");

  std::string catalog;
  auto* searchq2 = app.add_subcommand("searchq2", "Standard D, best D_b~ and best E_b* over q^2-run designs");
  searchq2->add_option("--q", q, "Level count")->required();
  searchq2->add_option("--n", n, "Number of factors")->required();
  searchq2->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  searchq2->add_option("--catalog", catalog, "JSON-lines catalog to update");
  searchq2->add_flag("--force", force, "Lift the evaluation caps");
  searchq2->add_flag("--json", json, "Machine-readable output");

  Construction model_args;
  bool rounded = false;
  auto* model = app.add_subcommand("model", "Second-order model information matrix and variances");
  add_construction(model, model_args, true);
  model->add_flag("--csv", csv, "CSV at full precision");
  model->add_flag("--rounded", rounded, "CSV rounded to 3 decimals");

  std::string table;
  auto* reproduce_cmd = app.add_subcommand("reproduce", "Recompute a published table and compare with goldens");
  std::vector<std::string> choices = table_ids();
  choices.push_back("all");
  reproduce_cmd->add_option("--table", table, "Table id or 'all'")->required()->check(CLI::IsMember(choices));
  reproduce_cmd->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  reproduce_cmd->add_flag("--csv", csv, "CSV output");

  int theorem = 0;
  int n_max = 0;
  auto* verify = app.add_subcommand("verify", "Exhaustive check of a theorem over the q^2-run space");
  verify->add_option("--theorem", theorem, "1, 2 or 4")->required()->check(CLI::IsMember({1, 2, 4}));
  verify->add_option("--q", q, "Level count")->required();
  verify->add_option("--nmax", n_max, "Largest n checked design by design");
  verify->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  verify->add_flag("--json", json, "Machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  std::string command;
  for (int i = 0; i < argc; ++i) command += (i ? " " : "") + std::string(argv[i]);

  try {
    if (*construct) return cmd_construct(construct_args, out_path, json, out);
    if (*beta) return cmd_beta(beta_args, k_max, json, out);
    if (*search) return cmd_search(search_args, family, k_max, jobs, force, json, out);
    if (*classify_cmd) return cmd_classify(classify_args, json, out);
    if (*count) return cmd_count(q, n, jobs, json, out);
    if (*searchq2) return cmd_searchq2(q, n, jobs, force, catalog, json, out, command);
    if (*model) return cmd_model(model_args, csv, rounded, out);
    if (*reproduce_cmd) return cmd_reproduce(table, jobs, csv, out);
    if (*verify) return cmd_verify(theorem, q, n_max, jobs, json, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const InvalidInput& e) {
    err << "invalid input: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const FormatError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  err << "error: no subcommand\n";
  return kUsage;
}

}  // namespace ffd::cli
