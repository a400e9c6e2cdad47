// Command-line front end: polynomial utilities, verification suites and the
// enumeration-versus-closed-form benchmark.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fqmenon/fqmenon.hpp"

namespace {

using namespace fqmenon;

constexpr int kExitPass = 0;
constexpr int kExitFailure = 1;
constexpr int kExitParse = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitBudget = 4;

struct Options {
  std::string field = "p=2,n=1";
  std::string h;
  int l = 1;
  int s = 0;
  std::size_t chi = 0;
  std::vector<std::string> lambdas;
  std::string shift;
  std::string func = "abs";
  std::string suite = "all";
  int maxdeg = 2;
  int k = 3;
  std::uint64_t seed = 1;
  std::uint64_t budget = 0;
  double tol = kDefaultTolerance;
  std::string out;
  std::string format = "json";
  int samples = 1;
  int lemma_samples = 200;
  bool no_timing = false;
  std::string instance;
  std::string mode = "auto";
  bool brute = false;

  // The subcommand that was parsed.
  const CLI::App* active = nullptr;

  // Whether an option was given explicitly on the command line.
  bool has(const std::string& name) const {
    const CLI::Option* opt = active ? active->get_option_no_throw(name) : nullptr;
    return opt != nullptr && opt->count() > 0;
  }
};

FieldPtr field_of(const Options& o) { return Field::parse(o.field); }

Poly required_h(const Options& o, const FieldPtr& field) {
  if (!o.has("--H")) throw ParseError("--H is required");
  return parse_poly(field, o.h);
}

Budget budget_of(const Options& o) {
  return o.has("--budget") ? Budget(o.budget) : Budget::from_env();
}

ReportWriter::Format format_of(const Options& o) {
  if (o.format == "json") return ReportWriter::Format::kJson;
  if (o.format == "csv") return ReportWriter::Format::kCsv;
  throw ParseError("--format must be json or csv");
}

// Writes to --out when given, otherwise to stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw ParseError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  bool to_stdout() const { return !file_.is_open(); }

 private:
  std::ofstream file_;
};

int cmd_factor(const Options& o) {
  const auto field = field_of(o);
  const Poly h = required_h(o, field);
  std::cout << to_string(factorize(h), *field) << '\n';
  return kExitPass;
}

int cmd_phi(const Options& o) {
  const auto field = field_of(o);
  std::cout << euler_phi(required_h(o, field)) << '\n';
  return kExitPass;
}

int cmd_mu(const Options& o) {
  const auto field = field_of(o);
  std::cout << moebius(required_h(o, field)) << '\n';
  return kExitPass;
}

int cmd_phik(const Options& o) {
  const auto field = field_of(o);
  const Poly h = required_h(o, field);
  if (o.brute) {
    std::cout << phi_k_brute(h, o.k, budget_of(o)) << '\n';
  } else {
    std::cout << phi_k_formula(h, o.k) << '\n';
  }
  return kExitPass;
}

int cmd_chars(const Options& o) {
  const auto field = field_of(o);
  const Poly h = required_h(o, field);
  require(h.degree() >= 1, "H must have degree >= 1");
  const auto group = unit_group(h);
  std::cout << "generators:";
  for (const auto& g : group->generators()) {
    std::cout << ' ' << to_string(group->ring().poly(g.residue)) << " (order " << g.order << ')';
  }
  std::cout << '\n';
  const auto chars = characters(group);
  std::vector<Poly> us = units(h.monic());
  for (std::size_t i = 0; i < chars.size(); ++i) {
    const auto& chi = chars[i];
    std::cout << i << ": order=" << chi.order() << " conductor=" << to_string(conductor(chi));
    for (const auto& u : us) std::cout << ' ' << to_string(u) << "->" << chi.at(u)->to_string();
    std::cout << '\n';
  }
  return kExitPass;
}

int cmd_conductor(const Options& o) {
  const auto field = field_of(o);
  const Poly h = required_h(o, field);
  require(h.is_monic() && h.degree() >= 1, "H must be monic of degree >= 1");
  const auto chars = characters(h);
  std::cout << to_string(conductor(select_character(chars, o.chi))) << '\n';
  return kExitPass;
}

RunConfig run_config(const Options& o) {
  RunConfig cfg;
  cfg.field = field_of(o);
  cfg.seed = o.seed;
  cfg.budget = budget_of(o);
  cfg.tol = o.tol;
  cfg.maxdeg = o.maxdeg;
  cfg.k = o.k;
  if (o.has("--H")) cfg.h = parse_poly(cfg.field, o.h).monic();
  if (o.has("--l")) cfg.l = o.l;
  if (o.has("--s")) cfg.s = o.s;
  if (o.has("--chi")) cfg.chi = o.chi;
  if (o.has("--lambda")) {
    std::vector<Poly> ws;
    for (const auto& w : o.lambdas) ws.push_back(parse_poly(cfg.field, w));
    cfg.lambdas = std::move(ws);
  }
  if (o.has("--S")) cfg.shift = parse_poly(cfg.field, o.shift);
  if (o.has("--F")) {
    arith_func(o.func);  // validates the name
    cfg.func = o.func;
  }
  cfg.samples = o.samples;
  cfg.lemma_samples = o.lemma_samples;
  cfg.timing = !o.no_timing;
  cfg.mode = parse_eval_mode(o.mode);
  return cfg;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("invalid JSON in '" + path + "': " + e.what());
  }
}

FieldPtr field_from_json(const nlohmann::json& j) {
  if (j.is_string()) return Field::parse(j.get<std::string>());
  if (!j.is_object()) throw ParseError("\"field\" must be a string or an object");
  FieldSpec spec;
  for (const auto& [key, value] : j.items()) {
    if (key == "p") {
      spec.p = value.get<std::uint32_t>();
    } else if (key == "n") {
      spec.n = value.get<std::uint32_t>();
    } else if (key == "mod") {
      spec.modulus = value.get<std::vector<std::uint32_t>>();
    } else {
      throw ParseError("unknown field key '" + key + "'");
    }
  }
  if (!j.contains("p") || !j.contains("n")) throw ParseError("field needs \"p\" and \"n\"");
  return Field::make(spec);
}

// {"field", "H", "l", "s", "chi", "lambdas", "S", "F", "mode"}
TothInstance instance_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("instance must be a JSON object");
  static const std::vector<std::string> keys{"field", "H", "l", "s", "chi",
                                             "lambdas", "S", "F", "mode"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ParseError("unknown instance key '" + key + "'");
    }
  }
  try {
    const auto field = field_from_json(j.at("field"));
    TothInstance inst(field, parse_poly(field, j.at("H").get<std::string>()),
                      parse_poly(field, j.value("S", std::string("1"))));
    inst.l = j.value("l", 1);
    inst.s = j.value("s", 0);
    inst.chi_index = j.value("chi", std::size_t{0});
    for (const auto& w : j.value("lambdas", std::vector<std::string>{})) {
      inst.lambdas.push_back(parse_poly(field, w));
    }
    inst.F = j.value("F", std::string("abs"));
    arith_func(inst.F);
    inst.mode = parse_eval_mode(j.value("mode", std::string("auto")));
    return inst;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed instance: ") + e.what());
  }
}

int cmd_verify(const Options& o) {
  Output output(o.out);
  const bool write_report = !o.out.empty();
  std::optional<ReportWriter> writer;
  Summary summary;
  auto sink = [&](Record r) {
    summary.add(r);
    if (writer) writer->write(r);
  };

  if (!o.instance.empty()) {
    const auto inst = instance_from_json(read_json_file(o.instance));
    const Budget budget = budget_of(o);
    nlohmann::ordered_json config{{"instance", inst.describe()}, {"mode", to_string(inst.mode)}};
    if (write_report) writer.emplace(output.stream(), format_of(o), config);
    RunConfig cfg;
    cfg.timing = !o.no_timing;
    const RecordSink record_sink = sink;
    detail::Emitter emit("instance", cfg, record_sink);
    emit.run(inst.describe(), [&](Record& r) {
      inst.validate();
      r.terms = saturate(estimate_cost(inst));
      const auto report = verify_toth(inst, o.tol, budget);
      const Record filled = record_from_report(report);
      r.lhs = filled.lhs;
      r.rhs = filled.rhs;
      r.abs_diff = filled.abs_diff;
      r.pass = filled.pass;
      r.mode = filled.mode;
      r.lhs_exact = filled.lhs_exact;
      r.rhs_exact = filled.rhs_exact;
    });
    if (writer) writer->finish();
    std::ostream& log = output.to_stdout() && write_report ? std::cerr : std::cout;
    log << summary.line("instance") << '\n';
    return summary.exit_code();
  }

  const RunConfig cfg = run_config(o);
  if (o.suite != "all" &&
      std::find(suite_names().begin(), suite_names().end(), o.suite) == suite_names().end()) {
    throw ParseError("unknown suite '" + o.suite + "'");
  }
  auto config = cfg.to_json();
  config["suite"] = o.suite;
  if (write_report) writer.emplace(output.stream(), format_of(o), config);
  run_suite(o.suite, cfg, sink);
  if (writer) writer->finish();
  std::ostream& log = output.to_stdout() && write_report ? std::cerr : std::cout;
  log << summary.line(o.suite) << '\n';
  return summary.exit_code();
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

int cmd_bench(const Options& o) {
  const RunConfig cfg = run_config(o);
  const auto format = format_of(o);
  const std::vector<int> ls = cfg.l ? std::vector<int>{*cfg.l} : std::vector<int>{1, 2, 3};
  const std::vector<int> ss = cfg.s ? std::vector<int>{*cfg.s} : std::vector<int>{0, 1};
  std::vector<Poly> hs;
  if (cfg.h) {
    hs.push_back(*cfg.h);
  } else {
    // One modulus per degree: the largest power of T, which has the most
    // divisors among the monic polynomials of that degree.
    for (int d = 1; d <= cfg.maxdeg; ++d) hs.push_back(pow(Poly::t(cfg.field), static_cast<unsigned>(d)));
  }

  Output output(o.out);
  std::ostream& out = output.stream();
  auto rows = nlohmann::ordered_json::array();
  if (format == ReportWriter::Format::kCsv) out << "instance,terms,lhs_ms,rhs_ms,speedup,rhs_terms,pass,status\n";
  bool budget_hit = false, failed = false;
  for (const auto& h : hs) {
    const auto chars = characters(h);
    const auto& chi = select_character(chars, cfg.chi.value_or(0));
    for (int l : ls) {
      for (int s : ss) {
        TothInstance inst(cfg.field, h, cfg.shift.value_or(Poly::one(cfg.field)));
        inst.l = l;
        inst.s = s;
        inst.chi_index = cfg.chi.value_or(0);
        inst.lambdas = cfg.lambdas.value_or(std::vector<Poly>(static_cast<std::size_t>(s), Poly(cfg.field)));
        inst.F = cfg.func.value_or("abs");
        nlohmann::ordered_json row;
        row["instance"] = inst.describe();
        row["terms"] = saturate(estimate_cost(inst));
        try {
          auto start = std::chrono::steady_clock::now();
          const auto lhs = toth_lhs(inst, chi, cfg.budget);
          const double lhs_ms = elapsed_ms(start);
          start = std::chrono::steady_clock::now();
          const auto rhs = toth_rhs(inst, chi);
          const double rhs_ms = elapsed_ms(start);
          const bool pass = within_tolerance(lhs.to_complex(), rhs.value.to_complex(), cfg.tol);
          failed = failed || !pass;
          row["lhs_ms"] = lhs_ms;
          row["rhs_ms"] = rhs_ms;
          row["speedup"] = rhs_ms > 0 ? lhs_ms / rhs_ms : 0.0;
          row["rhs_terms"] = rhs.terms;
          row["pass"] = pass;
          row["status"] = "ok";
        } catch (const BudgetExceeded& e) {
          budget_hit = true;
          row["lhs_ms"] = nullptr;
          row["rhs_ms"] = nullptr;
          row["speedup"] = nullptr;
          row["rhs_terms"] = nullptr;
          row["pass"] = false;
          row["status"] = "budget_exceeded";
        }
        if (format == ReportWriter::Format::kCsv) {
          auto cell = [](const nlohmann::ordered_json& v) { return v.is_null() ? std::string() : v.dump(); };
          out << '"' << row["instance"].get<std::string>() << "\"," << row["terms"] << ','
              << cell(row["lhs_ms"]) << ',' << cell(row["rhs_ms"]) << ',' << cell(row["speedup"]) << ','
              << cell(row["rhs_terms"]) << ',' << row["pass"] << ',' << row["status"].get<std::string>()
              << '\n';
        } else {
          rows.push_back(std::move(row));
        }
      }
    }
  }
  if (format == ReportWriter::Format::kJson) out << nlohmann::ordered_json{{"rows", rows}}.dump(2) << '\n';
  if (failed) return kExitFailure;
  return budget_hit ? kExitBudget : kExitPass;
}

void add_field(CLI::App* sub, Options& o) {
  sub->add_option("--field", o.field, "Field, e.g. p=3,n=1 or p=2,n=2,mod=[1,1,1]");
}

void add_h(CLI::App* sub, Options& o, bool required) {
  auto* opt = sub->add_option("--H", o.h, "Modulus H, e.g. T^2+1");
  if (required) opt->required();
}

void add_budget(CLI::App* sub, Options& o) {
  sub->add_option("--budget", o.budget, "Term budget for enumerations (default 1e8 or FQMENON_BUDGET)");
}

void add_instance_options(CLI::App* sub, Options& o) {
  sub->add_option("--l", o.l, "Number of K variables");
  sub->add_option("--s", o.s, "Number of B variables");
  sub->add_option("--chi", o.chi, "Character index into the list of characters mod H");
  sub->add_option("--lambda", o.lambdas, "W_i of an additive character (repeatable)")->take_all();
  sub->add_option("--S", o.shift, "Shift S, coprime to H");
  sub->add_option("--F", o.func, "Arithmetical function: one|abs|abs_s:<s>|tau|mu|phi|indicator_unit");
  sub->add_option("--maxdeg", o.maxdeg, "Largest degree of H in grids");
  sub->add_option("--seed", o.seed, "Seed of the mt19937_64 instance sampler");
  sub->add_option("--tol", o.tol, "Relative-or-absolute tolerance for floating comparisons");
  sub->add_option("--out", o.out, "Output path ('-' for stdout)");
  sub->add_option("--format", o.format, "json or csv");
  sub->add_option("--mode", o.mode, "auto, exact or float");
}

int run(int argc, char** argv) {
  CLI::App app{"Arithmetic in F_q[T] and verification of twisted gcd-sum identities"};
  app.require_subcommand(1);
  Options o;

  auto* factor = app.add_subcommand("factor", "Factor H into monic irreducibles");
  add_field(factor, o);
  add_h(factor, o, true);

  auto* phi = app.add_subcommand("phi", "Euler function of H");
  add_field(phi, o);
  add_h(phi, o, true);

  auto* mu = app.add_subcommand("mu", "Moebius function of H");
  add_field(mu, o);
  add_h(mu, o, true);

  auto* phik = app.add_subcommand("phik", "k-dimensional Euler function of H");
  add_field(phik, o);
  add_h(phik, o, true);
  phik->add_option("--k", o.k, "Dimension k")->required();
  phik->add_flag("--brute", o.brute, "Count tuples instead of using the product formula");
  add_budget(phik, o);

  auto* chars = app.add_subcommand("chars", "Unit group and Dirichlet characters mod H");
  add_field(chars, o);
  add_h(chars, o, true);

  auto* cond = app.add_subcommand("conductor", "Conductor of a character mod H");
  add_field(cond, o);
  add_h(cond, o, true);
  cond->add_option("--chi", o.chi, "Character index")->required();

  auto* verify = app.add_subcommand("verify", "Run a verification suite or a single instance file");
  add_field(verify, o);
  add_h(verify, o, false);
  add_instance_options(verify, o);
  add_budget(verify, o);
  verify->add_option("--suite", o.suite,
                     "lemma21|lemma22|lemma23|lemma24|lemma41|lemma42|lemma43|theorem1|theorem2|all");
  verify->add_option("--k", o.k, "Largest k for theorem1");
  verify->add_option("--samples", o.samples, "Seeded draws per theorem2 grid cell");
  verify->add_option("--lemma-samples", o.lemma_samples, "Seeded instances per l for lemma41/lemma42");
  verify->add_option("--instance", o.instance, "JSON instance file");
  verify->add_flag("--no-timing", o.no_timing, "Record elapsed_ms as 0 for byte-identical reports");

  auto* bench = app.add_subcommand("bench", "Time enumeration of the gcd sum against its closed form");
  add_field(bench, o);
  add_h(bench, o, false);
  add_instance_options(bench, o);
  add_budget(bench, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitParse;
  }

  for (const auto* sub : app.get_subcommands()) o.active = sub;

  try {
    if (*factor) return cmd_factor(o);
    if (*phi) return cmd_phi(o);
    if (*mu) return cmd_mu(o);
    if (*phik) return cmd_phik(o);
    if (*chars) return cmd_chars(o);
    if (*cond) return cmd_conductor(o);
    if (*verify) return cmd_verify(o);
    if (*bench) return cmd_bench(o);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition violated: " << e.what() << '\n';
    return kExitPrecondition;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return kExitBudget;
  }
  return kExitParse;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitFailure;
  }
}
