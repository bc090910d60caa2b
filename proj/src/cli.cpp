#include "roughiso/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "roughiso/api.hpp"
#include "roughiso/errors.hpp"

namespace roughiso {
namespace {

constexpr const char* kSchemaHint =
    "Input documents follow the JSON schemas in schemas/: point_set.v1 (sample, decompose),\n"
    "instance.v1 (verify, oracle, lattice; a construct_result.v1 also works for verify) and\n"
    "experiment_spec.v1 (experiment run).\n";

// Usage-level failure raised after CLI11 parsing (bad file, malformed JSON).
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Json read_json(const std::string& path) {
  std::stringstream buffer;
  if (path == "-") {
    buffer << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    buffer << in.rdbuf();
  }
  try {
    return Json::parse(buffer.str());
  } catch (const Json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path);
  f << text;
}

// Rational-valued flags are kept as strings and parsed by the api layer.
struct ConstantFlags {
  std::optional<std::string> M, D, F, R;

  void add_to(CLI::App* app, bool with_D = true, bool with_F = true) {
    app->add_option("--M", M, "multiplicative constant (rational, e.g. 3/2)");
    if (with_D) app->add_option("--D", D, "additive distortion constant");
    if (with_F) app->add_option("--F", F, "Markov fiber constant");
    app->add_option("--R", R, "density constant");
  }

  /// Constants object when any flag was given; Markov-shaped iff --F is set.
  [[nodiscard]] std::optional<Json> to_json() const {
    if (!M && !D && !F && !R) return std::nullopt;
    if (F && D) throw InputError("--D and --F select different constant shapes; give one");
    Json c = Json::object();
    if (M) c["M"] = *M;
    if (R) c["R"] = *R;
    if (F) c["F"] = *F;
    else c["D"] = D.value_or("0");
    return c;
  }
};

struct BudgetFlags {
  std::optional<std::uint64_t> max_nodes;
  std::optional<std::size_t> max_results;
  std::optional<std::int64_t> max_value;

  void add_to(CLI::App* app) {
    app->add_option("--max-nodes", max_nodes, "search node budget");
    app->add_option("--max-results", max_results, "enumeration result budget");
    app->add_option("--max-value", max_value, "largest codomain value searched");
  }

  void apply(Json& req) const {
    Json b = Json::object();
    if (max_nodes) b["max_nodes"] = *max_nodes;
    if (max_results) b["max_results"] = *max_results;
    if (max_value) b["max_codomain_value"] = *max_value;
    if (!b.empty()) req["budget"] = b;
  }
};

int emit(std::ostream& out, const api::Outcome& o) {
  out << o.doc.dump() << '\n';
  return o.ok ? kExitOk : kExitDomainFailure;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Monotone rough isometries between Bernoulli percolations"};
  app.require_subcommand(1);
  app.footer(kSchemaHint);

  std::uint64_t seed = 0;
  int result = kExitOk;
  std::function<void()> action;

  // sample
  auto* sample = app.add_subcommand("sample", "draw from one of the point processes or couplings");
  std::string process;
  std::optional<std::size_t> s_n;
  std::optional<std::int64_t> s_L, s_M, s_K;
  std::optional<std::uint64_t> s_count;
  std::optional<std::string> s_p, s_rate, s_horizon, s_alpha, s_gamma, s_points;
  sample->add_option("--process", process, "process name")
      ->required()
      ->check(CLI::IsMember({"bernoulli", "initial-short", "red", "blue", "poisson", "dominance",
                             "poisson-coupling", "rescale"}));
  sample->add_option("--seed", seed, "master seed");
  sample->add_option("--n", s_n, "number of points");
  sample->add_option("--p", s_p, "percolation density (rational)");
  sample->add_option("--L", s_L, "initial short run / blue length");
  sample->add_option("--M", s_M, "short-gap threshold");
  sample->add_option("--K", s_K, "red closing run length");
  sample->add_option("--count", s_count, "number of dominance draws");
  sample->add_option("--rate", s_rate, "Poisson rate (rational)");
  sample->add_option("--horizon", s_horizon, "window length (rational)");
  sample->add_option("--alpha", s_alpha, "Poisson intensity (rational)");
  sample->add_option("--gamma", s_gamma, "target intensity for rescale (rational)");
  sample->add_option("--points", s_points, "real point set JSON to rescale instead of sampling");
  sample->callback([&] {
    action = [&] {
      Json req{{"process", process}, {"seed", seed}};
      if (s_n) req["n"] = *s_n;
      if (s_L) req["L"] = *s_L;
      if (s_M) req["M"] = *s_M;
      if (s_K) req["K"] = *s_K;
      if (s_count) req["count"] = *s_count;
      if (s_p) req["p"] = *s_p;
      if (s_rate) req["rate"] = *s_rate;
      if (s_horizon) req["horizon"] = *s_horizon;
      if (s_alpha) req["alpha"] = *s_alpha;
      if (s_gamma) req["gamma"] = *s_gamma;
      if (s_points) req["points"] = read_json(*s_points);
      result = emit(out, api::sample(req));
    };
  });

  // decompose
  auto* decompose = app.add_subcommand("decompose", "block decomposition of a rooted point set");
  std::string d_input;
  std::int64_t d_M = 0, d_K = 0;
  decompose->add_option("--input", d_input, "point set JSON ('-' for stdin)")->required();
  decompose->add_option("--M", d_M, "short-gap threshold")->required();
  decompose->add_option("--K", d_K, "red closing run length")->required();
  decompose->callback([&] {
    action = [&] {
      result = emit(out, api::decompose(Json{{"points", read_json(d_input)}, {"M", d_M}, {"K", d_K}}));
    };
  });

  // construct
  auto* construct = app.add_subcommand("construct", "staged construction between two percolations");
  std::uint64_t c_n = 0;
  std::optional<std::int64_t> c_M, c_F, c_R, c_K;
  std::optional<std::size_t> c_horizon;
  std::optional<std::string> c_out;
  bool c_summary = false;
  construct->add_option("--n", c_n, "number of points to map")->required();
  construct->add_option("--seed", seed, "master seed");
  construct->add_option("--M", c_M, "override M");
  construct->add_option("--F", c_F, "override F");
  construct->add_option("--R", c_R, "override R");
  construct->add_option("--K", c_K, "override K");
  construct->add_option("--horizon", c_horizon, "stream length limit in gaps");
  construct->add_option("--out", c_out,
                        "write the full result to PATH and stage records to PATH.stages.ndjson");
  construct->add_flag("--summary", c_summary, "omit the mapping from standard output");
  construct->callback([&] {
    action = [&] {
      Json req{{"n", c_n}, {"seed", seed}};
      if (c_M) req["M"] = *c_M;
      if (c_F) req["F"] = *c_F;
      if (c_R) req["R"] = *c_R;
      if (c_K) req["K"] = *c_K;
      if (c_horizon) req["horizon"] = *c_horizon;
      api::Outcome o = api::construct(req, true);
      if (c_out) {
        write_file(*c_out, o.doc.dump() + "\n");
        std::string stages;
        for (const Json& s : o.doc.at("stages")) stages += s.dump() + "\n";
        write_file(*c_out + ".stages.ndjson", stages);
      }
      if (c_summary || c_out) o.doc.erase("T");
      result = emit(out, o);
    };
  });

  // verify
  auto* verify = app.add_subcommand("verify", "check a mapping against rough-isometry constraints");
  std::string v_kind, v_instance;
  ConstantFlags v_constants;
  verify->add_option("--kind", v_kind, "constraint family")
      ->required()
      ->check(CLI::IsMember({"rough", "rooted", "increasing", "markov"}));
  verify->add_option("--instance", v_instance, "instance or construct result JSON")->required();
  v_constants.add_to(verify);
  verify->callback([&] {
    action = [&] {
      Json req{{"kind", v_kind}, {"instance", read_json(v_instance)}};
      if (auto c = v_constants.to_json()) req["constants"] = *c;
      result = emit(out, api::verify(req));
    };
  });

  // oracle
  auto* oracle = app.add_subcommand("oracle", "exact search on small instances");
  oracle->require_subcommand(1);
  std::string o_instance;
  ConstantFlags o_constants;
  BudgetFlags o_budget;
  std::string o_family = "increasing";
  std::int64_t o_L = 0;
  bool o_unrooted = false, o_non_monotone = false;
  auto add_instance_op = [&](const std::string& name, const std::string& help) {
    auto* sub = oracle->add_subcommand(name, help);
    sub->add_option("--instance", o_instance, "instance JSON ('-' for stdin)")->required();
    o_budget.add_to(sub);
    sub->callback([&, name] {
      action = [&, name] {
        Json req{{"op", name}, {"instance", read_json(o_instance)}};
        if (auto c = o_constants.to_json()) req["constants"] = *c;
        if (name == "minimal-M") {
          req["family"] = o_family;
          if (o_constants.D) req["D"] = *o_constants.D;
          if (o_constants.F) req["F"] = *o_constants.F;
          if (o_constants.R) req["R"] = *o_constants.R;
        }
        if (name == "exists-general") {
          req["rooted"] = !o_unrooted;
          req["non_monotone"] = o_non_monotone;
        }
        o_budget.apply(req);
        result = emit(out, api::oracle(req));
      };
    });
    return sub;
  };
  o_constants.add_to(add_instance_op("exists-markov", "smallest rooted Markov map"), false, true);
  o_constants.add_to(add_instance_op("enumerate-markov", "all rooted Markov maps"), false, true);
  o_constants.add_to(add_instance_op("exists-increasing", "smallest rooted increasing map"), true, false);
  o_constants.add_to(add_instance_op("enumerate-increasing", "all rooted increasing maps"), true, false);
  auto* general = add_instance_op("exists-general", "any map passing the rough-isometry check");
  o_constants.add_to(general, true, false);
  general->add_flag("--unrooted", o_unrooted, "drop the T(0) = 0 requirement");
  general->add_flag("--non-monotone", o_non_monotone, "require a non-monotone witness");
  auto* minimal = add_instance_op("minimal-M", "smallest multiplicative constant on the 1/64 grid");
  minimal->add_option("--family", o_family, "map family")
      ->check(CLI::IsMember({"rooted", "increasing", "markov"}));
  minimal->add_option("--D", o_constants.D, "fixed D (rooted, increasing)");
  minimal->add_option("--F", o_constants.F, "fixed F (markov)");
  minimal->add_option("--R", o_constants.R, "fixed R");
  auto* counter = oracle->add_subcommand("counterexample",
                                         "4-point pair separating general and increasing maps");
  counter->add_option("--L", o_L, "required increasing lower bound on M")->required();
  o_budget.add_to(counter);
  counter->callback([&] {
    action = [&] {
      Json req{{"op", "counterexample"}, {"L", o_L}};
      o_budget.apply(req);
      result = emit(out, api::oracle(req));
    };
  });

  // lattice
  auto* lattice = app.add_subcommand("lattice", "lattice of rooted increasing rough isometries");
  std::string l_instance;
  ConstantFlags l_constants;
  BudgetFlags l_budget;
  bool l_fkg = false;
  std::optional<std::size_t> l_triples;
  lattice->add_option("--instance", l_instance, "instance JSON ('-' for stdin)")->required();
  l_constants.add_to(lattice, true, false);
  l_budget.add_to(lattice);
  lattice->add_flag("--fkg", l_fkg, "report exact pairwise covariances");
  lattice->add_option("--max-triples", l_triples, "distributivity triple budget");
  lattice->callback([&] {
    action = [&] {
      Json req{{"instance", read_json(l_instance)}, {"fkg", l_fkg}};
      if (auto c = l_constants.to_json()) req["constants"] = *c;
      if (l_triples) req["max_triples"] = *l_triples;
      l_budget.apply(req);
      result = emit(out, api::lattice(req));
    };
  });

  // experiment run
  auto* experiment = app.add_subcommand("experiment", "statistical experiments");
  experiment->require_subcommand(1);
  auto* run = experiment->add_subcommand("run", "run an experiment spec");
  std::string e_spec;
  std::optional<std::string> e_out;
  std::optional<unsigned> e_jobs;
  std::optional<std::uint64_t> e_seed;
  bool e_wall = false;
  run->add_option("spec", e_spec, "experiment spec JSON")->required();
  run->add_option("--out", e_out, "write PREFIX.ndjson and PREFIX.csv");
  run->add_option("--jobs", e_jobs, "worker threads (output does not depend on it)");
  run->add_option("--seed", e_seed, "override the spec's seed");
  run->add_flag("--wall-time", e_wall, "include per-cell wall time");
  run->callback([&] {
    action = [&] {
      Json spec = read_json(e_spec);
      if (e_jobs) spec["jobs"] = *e_jobs;
      if (e_seed) spec["seed"] = *e_seed;
      const api::Outcome o = api::experiment(spec, e_wall);
      const std::string ndjson = o.doc.at("ndjson").get<std::string>();
      if (e_out) {
        write_file(*e_out + ".ndjson", ndjson);
        write_file(*e_out + ".csv", o.doc.at("csv").get<std::string>());
      }
      out << ndjson;
      result = o.ok ? kExitOk : kExitDomainFailure;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code == 0) return kExitOk;
    err << kSchemaHint;
    return kExitUsage;
  }

  try {
    if (action) action();
    return result;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n" << kSchemaHint;
    return kExitUsage;
  } catch (const Json::exception& e) {
    err << "error: malformed input: " << e.what() << "\n" << kSchemaHint;
    return kExitUsage;
  } catch (const Error& e) {
    // Bad inputs are usage errors; search and stream limits are domain failures.
    switch (e.kind()) {
      case ErrorKind::PreconditionViolated:
      case ErrorKind::ImageNotInCodomain:
      case ErrorKind::DomainMismatch:
        err << "error: " << e.what() << "\n" << kSchemaHint;
        return kExitUsage;
      default:
        out << Json{{"error", std::string(to_string(e.kind()))}, {"message", e.what()}}.dump()
            << '\n';
        return kExitDomainFailure;
    }
  }
}

}  // namespace roughiso
