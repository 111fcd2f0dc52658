#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "transport/gallery.hpp"
#include "transport/json_io.hpp"
#include "transport/suite.hpp"

using nlohmann::json;
using namespace transport;

namespace {

// Exit codes: 0 success, 1 internal error, 2 validation error, 3 size cap,
// 4 non-generic weights, 5 non-splitting violated, 6 oracle failure.
enum ExitCode {
  kOk = 0,
  kInternal = 1,
  kValidation = 2,
  kCapacity = 3,
  kNonGeneric = 4,
  kNonSplitting = 5,
  kOracle = 6,
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

DiscreteMeasure load_measure(const std::string& path) {
  return measure_from_json(parse_json(read_file(path)));
}

LabeledMeasure load_labeled(const std::string& path) {
  return labeled_from_json(parse_json(read_file(path)));
}

void emit(const json& payload, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << payload.dump(2) << "\n";
  } else {
    std::ofstream out(output_path);
    if (!out) throw ValidationError("cannot write '" + output_path + "'");
    out << payload.dump(2) << "\n";
  }
}

int run_guarded(const std::function<void()>& body) {
  try {
    body();
    return kOk;
  } catch (const NonGenericError& e) {
    json err{{"error", e.what()},
             {"witness", {{"first", e.witness_first}, {"second", e.witness_second}}}};
    std::cout << err.dump(2) << "\n";
    std::cerr << "error: " << e.what() << "\n";
    return kNonGeneric;
  } catch (const NonSplittingError& e) {
    std::cout << json{{"error", e.what()}}.dump(2) << "\n";
    std::cerr << "error: " << e.what() << "\n";
    return kNonSplitting;
  } catch (const CapacityError& e) {
    std::cout << json{{"error", e.what()}}.dump(2) << "\n";
    std::cerr << "error: " << e.what() << "\n";
    return kCapacity;
  } catch (const OracleError& e) {
    std::cout << json{{"error", e.what()}}.dump(2) << "\n";
    std::cerr << "error: " << e.what() << "\n";
    return kOracle;
  } catch (const ValidationError& e) {
    std::cout << json{{"error", e.what()}}.dump(2) << "\n";
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}

struct OracleFlags {
  std::string name = "identity";
  std::string command;  // subprocess, overrides name when set
  double scale = 1.0;
  double offset = 0.0;
  double alpha = 0.5;
  double p = 1.0;
  int grid = 256;
  int timeout_ms = 10000;
  int retries = 1;

  void attach(CLI::App* cmd) {
    cmd->add_option("--oracle", name,
                    "identity|square|tent|affine|periodic-scaling|tanh|sign-ratio|constant-split");
    cmd->add_option("--oracle-cmd", command, "subprocess oracle command (line-delimited JSON)");
    cmd->add_option("--scale", scale, "affine oracle: slope");
    cmd->add_option("--offset", offset, "affine oracle: intercept");
    cmd->add_option("--alpha", alpha, "periodic-scaling exponent in (0,1)");
    cmd->add_option("--oracle-p", p, "transport exponent used inside the oracle");
    cmd->add_option("--grid", grid, "reference grid resolution");
    cmd->add_option("--timeout-ms", timeout_ms, "subprocess oracle timeout");
    cmd->add_option("--retries", retries, "subprocess oracle retries");
  }

  MeasureMapOracle build() const {
    if (!command.empty()) return SubprocessOracle::make(command, timeout_ms, retries);
    if (name == "identity") {
      return gallery::pushforward_oracle_1d([](double x) { return x; }, p, "identity", 1.0);
    }
    if (name == "square") {
      return gallery::pushforward_oracle_1d([](double x) { return x * x; }, p, "square",
                                            std::nullopt);
    }
    if (name == "tent") {
      return gallery::pushforward_oracle_1d(&gallery::periodic_tent, p, "tent", 2.0);
    }
    if (name == "affine") {
      double a = scale, b = offset;
      return gallery::pushforward_oracle_1d([a, b](double x) { return a * x + b; }, p, "affine",
                                            std::abs(a));
    }
    if (name == "periodic-scaling") {
      return gallery::periodic_scaling_oracle(alpha, gallery::GridDiscretizer{0.0, 1.0, grid}.uniform(), p);
    }
    if (name == "tanh") {
      return gallery::tanh_oracle(gallery::GridDiscretizer{-1.0, 1.0, grid}.uniform(), p);
    }
    if (name == "sign-ratio") return gallery::sign_ratio_oracle();
    if (name == "constant-split") return gallery::splitting_counterexample_oracle();
    throw ValidationError("unknown oracle '" + name + "'");
  }

  TransportFamily build_family() const {
    if (name == "periodic-scaling") {
      return gallery::periodic_scaling_family(alpha, gallery::GridDiscretizer{0.0, 1.0, grid}.uniform(), p);
    }
    if (name == "tanh") {
      return gallery::tanh_family(gallery::GridDiscretizer{-1.0, 1.0, grid}.uniform(), p);
    }
    if (name == "sign-ratio") return gallery::sign_ratio_family();
    // Pointwise maps ignore the measure argument.
    if (name == "identity") return [](const Point& x, const DiscreteMeasure&) { return x; };
    if (name == "square") {
      return [](const Point& x, const DiscreteMeasure&) { return Point{x[0] * x[0]}; };
    }
    if (name == "tent") {
      return [](const Point& x, const DiscreteMeasure&) {
        return Point{gallery::periodic_tent(x[0])};
      };
    }
    if (name == "affine") {
      double a = scale, b = offset;
      return [a, b](const Point& x, const DiscreteMeasure&) { return Point{a * x[0] + b}; };
    }
    throw ValidationError("oracle '" + name + "' has no pointwise transport family");
  }
};

std::string csv_escape(const std::string& text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += "\"\"";
    out.push_back(c == '\n' ? ' ' : c);
  }
  out += "\"";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"transport-representation toolkit"};
  app.require_subcommand(1);

  double p = 2.0;
  double tolerance = 1e-9;
  std::size_t cap_atoms = 2000;
  std::size_t cap_m = 0;  // 0 keeps the per-feature defaults (22 / 20)
  std::uint64_t seed = 42;
  std::string output;
  app.add_option("--tolerance", tolerance, "float comparison tolerance")
      ->envname("TRANSPORT_REP_TOL");
  app.add_option("--cap-m", cap_m, "subset-sum / partition cap (0 = defaults)")
      ->envname("TRANSPORT_REP_CAP_M");
  app.add_option("--seed", seed, "seed for sampled checks")->envname("TRANSPORT_REP_SEED");
  app.add_option("--cap-atoms", cap_atoms, "solver size cap (total atoms)");
  app.add_option("--output", output, "write the JSON/CSV payload to a file instead of stdout");

  auto solver_options = [&]() { return SolverOptions{cap_atoms, tolerance}; };
  auto generic_cap = [&]() { return cap_m ? cap_m : kDefaultGenericCap; };
  auto partition_cap = [&]() { return cap_m ? cap_m : kDefaultPartitionCap; };

  // wasserstein MU NU
  auto* cmd_w = app.add_subcommand("wasserstein", "exact W_p distance and plan");
  cmd_w->fallthrough();
  std::string w_mu, w_nu;
  cmd_w->add_option("mu", w_mu, "source measure JSON file")->required();
  cmd_w->add_option("nu", w_nu, "target measure JSON file")->required();
  cmd_w->add_option("--p", p, "exponent p >= 1");

  // tlp LM LM'
  auto* cmd_t = app.add_subcommand("tlp", "TL_p distance between labeled measures");
  cmd_t->fallthrough();
  std::string t_a, t_b;
  cmd_t->add_option("first", t_a, "labeled measure JSON file")->required();
  cmd_t->add_option("second", t_b, "labeled measure JSON file")->required();
  cmd_t->add_option("--p", p, "exponent p >= 1");

  // generic MU [--nearest tol]
  auto* cmd_g = app.add_subcommand("generic", "genericity verdict for measure weights");
  cmd_g->fallthrough();
  std::string g_mu, g_nearest;
  cmd_g->add_option("mu", g_mu, "measure JSON file")->required();
  cmd_g->add_option("--nearest", g_nearest, "also emit a generic vector within this tolerance");

  // nonsplit MU NU | nonsplit --oracle ... MU...
  auto* cmd_n = app.add_subcommand("nonsplit", "pushforward feasibility (atom partition)");
  cmd_n->fallthrough();
  std::vector<std::string> n_files;
  OracleFlags n_oracle;
  bool n_use_oracle = false;
  cmd_n->add_option("measures", n_files, "measure files: a (mu, nu) pair, or inputs for --against-oracle")
      ->required();
  cmd_n->add_flag("--against-oracle", n_use_oracle, "evaluate the oracle on each input measure");
  n_oracle.attach(cmd_n);

  // reconstruct --oracle ... MU
  auto* cmd_r = app.add_subcommand("reconstruct", "recover the transport map on a generic measure");
  cmd_r->fallthrough();
  std::string r_mu;
  OracleFlags r_oracle;
  cmd_r->add_option("mu", r_mu, "generic measure JSON file")->required();
  r_oracle.attach(cmd_r);

  // verify-lipschitz --oracle ... MU --lipschitz L
  auto* cmd_v = app.add_subcommand("verify-lipschitz", "pointwise Lipschitz check of a reconstruction");
  cmd_v->fallthrough();
  std::string v_mu;
  double v_lipschitz = 1.0;
  OracleFlags v_oracle;
  cmd_v->add_option("mu", v_mu, "generic measure JSON file")->required();
  cmd_v->add_option("--lipschitz", v_lipschitz, "constant to verify")->required();
  v_oracle.attach(cmd_v);

  // holder --oracle ... --lambda F --pairs P --c --k --ceiling
  auto* cmd_h = app.add_subcommand("holder", "uniform stability on a dominated reference");
  cmd_h->fallthrough();
  std::string h_lambda, h_pairs;
  double h_c = 1.0, h_k = 1.0, h_ceiling = 10.0;
  OracleFlags h_oracle;
  cmd_h->add_option("--lambda", h_lambda, "sub-measure JSON file")->required();
  cmd_h->add_option("--pairs", h_pairs, "JSON array of [mu, mu'] measure pairs")->required();
  cmd_h->add_option("--c", h_c, "ball mass constant");
  cmd_h->add_option("--k", h_k, "ball mass exponent");
  cmd_h->add_option("--ceiling", h_ceiling, "empirical ratio ceiling");
  cmd_h->add_option("--p", p, "exponent p >= 1");
  h_oracle.attach(cmd_h);

  // lagrangian --oracle ... POINTS [--permutations N]
  auto* cmd_l = app.add_subcommand("lagrangian", "lift a transport family to finite samples");
  cmd_l->fallthrough();
  std::string l_points;
  int l_perms = 0;
  OracleFlags l_oracle;
  cmd_l->add_option("points", l_points, "JSON array of points")->required();
  cmd_l->add_option("--permutations", l_perms, "seeded equivariance checks to run");
  l_oracle.attach(cmd_l);

  // example-suite
  auto* cmd_s = app.add_subcommand("example-suite", "run the built-in acceptance criteria");
  cmd_s->fallthrough();
  std::string s_only, s_format = "json";
  int s_jobs = 1;
  cmd_s->add_option("--only", s_only, "substring filter on criterion names");
  cmd_s->add_option("--format", s_format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  cmd_s->add_option("--jobs", s_jobs, "criteria evaluated concurrently");

  CLI11_PARSE(app, argc, argv);

  if (cmd_w->parsed()) {
    return run_guarded([&] {
      OtResult result = wasserstein(load_measure(w_mu), load_measure(w_nu), p, solver_options());
      json payload = plan_to_json(result.plan, result.cost, p);
      payload["distance"] = result.distance;
      emit(payload, output);
    });
  }
  if (cmd_t->parsed()) {
    return run_guarded([&] {
      OtResult result = tlp_distance(load_labeled(t_a), load_labeled(t_b), p, solver_options());
      json payload = plan_to_json(result.plan, result.cost, p);
      payload["distance"] = result.distance;
      emit(payload, output);
    });
  }
  if (cmd_g->parsed()) {
    return run_guarded([&] {
      DiscreteMeasure mu = load_measure(g_mu);
      auto verdict = is_generic(mu.weight_vector(), generic_cap());
      json payload{{"generic", verdict.generic}};
      if (!verdict.generic) {
        payload["witness"] = {{"first", verdict.witness_first}, {"second", verdict.witness_second}};
      }
      if (!g_nearest.empty()) {
        WeightVector fixed = nearest_generic(mu.weight_vector(), Rational::parse(g_nearest));
        json entries = json::array();
        for (const auto& w : fixed.entries) entries.push_back(rational_to_json(w));
        payload["nearest"] = entries;
      }
      emit(payload, output);
    });
  }
  if (cmd_n->parsed()) {
    return run_guarded([&] {
      if (n_use_oracle) {
        std::vector<DiscreteMeasure> inputs;
        for (const auto& f : n_files) inputs.push_back(load_measure(f));
        emit(feasibility_report_to_json(feasible_all_pairs(inputs, n_oracle.build(), partition_cap())),
             output);
        return;
      }
      if (n_files.size() != 2) {
        throw ValidationError("nonsplit expects exactly two measure files (or --against-oracle)");
      }
      auto assignment = feasible_pushforward(load_measure(n_files[0]), load_measure(n_files[1]),
                                             partition_cap());
      json payload{{"feasible", assignment.has_value()}};
      payload["assignment"] = assignment ? json(assignment->target_index) : json(nullptr);
      emit(payload, output);
    });
  }
  if (cmd_r->parsed()) {
    return run_guarded([&] {
      MeasureMapOracle oracle = r_oracle.build();
      ReconstructedMap rm = reconstruct_on_generic(oracle, load_measure(r_mu), partition_cap());
      double claimed = oracle.lipschitz.value_or(1.0);
      emit(reconstruction_to_json(rm, verify_pointwise_lipschitz(rm, claimed)), output);
    });
  }
  if (cmd_v->parsed()) {
    return run_guarded([&] {
      ReconstructedMap rm = reconstruct_on_generic(v_oracle.build(), load_measure(v_mu), partition_cap());
      LipschitzReport report = verify_pointwise_lipschitz(rm, v_lipschitz);
      emit(json{{"ok", report.ok},
                {"worst_ratio", report.worst_ratio},
                {"worst_pair", {report.worst_i, report.worst_j}},
                {"lipschitz", v_lipschitz}},
           output);
    });
  }
  if (cmd_h->parsed()) {
    return run_guarded([&] {
      SubMeasure lambda = submeasure_from_json(parse_json(read_file(h_lambda)));
      json pairs_json = parse_json(read_file(h_pairs));
      std::vector<std::pair<DiscreteMeasure, DiscreteMeasure>> pairs;
      for (const auto& pair : pairs_json) {
        if (!pair.is_array() || pair.size() != 2) {
          throw ValidationError("--pairs must be an array of [mu, mu'] pairs");
        }
        pairs.emplace_back(measure_from_json(pair[0]), measure_from_json(pair[1]));
      }
      HolderReport report = holder_stability_check(h_oracle.build(), lambda, h_c, h_k, pairs, p,
                                                   h_ceiling, partition_cap(), solver_options());
      json rows = json::array();
      for (const auto& row : report.rows) {
        rows.push_back(json{{"sup", row.sup_deviation}, {"wp", row.wp}, {"ratio", row.ratio}});
      }
      emit(json{{"rows", rows},
                {"max_ratio", report.max_ratio},
                {"below_ceiling", report.below_ceiling},
                {"note", "empirical ratios, not the theoretical constant"}},
           output);
    });
  }
  if (cmd_l->parsed()) {
    return run_guarded([&] {
      json points_json = parse_json(read_file(l_points));
      std::vector<Point> sample;
      for (const auto& coords : points_json) {
        sample.push_back(Point(coords.get<std::vector<double>>()));
      }
      TransportFamily family = l_oracle.build_family();
      std::vector<Point> lifted = lagrangian_lift(family, sample);
      json payload;
      json out_points = json::array();
      for (const auto& y : lifted) out_points.push_back(json(y.coords));
      payload["lifted"] = out_points;
      if (l_perms > 0) {
        std::uint64_t state = seed;
        std::vector<std::vector<std::size_t>> perms;
        for (int t = 0; t < l_perms; ++t) {
          std::vector<std::size_t> sigma(sample.size());
          std::iota(sigma.begin(), sigma.end(), std::size_t{0});
          for (std::size_t i = sigma.size(); i > 1; --i) {
            std::swap(sigma[i - 1],
                      sigma[static_cast<std::size_t>(suite::unit_uniform(state) * i)]);
          }
          perms.push_back(std::move(sigma));
        }
        auto verdict = check_mpi_equivariance(make_lift(family), sample, perms);
        payload["equivariant"] = verdict.ok;
        if (!verdict.ok) payload["failing_permutation"] = verdict.failing_permutation;
      }
      emit(payload, output);
    });
  }
  if (cmd_s->parsed()) {
    int exit_code = kOk;
    int guard = run_guarded([&] {
      suite::SuiteConfig config;
      config.seed = seed;
      config.only = s_only;
      config.jobs = s_jobs;
      auto results = suite::run_acceptance_suite(config);
      bool all_pass = !results.empty();
      for (const auto& r : results) all_pass = all_pass && r.pass;
      if (s_format == "csv") {
        std::ostringstream csv;
        csv << "name,measured,bound,pass,seconds,detail\n";
        for (const auto& r : results) {
          csv << r.name << "," << r.measured << "," << r.bound << ","
              << (r.pass ? "pass" : "FAIL") << "," << r.seconds << "," << csv_escape(r.detail)
              << "\n";
        }
        if (output.empty()) {
          std::cout << csv.str();
        } else {
          std::ofstream out(output);
          out << csv.str();
        }
      } else {
        json rows = json::array();
        for (const auto& r : results) {
          rows.push_back(json{{"name", r.name},
                              {"measured", r.measured},
                              {"bound", r.bound},
                              {"pass", r.pass},
                              {"seconds", r.seconds},
                              {"detail", r.detail}});
        }
        emit(json{{"criteria", rows}, {"all_pass", all_pass}}, output);
      }
      for (const auto& r : results) {
        std::cerr << (r.pass ? "PASS " : "FAIL ") << r.name << " (" << r.seconds << " s)\n";
      }
      if (!all_pass) exit_code = kInternal;
    });
    return guard != kOk ? guard : exit_code;
  }
  return kValidation;
}
