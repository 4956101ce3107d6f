#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "noma/analytic.hpp"
#include "noma/core_regions.hpp"
#include "noma/errors.hpp"
#include "noma/events.hpp"
#include "noma/montecarlo.hpp"
#include "noma/validation.hpp"
#include "output.hpp"

namespace noma::cli {
namespace {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct CommonOptions {
  std::string format = "csv";
  std::string out = "-";

  Format parsed_format() const { return format == "json" ? Format::json : Format::csv; }
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--out", o.out, "Output path, '-' for stdout")->capture_default_str();
}

double rho_from_db(double db) { return std::pow(10.0, db / 10.0); }

/// Resolves --a2-mode: fixed:<value>, inv_sqrt_rho or special.
double resolve_a2(const std::string& mode, double rho) {
  if (mode == "inv_sqrt_rho") return 1.0 / std::sqrt(rho);
  if (mode == "special") return optimal_a2_special(rho);
  if (mode.rfind("fixed:", 0) == 0) {
    try {
      std::size_t used = 0;
      const std::string text = mode.substr(6);
      const double v = std::stod(text, &used);
      if (used == text.size()) return v;
    } catch (const std::exception&) {
    }
  }
  throw UsageError("--a2-mode must be fixed:<value>, inv_sqrt_rho or special (got '" + mode + "')");
}

std::vector<ProbabilityMethod> resolve_methods(const std::string& method) {
  if (method == "closed") return {ProbabilityMethod::closed_form};
  if (method == "quadrature") return {ProbabilityMethod::quadrature};
  if (method == "mc") return {ProbabilityMethod::monte_carlo};
  return {ProbabilityMethod::closed_form, ProbabilityMethod::quadrature,
          ProbabilityMethod::monte_carlo};
}

struct ProbabilityRun {
  double a2 = 0.0;
  double b2 = 0.5;
  double quad_tol = 1e-6;
  McConfig mc;
};

EventProbabilities run_method(ProbabilityMethod method, const PairingConfig& cfg,
                              const ProbabilityRun& r) {
  switch (method) {
    case ProbabilityMethod::closed_form:
      return closed_form_event_probs(cfg, r.a2, std::max(r.quad_tol * 1e-2, 1e-12));
    case ProbabilityMethod::quadrature:
      return quadrature_event_probs(cfg, r.a2, r.b2, r.quad_tol);
    case ProbabilityMethod::monte_carlo:
      return estimate_event_probs(cfg, r.a2, r.b2, r.mc);
  }
  throw std::logic_error("unknown method");
}

Cell stderr_cell(const EventProbabilities& p, std::size_t i) {
  if (!p.stderr_) return std::monostate{};
  return (*p.stderr_)[i];
}

// ---------------------------------------------------------------- regions

struct RegionsOptions {
  double x = 0.0;
  double y = 0.0;
  double a2_max = 0.5;
  std::size_t points = 201;
  std::optional<double> a2;
  std::optional<double> b2;
  CommonOptions common;
};

Table regions_table(const RegionsOptions& o) {
  const ChannelPair ch(o.x, o.y);
  Table t{{"region", "r2", "r1"}, {}};
  auto add = [&t](const std::string& name, const RatePair& p) {
    t.rows.push_back({name, p.r2, p.r1});
  };
  for (const RatePair& p : region_boundary_samples(RegionKind::capacity, ch, o.points)) {
    add("capacity", p);
  }
  for (const RatePair& p : noma_boundary_samples(ch, o.points, o.a2_max)) add("noma", p);
  for (const RatePair& p : region_boundary_samples(RegionKind::tdma, ch, o.points)) {
    add("tdma", p);
  }
  if (o.a2) {
    const PowerSplit power(*o.a2);
    add("N", noma_rate_pair(ch, power));
    const SegmentCuts cuts = segment_cuts(ch, power);
    add("B", cuts.b);
    add("C", cuts.c);
    add("D", cuts.d);
  }
  if (o.b2) add("T", tdma_rate_pair(ch, TimeSplit(*o.b2)));
  return t;
}

// ---------------------------------------------------------------- events

struct EventsOptions {
  int M = 10;
  std::optional<int> m;
  std::optional<int> n;
  double rho_db = 25.0;
  std::string a2_mode = "inv_sqrt_rho";
  double b2 = 0.5;
  std::string method = "all";
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 42;
  unsigned shards = 8;
  double quad_tol = 1e-6;
  CommonOptions common;
};

Table events_table(const EventsOptions& o, std::ostream& err) {
  std::vector<std::pair<int, int>> pairs;
  if (o.m.has_value() != o.n.has_value()) throw UsageError("--m and --n must be given together");
  if (o.m) {
    pairs.emplace_back(*o.m, *o.n);
  } else {
    pairs = {{1, 2}, {4, 5}, {2, 7}, {1, 10}};
  }
  const double rho = rho_from_db(o.rho_db);
  ProbabilityRun run{resolve_a2(o.a2_mode, rho), o.b2, o.quad_tol, {o.trials, o.seed, o.shards}};
  std::vector<ProbabilityMethod> methods = resolve_methods(o.method);
  if (o.b2 != 0.5) {
    if (o.method == "closed") throw UsageError("closed forms exist only for --b2 0.5");
    std::erase(methods, ProbabilityMethod::closed_form);
    if (o.method == "all") err << "note: closed forms skipped for b2 != 1/2\n";
  }

  Table t{{"m", "n", "method", "p_e1", "p_e2", "p_e3", "p_e4", "stderr_e1", "stderr_e2",
           "stderr_e3", "stderr_e4"},
          {}};
  for (const auto& [m, n] : pairs) {
    const PairingConfig cfg{o.M, m, n, rho};
    cfg.validate();
    for (ProbabilityMethod method : methods) {
      const EventProbabilities p = run_method(method, cfg, run);
      std::vector<Cell> row{std::int64_t{m}, std::int64_t{n}, std::string(to_string(method))};
      for (std::size_t i = 0; i < 4; ++i) row.emplace_back(p.p[i]);
      for (std::size_t i = 0; i < 4; ++i) row.push_back(stderr_cell(p, i));
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

// ---------------------------------------------------------------- sweep-n

struct SweepOptions {
  int M = 10;
  int m = 1;
  double rho_db = 25.0;
  std::string a2_mode = "inv_sqrt_rho";
  std::string method = "all";
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 42;
  unsigned shards = 8;
  double quad_tol = 1e-6;
  CommonOptions common;
};

Table sweep_table(const SweepOptions& o, std::ostream& err) {
  if (!(o.m >= 1 && o.m < o.M)) throw UsageError("sweep-n requires 1 <= m < M");
  const double rho = rho_from_db(o.rho_db);
  const ProbabilityRun run{resolve_a2(o.a2_mode, rho), 0.5, o.quad_tol,
                           {o.trials, o.seed, o.shards}};
  Table t{{"n", "method", "p_e2", "stderr_e2"}, {}};
  for (ProbabilityMethod method : resolve_methods(o.method)) {
    double previous = -1.0;
    for (int n = o.m + 1; n <= o.M; ++n) {
      const PairingConfig cfg{o.M, o.m, n, rho};
      const EventProbabilities p = run_method(method, cfg, run);
      const double p2 = p[EventId::E2];
      const double slack = p.stderr_ ? 3.0 * (*p.stderr_)[1] : 1e-9;
      if (p2 + slack < previous) {
        err << "warning: " << to_string(method) << " p_e2 decreases at n = " << n << " ("
            << format_double(previous) << " -> " << format_double(p2) << ")\n";
      }
      previous = p2;
      t.rows.push_back({std::int64_t{n}, std::string(to_string(method)), p2, stderr_cell(p, 1)});
    }
  }
  return t;
}

// ---------------------------------------------------------------- rates

struct RatesOptions {
  int M = 10;
  int m = 1;
  int n = 10;
  std::vector<double> rho_db_list{0, 5, 10, 15, 20, 25, 30, 35, 40, 45, 50, 55};
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 42;
  unsigned shards = 8;
  CommonOptions common;
};

Table rates_table(const RatesOptions& o) {
  if (o.rho_db_list.empty()) throw UsageError("--rho-db-list must not be empty");
  Table t{{"rho_db", "r1_noma", "r2_noma", "r1_tdma", "r2_tdma", "stderr_r1_noma",
           "stderr_r2_noma", "stderr_r1_tdma", "stderr_r2_tdma"},
          {}};
  for (double db : o.rho_db_list) {
    const double rho = rho_from_db(db);
    const PairingConfig cfg{o.M, o.m, o.n, rho};
    const AverageRates r =
        estimate_average_rates(cfg, optimal_a2_special(rho), 0.5, {o.trials, o.seed, o.shards});
    std::vector<Cell> row{db, r.r1_noma, r.r2_noma, r.r1_tdma, r.r2_tdma};
    for (double se : r.stderr_) row.emplace_back(se);
    t.rows.push_back(std::move(row));
  }
  return t;
}

// ---------------------------------------------------------------- validate

struct ValidateOptions {
  std::string suite = "all";
  std::uint64_t seed = 42;
  std::uint64_t checks = 1'000'000;
  std::uint64_t draws = 1'000'000;
  std::uint64_t trials = 1'000'000;
  std::string report;
};

int run_validate(const ValidateOptions& o, std::ostream& out) {
  validation::Options opts;
  opts.seed = o.seed;
  opts.random_checks = o.checks;
  opts.sampler_draws = o.draws;
  opts.mc_trials = o.trials;
  const auto records = validation::run_suite(*validation::parse_suite(o.suite), opts);

  std::size_t failed = 0;
  for (const auto& r : records) {
    out << (r.passed ? "PASS " : "FAIL ") << r.suite << '/' << r.name << "  value="
        << format_double(r.value) << " threshold=" << format_double(r.threshold);
    if (!r.detail.empty()) out << "  (" << r.detail << ')';
    out << '\n';
    if (!r.passed) ++failed;
  }
  out << records.size() - failed << '/' << records.size() << " checks passed\n";

  if (!o.report.empty()) {
    std::ofstream f(o.report, std::ios::binary);
    if (!f) throw std::ios_base::failure("cannot open " + o.report + " for writing");
    for (const auto& r : records) {
      nlohmann::ordered_json j{{"suite", r.suite},         {"check", r.name},
                               {"passed", r.passed},       {"value", r.value},
                               {"threshold", r.threshold}, {"detail", r.detail}};
      f << j.dump() << '\n';
    }
  }
  return failed == 0 ? kSuccess : kValidationFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"NOMA vs. TDMA rate regions and event probabilities", "noma"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  RegionsOptions ro;
  auto* regions = app.add_subcommand("regions", "Boundary samples of the three rate regions");
  regions->add_option("--x", ro.x, "Weak-user effective SNR (linear)")->required();
  regions->add_option("--y", ro.y, "Strong-user effective SNR (linear)")->required();
  regions->add_option("--a2-max", ro.a2_max, "Largest a2 on the NOMA arc")->capture_default_str();
  regions->add_option("--points", ro.points, "Samples per boundary")
      ->check(CLI::Range(std::size_t{2}, std::size_t{10'000'000}))
      ->capture_default_str();
  regions->add_option("--a2", ro.a2, "Emit NOMA point N and cut points B, C, D for this a2");
  regions->add_option("--b2", ro.b2, "Emit TDMA point T for this b2");
  add_common(regions, ro.common);

  EventsOptions eo;
  auto* events = app.add_subcommand("events", "Probabilities of the four events");
  events->add_option("--M", eo.M, "Number of users")->capture_default_str();
  events->add_option("--m", eo.m, "Weak-user order index (default: four reference pairs)");
  events->add_option("--n", eo.n, "Strong-user order index");
  events->add_option("--rho-db", eo.rho_db, "Transmit SNR in dB")->capture_default_str();
  events->add_option("--a2-mode", eo.a2_mode, "fixed:<value> | inv_sqrt_rho | special")
      ->capture_default_str();
  events->add_option("--b2", eo.b2, "TDMA time fraction of the strong user")
      ->capture_default_str();
  events->add_option("--method", eo.method)
      ->check(CLI::IsMember({"closed", "quadrature", "mc", "all"}))
      ->capture_default_str();
  events->add_option("--trials", eo.trials)->check(CLI::PositiveNumber)->capture_default_str();
  events->add_option("--seed", eo.seed)->capture_default_str();
  events->add_option("--shards", eo.shards)->check(CLI::PositiveNumber)->capture_default_str();
  events->add_option("--quad-tol", eo.quad_tol)->capture_default_str();
  add_common(events, eo.common);

  SweepOptions so;
  auto* sweep = app.add_subcommand("sweep-n", "P(E2) as the strong-user index n varies");
  sweep->add_option("--M", so.M)->capture_default_str();
  sweep->add_option("--m", so.m)->capture_default_str();
  sweep->add_option("--rho-db", so.rho_db)->capture_default_str();
  sweep->add_option("--a2-mode", so.a2_mode)->capture_default_str();
  sweep->add_option("--method", so.method)
      ->check(CLI::IsMember({"closed", "quadrature", "mc", "all"}))
      ->capture_default_str();
  sweep->add_option("--trials", so.trials)->check(CLI::PositiveNumber)->capture_default_str();
  sweep->add_option("--seed", so.seed)->capture_default_str();
  sweep->add_option("--shards", so.shards)->check(CLI::PositiveNumber)->capture_default_str();
  sweep->add_option("--quad-tol", so.quad_tol)->capture_default_str();
  add_common(sweep, so.common);

  RatesOptions rto;
  auto* rates = app.add_subcommand("rates", "Average NOMA and TDMA rates versus SNR");
  rates->add_option("--M", rto.M)->capture_default_str();
  rates->add_option("--m", rto.m)->capture_default_str();
  rates->add_option("--n", rto.n)->capture_default_str();
  rates->add_option("--rho-db-list", rto.rho_db_list, "Comma-separated SNRs in dB")
      ->delimiter(',')
      ->capture_default_str();
  rates->add_option("--trials", rto.trials)->check(CLI::PositiveNumber)->capture_default_str();
  rates->add_option("--seed", rto.seed)->capture_default_str();
  rates->add_option("--shards", rto.shards)->check(CLI::PositiveNumber)->capture_default_str();
  add_common(rates, rto.common);

  ValidateOptions vo;
  auto* validate = app.add_subcommand("validate", "Run invariant check suites");
  validate->add_option("--suite", vo.suite)
      ->check(CLI::IsMember({"propositions", "regions", "orderstats", "probabilities", "all"}))
      ->capture_default_str();
  validate->add_option("--seed", vo.seed)->capture_default_str();
  validate->add_option("--checks", vo.checks, "Randomised samples per dominance check")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  validate->add_option("--draws", vo.draws, "Sampler draws for order-statistics checks")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  validate->add_option("--trials", vo.trials, "Monte Carlo trials for the probability grid")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  validate->add_option("--report", vo.report, "Write one JSON record per check to this path");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << '\n';
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return kUsageError;
  }

  try {
    RunManifest manifest;
    if (regions->parsed()) {
      manifest.command = "regions";
      manifest.parameters = {{"x", ro.x},           {"y", ro.y},     {"a2_max", ro.a2_max},
                             {"points", ro.points}, {"a2", nullptr}, {"b2", nullptr}};
      if (ro.a2) manifest.parameters["a2"] = *ro.a2;
      if (ro.b2) manifest.parameters["b2"] = *ro.b2;
      emit(regions_table(ro), manifest, ro.common.parsed_format(), ro.common.out, out);
    } else if (events->parsed()) {
      manifest.command = "events";
      manifest.seed = eo.seed;
      manifest.parameters = {{"M", eo.M},
                             {"m", nullptr},
                             {"n", nullptr},
                             {"rho_db", eo.rho_db},
                             {"a2_mode", eo.a2_mode},
                             {"b2", eo.b2},
                             {"method", eo.method},
                             {"trials", eo.trials},
                             {"shards", eo.shards},
                             {"quad_tol", eo.quad_tol}};
      if (eo.m) manifest.parameters["m"] = *eo.m;
      if (eo.n) manifest.parameters["n"] = *eo.n;
      emit(events_table(eo, err), manifest, eo.common.parsed_format(), eo.common.out, out);
    } else if (sweep->parsed()) {
      manifest.command = "sweep-n";
      manifest.seed = so.seed;
      manifest.parameters = {{"M", so.M},           {"m", so.m},           {"rho_db", so.rho_db},
                             {"a2_mode", so.a2_mode}, {"method", so.method}, {"trials", so.trials},
                             {"shards", so.shards}, {"quad_tol", so.quad_tol}};
      emit(sweep_table(so, err), manifest, so.common.parsed_format(), so.common.out, out);
    } else if (rates->parsed()) {
      manifest.command = "rates";
      manifest.seed = rto.seed;
      manifest.parameters = {{"M", rto.M},
                             {"m", rto.m},
                             {"n", rto.n},
                             {"rho_db_list", rto.rho_db_list},
                             {"a2_mode", "special"},
                             {"b2", 0.5},
                             {"trials", rto.trials},
                             {"shards", rto.shards}};
      emit(rates_table(rto), manifest, rto.common.parsed_format(), rto.common.out, out);
    } else if (validate->parsed()) {
      return run_validate(vo, out);
    }
  } catch (const NonConvergence& e) {
    err << "error: numerical non-convergence: " << e.what() << '\n';
    return kNonConvergence;
  } catch (const UnsupportedSize& e) {
    err << "error: " << e.what() << '\n';
    return kNonConvergence;
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::invalid_argument& e) {  // usage, domain, split errors
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return kSuccess;
}

}  // namespace noma::cli
