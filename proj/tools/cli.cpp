#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "smallgaps/errors.hpp"
#include "smallgaps/gaps.hpp"
#include "smallgaps/moments.hpp"
#include "smallgaps/primes.hpp"
#include "smallgaps/serialize.hpp"
#include "smallgaps/thresholds.hpp"
#include "smallgaps/tuples.hpp"
#include "smallgaps/weights.hpp"

namespace smallgaps::cli {

namespace {

struct OptionSpec {
  std::string name;
  std::string fallback;
  std::string help;
  bool flag = false;
};

struct CommandSpec {
  std::string name;
  std::string help;
  std::vector<OptionSpec> options;
};

std::vector<OptionSpec> common_options() {
  return {
      {"format", "json", "output format: json, csv or table"},
      {"seed", "1", "seed for sampling modes"},
      {"budget", std::to_string(default_enumeration_budget()), "enumeration budget (env SMALLGAPS_BUDGET)"},
      {"memory-budget", std::to_string(SieveOptions::default_memory_budget()),
       "largest sieve window in entries (env SMALLGAPS_MEMORY_BUDGET)"},
  };
}

const std::vector<CommandSpec>& specs() {
  static const std::vector<CommandSpec> all = [] {
    std::vector<CommandSpec> s = {
        {"sieve",
         "sieve a window and summarise it",
         {{"lo", "2", "window start"}, {"hi", "1000000", "window end"}, {"segment", "1048576", "segment length"}}},
        {"singular",
         "singular series of a tuple",
         {{"tuple", "", "comma-separated ascending integers, e.g. 1,3,7"},
          {"tol", "1e-9", "tolerance on the log of the series"}}},
        {"enumerate",
         "admissible k-subsets of {1..floor h}",
         {{"k", "2", "tuple size"},
          {"h", "10", "box size"},
          {"samples", "100000", "draws when the budget forces sampling"},
          {"max-list", "1000", "tuples to list (0: none)"},
          {"gallagher", "false", "also sum the singular series against h^k/k!", true}}},
        {"weight",
         "divisor-sum weight at a single n",
         {{"n", "", "argument n"},
          {"tuple", "1,3", "tuple H"},
          {"R", "100", "sieve level"},
          {"ell", "0", "extra power l"},
          {"delta", "0.1", "truncation exponent"},
          {"N", "0", "range scale for the pointwise bound (0: use n)"},
          {"oracle", "false", "also evaluate the brute-force divisor loop", true}}},
        {"moments",
         "weighted moment sums over n in [N+1, 2N]",
         {{"kind", "lambda-sq", "lambda-sq, theta, selberg, correlation or removed-mass"},
          {"tuple", "1,3", "tuple H"},
          {"N", "1000000", "window scale"},
          {"R", "", "sieve level (overrides R-exp)"},
          {"R-exp", "0.25", "R = N^R-exp"},
          {"ell", "1", "extra power l"},
          {"h0", "", "comma-separated shifts for kind=theta"},
          {"z", "30,100", "comma-separated sieving limits for kind=selberg"},
          {"slack", "0.5", "tolerance factor for the Selberg bound"},
          {"delta", "0.1", "truncation exponent"},
          {"theta", "0.5", "level of distribution"},
          {"eps", "0", "epsilon"},
          {"nu", "1", "target prime count"},
          {"k", "2", "tuple size for kind=correlation"},
          {"h", "10", "box size for kind=correlation"}}},
        {"big-s",
         "composite sum over all admissible H in {1..floor h}",
         {{"k", "2", "tuple size"},
          {"ell", "1", "extra power l"},
          {"h", "10", "box size"},
          {"N", "10000", "window scale"},
          {"R", "", "sieve level (overrides R-exp)"},
          {"R-exp", "0.25", "R = N^R-exp"},
          {"nu", "1", "target prime count"},
          {"delta", "0.1", "truncation exponent"},
          {"theta", "0.5", "level of distribution"},
          {"eps", "0", "epsilon"},
          {"mode", "both", "original, star or both"}}},
        {"gaps",
         "prime gap statistics",
         {{"mode", "distribution", "distribution, q, bridge, pairs or interval"},
          {"x", "1000000", "limit for distribution and pairs"},
          {"eta-grid", "0.05:2.0:20", "geometric grid start:end:count"},
          {"nu", "1", "gap order"},
          {"N", "1000000", "window scale for q and bridge"},
          {"h", "20", "interval length"},
          {"n", "0", "interval start for mode=interval"}}},
        {"thresholds",
         "exact threshold calculus",
         {{"min-k", "false", "smallest k with M > 0 for theta0", true},
          {"m-value", "false", "evaluate M(k, l, h)", true},
          {"h-threshold", "false", "coefficient c with M > 0 iff h > c log 3N", true},
          {"c2-check", "false", "verify factor > 4 - 8/sqrt k up to k-max", true},
          {"theta0", "0.953", "level of distribution (exact decimal or fraction)"},
          {"theta", "1/2", "level for h-threshold"},
          {"nu", "1", "target prime count"},
          {"eps", "0", "epsilon"},
          {"delta", "0", "delta"},
          {"k", "7", "tuple size"},
          {"ell", "1", "extra power l"},
          {"k-max", "10000", "upper k for c2-check"},
          {"h", "0", "h for m-value"},
          {"log-R", "1", "log R for m-value"},
          {"log-3N", "1", "log 3N for m-value"},
          {"convention", "half", "h-threshold level convention: half or two-plus-delta"}}},
    };
    for (auto& c : s)
      for (auto& o : common_options()) c.options.push_back(o);
    return s;
  }();
  return all;
}

const CommandSpec& spec_for(const std::string& name) {
  for (const auto& s : specs())
    if (s.name == name) return s;
  throw UsageError("unknown command \"" + name + "\"");
}

std::string trim(std::string s) {
  auto ws = [](unsigned char c) { return std::isspace(c); };
  while (!s.empty() && ws(s.back())) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && ws(s[i])) ++i;
  return s.substr(i);
}

std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file \"" + path + "\"");
  std::map<std::string, std::string> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(number) + ": expected key=value");
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

// ----- typed accessors ------------------------------------------------------

class Values {
 public:
  explicit Values(const RunConfig& c) : c_(c) {}

  const std::string& str(const std::string& key) const {
    auto it = c_.values.find(key);
    if (it == c_.values.end()) throw InvariantError("option --" + key + " missing from resolved config");
    return it->second;
  }
  bool has(const std::string& key) const { return !str(key).empty(); }

  double real(const std::string& key) const {
    const auto& s = str(key);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0' || !std::isfinite(v)) throw UsageError("--" + key + " expects a number, got \"" + s + "\"");
    return v;
  }
  std::uint64_t u64(const std::string& key) const {
    const double v = real(key);
    if (v < 0 || v != std::floor(v) || v > 9.007199254740992e15)
      throw UsageError("--" + key + " expects a non-negative integer, got \"" + str(key) + "\"");
    return static_cast<std::uint64_t>(v);
  }
  std::int64_t i64(const std::string& key) const {
    const double v = real(key);
    if (v != std::floor(v) || std::abs(v) > 9.007199254740992e15)
      throw UsageError("--" + key + " expects an integer, got \"" + str(key) + "\"");
    return static_cast<std::int64_t>(v);
  }
  int i32(const std::string& key) const { return static_cast<int>(i64(key)); }
  bool flag(const std::string& key) const { return str(key) == "true"; }
  Rational exact(const std::string& key) const { return parse_rational(str(key)); }

  std::vector<double> reals(const std::string& key) const {
    std::vector<double> out;
    std::stringstream ss(str(key));
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      char* end = nullptr;
      const double v = std::strtod(item.c_str(), &end);
      if (item.empty() || *end != '\0') throw UsageError("--" + key + " expects comma-separated numbers");
      out.push_back(v);
    }
    return out;
  }

 private:
  const RunConfig& c_;
};

// ----- command implementations -------------------------------------------

struct Output {
  Json result;
  std::optional<std::string> csv;
};

Exec exec_of(const RunConfig& c) { return Exec{std::max(1u, c.threads)}; }

PrimeTables make_tables(const RunConfig& c, std::uint64_t lo, std::uint64_t hi) {
  const Values v(c);
  SieveOptions options;
  options.max_entries = v.u64("memory-budget");
  return build_tables(lo, std::min<std::uint64_t>(hi, 0xFFFFFFFFull - 1), options, exec_of(c));
}

double resolve_R(const Values& v, std::uint64_t N) {
  if (v.has("R")) return v.real("R");
  return std::pow(static_cast<double>(N), v.real("R-exp"));
}

Output cmd_sieve(const RunConfig& c) {
  const Values v(c);
  SieveOptions options;
  options.segment_length = v.u64("segment");
  options.max_entries = v.u64("memory-budget");
  const auto t = build_tables(v.u64("lo"), v.u64("hi"), options, exec_of(c));
  const double theta_sum = window_sum(t.lo(), t.hi(), exec_of(c), [&](std::uint64_t n) {
    return t.is_prime_unchecked(n) ? std::log(static_cast<double>(n)) : 0.0;
  });
  return {Json{{"lo", t.lo()},
               {"hi", t.hi()},
               {"prime_count", t.count_through(t.hi())},
               {"theta_sum", theta_sum},
               {"first_prime", t.next_prime_after(t.lo() - 1)},
               {"base_prime_count", t.base_primes().size()}},
          std::nullopt};
}

Output cmd_singular(const RunConfig& c) {
  const Values v(c);
  if (!v.has("tuple")) throw UsageError("singular requires --tuple");
  const Tuple t = Tuple::parse(v.str("tuple"));
  return {to_json(t, singular_series(t, v.real("tol"))), std::nullopt};
}

Output cmd_enumerate(const RunConfig& c) {
  const Values v(c);
  const int k = v.i32("k");
  const double h = v.real("h");
  AdmissibleTupleStream stream(k, h, v.u64("budget"), v.u64("samples"), v.u64("seed"));
  const auto max_list = v.u64("max-list");
  Json tuples = Json::array();
  std::string csv = "tuple\n";
  std::uint64_t count = 0;
  while (auto t = stream.next()) {
    if (count < max_list) {
      tuples.push_back(t->to_string());
      csv += "\"" + t->to_string() + "\"\n";
    }
    ++count;
  }
  Json result{{"header", to_json(stream.header())}, {"yielded", count}, {"inspected", stream.inspected()}, {"tuples", tuples}};
  if (v.flag("gallagher")) {
    const auto g = stream.header().mode == EnumerationMode::exhaustive
                       ? gallagher_sum(k, h, v.u64("budget"), kDefaultSingularTolerance, exec_of(c))
                       : gallagher_sum_sampled(k, h, v.u64("samples"), v.u64("seed"));
    result["gallagher"] = to_json(g);
  }
  return {result, csv};
}

Output cmd_weight(const RunConfig& c) {
  const Values v(c);
  if (!v.has("n")) throw UsageError("weight requires --n");
  const std::uint64_t n = v.u64("n");
  const Tuple t = Tuple::parse(v.str("tuple"));
  WeightParams p;
  p.R = v.real("R");
  p.k = t.k();
  p.ell = v.i32("ell");
  p.delta = v.real("delta");
  p.N = v.u64("N") ? v.u64("N") : n;
  const auto tables = make_tables(c, 2, n + static_cast<std::uint64_t>(t.back()));
  const double z = std::pow(p.R, p.delta);
  Json result{{"n", n},
              {"tuple", t.to_string()},
              {"params", to_json(p)},
              {"lambda_r", lambda_r(n, t, p, tables)},
              {"lambda_star", lambda_star(n, t, p, tables)},
              {"z", z},
              {"coprime", coprime_to_small_primes(n, t, z, tables)}};
  if (p.log_R() >= kLowerLevelExponent * std::log(static_cast<double>(p.N)))
    result["lambda_star_bound"] = lambda_star_bound(p);
  else
    result["lambda_star_bound"] = nullptr;
  if (v.flag("oracle")) result["lambda_r_oracle"] = lambda_r_oracle(n, t, p, tables);
  return {result, std::nullopt};
}

Output cmd_moments(const RunConfig& c) {
  const Values v(c);
  const std::string kind = v.str("kind");
  const std::uint64_t N = v.u64("N");
  WeightParams p;
  p.N = N;
  p.R = resolve_R(v, N);
  p.ell = v.i32("ell");
  p.delta = v.real("delta");
  p.theta_level = v.real("theta");
  p.eps = v.real("eps");
  p.nu = v.i32("nu");
  const Exec exec = exec_of(c);

  if (kind == "correlation") {
    p.k = v.i32("k");
    p.h = v.real("h");
    const auto tables = make_tables(c, 2, 2 * N + static_cast<std::uint64_t>(std::floor(p.h)));
    return {to_json(correlation_bound(p, tables, v.u64("budget"), exec)), std::nullopt};
  }

  const Tuple t = Tuple::parse(v.str("tuple"));
  p.k = t.k();
  p.h = static_cast<double>(t.back());
  std::int64_t reach = t.back();
  std::vector<std::int64_t> shifts;
  if (kind == "theta") {
    if (!v.has("h0")) throw UsageError("kind=theta requires --h0");
    for (double s : v.reals("h0")) {
      if (s != std::floor(s) || s < 1) throw UsageError("--h0 entries must be positive integers");
      shifts.push_back(static_cast<std::int64_t>(s));
      reach = std::max(reach, shifts.back());
    }
  }
  const auto tables = make_tables(c, 2, 2 * N + static_cast<std::uint64_t>(reach));
  if (kind == "lambda-sq") return {to_json(moment_lambda_sq(t, p, tables, exec)), std::nullopt};
  if (kind == "theta") {
    Json reports = Json::array();
    for (auto h0 : shifts) reports.push_back(to_json(moment_lambda_sq_theta(t, h0, p, tables, exec)));
    return {reports, std::nullopt};
  }
  if (kind == "selberg") {
    Json reports = Json::array();
    for (double z : v.reals("z")) reports.push_back(to_json(selberg_count(t, z, N, tables, v.real("slack"), exec)));
    return {reports, std::nullopt};
  }
  if (kind == "removed-mass") {
    const auto m = removed_mass(t, p, tables, exec);
    return {Json{{"params", to_json(p)}, {"tuple", t.to_string()}, {"removed", m.removed}, {"total", m.total}, {"ratio", m.ratio}},
            std::nullopt};
  }
  throw UsageError("unknown moments kind \"" + kind + "\"");
}

Output cmd_big_s(const RunConfig& c) {
  const Values v(c);
  WeightParams p;
  p.k = v.i32("k");
  p.ell = v.i32("ell");
  p.h = v.real("h");
  p.N = v.u64("N");
  p.R = resolve_R(v, p.N);
  p.nu = v.i32("nu");
  p.delta = v.real("delta");
  p.theta_level = v.real("theta");
  p.eps = v.real("eps");
  const std::string mode = v.str("mode");
  if (mode != "original" && mode != "star" && mode != "both") throw UsageError("--mode must be original, star or both");
  const auto tables = make_tables(c, 2, 2 * p.N + static_cast<std::uint64_t>(std::floor(p.h)));
  Json result = Json::object();
  if (mode != "star") result["original"] = to_json(big_s(p, tables, WeightMode::original, v.u64("budget"), exec_of(c)));
  if (mode != "original") result["star"] = to_json(big_s(p, tables, WeightMode::star, v.u64("budget"), exec_of(c)));
  result["m_value"] = m_value(p.k, p.ell, p.h, p.log_R(), p.log_3N(), p.nu);
  return {result, std::nullopt};
}

std::vector<double> parse_eta_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(trim(item));
  if (parts.size() != 3) throw UsageError("--eta-grid expects start:end:count");
  try {
    const double start = std::stod(parts[0]);
    const double end = std::stod(parts[1]);
    const long count = std::stol(parts[2]);
    if (count < 1) throw UsageError("--eta-grid count must be positive");
    return geometric_grid(start, end, static_cast<std::size_t>(count));
  } catch (const std::logic_error&) {
    throw UsageError("--eta-grid expects start:end:count");
  }
}

Output cmd_gaps(const RunConfig& c) {
  const Values v(c);
  const std::string mode = v.str("mode");
  const int nu = v.i32("nu");
  const double h = v.real("h");
  const auto span = static_cast<std::uint64_t>(std::max(0.0, std::floor(h)));
  if (mode == "distribution") {
    const std::uint64_t x = v.u64("x");
    const auto grid = parse_eta_grid(v.str("eta-grid"));
    // Maximal prime gaps below 2^32 are under 400.
    const auto tables = make_tables(c, 2, x + 400 * static_cast<std::uint64_t>(std::max(1, nu)));
    const auto g = gap_distribution(x, grid, nu, tables);
    std::ostringstream csv;
    write_csv(csv, g);
    return {to_json(g), csv.str()};
  }
  if (mode == "q" || mode == "bridge") {
    const std::uint64_t N = v.u64("N");
    const auto tables = make_tables(c, 2, 2 * N + span);
    if (mode == "q") return {Json{{"N", N}, {"h", h}, {"nu", nu}, {"q", q_nu(N, h, nu, tables)}}, std::nullopt};
    const auto b = gaps_from_q(N, h, nu, tables);
    return {Json{{"N", N},
                 {"h", h},
                 {"nu", nu},
                 {"q", b.q},
                 {"gap_count", b.gap_count},
                 {"endpoint_correction", b.endpoint_correction},
                 {"max_per_gap", b.max_per_gap},
                 {"bridge_ok", b.bridge_ok}},
            std::nullopt};
  }
  if (mode == "pairs") {
    const std::uint64_t x = v.u64("x");
    const auto tables = make_tables(c, 2, 2 * x);
    const auto p = pair_count_bound(x, h, tables);
    return {Json{{"x", x}, {"h", h}, {"pairs", p.pairs}, {"bound_scale", p.bound_scale}}, std::nullopt};
  }
  if (mode == "interval") {
    const std::uint64_t n = v.u64("n");
    const auto tables = make_tables(c, 2, n + std::max<std::uint64_t>(span, 1));
    const auto s = interval_stats(n, h, tables);
    return {Json{{"n", n}, {"h", h}, {"Theta", s.theta}, {"count", s.count}}, std::nullopt};
  }
  throw UsageError("unknown gaps mode \"" + mode + "\"");
}

Output cmd_thresholds(const RunConfig& c) {
  const Values v(c);
  Json result = Json::object();
  const int nu = v.i32("nu");
  if (v.flag("min-k")) result["min_k"] = to_json(min_k_for_theta(v.exact("theta0"), nu, v.exact("eps"), v.exact("delta")));
  if (v.flag("m-value")) {
    const auto k = v.i64("k"), ell = v.i64("ell");
    result["m_value"] = Json{{"k", k},
                             {"ell", ell},
                             {"factor", fraction_string(weight_factor(k, ell))},
                             {"value", m_value(k, ell, v.real("h"), v.real("log-R"), v.real("log-3N"), nu)}};
  }
  if (v.flag("h-threshold")) {
    const auto k = v.i64("k"), ell = v.i64("ell");
    const std::string conv = v.str("convention");
    LevelConvention convention;
    if (conv == "half")
      convention = LevelConvention::half_theta_minus_eps;
    else if (conv == "two-plus-delta")
      convention = LevelConvention::theta_minus_eps_over_2_delta;
    else
      throw UsageError("--convention must be half or two-plus-delta");
    const Rational coeff = h_threshold_exact(k, ell, v.exact("theta"), v.exact("eps"), nu, convention, v.exact("delta"));
    result["h_threshold"] = Json{{"k", k}, {"ell", ell}, {"convention", conv}, {"coeff", fraction_string(coeff)}, {"value", to_double(coeff)}};
  }
  if (v.flag("c2-check")) {
    std::int64_t failure = 0;
    const bool ok = c2_check(v.i64("k-max"), &failure);
    Json j{{"k_max", v.i64("k-max")}, {"c2", 8}, {"holds", ok}};
    if (!ok) j["first_failure"] = failure;
    result["c2_check"] = j;
  }
  if (result.empty()) throw UsageError("thresholds needs one of --min-k, --m-value, --h-threshold, --c2-check");
  return {result, std::nullopt};
}

Output dispatch(const RunConfig& c) {
  if (c.command == "sieve") return cmd_sieve(c);
  if (c.command == "singular") return cmd_singular(c);
  if (c.command == "enumerate") return cmd_enumerate(c);
  if (c.command == "weight") return cmd_weight(c);
  if (c.command == "moments") return cmd_moments(c);
  if (c.command == "big-s") return cmd_big_s(c);
  if (c.command == "gaps") return cmd_gaps(c);
  if (c.command == "thresholds") return cmd_thresholds(c);
  throw UsageError("unknown command \"" + c.command + "\"");
}

void flatten(const Json& j, const std::string& prefix, std::ostream& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else if (j.is_number_float()) {
    out << prefix << " = " << format_double(j.get<double>()) << '\n';
  } else if (j.is_string()) {
    out << prefix << " = " << j.get<std::string>() << '\n';
  } else {
    out << prefix << " = " << j.dump() << '\n';
  }
}

Json manifest_json(const RunConfig& c) {
  Json m{{"version", kVersion}, {"command", c.command}};
  for (const auto& [k, val] : c.values) m[k] = val;
  return m;
}

std::string error_json(const std::string& kind, const std::string& message, int code) {
  Json j{{"schema_version", kSchemaVersion}, {"error", Json{{"kind", kind}, {"message", message}}}, {"exit_code", code}};
  return j.dump() + "\n";
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& s : specs()) n.push_back(s.name);
    return n;
  }();
  return names;
}

RunConfig parse_command_line(const std::vector<std::string>& args_in) {
  std::vector<std::string> args = args_in;
  if (args.empty()) args.push_back("smallgaps");

  // Locate --config early so a config-supplied command can be injected.
  std::string config_path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
  }
  std::map<std::string, std::string> config;
  if (!config_path.empty()) config = read_config(config_path);
  const bool has_command = std::any_of(args.begin() + 1, args.end(), [](const std::string& a) {
    return std::find(commands().begin(), commands().end(), a) != commands().end();
  });
  if (!has_command && config.count("command")) args.insert(args.begin() + 1, config.at("command"));

  CLI::App app{"smallgaps: small prime gaps, divisor-sum weights and singular series"};
  app.set_help_flag("--help", "print help and exit");
  app.require_subcommand(0, 1);
  app.fallthrough();
  app.footer(
      "Eta grids use start:end:count (geometric). Config files hold key=value lines;\n"
      "command-line flags win over config values. A run manifest is a valid config file.");
  std::string output, manifest_out, ignored_config;
  unsigned threads = 1;
  app.add_option("--config", ignored_config, "key=value config file (a manifest replays a run)");
  app.add_option("-o,--output", output, "write results to this file");
  app.add_option("--manifest-out", manifest_out, "write the run manifest to this file");
  app.add_option("--threads", threads, "worker threads (results do not depend on it)");

  std::map<std::string, std::map<std::string, std::string>> stores;
  std::map<std::string, std::map<std::string, bool>> flags;
  std::map<std::string, std::map<std::string, CLI::Option*>> handles;
  for (const auto& spec : specs()) {
    auto* sub = app.add_subcommand(spec.name, spec.help);
    // -h would collide with the box-size option --h.
    sub->set_help_flag("--help", "print help and exit");
    for (const auto& o : spec.options) {
      const std::string help = o.help + (o.fallback.empty() || o.flag ? "" : " [" + o.fallback + "]");
      if (o.flag)
        handles[spec.name][o.name] = sub->add_flag("--" + o.name, flags[spec.name][o.name], help);
      else
        handles[spec.name][o.name] = sub->add_option("--" + o.name, stores[spec.name][o.name], help);
    }
  }

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    throw HelpRequest{app.help()};
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  const auto parsed = app.get_subcommands();
  if (parsed.empty()) throw HelpRequest{app.help()};

  RunConfig c;
  c.command = parsed.front()->get_name();
  const auto& spec = spec_for(c.command);
  for (const auto& [key, value] : config) {
    if (key == "command" || key == "version") continue;
    if (key == "threads" || key == "output" || key == "manifest-out") continue;
    const bool known = std::any_of(spec.options.begin(), spec.options.end(), [&](const OptionSpec& o) { return o.name == key; });
    if (!known) throw UsageError("config key \"" + key + "\" is not an option of " + c.command);
  }
  if (config.count("command") && config.at("command") != c.command)
    throw UsageError("config is for command \"" + config.at("command") + "\", not \"" + c.command + "\"");
  for (const auto& o : spec.options) {
    std::string value;
    if (handles[c.command][o.name]->count() > 0)
      value = o.flag ? (flags[c.command][o.name] ? "true" : "false") : stores[c.command][o.name];
    else if (config.count(o.name))
      value = config.at(o.name);
    else
      value = o.fallback;
    c.values[o.name] = value;
  }
  auto from = [&](const std::string& key, const std::string& cli_value, bool cli_set) {
    if (cli_set) return cli_value;
    return config.count(key) ? config.at(key) : cli_value;
  };
  c.output_path = from("output", output, app.get_option("--output")->count() > 0);
  c.manifest_path = from("manifest-out", manifest_out, app.get_option("--manifest-out")->count() > 0);
  if (app.get_option("--threads")->count() > 0) {
    c.threads = threads;
  } else if (config.count("threads")) {
    c.threads = static_cast<unsigned>(std::stoul(config.at("threads")));
  }
  return c;
}

std::string manifest_text(const RunConfig& config) {
  std::ostringstream os;
  os << "# smallgaps run manifest\n";
  os << "version=" << kVersion << '\n';
  os << "command=" << config.command << '\n';
  for (const auto& [k, v] : config.values) os << k << '=' << v << '\n';
  return os.str();
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const Values v(config);
    const std::string format = v.str("format");
    if (format != "json" && format != "csv" && format != "table") throw UsageError("--format must be json, csv or table");
    Output result = dispatch(config);

    std::string body;
    if (format == "json") {
      Json doc{{"schema_version", kSchemaVersion},
               {"version", kVersion},
               {"command", config.command},
               {"manifest", manifest_json(config)},
               {"result", result.result}};
      body = doc.dump(2) + "\n";
    } else if (format == "csv") {
      if (!result.csv) throw UsageError("csv output is not available for " + config.command);
      body = *result.csv;
    } else {
      std::ostringstream os;
      flatten(result.result, "", os);
      body = os.str();
    }

    if (config.output_path.empty()) {
      out << body;
    } else {
      std::ofstream file(config.output_path, std::ios::binary);
      if (!file) throw UsageError("cannot write " + config.output_path);
      file << body;
    }
    std::string manifest_path = config.manifest_path;
    if (manifest_path.empty() && format != "json" && !config.output_path.empty())
      manifest_path = config.output_path + ".manifest";
    if (!manifest_path.empty()) {
      std::ofstream file(manifest_path, std::ios::binary);
      if (!file) throw UsageError("cannot write " + manifest_path);
      file << manifest_text(config);
    } else if (format != "json") {
      err << manifest_text(config);
    }
    return kOk;
  } catch (const UsageError& e) {
    err << error_json("usage", e.what(), kUsage);
    return kUsage;
  } catch (const ArgumentError& e) {
    err << error_json("argument", e.what(), kUsage);
    return kUsage;
  } catch (const RangeError& e) {
    err << error_json("range", e.what(), kUsage);
    return kUsage;
  } catch (const BudgetError& e) {
    err << error_json("budget", e.what(), kBudget);
    return kBudget;
  } catch (const InvariantError& e) {
    err << error_json("invariant", e.what(), kInternal);
    return kInternal;
  } catch (const std::bad_alloc&) {
    err << error_json("resource", "out of memory", kBudget);
    return kBudget;
  } catch (const std::exception& e) {
    err << error_json("internal", e.what(), kInternal);
    return kInternal;
  }
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    config = parse_command_line(args);
  } catch (const HelpRequest& h) {
    out << h.text;
    return kOk;
  } catch (const UsageError& e) {
    err << error_json("usage", e.what(), kUsage);
    return kUsage;
  } catch (const std::exception& e) {
    err << error_json("usage", e.what(), kUsage);
    return kUsage;
  }
  return run(config, out, err);
}

}  // namespace smallgaps::cli
