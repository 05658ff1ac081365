#include "qwsearch/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>

#include "qwsearch/error.hpp"
#include "qwsearch/evolve.hpp"
#include "qwsearch/parallel.hpp"
#include "qwsearch/protocols.hpp"
#include "qwsearch/reduced.hpp"
#include "qwsearch/verify.hpp"

namespace qwsearch::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

const std::map<std::string, std::vector<std::string>>& replay_keys() {
  static const std::map<std::string, std::vector<std::string>> keys = {
      {"fidelity",
       {"n", "k", "marked", "alpha", "all-to-all", "gamma", "optimize-gamma", "tmax", "points",
        "engine", "format"}},
      {"asymptotic", {"kmax", "tau-max", "step", "points", "format"}},
      {"protocol", {"k-range", "n-range", "eps-s", "eps-r", "source", "format"}},
  };
  return keys;
}

struct Output {
  std::string path;  // empty: stdout
  bool json = false;
};

Output resolve_output(const std::string& out, const std::string& format, const std::string& stem) {
  Output o;
  o.path = out;
  if (o.path.empty()) {
    if (const char* dir = std::getenv(kOutDirVariable); dir != nullptr && *dir != '\0') {
      std::filesystem::create_directories(dir);
      const std::string ext = format == "json" ? ".json" : ".csv";
      o.path = (std::filesystem::path(dir) / (stem + ext)).string();
    }
  }
  if (format.empty())
    o.json = std::filesystem::path(o.path).extension() == ".json";
  else if (format == "json")
    o.json = true;
  else
    require(format == "csv", ErrorCode::InvalidArgs, "format must be csv or json");
  return o;
}

void emit(const Output& o, const std::string& text, std::ostream& out, std::ostream& err) {
  if (o.path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(o.path, std::ios::binary);
  require(static_cast<bool>(file), ErrorCode::InvalidArgs, "cannot open '" + o.path + "' for writing");
  file << text;
  require(static_cast<bool>(file), ErrorCode::InvalidArgs, "failed writing '" + o.path + "'");
  err << "wrote " << o.path << '\n';
}

Manifest base_manifest(const std::string& command) {
  Manifest m;
  m.set("tool", std::string(kToolName));
  m.set("version", std::string(kToolVersion));
  m.set("command", command);
  return m;
}

ordered_json manifest_json(const Manifest& m) {
  ordered_json j = ordered_json::object();
  for (const auto& [k, v] : m.entries()) j[k] = v;
  return j;
}

std::string join(const std::vector<int>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) s += (i ? "," : "") + std::to_string(values[i]);
  return s;
}

double parse_double(const std::string& text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  require(res.ec == std::errc{} && res.ptr == end, ErrorCode::InvalidArgs,
          "not a number: '" + text + "'");
  return v;
}

std::int64_t parse_integer(const std::string& text) {
  const double v = parse_double(text);
  require(std::isfinite(v) && v == std::floor(v) && std::abs(v) < 9e15, ErrorCode::InvalidArgs,
          "not an integer: '" + text + "'");
  return static_cast<std::int64_t>(v);
}

// "3", "1:5", "2:10:2", "100,1e3,1e4" and combinations; sorted, unique.
std::vector<std::int64_t> parse_list(const std::string& spec) {
  std::vector<std::int64_t> out;
  std::stringstream items(spec);
  std::string item;
  while (std::getline(items, item, ',')) {
    std::vector<std::string> parts;
    std::stringstream fields(item);
    std::string f;
    while (std::getline(fields, f, ':')) parts.push_back(f);
    require(!parts.empty() && parts.size() <= 3, ErrorCode::InvalidArgs, "bad range '" + item + "'");
    const auto lo = parse_integer(parts[0]);
    const auto hi = parts.size() > 1 ? parse_integer(parts[1]) : lo;
    const auto step = parts.size() > 2 ? parse_integer(parts[2]) : 1;
    require(step > 0 && lo <= hi, ErrorCode::InvalidArgs, "bad range '" + item + "'");
    for (auto v = lo; v <= hi; v += step) out.push_back(v);
  }
  require(!out.empty(), ErrorCode::InvalidArgs, "empty range '" + spec + "'");
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------- fidelity

struct FidelityArgs {
  int n = 0;
  int k = 0;
  std::vector<int> marked;
  double alpha = 0.0;
  bool all_to_all = false;
  double gamma = 0.0;
  std::string optimize_gamma;
  double tmax = 0.0;
  int points = 2000;
  std::string engine = "auto";
  std::string out;
  std::string format;
  CLI::Option* alpha_opt = nullptr;
  CLI::Option* gamma_opt = nullptr;
};

GammaSpec parse_gamma_range(const std::string& text, const SearchConfig& config) {
  if (text == "auto") {
    const double g0 = 1.0 / config.coupling_matrix().max_row_sum();
    return GammaSpec::range(g0 / 10.0, 10.0 * g0);
  }
  const auto comma = text.find(',');
  require(comma != std::string::npos, ErrorCode::InvalidArgs,
          "--optimize-gamma expects lo,hi or auto");
  return GammaSpec::range(parse_double(text.substr(0, comma)), parse_double(text.substr(comma + 1)));
}

int cmd_fidelity(const FidelityArgs& a, int jobs, std::ostream& out, std::ostream& err) {
  const bool long_range = a.alpha_opt->count() > 0;
  require(!long_range || !a.marked.empty(), ErrorCode::InvalidArgs,
          "--marked is required together with --alpha");
  require(a.gamma_opt->count() > 0 || !a.optimize_gamma.empty(), ErrorCode::InvalidArgs,
          "one of --gamma or --optimize-gamma is required");

  SearchConfig c;
  c.n = a.n;
  c.k = a.k;
  c.marked = a.marked;
  c.coupling = long_range ? Coupling::long_range(a.alpha) : Coupling::all_to_all();
  c.t_max = a.tmax;
  c.grid_points = a.points;
  c.jobs = jobs;

  std::string engine = a.engine;
  if (engine == "auto")
    engine = !long_range && 2 * a.k <= a.n ? "reduced" : "sparse";
  const bool both = engine == "both";
  c.engine = both ? Engine::Reduced : engine_from_string(engine);
  c.gamma = GammaSpec::fixed(a.gamma);
  validate(c);
  if (!a.optimize_gamma.empty()) c.gamma = parse_gamma_range(a.optimize_gamma, c);
  c.t_max = c.window_end();
  validate(c);

  const Output o = resolve_output(a.out, a.format, "fidelity");
  Manifest m = base_manifest("fidelity");
  m.set("n", c.n);
  m.set("k", c.k);
  m.set("marked", join(c.marked_sites()));
  if (long_range)
    m.set("alpha", a.alpha);
  else
    m.set("all-to-all", std::string("true"));
  if (c.gamma.optimize)
    m.set("optimize-gamma", a.optimize_gamma);
  else
    m.set("gamma", a.gamma);
  m.set("tmax", c.t_max);
  m.set("points", c.grid_points);
  m.set("engine", engine);
  m.set("format", std::string(o.json ? "json" : "csv"));

  MaxFidelity best;
  if (c.gamma.optimize) {
    const GammaOptimum opt = optimize_gamma(c);
    best = MaxFidelity{opt.value, opt.time, opt.gamma, opt.time_boundary};
    m.set("gamma_lo", c.gamma.lo);
    m.set("gamma_hi", c.gamma.hi);
    m.set("gamma_star", opt.gamma);
    if (opt.boundary) err << "warning: optimal gamma lies at the edge of the search range\n";
    c.gamma = GammaSpec::fixed(opt.gamma);
  } else {
    best = max_fidelity(c);
  }
  if (best.boundary) err << "warning: fidelity maximum lies on the edge of the time window\n";
  m.set("max_fidelity", best.value);
  m.set("t_star", best.time);

  const FidelitySeries primary = fidelity_series(c);
  std::optional<FidelitySeries> sparse;
  if (both) {
    SearchConfig s = c;
    s.engine = Engine::Sparse;
    sparse = fidelity_series(s);
    double diff = 0.0;
    for (std::size_t i = 0; i < primary.values.size(); ++i)
      diff = std::max(diff, std::abs(primary.values[i] - sparse->values[i]));
    m.set("max_difference", diff);
    err << "max |F_reduced - F_sparse| = " << format_shortest(diff) << '\n';
  }
  err << "max fidelity " << format_shortest(best.value) << " at t = " << format_shortest(best.time)
      << " (gamma = " << format_shortest(best.gamma) << ")\n";

  std::string text;
  if (o.json) {
    ordered_json j;
    j["manifest"] = manifest_json(m);
    j["t"] = primary.times;
    if (both) {
      j["fidelity_reduced"] = primary.values;
      j["fidelity_sparse"] = sparse->values;
    } else {
      j["fidelity"] = primary.values;
    }
    text = j.dump(1) + "\n";
  } else {
    std::ostringstream os;
    os << m.to_comment_block() << (both ? "t,fidelity_reduced,fidelity_sparse\n" : "t,fidelity\n");
    for (std::size_t i = 0; i < primary.times.size(); ++i) {
      os << format_shortest(primary.times[i]) << ',' << format_shortest(primary.values[i]);
      if (both) os << ',' << format_shortest(sparse->values[i]);
      os << '\n';
    }
    text = os.str();
  }
  emit(o, text, out, err);
  return kOk;
}

// -------------------------------------------------------------- asymptotic

struct AsymptoticArgs {
  int kmax = 20;
  double tau_max = 4.0 * std::numbers::pi;
  double step = 1e-3;
  int points = 1001;
  std::string curves;
  std::string out;
  std::string format;
};

int cmd_asymptotic(const AsymptoticArgs& a, int jobs, std::ostream& out, std::ostream& err) {
  require(a.kmax >= 1, ErrorCode::InvalidArgs, "--kmax must be positive");
  require(a.tau_max > 0.0 && a.step > 0.0, ErrorCode::InvalidArgs, "--tau-max and --step must be positive");
  require(a.points >= 2, ErrorCode::InvalidArgs, "--points must be at least 2");
  const AsymptoticWindow window{0.0, a.tau_max, a.step, 1e-10};
  const auto table = asymptotic_table(a.kmax, window, {}, jobs);

  const Output o = resolve_output(a.out, a.format, "asymptotic");
  Manifest m = base_manifest("asymptotic");
  m.set("kmax", a.kmax);
  m.set("tau-max", a.tau_max);
  m.set("step", a.step);
  m.set("points", a.points);
  m.set("format", std::string(o.json ? "json" : "csv"));

  std::string text;
  if (o.json) {
    ordered_json j;
    j["manifest"] = manifest_json(m);
    j["rows"] = ordered_json::array();
    for (const auto& r : table)
      j["rows"].push_back({{"k", r.k}, {"max_fidelity", r.fidelity}, {"tau_star", r.tau}});
    text = j.dump(1) + "\n";
  } else {
    std::ostringstream os;
    write_asymptotic_csv(os, table, m);
    text = os.str();
  }
  emit(o, text, out, err);

  if (!a.curves.empty()) {
    std::vector<std::string> blocks(table.size());
    parallel_for(table.size(), jobs, [&](std::size_t i) {
      const AsymptoticEvolution evo(static_cast<int>(i) + 1);
      std::string& b = blocks[i];
      for (int p = 0; p < a.points; ++p) {
        const double tau = a.tau_max * p / (a.points - 1);
        b += std::to_string(i + 1) + ',' + format_shortest(tau) + ',' +
             format_shortest(evo.fidelity(tau)) + '\n';
      }
    });
    std::string curves = m.to_comment_block() + "k,tau,fidelity\n";
    for (const auto& b : blocks) curves += b;
    emit(Output{a.curves, false}, curves, out, err);
  }
  for (const auto& r : table)
    if (r.k <= 5) err << "k=" << r.k << ": F=" << format_shortest(r.fidelity) << " tau*=" << format_shortest(r.tau) << '\n';
  return kOk;
}

// ---------------------------------------------------------------- protocol

struct ProtocolArgs {
  std::string k_range = "1:5";
  std::string n_range = "100,1000,10000";
  double eps_s = 0.005;
  double eps_r = 0.005;
  std::string source = "reduced";
  std::string out;
  std::string format;
};

struct SearchPoint {
  double fidelity;
  double time;
};

SearchPoint reduced_point(std::int64_t n, int k) {
  require(n <= std::numeric_limits<int>::max(), ErrorCode::InvalidArgs, "n too large");
  SearchConfig c;
  c.n = static_cast<int>(n);
  c.k = k;
  c.engine = Engine::Reduced;
  c.gamma = GammaSpec::fixed(1.0 / static_cast<double>(n));
  const MaxFidelity m = max_fidelity(c);
  return {std::min(m.value, 1.0), m.time};
}

int cmd_protocol(const ProtocolArgs& a, int jobs, std::ostream& out, std::ostream& err) {
  require(a.source == "reduced" || a.source == "asymptotic", ErrorCode::InvalidArgs,
          "--source must be reduced or asymptotic");
  const auto ks = parse_list(a.k_range);
  const auto ns = parse_list(a.n_range);
  for (auto k : ks) require(k >= 1 && k <= 150, ErrorCode::InvalidArgs, "k must lie in 1..150");
  for (auto n : ns)
    for (auto k : ks)
      require(2 * k <= n, ErrorCode::InvalidArgs,
              "every k must satisfy k <= n/2 (k=" + std::to_string(k) + ", n=" + std::to_string(n) + ")");

  std::vector<std::pair<int, std::int64_t>> cells;
  for (auto k : ks)
    for (auto n : ns) cells.emplace_back(static_cast<int>(k), n);
  std::vector<ProtocolComparison> rows(cells.size());
  parallel_for(cells.size(), jobs, [&](std::size_t i) {
    const auto [k, n] = cells[i];
    const double nd = static_cast<double>(n);
    const double t_single = std::numbers::pi * std::sqrt(nd) / 2.0;
    SearchPoint single{};
    SearchPoint ksub{};
    if (a.source == "reduced") {
      single = reduced_point(n, 1);
      ksub = reduced_point(n, k);
    } else {
      const auto m1 = max_asymptotic(1);
      const auto mk = max_asymptotic(k);
      single = {std::min(m1.fidelity, 1.0), m1.tau * std::sqrt(nd)};
      ksub = {std::min(mk.fidelity, 1.0), mk.tau * std::sqrt(nd)};
    }
    rows[i] = protocol_times(nd, k, a.eps_s, a.eps_r, single.fidelity, t_single, ksub.fidelity,
                             ksub.time);
  });

  const Output o = resolve_output(a.out, a.format, "protocol");
  Manifest m = base_manifest("protocol");
  m.set("k-range", a.k_range);
  m.set("n-range", a.n_range);
  m.set("eps-s", a.eps_s);
  m.set("eps-r", a.eps_r);
  m.set("source", a.source);
  m.set("format", std::string(o.json ? "json" : "csv"));

  std::string text;
  if (o.json) {
    ordered_json j;
    j["manifest"] = manifest_json(m);
    j["rows"] = ordered_json::array();
    for (const auto& r : rows)
      j["rows"].push_back({{"k", r.k}, {"n", r.n}, {"s_k", r.s_k}, {"r_single", r.r_single},
                           {"r_k", r.r_ksub}, {"F_single", r.F_single}, {"F_k", r.F_ksub},
                           {"t_1subspace", r.t_1subspace}, {"t_ksubspace", r.t_ksubspace},
                           {"ratio", r.ratio}});
    text = j.dump(1) + "\n";
  } else {
    std::ostringstream os;
    write_protocol_csv(os, rows, m);
    text = os.str();
  }
  emit(o, text, out, err);
  return kOk;
}

// ------------------------------------------------------------------ verify

struct VerifyArgs {
  bool quick = false;
  bool full = false;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_verify(const VerifyArgs& a, int jobs, std::ostream& out, std::ostream& err) {
  VerifyOptions opts;
  opts.full = a.full;
  opts.seed = a.seed;
  opts.jobs = jobs;
  const VerifyReport report = run_verify(opts);
  for (const auto& c : report.checks)
    err << (c.passed ? "PASS " : "FAIL ") << c.name << "  observed=" << format_shortest(c.observed)
        << " tolerance=" << format_shortest(c.tolerance) << '\n';
  emit(Output{a.out, true}, report.to_json(), out, err);
  err << (report.passed() ? "all checks passed\n" : "verification FAILED\n");
  return report.passed() ? kOk : kVerifyFailed;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::InvalidArgs, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool has_flag(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.rfind(flag + "=", 0) == 0;
  });
}

}  // namespace

std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      require(i + 1 < args.size(), ErrorCode::InvalidArgs, "--config needs a file name");
      config_path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    } else {
      out.push_back(args[i]);
    }
  }
  if (config_path.empty()) return out;

  nlohmann::json cfg;
  try {
    cfg = nlohmann::json::parse(read_file(config_path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgs, "config '" + config_path + "': " + e.what());
  }
  require(cfg.is_object(), ErrorCode::InvalidArgs, "config must be a JSON object");

  std::string command;
  for (const auto& a : out)
    if (a.empty() || a[0] != '-') {
      command = a;
      break;
    }
  if (command.empty() && cfg.contains("command") && cfg["command"].is_string()) {
    command = cfg["command"].get<std::string>();
    out.insert(out.begin(), command);
  }

  nlohmann::json merged = nlohmann::json::object();
  for (const auto& [key, value] : cfg.items())
    if (!value.is_object() && key != "command") merged[key] = value;
  if (!command.empty() && cfg.contains(command) && cfg[command].is_object())
    for (const auto& [key, value] : cfg[command].items()) merged[key] = value;

  for (const auto& [key, value] : merged.items()) {
    const std::string flag = "--" + key;
    if (has_flag(out, flag)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) out.push_back(flag);
    } else if (value.is_array()) {
      std::string joined;
      for (const auto& v : value) {
        if (!joined.empty()) joined += ',';
        joined += v.is_string() ? v.get<std::string>() : v.dump();
      }
      out.push_back(flag);
      out.push_back(joined);
    } else if (value.is_string()) {
      out.push_back(flag);
      out.push_back(value.get<std::string>());
    } else if (value.is_number_float()) {
      out.push_back(flag);
      out.push_back(format_shortest(value.get<double>()));
    } else if (value.is_number()) {
      out.push_back(flag);
      out.push_back(value.dump());
    } else {
      throw Error(ErrorCode::InvalidArgs, "config key '" + key + "' has an unsupported value");
    }
  }
  return out;
}

Manifest read_manifest(const std::string& path) {
  const std::string text = read_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    const auto j = nlohmann::ordered_json::parse(text);
    Manifest m;
    for (const auto& [k, v] : j.at("manifest").items()) m.set(k, v.get<std::string>());
    return m;
  }
  return Manifest::from_comment_block(text);
}

std::vector<std::string> replay_arguments(const Manifest& manifest, const std::string& out_path) {
  const auto command = manifest.get("command");
  require(command.has_value() && replay_keys().count(*command) > 0, ErrorCode::InvalidArgs,
          "manifest does not describe a replayable command");
  std::vector<std::string> args{*command};
  for (const auto& key : replay_keys().at(*command)) {
    const auto value = manifest.get(key);
    if (!value) continue;
    args.push_back("--" + key);
    if (*value != "true") args.push_back(*value);
  }
  args.push_back("--out");
  args.push_back(out_path);
  return args;
}

int run(const std::vector<std::string>& raw, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  try {
    args = expand_config(raw);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }

  CLI::App app{"Continuous-time quantum-walk search with k marked sites", kToolName};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);
  app.fallthrough();
  int jobs = 1;
  std::string config_unused;
  app.add_option("--jobs", jobs, "Worker threads for parameter sweeps")->check(CLI::Range(1, 1024));
  app.add_option("--config", config_unused, "JSON file whose keys mirror the command-line flags");
  app.footer(std::string("Exit codes: 0 ok, 1 verification failed, 2 invalid input, 3 numerical failure.\n") +
             "Without --out, files go to $" + kOutDirVariable + " if set, else stdout.");

  FidelityArgs fa;
  auto* fid = app.add_subcommand("fidelity", "Fidelity F(t) of the marked string over a time window");
  fid->add_option("--n", fa.n, "Number of spins")->required();
  fid->add_option("--k", fa.k, "Number of marked sites (excitations)")->required();
  fid->add_option("--marked", fa.marked, "Marked sites, 1-based (default 1..k)")->delimiter(',');
  fa.alpha_opt = fid->add_option("--alpha", fa.alpha, "Power-law coupling exponent");
  auto* ata = fid->add_flag("--all-to-all", fa.all_to_all, "Uniform all-to-all couplings (default)");
  fa.alpha_opt->excludes(ata);
  fa.gamma_opt = fid->add_option("--gamma", fa.gamma, "Hopping rate");
  auto* og = fid->add_option("--optimize-gamma", fa.optimize_gamma,
                             "Optimise the hopping rate over lo,hi or auto");
  fa.gamma_opt->excludes(og);
  fid->add_option("--tmax", fa.tmax, "End of the time window (default 10 sqrt(n))");
  fid->add_option("--points", fa.points, "Grid points in the window");
  fid->add_option("--engine", fa.engine, "auto, reduced, sparse, brute-force or both")
      ->check(CLI::IsMember({"auto", "reduced", "sparse", "brute-force", "both"}));
  fid->add_option("--out", fa.out, "Output file");
  fid->add_option("--format", fa.format, "csv or json (default from the file extension)")
      ->check(CLI::IsMember({"csv", "json"}));

  AsymptoticArgs aa;
  auto* asy = app.add_subcommand("asymptotic", "Large-n maximum fidelity table for k = 1..kmax");
  asy->add_option("--kmax", aa.kmax, "Largest k")->check(CLI::Range(1, 1000));
  asy->add_option("--tau-max", aa.tau_max, "End of the rescaled time window t/sqrt(n)");
  asy->add_option("--step", aa.step, "Grid step of the maximum search");
  asy->add_option("--points", aa.points, "Samples per curve in --curves output");
  asy->add_option("--curves", aa.curves, "Also write per-k curves (k,tau,fidelity) here");
  asy->add_option("--out", aa.out, "Output file for the summary table");
  asy->add_option("--format", aa.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  ProtocolArgs pa;
  auto* pro = app.add_subcommand("protocol", "Repeated single-excitation search versus k-excitation search");
  pro->add_option("--k-range", pa.k_range, "k values, e.g. 1:5 or 2,3,4");
  pro->add_option("--n-range", pa.n_range, "n values, e.g. 100,1000,10000 or 20:200:20");
  pro->add_option("--eps-s", pa.eps_s, "Coverage error budget");
  pro->add_option("--eps-r", pa.eps_r, "Repetition error budget");
  pro->add_option("--source", pa.source, "Fidelity inputs: reduced (gamma = 1/n) or asymptotic")
      ->check(CLI::IsMember({"reduced", "asymptotic"}));
  pro->add_option("--out", pa.out, "Output file");
  pro->add_option("--format", pa.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  VerifyArgs va;
  auto* ver = app.add_subcommand("verify", "Run the built-in oracle checks and print a JSON report");
  auto* quick = ver->add_flag("--quick", va.quick, "Small systems only, n <= 8 (default)");
  auto* full = ver->add_flag("--full", va.full, "Systems up to n = 12");
  quick->excludes(full);
  ver->add_option("--seed", va.seed, "Seed for random couplings, times and file choice");
  ver->add_option("--out", va.out, "Report file (default stdout)");

  std::vector<const char*> argv{kToolName};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidationError;
  }

  try {
    if (*fid) return cmd_fidelity(fa, jobs, out, err);
    if (*asy) return cmd_asymptotic(aa, jobs, out, err);
    if (*pro) return cmd_protocol(pa, jobs, out, err);
    if (*ver) return cmd_verify(va, jobs, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.is_numerical() ? kNumericalError : kValidationError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }
  return kValidationError;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + std::min(argc, 1), argv + argc);
  return run(args, out, err);
}

}  // namespace qwsearch::cli
