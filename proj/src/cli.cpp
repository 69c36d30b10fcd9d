#include "chaos/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "chaos/criterion.hpp"
#include "chaos/cumulant.hpp"
#include "chaos/errors.hpp"
#include "chaos/io.hpp"
#include "chaos/law.hpp"
#include "chaos/process.hpp"
#include "chaos/spectral.hpp"

namespace chaos::cli {

namespace {

using nlohmann::json;

json read_json_file(const std::string& path, std::string_view what) {
  if (path.empty()) throw InputError(std::string(what) + " path is required");
  std::ifstream f(path);
  if (!f) throw InputError("cannot open " + std::string(what) + " file '" + path + "'");
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw InputError("malformed JSON in '" + path + "': " + e.what());
  }
}

std::string default_format(const std::string& command) {
  if (command == "criterion" || command == "fbm" || command == "transfer") return "json";
  return "csv";
}

struct Output {
  Output(std::string text = {}) : body(std::move(text)) {}
  std::string body;
  bool precision_warning = false;
  std::string warning;
};

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::uint64_t require_seed(const ExperimentConfig& c) {
  if (!c.seed) throw InputError("command '" + c.command + "' is randomized and requires --seed");
  return *c.seed;
}

std::vector<double> parse_grid(const std::string& grid) {
  std::vector<double> parts;
  std::stringstream ss(grid);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError("grid must be lo:hi:step, got '" + grid + "'");
    }
  }
  if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0])
    throw InputError("grid must be lo:hi:step with step > 0 and hi >= lo, got '" + grid + "'");
  std::vector<double> xs;
  const auto count = static_cast<std::size_t>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9)) + 1;
  for (std::size_t i = 0; i < count; ++i) xs.push_back(parts[0] + static_cast<double>(i) * parts[2]);
  return xs;
}

Output cmd_spectrum(const ExperimentConfig& c, const std::string& format) {
  const Spectrum s = eigen_decompose(io::kernel_from_json(read_json_file(c.kernel_path, "kernel")), c.zero_tol);
  if (format == "csv") return {io::spectrum_csv(s)};
  return {dump(io::spectrum_json(s, spectral_profile(s, c.cluster_tol)))};
}

Output cmd_cumulants(const ExperimentConfig& c, const std::string& format) {
  CumulantVector k = [&] {
    if (!c.law.empty()) {
      const auto law = io::parse_law(c.law);
      if (c.flavor.empty()) return law.cumulants(c.r_max);
      // an explicit --flavor overrides the flavor written in the law
      return SecondChaosLaw(parse_flavor(c.flavor), law.mu0(), law.eigenvalues()).cumulants(c.r_max);
    }
    const Spectrum s = eigen_decompose(io::kernel_from_json(read_json_file(c.kernel_path, "kernel")), c.zero_tol);
    return cumulants(c.flavor.empty() ? Flavor::classical : parse_flavor(c.flavor), s, c.sd, c.r_max);
  }();
  if (format == "csv") return {io::cumulants_csv(k)};
  json values = json::array();
  for (int r = 1; r <= k.r_max(); ++r) values.push_back(k[r]);
  return {dump(json{{"flavor", std::string(to_string(k.flavor()))}, {"r_max", k.r_max()}, {"values", values}})};
}

Output cmd_criterion(const ExperimentConfig& c, const std::string& format) {
  const auto seq = io::sequence_from_json(read_json_file(c.spectra_path, "spectra"));
  if (c.target.empty()) throw InputError("criterion needs --target");
  const LimitTarget target = io::parse_target(c.target);
  const auto report = assess_sequence(seq.spectra, seq.sds, target, c.tol, c.start_order);
  if (format == "csv") return {io::residual_table_csv(report, seq.labels)};
  json j = io::report_json(report);
  j["labels"] = seq.labels;
  return {dump(j)};
}

Output cmd_density(const ExperimentConfig& c, const std::string& format) {
  if (c.law.empty()) throw InputError("density needs --law");
  if (c.grid.empty()) throw InputError("density needs --grid lo:hi:step");
  const SecondChaosLaw law = io::parse_law(c.law);
  const auto xs = parse_grid(c.grid);
  Output o;
  std::ostringstream csv;
  json rows = json::array();
  csv << "x,pdf,cdf\n";
  int flagged = 0;
  for (double x : xs) {
    const auto p = pdf(law, x);
    const auto f = cdf(law, x);
    if (p.precision_warning || f.precision_warning) ++flagged;
    csv << io::format_double(x) << ',' << io::format_double(p.value) << ',' << io::format_double(f.value) << '\n';
    rows.push_back(json{{"x", x}, {"pdf", p.value}, {"cdf", f.value},
                        {"precision_warning", p.precision_warning || f.precision_warning}});
  }
  if (flagged > 0) {
    o.precision_warning = true;
    o.warning = std::to_string(flagged) + " grid points hit the inversion truncation cap";
  }
  o.body = format == "csv" ? csv.str() : dump(json{{"grid", rows}});
  return o;
}

Output cmd_simulate(const ExperimentConfig& c, const std::string& format) {
  if (c.law.empty()) throw InputError("simulate needs --law");
  const auto seed = require_seed(c);
  const SecondChaosLaw law = io::parse_law(c.law);
  Rng rng(seed);
  const auto draws = sample_classical(law, c.samples, rng);
  if (format == "csv") {
    std::string body;
    for (double x : draws) body += io::format_double(x) + '\n';
    return {body};
  }
  json j{{"seed", seed}, {"samples", draws}};
  if (draws.size() >= 40) {
    const auto k = empirical_cumulants(draws, 4);
    j["empirical_cumulants"] = {k[1], k[2], k[3], k[4]};
  }
  return {dump(j)};
}

Output cmd_free_sim(const ExperimentConfig& c, const std::string& format) {
  if (c.law.empty()) throw InputError("free-sim needs --law");
  const auto seed = require_seed(c);
  const SecondChaosLaw parsed = io::parse_law(c.law);
  const SecondChaosLaw law(Flavor::free, parsed.mu0(), parsed.eigenvalues());
  Rng rng(seed);
  const auto ev = sample_free_spectrum(law, c.dim, rng);
  if (format == "csv") {
    std::string body;
    for (double x : ev) body += io::format_double(x) + '\n';
    return {body};
  }
  const auto empirical = empirical_moments(ev, 6);
  const auto expected = moments_from_free_cumulants(law.cumulants(6));
  return {dump(json{{"seed", seed},
                    {"dim", c.dim},
                    {"eigenvalues", ev},
                    {"empirical_moments", empirical.values()},
                    {"free_moments", expected.values()}})};
}

Output cmd_fbm(const ExperimentConfig& c, const std::string& format) {
  if (c.sizes.empty()) throw InputError("fbm needs --sizes");
  std::optional<LimitTarget> target;
  if (!c.target.empty()) target = io::parse_target(c.target);
  const auto study = qv_study(c.hurst, c.sizes, target, c.tol);
  if (format == "csv") return {io::study_csv(study)};
  return {dump(io::study_json(study))};
}

Output cmd_transfer(const ExperimentConfig& c, const std::string& format) {
  const auto seq = io::sequence_from_json(read_json_file(c.spectra_path, "spectra"));
  if (c.target.empty()) throw InputError("transfer needs --target (classical side)");
  const auto result = transfer_check(seq.spectra, c.lambda0, io::parse_target(c.target), c.tol);
  if (format == "csv") {
    std::ostringstream csv;
    csv << "flavor,verdict,res_a,res_b\n";
    for (const auto* r : {&result.classical, &result.free})
      csv << to_string(r->flavor) << ',' << to_string(r->verdict) << ',' << io::format_double(r->residual_a)
          << ',' << io::format_double(r->residual_b) << '\n';
    return {csv.str()};
  }
  return {dump(json{{"classical", io::report_json(result.classical)},
                    {"free", io::report_json(result.free)},
                    {"agree", result.agree}})};
}

Output dispatch(const ExperimentConfig& c) {
  const std::string format = c.format.empty() ? default_format(c.command) : c.format;
  if (format != "json" && format != "csv") throw InputError("--format must be json or csv");
  if (c.command == "spectrum") return cmd_spectrum(c, format);
  if (c.command == "cumulants") return cmd_cumulants(c, format);
  if (c.command == "criterion") return cmd_criterion(c, format);
  if (c.command == "density") return cmd_density(c, format);
  if (c.command == "simulate") return cmd_simulate(c, format);
  if (c.command == "free-sim") return cmd_free_sim(c, format);
  if (c.command == "fbm") return cmd_fbm(c, format);
  if (c.command == "transfer") return cmd_transfer(c, format);
  throw InputError("unknown command '" + c.command + "'");
}

std::string one_line(std::string s) {
  for (char& ch : s)
    if (ch == '\n' || ch == '\r') ch = ' ';
  return s;
}

}  // namespace

void apply_config(ExperimentConfig& c, const json& j) {
  if (!j.is_object()) throw InputError("config file must hold a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "command") c.command = v.get<std::string>();
      else if (key == "kernel") c.kernel_path = v.get<std::string>();
      else if (key == "spectra") c.spectra_path = v.get<std::string>();
      else if (key == "target") c.target = v.is_string() ? v.get<std::string>() : v.dump();
      else if (key == "law") c.law = v.get<std::string>();
      else if (key == "grid") c.grid = v.get<std::string>();
      else if (key == "sizes") c.sizes = v.get<std::vector<std::size_t>>();
      else if (key == "hurst") c.hurst = v.get<double>();
      else if (key == "lambda0") c.lambda0 = v.get<double>();
      else if (key == "n") c.samples = v.get<std::size_t>();
      else if (key == "dim") c.dim = v.get<std::size_t>();
      else if (key == "rmax") c.r_max = v.get<int>();
      else if (key == "flavor") c.flavor = v.get<std::string>();
      else if (key == "sd") c.sd = v.get<double>();
      else if (key == "start_order") c.start_order = v.get<int>();
      else if (key == "zero_tol") c.zero_tol = v.get<double>();
      else if (key == "cluster_tol") c.cluster_tol = v.get<double>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "tol") c.tol = v.get<double>();
      else if (key == "out") c.out = v.get<std::string>();
      else if (key == "strict") c.strict = v.get<bool>();
      else if (key == "format") c.format = v.get<std::string>();
      else throw InputError("unknown config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("bad config value: ") + e.what());
  }
}

ExitCode run(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const Output o = dispatch(config);
    if (config.out.empty())
      out << o.body;
    else
      io::write_atomic(config.out, o.body);
    if (o.precision_warning) {
      err << "warning: " << one_line(o.warning) << '\n';
      if (config.strict) return ExitCode::precision_warning;
    }
    return ExitCode::ok;
  } catch (const std::exception& e) {
    err << "error: " << one_line(e.what()) << '\n';
    return ExitCode::input_error;
  }
}

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Second-chaos limit laws: spectra, cumulants, convergence criterion, simulation"};
  app.require_subcommand(1);

  ExperimentConfig c;
  std::uint64_t seed = 0;
  std::string config_path;
  std::string sizes_text;
  int start_order = 0;
  double zero_tol = 0.0;
  double cluster_tol = 0.0;

  std::vector<CLI::Option*> seed_opts, start_opts, zero_opts, cluster_opts;

  auto common = [&](CLI::App* sub) {
    seed_opts.push_back(sub->add_option("--seed", seed, "RNG seed (required by simulate, free-sim)"));
    sub->add_option("--tol", c.tol, "criterion tolerance");
    sub->add_option("--out", c.out, "output path (default: standard output)");
    sub->add_flag("--strict", c.strict, "exit 2 on numerical-precision warnings");
    sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--config", config_path, "JSON config overriding flags");
  };

  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues of a kernel file");
  auto* cumul = app.add_subcommand("cumulants", "classical or free cumulants");
  auto* crit = app.add_subcommand("criterion", "finite-cumulant criterion on a spectra sequence");
  auto* density = app.add_subcommand("density", "pdf/cdf table of a classical law");
  auto* simulate = app.add_subcommand("simulate", "exact samples of a classical law");
  auto* freesim = app.add_subcommand("free-sim", "GUE matrix model of a free law");
  auto* fbm = app.add_subcommand("fbm", "fBm quadratic-variation study");
  auto* transfer = app.add_subcommand("transfer", "classical vs free criterion agreement");
  for (auto* s : {spectrum, cumul, crit, density, simulate, freesim, fbm, transfer}) common(s);

  for (auto* s : {spectrum, cumul}) {
    s->add_option("--kernel", c.kernel_path, "kernel JSON file");
    zero_opts.push_back(s->add_option("--zero-tol", zero_tol, "numerical-zero threshold"));
  }
  cluster_opts.push_back(spectrum->add_option("--cluster-tol", cluster_tol, "eigenvalue clustering tolerance"));
  cumul->add_option("--law", c.law, "law expression instead of a kernel");
  cumul->add_option("--flavor", c.flavor, "classical or free")->check(CLI::IsMember({"classical", "free"}));
  cumul->add_option("--rmax", c.r_max, "highest order");
  cumul->add_option("--sd", c.sd, "Gaussian/semicircular component size");

  for (auto* s : {crit, transfer}) {
    s->add_option("--spectra", c.spectra_path, "spectra sequence JSON file");
    s->add_option("--target", c.target, "limit target");
  }
  start_opts.push_back(crit->add_option("--start-order", start_order, "first order of the consecutive window"));
  transfer->add_option("--lambda0", c.lambda0, "size of the Gaussian/semicircular part");

  for (auto* s : {density, simulate, freesim}) s->add_option("--law", c.law, "law expression");
  density->add_option("--grid", c.grid, "lo:hi:step");
  simulate->add_option("--n", c.samples, "number of draws");
  freesim->add_option("--dim", c.dim, "matrix dimension");

  fbm->add_option("--hurst", c.hurst, "Hurst parameter in (0,1)");
  fbm->add_option("--sizes", sizes_text, "comma-separated increasing sizes");
  fbm->add_option("--target", c.target, "limit target (gaussian)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << one_line(e.what()) << '\n';
    return static_cast<int>(ExitCode::input_error);
  }

  try {
    for (auto* s : app.get_subcommands()) c.command = s->get_name();
    auto any = [](const std::vector<CLI::Option*>& opts) {
      for (auto* o : opts)
        if (o->count() > 0) return true;
      return false;
    };
    if (any(seed_opts)) c.seed = seed;
    if (any(start_opts)) c.start_order = start_order;
    if (any(zero_opts)) c.zero_tol = zero_tol;
    if (any(cluster_opts)) c.cluster_tol = cluster_tol;
    if (!sizes_text.empty()) {
      std::stringstream ss(sizes_text);
      std::string item;
      while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        long long v = 0;
        try {
          v = std::stoll(item, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != item.size() || v < 1) throw InputError("--sizes must be positive integers, got '" + item + "'");
        c.sizes.push_back(static_cast<std::size_t>(v));
      }
    }
    if (!config_path.empty()) apply_config(c, read_json_file(config_path, "config"));
  } catch (const std::exception& e) {
    err << "error: " << one_line(e.what()) << '\n';
    return static_cast<int>(ExitCode::input_error);
  }
  return static_cast<int>(run(c, out, err));
}

}  // namespace chaos::cli
