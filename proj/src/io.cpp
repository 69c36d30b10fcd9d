#include "chaos/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "chaos/errors.hpp"

namespace chaos::io {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_number(const std::string& s, std::string_view what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InputError("cannot parse " + std::string(what) + " from '" + s + "'");
  }
}

int parse_positive_int(const std::string& s, std::string_view what) {
  const double v = parse_number(s, what);
  if (v < 1 || v != std::floor(v)) throw InputError(std::string(what) + " must be a positive integer");
  return static_cast<int>(v);
}

std::vector<double> number_array(const json& j, std::string_view what) {
  if (!j.is_array()) throw InputError(std::string(what) + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : j) {
    if (!x.is_number()) throw InputError(std::string(what) + " must contain only numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

// key=value pairs after the first ':' of a named target.
std::vector<std::pair<std::string, std::string>> options(std::string_view rest) {
  std::vector<std::pair<std::string, std::string>> out;
  if (trim(rest).empty()) return out;
  for (const auto& item : split(rest, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InputError("expected key=value in target option '" + item + "'");
    out.emplace_back(trim(item.substr(0, eq)), trim(item.substr(eq + 1)));
  }
  return out;
}

LimitTarget target_from_json(const json& j) {
  if (!j.is_object()) throw InputError("inline target must be a JSON object");
  const Flavor flavor = parse_flavor(j.value("flavor", std::string("classical")));
  const double mu0 = j.value("mu0", 0.0);
  std::vector<double> values = j.contains("values") ? number_array(j["values"], "target values")
                                                    : std::vector<double>{};
  std::vector<int> mults;
  if (j.contains("mults")) {
    for (double m : number_array(j["mults"], "target mults")) {
      if (m != std::floor(m)) throw InputError("target mults must be integers");
      mults.push_back(static_cast<int>(m));
    }
  } else {
    mults.assign(values.size(), 1);
  }
  if (mu0 == 0.0 && values.empty()) return LimitTarget::zero_law(flavor);
  return LimitTarget(flavor, mu0, std::move(values), std::move(mults));
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

SymmetricKernel kernel_from_json(const json& j) {
  if (!j.is_object()) throw InputError("kernel must be a JSON object");
  if (j.contains("diag")) {
    const auto d = number_array(j["diag"], "kernel diag");
    return diag_kernel(d);
  }
  if (!j.contains("entries")) throw InputError("kernel needs either \"diag\" or \"entries\"");
  const auto& e = j["entries"];
  if (!e.is_array()) throw InputError("kernel entries must be an array of rows");
  std::vector<std::vector<double>> rows;
  for (const auto& row : e) rows.push_back(number_array(row, "kernel row"));
  if (j.contains("dim")) {
    if (!j["dim"].is_number_integer() || j["dim"].get<long long>() < 0 ||
        static_cast<std::size_t>(j["dim"].get<long long>()) != rows.size())
      throw InputError("kernel dim does not match the number of rows");
  }
  return SymmetricKernel(rows);
}

std::string spectrum_csv(const Spectrum& s) {
  std::ostringstream out;
  out << "index,eigenvalue\n";
  for (std::size_t k = 0; k < s.size(); ++k) out << k << ',' << format_double(s.eigenvalues()[k]) << '\n';
  return out.str();
}

json spectrum_json(const Spectrum& s, const SpectralProfile& profile) {
  return json{{"eigenvalues", s.eigenvalues()},
              {"zero_tol", s.zero_tol()},
              {"rank", profile.rank},
              {"distinct_values", profile.distinct_values},
              {"multiplicities", profile.multiplicities},
              {"a", profile.a()}};
}

std::string cumulants_csv(const CumulantVector& c) {
  std::ostringstream out;
  out << "r,value,flavor\n";
  for (int r = 1; r <= c.r_max(); ++r)
    out << r << ',' << format_double(c[r]) << ',' << to_string(c.flavor()) << '\n';
  return out.str();
}

SpectraSequence sequence_from_json(const json& j) {
  const json* items = &j;
  SpectraSequence seq;
  if (j.is_object()) {
    if (!j.contains("spectra")) throw InputError("sequence object needs a \"spectra\" array");
    items = &j["spectra"];
    if (j.contains("sds")) seq.sds = number_array(j["sds"], "sds");
    if (j.contains("labels")) {
      for (const auto& l : j["labels"]) seq.labels.push_back(l.is_string() ? l.get<std::string>() : l.dump());
    }
  }
  if (!items->is_array() || items->empty()) throw InputError("spectra must be a nonempty array");
  for (const auto& item : *items) {
    if (item.is_object())
      seq.spectra.push_back(eigen_decompose(kernel_from_json(item)));
    else
      seq.spectra.emplace_back(number_array(item, "spectrum"));
  }
  if (!seq.sds.empty() && seq.sds.size() != seq.spectra.size())
    throw InputError("sds length does not match the number of spectra");
  if (seq.labels.empty())
    for (std::size_t i = 0; i < seq.spectra.size(); ++i) seq.labels.push_back(std::to_string(i));
  if (seq.labels.size() != seq.spectra.size())
    throw InputError("labels length does not match the number of spectra");
  return seq;
}

LimitTarget parse_target(std::string_view text) {
  const std::string t = trim(text);
  if (t.empty()) throw InputError("empty target specification");
  if (t.front() == '{') {
    json j;
    try {
      j = json::parse(t);
    } catch (const json::parse_error& e) {
      throw InputError(std::string("malformed target JSON: ") + e.what());
    }
    return target_from_json(j);
  }
  const auto colon = t.find(':');
  const std::string name = t.substr(0, colon);
  const auto opts = options(colon == std::string::npos ? std::string_view{} : std::string_view(t).substr(colon + 1));

  auto get = [&](const std::string& key) -> std::optional<std::string> {
    std::optional<std::string> found;
    for (const auto& [k, v] : opts) {
      if (k != key) throw InputError("unknown option '" + k + "' for target " + name);
      found = v;
    }
    return found;
  };
  if (name == "gaussian" || name == "semicircular") {
    const auto sd = get("sd");
    const double v = sd ? parse_number(*sd, "sd") : 1.0;
    return name == "gaussian" ? LimitTarget::gaussian(v) : LimitTarget::semicircular(v);
  }
  if (name == "chisq" || name == "freepoisson") {
    const auto r = get("r");
    if (!r) throw InputError(name + " target needs r=<positive integer>");
    const int k = parse_positive_int(*r, "r");
    return name == "chisq" ? LimitTarget::centered_chi_square(k) : LimitTarget::centered_free_poisson(k);
  }
  if (name == "tetilla") {
    if (!opts.empty()) throw InputError("tetilla takes no options");
    return LimitTarget::tetilla();
  }
  throw InputError("unknown target '" + name + "'");
}

SecondChaosLaw parse_law(std::string_view text) {
  const std::string t = trim(text);
  const bool key_values = t.rfind("mu0", 0) == 0 || t.rfind("eigs", 0) == 0 || t.rfind("flavor", 0) == 0;
  if (!key_values) {
    const LimitTarget target = parse_target(t);
    return SecondChaosLaw(target.flavor(), target.mu0(), target.expanded_spectrum().eigenvalues());
  }
  double mu0 = 0.0;
  std::vector<double> eigs;
  Flavor flavor = Flavor::classical;
  for (const auto& item : split(t, ';')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InputError("expected key=value in law '" + item + "'");
    const std::string key = trim(item.substr(0, eq));
    const std::string value = trim(item.substr(eq + 1));
    if (key == "mu0") {
      mu0 = parse_number(value, "mu0");
    } else if (key == "eigs") {
      for (const auto& v : split(value, ','))
        if (!v.empty()) eigs.push_back(parse_number(v, "eigenvalue"));
    } else if (key == "flavor") {
      flavor = parse_flavor(value);
    } else {
      throw InputError("unknown law key '" + key + "'");
    }
  }
  return SecondChaosLaw(flavor, mu0, std::move(eigs));
}

json report_json(const CriterionReport& r) {
  auto values_json = [](const ConditionValues& v) {
    return json{{"a", v.a}, {"b", v.b}, {"c", v.c}, {"orders", v.orders}};
  };
  json seq = json::array();
  for (const auto& v : r.sequence_values) seq.push_back(values_json(v));
  const double mult = r.b_multiplier;
  return json{
      {"flavor", std::string(to_string(r.flavor))},
      {"verdict", to_string(r.verdict)},
      {"tol", r.tol},
      {"residual_a", r.residual_a},
      {"residual_b", r.residual_b},
      {"residuals_c", r.residuals_c},
      {"consecutive_orders", r.consecutive_orders},
      {"q_coefficients", r.q.coefficients},
      {"q_degree", r.q.degree()},
      {"target", values_json(r.target_values)},
      {"b_multiplier", mult},
      {"target_b_multiplied", r.target_values.b * mult},
      {"final_b_multiplied", r.sequence_values.empty() ? 0.0 : r.sequence_values.back().b * mult},
      {"trend", json{{"a", r.trend_a}, {"b", r.trend_b}, {"c", r.trend_c}}},
      {"sequence", seq},
  };
}

std::string residual_table_csv(const CriterionReport& r, const std::vector<std::string>& labels) {
  std::ostringstream out;
  out << "n,res_a,res_b";
  for (std::size_t i = 0; i < r.trend_c.size(); ++i) out << ",res_c_" << (i + 1);
  out << '\n';
  for (std::size_t n = 0; n < r.trend_a.size(); ++n) {
    out << (n < labels.size() ? labels[n] : std::to_string(n)) << ',' << format_double(r.trend_a[n])
        << ',' << format_double(r.trend_b[n]);
    for (const auto& t : r.trend_c) out << ',' << format_double(t[n]);
    out << '\n';
  }
  return out.str();
}

json study_json(const QvStudy& s) {
  json j{{"hurst", s.hurst}, {"sizes", s.sizes}, {"cumulants", json::array()}};
  for (std::size_t i = 0; i < s.sizes.size(); ++i) {
    json row{{"n", s.sizes[i]}};
    for (int r = 2; r <= 6; ++r) row["kappa" + std::to_string(r)] = s.cumulant_trajectories[i][r - 2];
    j["cumulants"].push_back(row);
  }
  if (s.report) {
    j["report"] = report_json(*s.report);
    j["verdict"] = to_string(s.report->verdict);
  }
  return j;
}

std::string study_csv(const QvStudy& s) {
  std::ostringstream out;
  out << "n,kappa2,kappa3,kappa4,kappa5,kappa6,res_a,res_b\n";
  for (std::size_t i = 0; i < s.sizes.size(); ++i) {
    out << s.sizes[i];
    for (double k : s.cumulant_trajectories[i]) out << ',' << format_double(k);
    if (s.report)
      out << ',' << format_double(s.report->trend_a[i]) << ',' << format_double(s.report->trend_b[i]);
    else
      out << ",,";
    out << '\n';
  }
  return out.str();
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw InputError("cannot open '" + tmp.string() + "' for writing");
    f << content;
    f.flush();
    if (!f) throw InputError("failed writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw InputError("cannot move output into place at '" + path + "': " + ec.message());
  }
}

}  // namespace chaos::io
