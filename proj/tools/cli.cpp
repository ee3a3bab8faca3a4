#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "entmom/entmom.hpp"
#include "verify_suites.hpp"

namespace entmom::cli {
namespace {

using Json = nlohmann::ordered_json;

const char* const kCsvHeader = "m,n,q,mean,second_moment,variance,method,flags";

/// A rendered result: either a moment report or an error.
struct Row {
  int m = 0;
  int n = 0;
  double q = 0;
  std::optional<MomentReport> report;
  Diagnostics flags;
  bool show_exact = false;
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

std::string join(const Diagnostics& flags, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (i) s += sep;
    s += flags[i];
  }
  return s;
}

std::string method_name(const Row& row) { return row.report ? to_string(row.report->method) : "error"; }

Json row_json(const Row& row) {
  Json j;
  j["m"] = row.m;
  j["n"] = row.n;
  j["q"] = row.q;
  if (row.report) {
    j["mean"] = row.report->e_T;
    j["second_moment"] = row.report->e_T2;
    j["variance"] = row.report->var_T;
  } else {
    j["mean"] = nullptr;
    j["second_moment"] = nullptr;
    j["variance"] = nullptr;
  }
  j["method"] = method_name(row);
  j["flags"] = row.flags;
  if (row.report && row.show_exact && row.report->exact) {
    j["mean_exact"] = to_string(row.report->exact->e_T);
    j["second_moment_exact"] = to_string(row.report->exact->e_T2);
    j["variance_exact"] = to_string(row.report->exact->var_T);
  }
  return j;
}

std::string row_csv(const Row& row) {
  std::ostringstream os;
  os << row.m << ',' << row.n << ',' << format_number(row.q) << ',';
  if (row.report) {
    os << format_number(row.report->e_T) << ',' << format_number(row.report->e_T2) << ','
       << format_number(row.report->var_T);
  } else {
    os << ",,";
  }
  os << ',' << method_name(row) << ',' << csv_field(join(row.flags, ";"));
  return os.str();
}

void row_text(std::ostream& out, const Row& row) {
  const bool vn = row.report && row.report->method == Method::von_neumann;
  out << "dims       m=" << row.m << " n=" << row.n << '\n';
  out << "q          " << format_number(row.q) << (vn ? " (von Neumann entropy S)" : " (Tsallis entropy T)") << '\n';
  out << "method     " << method_name(row) << '\n';
  if (row.report) {
    out << "mean       " << format_number(row.report->e_T) << '\n';
    out << "second     " << format_number(row.report->e_T2) << '\n';
    out << "variance   " << format_number(row.report->var_T) << '\n';
    if (row.show_exact && row.report->exact) {
      out << "exact      mean=" << to_string(row.report->exact->e_T)
          << " second=" << to_string(row.report->exact->e_T2)
          << " variance=" << to_string(row.report->exact->var_T) << '\n';
    }
  }
  out << "flags      " << (row.flags.empty() ? "none" : join(row.flags, "; ")) << '\n';
}

EvalMode parse_mode(const std::string& s) {
  if (s == "float") return EvalMode::floating;
  if (s == "exact") return EvalMode::exact;
  return EvalMode::automatic;
}

Row evaluate(int m, int n, double q, const MomentOptions& opts) {
  Row row{m, n, q, std::nullopt, {}, opts.mode != EvalMode::floating};
  try {
    int dm = m, dn = n;
    if (m > n) {
      std::swap(dm, dn);
      row.flags.push_back("dims_swapped");
    }
    if (q == 1.0 && opts.mode == EvalMode::exact) throw domain_error("exact mode requires a positive integer q >= 2");
    row.report = entropy_moments(Dims(dm, dn), q, opts);
    for (const auto& f : row.report->cancellation_flags) row.flags.push_back(f);
  } catch (const std::exception& e) {
    row.report.reset();
    row.flags.push_back(e.what());
  }
  return row;
}

int default_workers() {
  if (const char* env = std::getenv(kWorkersEnv)) {
    try {
      const int w = std::stoi(env);
      if (w >= 1) return w;
    } catch (const std::exception&) {
    }
  }
  return 1;
}

/// "a", "a..b" or "a,b,c" into a list of integers.
std::vector<int> parse_int_set(const std::string& spec, const std::string& what) {
  std::vector<int> out;
  try {
    const auto dots = spec.find("..");
    if (dots != std::string::npos) {
      const int lo = std::stoi(spec.substr(0, dots));
      const int hi = std::stoi(spec.substr(dots + 2));
      if (lo > hi) throw domain_error(what + " range must be ascending");
      for (int v = lo; v <= hi; ++v) out.push_back(v);
      return out;
    }
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      std::size_t used = 0;
      out.push_back(std::stoi(tok, &used));
      if (used != tok.size()) throw domain_error("bad integer '" + tok + "'");
    }
  } catch (const domain_error&) {
    throw;
  } catch (const std::exception&) {
    throw domain_error("cannot parse " + what + " '" + spec + "' (expected a, a..b or a,b,c)");
  }
  if (out.empty()) throw domain_error(what + " is empty");
  return out;
}

std::vector<double> parse_real_list(const std::string& spec, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw domain_error("cannot parse " + what + " value '" + tok + "'");
    }
  }
  if (out.empty()) throw domain_error(what + " is empty");
  return out;
}

void validate_moment_args(int m, int n, double q) {
  Dims{m, n};
  EntropyOrder order(q);
  if (!order.admits_variance()) throw domain_error("variance requires q > -0.5 (2q > -1)");
}

int cmd_moments(int m, int n, double q, const std::string& format, const std::string& mode, bool no_fast,
                std::ostream& out, std::ostream& err) {
  try {
    validate_moment_args(m, n, q);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  const MomentOptions opts{parse_mode(mode), !no_fast};
  Row row{m, n, q, std::nullopt, {}, opts.mode != EvalMode::floating};
  try {
    row.report = entropy_moments(Dims(m, n), q, opts);
    row.flags = row.report->cancellation_flags;
  } catch (const domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  if (format == "json") {
    out << row_json(row).dump() << '\n';
  } else if (format == "csv") {
    out << kCsvHeader << '\n' << row_csv(row) << '\n';
  } else {
    row_text(out, row);
  }
  return kSuccess;
}

int cmd_sweep(const std::string& m_spec, const std::string& n_spec, const std::string& q_spec,
              const std::string& format, const std::string& mode, int workers, std::ostream& out,
              std::ostream& err) {
  std::vector<int> ms, ns;
  std::vector<double> qs;
  try {
    ms = parse_int_set(m_spec, "--m");
    ns = parse_int_set(n_spec, "--n");
    qs = parse_real_list(q_spec, "--q");
    if (workers < 1) throw domain_error("--workers must be >= 1");
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  std::sort(qs.begin(), qs.end());
  struct Cell {
    int m, n;
    double q;
  };
  std::vector<Cell> cells;
  for (int m : ms)
    for (int n : ns)
      for (double q : qs) cells.push_back({m, n, q});

  const MomentOptions opts{parse_mode(mode), true};
  std::vector<Row> rows(cells.size());
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    const int threads = std::min<int>(workers, static_cast<int>(std::max<std::size_t>(cells.size(), 1)));
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
          rows[i] = evaluate(cells[i].m, cells[i].n, cells[i].q, opts);
        }
      });
    }
  }

  if (format == "json") {
    Json arr = Json::array();
    for (const auto& r : rows) arr.push_back(row_json(r));
    out << arr.dump() << '\n';
  } else if (format == "text") {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i) out << '\n';
      row_text(out, rows[i]);
    }
  } else {
    out << kCsvHeader << '\n';
    for (const auto& r : rows) out << row_csv(r) << '\n';
  }
  return kSuccess;
}

int cmd_verify(const std::string& suite, std::optional<int> m, std::optional<int> n, std::optional<double> q,
               std::uint64_t samples, std::uint64_t seed, int workers, const std::string& format, std::ostream& out,
               std::ostream& err) {
  std::vector<CheckResult> results;
  try {
    if (samples < 10'000) throw domain_error("--samples must be >= 10000");
    if (workers < 1) throw domain_error("--workers must be >= 1");
    const bool all = suite == "all";
    if (all || suite == "closed-forms") {
      auto r = suite_closed_forms();
      results.insert(results.end(), r.begin(), r.end());
    }
    if (all || suite == "quadrature") {
      auto r = suite_quadrature();
      results.insert(results.end(), r.begin(), r.end());
    }
    if (all || suite == "appendix") {
      auto r = suite_appendix();
      results.insert(results.end(), r.begin(), r.end());
    }
    if (all || suite == "limit") {
      auto r = suite_limit();
      results.insert(results.end(), r.begin(), r.end());
    }
    if (all || suite == "degeneracy") {
      auto r = suite_degeneracy();
      results.insert(results.end(), r.begin(), r.end());
    }
    if (suite == "mc") {
      std::vector<McSuiteConfig> configs;
      if (m || n || q) {
        const int mm = m.value_or(2);
        const int nn = n.value_or(std::max(mm, 2));
        const double qq = q.value_or(2.0);
        validate_moment_args(mm, nn, qq);
        configs.push_back({mm, nn, qq, samples, seed, workers});
      } else {
        for (const auto& [mm, nn, qq] : {std::tuple{2, 2, 2.0}, {2, 3, 2.0}, {3, 4, 1.5}, {2, 2, 1.0}}) {
          configs.push_back({mm, nn, qq, samples, seed, workers});
        }
      }
      for (const auto& c : configs) {
        auto r = suite_mc(c);
        results.insert(results.end(), r.begin(), r.end());
      }
    }
  } catch (const domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  const bool ok = std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.pass; });
  if (format == "json") {
    Json arr = Json::array();
    for (const auto& r : results) {
      Json j;
      j["suite"] = r.suite;
      j["check"] = r.name;
      j["value"] = r.value;
      j["reference"] = r.reference;
      j["error"] = r.error;
      j["tolerance"] = r.tolerance;
      j["pass"] = r.pass;
      arr.push_back(std::move(j));
    }
    out << arr.dump() << '\n';
  } else if (format == "csv") {
    out << "suite,check,value,reference,error,tolerance,pass\n";
    for (const auto& r : results) {
      out << r.suite << ',' << csv_field(r.name) << ',' << format_number(r.value) << ','
          << format_number(r.reference) << ',' << format_number(r.error) << ',' << format_number(r.tolerance) << ','
          << (r.pass ? "pass" : "fail") << '\n';
    }
  } else {
    for (const auto& r : results) {
      char line[256];
      std::snprintf(line, sizeof line, "%-4s  %-12s %-52s err=%-10.3g tol=%-8.3g%s", r.pass ? "PASS" : "FAIL",
                    r.suite.c_str(), r.name.c_str(), r.error, r.tolerance, r.absolute ? " (abs)" : "");
      out << line << '\n';
    }
    const auto failed = std::count_if(results.begin(), results.end(), [](const CheckResult& r) { return !r.pass; });
    out << results.size() << " checks, " << failed << " failed\n";
  }
  return ok ? kSuccess : kVerificationFailed;
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact moments of Tsallis and von Neumann entanglement entropy in random pure states", "entmom"};
  app.require_subcommand(1);

  std::string format = "text";
  std::string mode = "auto";
  int m = 0, n = 0;
  double q = 0;
  bool no_fast = false;
  int workers = default_workers();
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 42;

  const std::vector<std::string> formats{"text", "json", "csv"};
  const std::vector<std::string> modes{"auto", "float", "exact"};

  auto* moments = app.add_subcommand("moments", "Mean, second moment and variance of the entropy");
  moments->add_option("--m", m, "Smaller subsystem dimension")->required();
  moments->add_option("--n", n, "Larger subsystem dimension")->required();
  moments->add_option("--q", q, "Tsallis order (1 = von Neumann)")->required();
  moments->add_option("--format", format)->check(CLI::IsMember(formats));
  moments->add_option("--mode", mode)->check(CLI::IsMember(modes));
  moments->add_flag("--no-fast-paths", no_fast, "Always use the general hypergeometric path");

  std::string suite = "all";
  std::optional<int> vm, vn;
  std::optional<double> vq;
  auto* verify = app.add_subcommand("verify", "Cross-check closed forms against independent oracles");
  verify->add_option("--suite", suite)
      ->check(CLI::IsMember({"all", "closed-forms", "quadrature", "appendix", "limit", "degeneracy", "mc"}));
  verify->add_option("--m", vm);
  verify->add_option("--n", vn);
  verify->add_option("--q", vq);
  verify->add_option("--samples", samples);
  verify->add_option("--seed", seed);
  verify->add_option("--workers", workers);
  verify->add_option("--format", format)->check(CLI::IsMember(formats));

  std::string m_spec, n_spec, q_spec;
  auto* sweep = app.add_subcommand("sweep", "Tabulate moments over a grid of (m, n, q)");
  sweep->add_option("--m", m_spec, "a, a..b or a,b,c")->required();
  sweep->add_option("--n", n_spec, "a, a..b or a,b,c")->required();
  sweep->add_option("--q", q_spec, "comma-separated list")->required();
  std::string sweep_format = "csv";
  sweep->add_option("--format", sweep_format)->check(CLI::IsMember(formats));
  sweep->add_option("--mode", mode)->check(CLI::IsMember(modes));
  sweep->add_option("--workers", workers);

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  if (*moments) return cmd_moments(m, n, q, format, mode, no_fast, out, err);
  if (*verify) return cmd_verify(suite, vm, vn, vq, samples, seed, workers, format, out, err);
  return cmd_sweep(m_spec, n_spec, q_spec, sweep_format, mode, workers, out, err);
}

}  // namespace entmom::cli
