#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "check_util.hpp"
#include "qbessel/report.hpp"

namespace {

using namespace qbessel;
using Json = nlohmann::ordered_json;

constexpr int kExitPass = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFail = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::optional<double> q;
  double tol = 1e-8;
  TruncationPolicy policy;
  std::string format = "json";
  std::string out;
  std::uint64_t seed = 0;
};

double parse_number(const std::string& key, const std::string& text) {
  if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
  double v = 0;
  const char* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) throw UsageError("parameter '" + key + "': not a number: '" + text + "'");
  return v;
}

// Free-form `--key value` / `--key=value` pairs left over after CLI11 parsing.
ParamMap parse_extras(const std::vector<std::string>& args) {
  ParamMap out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.rfind("--", 0) != 0 || a.size() < 3) throw UsageError("unexpected argument '" + a + "'");
    std::string key = a.substr(2);
    std::string value;
    if (const auto eq = key.find('='); eq != std::string::npos) {
      value = key.substr(eq + 1);
      key = key.substr(0, eq);
    } else {
      if (i + 1 >= args.size()) throw UsageError("missing value for '--" + key + "'");
      value = args[++i];
    }
    out[key] = parse_number(key, value);
  }
  return out;
}

IntRange parse_range(const std::string& name, const std::string& text) {
  const auto colon = text.find(':');
  IntRange r;
  try {
    if (colon == std::string::npos) {
      r.lo = r.hi = static_cast<long long>(parse_number(name, text));
    } else {
      r.lo = static_cast<long long>(parse_number(name, text.substr(0, colon)));
      r.hi = static_cast<long long>(parse_number(name, text.substr(colon + 1)));
    }
  } catch (const UsageError&) {
    throw UsageError("bad range for --" + name + ": '" + text + "' (expected lo:hi)");
  }
  if (r.lo > r.hi) throw UsageError("bad range for --" + name + ": lo > hi");
  return r;
}

std::vector<long long> parse_indices(const std::string& text) {
  std::vector<long long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const double v = parse_number("indices", item);
    if (std::floor(v) != v) throw UsageError("indices must be integers");
    out.push_back(static_cast<long long>(v));
  }
  if (out.empty()) throw UsageError("--indices is empty");
  return out;
}

QBase require_q(const RunConfig& cfg) {
  if (!cfg.q) throw UsageError("missing required option --q");
  return QBase(*cfg.q);
}

// Writes to --out when given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw UsageError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }
  std::ostream& summary() { return file_.is_open() ? std::cout : std::cerr; }

 private:
  std::ofstream file_;
};

// ------------------------------------------------------------------ eval

struct EvalResult {
  Complex value;
  long long terms_used = 0;
  double tail_bound = 0;
};

template <class S>
EvalResult from_series(const SeriesResult<S>& s) {
  return {Complex(s.value), s.terms_used, static_cast<double>(s.tail_bound)};
}

using EvalFn = std::function<EvalResult(detail::Params&, const QBase&, const TruncationPolicy&)>;

Complex complex_arg(detail::Params& p, const std::string& key) {
  return {p.real(key), p.real_or(key + "_im", 0.0)};
}

const std::map<std::string, EvalFn>& eval_registry() {
  static const std::map<std::string, EvalFn> registry = {
      {"little_q_bessel_j",
       [](detail::Params& p, const QBase& q, const TruncationPolicy& pol) {
         return from_series(little_q_bessel_j<Complex>(p.real("alpha"), complex_arg(p, "z"), q, pol));
       }},
      {"little_q_bessel_J",
       [](detail::Params& p, const QBase& q, const TruncationPolicy& pol) {
         return from_series(little_q_bessel_J<Complex>(p.real("alpha"), complex_arg(p, "z"), q, pol));
       }},
      {"little_q_jacobi",
       [](detail::Params& p, const QBase& q, const TruncationPolicy&) {
         const long long n = p.integer("n");
         return EvalResult{little_q_jacobi<double>(n, p.real("x"), p.real("alpha"), p.real("beta"), q), n + 1, 0};
       }},
      {"affine_q_krawtchouk",
       [](detail::Params& p, const QBase& q, const TruncationPolicy&) {
         const long long z = p.integer("z");
         const auto x_arg = QParam<double>::power(-p.real("x"), q.value());
         return EvalResult{affine_q_krawtchouk<double>(z, x_arg, p.real("t"), p.integer("N"), q), z + 1, 0};
       }},
      {"krawtchouk_hat",
       [](detail::Params& p, const QBase& q, const TruncationPolicy&) {
         const long long z = p.integer("z");
         const auto x_arg = QParam<double>::power(-p.real("x"), q.value());
         return EvalResult{krawtchouk_hat<double>(z, x_arg, p.real("t"), p.integer("N"), q), z + 1, 0};
       }},
      {"big_q_bessel",
       [](detail::Params& p, const QBase& q, const TruncationPolicy& pol) {
         return from_series(big_q_bessel<Complex>(complex_arg(p, "lambda"), complex_arg(p, "x"),
                                                  QParam<Complex>(complex_arg(p, "a")), q, pol));
       }},
      {"phi11",
       [](detail::Params& p, const QBase& q, const TruncationPolicy& pol) {
         return from_series(phi11<Complex>(QParam<Complex>(complex_arg(p, "a")), QParam<Complex>(complex_arg(p, "b")), q,
                                           complex_arg(p, "z"), pol));
       }},
      {"phi11_regularized",
       [](detail::Params& p, const QBase& q, const TruncationPolicy& pol) {
         return from_series(phi11_regularized<Complex>(QParam<Complex>(complex_arg(p, "a")),
                                                       QParam<Complex>(complex_arg(p, "b")), q, complex_arg(p, "z"),
                                                       pol));
       }},
      {"qpochhammer",
       [](detail::Params& p, const QBase& q, const TruncationPolicy& pol) {
         const Complex a = complex_arg(p, "a");
         const double n = p.real_or("n", std::numeric_limits<double>::infinity());
         if (std::isinf(n)) {
           const auto r = qpochhammer_infinite<Complex>(QParam<Complex>(a), q.value(), pol);
           return EvalResult{r.value, r.factors, r.tail_bound};
         }
         const long long k = p.integer("n");
         return EvalResult{qpochhammer<Complex>(QParam<Complex>(a), q.value(), PochIndex(k), pol), std::abs(k), 0};
       }},
      {"r_poly",
       [](detail::Params& p, const QBase& q, const TruncationPolicy&) {
         return EvalResult{r_poly<double>(p.integer("l"), p.integer("m"), p.real("nu"), QParam<double>(p.real("x")), q),
                           0, 0};
       }},
      {"c_norm",
       [](detail::Params& p, const QBase& q, const TruncationPolicy&) {
         return EvalResult{c_norm<double>(p.integer("l"), p.integer("m"), p.real("nu"), q), 0, 0};
       }},
      {"c_addition",
       [](detail::Params& p, const QBase& q, const TruncationPolicy&) {
         return EvalResult{c_addition<double>(p.integer("l"), p.integer("r"), p.integer("s"), p.real("nu"), q), 0, 0};
       }},
      {"kernel_delta",
       [](detail::Params& p, const QBase& q, const TruncationPolicy& pol) {
         const auto v = kernel_delta(p.real("nu"), p.integer("x"), p.integer("y"), p.integer("z"), q, pol);
         return EvalResult{v.value, v.n_terms, v.tail_bound};
       }},
  };
  return registry;
}

int cmd_eval(const std::string& name, const ParamMap& extras, const RunConfig& cfg) {
  const QBase q = require_q(cfg);
  const auto& reg = eval_registry();
  const auto it = reg.find(name);
  if (it == reg.end()) {
    std::string known;
    for (const auto& [k, v] : reg) known += (known.empty() ? "" : ", ") + k;
    throw UsageError("unknown function '" + name + "' (known: " + known + ")");
  }
  ParamMap params = extras;
  params["q"] = q.value();
  detail::Params p(params);
  const EvalResult r = it->second(p, q, cfg.policy);
  Sink sink(cfg.out);
  auto& os = sink.stream();
  if (cfg.format == "csv") {
    os << "function,value_re,value_im,terms_used,tail_bound\n"
       << name << ',' << format_double(r.value.real()) << ',' << format_double(r.value.imag()) << ','
       << r.terms_used << ',' << format_double(r.tail_bound) << '\n';
  } else {
    Json j;
    j["function"] = name;
    Json pj = Json::object();
    for (const auto& [k, v] : p.used()) pj[k] = v;
    j["params"] = pj;
    j["value"] = Json::array({r.value.real(), r.value.imag()});
    j["terms_used"] = r.terms_used;
    j["tail_bound"] = std::isfinite(r.tail_bound) ? Json(r.tail_bound) : Json(nullptr);
    os << j.dump(2) << '\n';
  }
  return kExitPass;
}

// ----------------------------------------------------------------- check

IdentityId require_identity(const std::string& name) {
  const auto id = parse_identity(name);
  if (!id) throw UsageError("unknown identity '" + name + "'");
  return *id;
}

void write_reports(const std::vector<IdentityReport>& reports, const RunConfig& cfg) {
  Sink sink(cfg.out);
  if (cfg.format == "csv") {
    write_reports_csv(sink.stream(), reports);
  } else {
    write_reports_json(sink.stream(), reports);
  }
}

bool is_as_printed(IdentityId id) { return id == IdentityId::Prop51 || id == IdentityId::AdditionNInfinity; }

int cmd_check(const std::string& name, int sweep_n, const ParamMap& extras, const RunConfig& cfg) {
  const IdentityId id = require_identity(name);
  const QBase q = require_q(cfg);
  std::vector<IdentityReport> reports;
  if (sweep_n > 0) {
    auto points = sweep_parameters(id, sweep_n, cfg.seed, q.value());
    for (auto& pt : points) {
      for (const auto& [k, v] : extras) pt[k] = v;
    }
    reports = run_sweep(id, points, cfg.policy, cfg.tol);
  } else {
    ParamMap params = extras;
    params["q"] = q.value();
    reports.push_back(check_identity(id, params, cfg.policy, cfg.tol));
  }
  write_reports(reports, cfg);
  if (is_as_printed(id)) {
    std::cerr << "note: " << identity_name(id) << " evaluates the literal formula (as-printed); see README\n";
  }
  for (const auto& r : reports) {
    if (!r.pass) return kExitFail;
  }
  return kExitPass;
}

// ---------------------------------------------------------------- kernel

constexpr double kPositivityFloor = -1e-12;

int cmd_kernel(double nu, const std::string& xs, const std::string& ys, const std::string& zs, const RunConfig& cfg) {
  const QBase q = require_q(cfg);
  const IntRange xr = parse_range("x", xs);
  const IntRange yr = parse_range("y", ys);
  const IntRange zr = parse_range("z", zs);
  const KernelTable t = kernel_table(nu, xr, yr, zr, q, cfg.policy);
  Sink sink(cfg.out);
  if (cfg.format == "csv") {
    write_kernel_csv(sink.stream(), t);
  } else {
    write_kernel_json(sink.stream(), t);
  }
  sink.summary() << "rows=" << t.grid.size() << " min_value=" << format_double(t.min_value)
                 << " symmetry_residual_max=" << format_double(t.symmetry_residual_max) << '\n';
  const bool ok = t.min_value >= kPositivityFloor && t.symmetry_residual_max <= cfg.tol;
  return ok ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------- limits

int cmd_limits(const std::string& prop, const std::string& indices, const ParamMap& extras, const RunConfig& cfg) {
  IdentityId id;
  if (prop == "prop31") {
    id = IdentityId::LimitJacobiBessel;
  } else if (prop == "prop32") {
    id = IdentityId::LimitKrawtchoukBigBessel;
  } else {
    throw UsageError("unknown limit '" + prop + "' (expected prop31 or prop32)");
  }
  if (indices.empty()) throw UsageError("missing required option --indices");
  const QBase q = require_q(cfg);
  ParamMap params = extras;
  params["q"] = q.value();
  const LimitReport r = run_limit_check(id, params, parse_indices(indices), cfg.policy);
  Sink sink(cfg.out);
  if (cfg.format == "csv") {
    write_limit_csv(sink.stream(), r);
  } else {
    write_limit_json(sink.stream(), r);
  }
  const bool ok = r.monotone_tail && r.residuals.back() < cfg.tol;
  return ok ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Little q-Bessel numerics: evaluate functions and certify identities"};
  app.allow_extras();
  app.require_subcommand(1);

  RunConfig cfg;
  double q_value = 0;
  auto* q_opt = app.add_option("--q", q_value, "base q in (0, q_max]");
  app.add_option("--tol", cfg.tol, "pass tolerance")->capture_default_str();
  app.add_option("--eps-term", cfg.policy.eps_term, "negligible-term threshold")->capture_default_str();
  app.add_option("--max-terms", cfg.policy.max_terms, "series term cap")->capture_default_str();
  auto* format_opt = app.add_option("--format", cfg.format, "output format (default: from --out extension, else json)")
                         ->check(CLI::IsMember({"json", "csv"}))
                         ->capture_default_str();
  app.add_option("--out", cfg.out, "output file (default stdout)");
  app.add_option("--seed", cfg.seed, "sweep seed")->capture_default_str();

  std::string eval_fn;
  auto* eval = app.add_subcommand("eval", "evaluate a function: eval NAME --param value ...");
  eval->add_option("function", eval_fn, "function name")->required();

  std::string check_id;
  int check_sweep = 0;
  auto* check = app.add_subcommand("check", "check one identity: check NAME --param value ...");
  check->add_option("identity", check_id, "identity name")->required();
  check->add_option("--sweep", check_sweep, "random sweep size instead of a single point");

  std::string sweep_id;
  int sweep_n = 100;
  auto* sweep = app.add_subcommand("sweep", "random parameter sweep (same as check --sweep N)");
  sweep->add_option("identity", sweep_id, "identity name")->required();
  sweep->add_option("-n,--n", sweep_n, "number of points")->capture_default_str();

  double kernel_nu = 0;
  std::string kx = "0:4";
  std::string ky = "0:4";
  std::string kz = "0:4";
  auto* kernel = app.add_subcommand("kernel", "tabulate the product-formula kernel");
  kernel->add_option("--nu", kernel_nu, "order nu > 0")->required();
  kernel->add_option("--x", kx, "x range lo:hi")->capture_default_str();
  kernel->add_option("--y", ky, "y range lo:hi")->capture_default_str();
  kernel->add_option("--z", kz, "z range lo:hi")->capture_default_str();

  std::string limit_prop;
  std::string limit_indices;
  auto* limits = app.add_subcommand("limits", "limit-transition convergence table: limits prop31|prop32");
  limits->add_option("prop", limit_prop, "prop31 or prop32")->required();
  limits->add_option("--indices", limit_indices, "comma-separated increasing indices");

  for (auto* sub : {eval, check, sweep, kernel, limits}) {
    sub->fallthrough();
    sub->allow_extras();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (q_opt->count() > 0) cfg.q = q_value;
    if (format_opt->count() == 0 && cfg.out.size() > 4 && cfg.out.compare(cfg.out.size() - 4, 4, ".csv") == 0) {
      cfg.format = "csv";
    }
    if (!(cfg.tol > 0)) throw UsageError("--tol must be positive");
    cfg.policy.validate();
    if (cfg.q) (void)QBase(*cfg.q);
    const ParamMap extras = parse_extras(app.remaining());
    if (eval->parsed()) return cmd_eval(eval_fn, extras, cfg);
    if (check->parsed()) return cmd_check(check_id, check_sweep, extras, cfg);
    if (sweep->parsed()) {
      if (sweep_n < 1) throw UsageError("sweep size must be positive");
      return cmd_check(sweep_id, sweep_n, extras, cfg);
    }
    if (kernel->parsed()) {
      if (!extras.empty()) throw UsageError("kernel: unexpected option --" + extras.begin()->first);
      return cmd_kernel(kernel_nu, kx, ky, kz, cfg);
    }
    if (limits->parsed()) return cmd_limits(limit_prop, limit_indices, extras, cfg);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const QError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
