#pragma once

// ncframe-cli: gen, verify, analyze, factorize, partitions, minimize, selftest.
// Exit codes: 0 success / tight, 1 property failure, 2 I/O or parse error,
// 3 invalid arguments.

#include <cstdint>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ncframe/ncframe.hpp"

namespace ncframe::cli {

using nlohmann::json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitProperty = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitArgs = 3;

struct InvalidArgument : Error {
  using Error::Error;
};

/// "2,1", "[2, 1]" or "1".
inline AlgebraSpec parse_algebra(std::string text) {
  std::vector<int> dims;
  for (char& ch : text)
    if (ch == '[' || ch == ']' || ch == ',') ch = ' ';
  std::istringstream in(text);
  int m = 0;
  while (in >> m) dims.push_back(m);
  if (!in.eof() || dims.empty()) throw InvalidArgument("cannot parse algebra '" + text + "'");
  try {
    return AlgebraSpec(std::move(dims));
  } catch (const ShapeError& e) {
    throw InvalidArgument(e.what());
  }
}

namespace detail {

struct Globals {
  double tol = kDefaultTol;
  std::uint64_t seed = 0;
  std::string output = "json";
};

inline void emit(std::ostream& out, const Globals& g, const json& j, const std::string& text) {
  if (g.output == "json")
    out << j.dump(2) << "\n";
  else
    out << text;
}

inline std::string fmt(double x) {
  std::ostringstream s;
  s << std::setprecision(6) << x;
  return s.str();
}

inline std::string tightness_text(const TightnessReport& r) {
  return std::string(r.is_tight ? "tight" : "not tight") + "  b=" + fmt(r.b) + "  residual=" + fmt(r.residual) + "\n";
}

inline std::string partition_text(const Partition& p) {
  std::string s = "{";
  for (std::size_t b = 0; b < p.blocks().size(); ++b) {
    if (b) s += " | ";
    for (std::size_t t = 0; t < p.blocks()[b].size(); ++t) s += (t ? "," : "") + std::to_string(p.blocks()[b][t] + 1);
  }
  return s + "}";
}

inline void write_or_print(const std::optional<std::string>& path, const json& j, std::ostream& out) {
  if (path)
    io::write_json_file(*path, j);
  else
    out << j.dump(2) << "\n";
}

inline int cmd_gen(const Globals& g, const std::string& algebra, std::size_t k, std::size_t n, double b,
                   const std::optional<std::string>& out_path, std::ostream& out, std::ostream& err) {
  const auto spec = parse_algebra(algebra);
  if (k < n || n == 0) throw InvalidArgument("gen requires k >= n >= 1");
  if (!(b > 0.0)) throw InvalidArgument("gen requires b > 0");
  const auto frame = random_tight_frame(spec, k, n, b, g.seed);
  const auto report = check_tight(frame, g.tol);
  const json meta = {{"generator", "normal-form"}, {"seed", g.seed}, {"b", b}};
  write_or_print(out_path, io::encode_frame_file(frame, meta), out);
  emit(out_path ? out : err, g, io::encode_tightness(report), tightness_text(report));
  return kExitOk;
}

inline int cmd_verify(const Globals& g, const std::string& in_path, std::ostream& out) {
  const auto frame = io::read_frame_file(in_path);
  const auto report = check_tight(frame, g.tol);
  emit(out, g, io::encode_tightness(report), tightness_text(report));
  return report.is_tight ? kExitOk : kExitProperty;
}

inline json block_report(const Frame& f, const IndexSet& block, double b, double tol, bool divisible) {
  const auto sub = restrict(f, block);
  const auto p = range_projection(sub, tol);
  json idx = json::array();
  for (std::size_t i : block) idx.push_back(i + 1);
  return {{"indices", idx},
          {"size", block.size()},
          {"b", b},
          {"tightness_residual", matrix_norm(frame_operator(sub) - Complex(b) * p)},
          {"commutation_residual", commutation_residual(f, block)},
          {"divisible", divisible}};
}

inline int cmd_analyze(const Globals& g, const std::string& in_path, std::ostream& out) {
  const auto frame = io::read_frame_file(in_path);
  const auto tight = check_tight(frame, g.tol);
  if (!tight.is_tight) {
    emit(out, g, {{"tightness", io::encode_tightness(tight)}}, tightness_text(tight));
    return kExitProperty;
  }
  const auto strict = is_spherical(frame, g.tol, SphericalMode::strict);
  const auto equal = is_spherical(frame, g.tol, SphericalMode::equal_norm);
  const auto cls = classify_sigma(frame, g.tol);
  json blocks = json::array();
  for (std::size_t i = 0; i < cls.sigma.blocks().size(); ++i)
    blocks.push_back(block_report(frame, cls.sigma.blocks()[i], tight.b, g.tol, cls.divisibility.block_ok[i]));
  const json report = {{"tightness", io::encode_tightness(tight)},
                       {"spherical", {io::encode_spherical(strict, SphericalMode::strict),
                                      io::encode_spherical(equal, SphericalMode::equal_norm)}},
                       {"k", frame.k()},
                       {"n", frame.n()},
                       {"d", cls.divisibility.d},
                       {"k_prime", cls.divisibility.k_prime},
                       {"partition", io::encode_partition(cls.sigma)},
                       {"blocks", blocks},
                       {"divisibility", cls.divisibility.block_ok},
                       {"in_family", cls.in_family}};
  std::string text = tightness_text(tight) + "strict spherical: " + (strict.spherical ? "yes" : "no") +
                     "\nsigma = " + partition_text(cls.sigma) + "\nd=" + std::to_string(cls.divisibility.d) +
                     " k'=" + std::to_string(cls.divisibility.k_prime) +
                     " in P(k,k'): " + (cls.in_family ? "yes" : "no") + "\n";
  emit(out, g, report, text);
  return kExitOk;
}

inline int cmd_factorize(const Globals& g, const std::string& in_path, const std::optional<std::string>& out_path,
                         std::ostream& out) {
  const auto frame = io::read_frame_file(in_path);
  Factorization fac;
  try {
    fac = factorize(frame, g.tol);
  } catch (const FactorizationError& e) {
    emit(out, g, {{"error", "not tight"}, {"residual", e.residual}}, std::string(e.what()) + "\n");
    return kExitProperty;
  }
  const auto id = AMatrix::identity(frame.spec(), frame.k());
  const double unitarity = matrix_norm(fac.u * adjoint_matrix(fac.u) - id);
  if (out_path) io::write_json_file(*out_path, io::encode_factorization(fac));
  json summary = {{"b", fac.b}, {"reconstruction_residual", fac.reconstruction_residual}, {"unitarity_residual", unitarity}};
  if (!out_path) summary["U"] = io::encode_matrix(fac.u);
  emit(out, g, summary,
       "b=" + fmt(fac.b) + "  reconstruction residual=" + fmt(fac.reconstruction_residual) +
           "  unitarity residual=" + fmt(unitarity) + "\n");
  return kExitOk;
}

inline int cmd_partitions(const Globals& g, std::size_t k, std::size_t kprime, bool count_only, std::ostream& out) {
  if (k == 0 || kprime == 0 || k % kprime != 0) throw InvalidArgument("kprime must divide k");
  const auto parts = enumerate_partitions(k, kprime);
  json j = {{"k", k}, {"k_prime", kprime}, {"count", parts.size()}};
  std::string text;
  if (!count_only) {
    json list = json::array();
    for (const auto& p : parts) {
      list.push_back(io::encode_partition(p));
      text += partition_text(p) + "\n";
    }
    j["partitions"] = list;
  }
  text += "count " + std::to_string(parts.size()) + "\n";
  emit(out, g, j, text);
  return kExitOk;
}

struct MinimizeArgs {
  std::string algebra = "1";
  std::size_t k = 0;
  std::size_t n = 0;
  double step_size = 0.05;
  std::size_t max_iters = 20000;
  double tight_tol = 1e-8;
  std::optional<double> radius;
  std::optional<std::string> out_path;
  std::optional<std::string> trace_path;
};

inline int cmd_minimize(const Globals& g, const MinimizeArgs& a, std::ostream& out) {
  const auto spec = parse_algebra(a.algebra);
  if (a.n == 0 || a.k < a.n) throw InvalidArgument("minimize requires k >= n >= 1");
  if (!(a.step_size > 0.0) || !(a.tight_tol > 0.0) || a.max_iters == 0 || (a.radius && !(*a.radius > 0.0)))
    throw InvalidArgument("step size, tolerance, iteration budget and radius must be positive");
  OptimizerConfig config;
  config.step_size = a.step_size;
  config.max_iters = a.max_iters;
  config.tight_tol = a.tight_tol;
  config.seed = g.seed;
  config.radius = a.radius;
  const auto trace = minimize(spec, a.k, a.n, config);
  const auto sph = is_spherical(trace.frame, 1e-9);
  const json meta = {{"generator", "minimize"}, {"seed", g.seed}, {"radius", trace.radius}};
  if (a.out_path) io::write_json_file(*a.out_path, io::encode_frame_file(trace.frame, meta));
  if (a.trace_path) io::write_json_file(*a.trace_path, io::encode_trace(trace));
  json summary = {{"converged", trace.converged},
                  {"final_residual", trace.final_residual},
                  {"accepted_steps", trace.iterates.empty() ? 0 : trace.iterates.size() - 1},
                  {"final_potential", trace.iterates.empty() ? 0.0 : trace.iterates.back().potential},
                  {"radius", trace.radius},
                  {"strict_spherical", sph.spherical}};
  if (trace.failed) summary["failure"] = trace.failure;
  emit(out, g, summary,
       std::string(trace.converged ? "converged" : "not converged") + "  residual=" + fmt(trace.final_residual) +
           "  steps=" + std::to_string(trace.iterates.size() ? trace.iterates.size() - 1 : 0) + "\n");
  return trace.converged ? kExitOk : kExitProperty;
}

inline int cmd_selftest(const Globals& g, const std::string& scale, bool inject_fault, std::ostream& out) {
  selftest::Options opt;
  opt.scale = scale == "full" ? selftest::Scale::full : selftest::Scale::quick;
  opt.tol = g.tol;
  opt.seed = g.seed;
  opt.inject_fault = inject_fault;
  const auto summary = selftest::run_all(opt);
  std::string text;
  for (const auto& s : summary.suites)
    text += std::string(s.passed ? "PASS " : "FAIL ") + s.name + "  checks=" + std::to_string(s.checks) +
            "  " + fmt(s.seconds) + "s\n";
  emit(out, g, summary.to_json(), text);
  return summary.passed ? kExitOk : kExitProperty;
}

}  // namespace detail

/// Runs one command line (program name excluded) and returns the exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tight frames over finite-dimensional C*-algebras", "ncframe-cli"};
  app.require_subcommand(1);
  app.fallthrough();
  detail::Globals g;
  app.add_option("--tol", g.tol, "numerical tolerance")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--output", g.output, "output format")->check(CLI::IsMember({"json", "text"}));

  std::string algebra = "1";
  std::size_t k = 0, n = 0, kprime = 0;
  double b = 1.0;
  std::string in_path;
  std::optional<std::string> out_path;
  bool count_only = false;
  std::string scale = "quick";
  bool inject_fault = false;
  detail::MinimizeArgs margs;

  auto* gen = app.add_subcommand("gen", "sample a tight frame sqrt(b) W U");
  gen->add_option("--algebra", algebra, "block sizes, e.g. 2,1")->required();
  gen->add_option("--k", k)->required();
  gen->add_option("--n", n)->required();
  gen->add_option("--b", b);
  gen->add_option("--out", out_path);

  auto* verify = app.add_subcommand("verify", "test F F* = b I");
  verify->add_option("input", in_path)->required();

  auto* analyze = app.add_subcommand("analyze", "ortho-decomposition report");
  analyze->add_option("input", in_path)->required();

  auto* fact = app.add_subcommand("factorize", "recover b and U with F = sqrt(b) W U");
  fact->add_option("input", in_path)->required();
  fact->add_option("--out", out_path);

  auto* parts = app.add_subcommand("partitions", "list P(k, k')");
  parts->add_option("--k", k)->required();
  parts->add_option("--kprime", kprime)->required();
  parts->add_flag("--count-only", count_only);

  auto* mini = app.add_subcommand("minimize", "frame-potential descent over strict-spherical frames");
  mini->add_option("--algebra", margs.algebra);
  mini->add_option("--k", margs.k)->required();
  mini->add_option("--n", margs.n)->required();
  mini->add_option("--step-size", margs.step_size);
  mini->add_option("--max-iters", margs.max_iters);
  mini->add_option("--tight-tol", margs.tight_tol);
  mini->add_option("--radius", margs.radius);
  mini->add_option("--out", margs.out_path);
  mini->add_option("--trace-out", margs.trace_path);

  auto* self = app.add_subcommand("selftest", "built-in property suites");
  self->add_option("--scale", scale)->check(CLI::IsMember({"quick", "full"}));
  self->add_flag("--inject-fault", inject_fault, "corrupt one Gram evaluation (debug)");

  std::vector<std::string> argv_store{"ncframe-cli"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitArgs;
  }

  try {
    if (*gen) return detail::cmd_gen(g, algebra, k, n, b, out_path, out, err);
    if (*verify) return detail::cmd_verify(g, in_path, out);
    if (*analyze) return detail::cmd_analyze(g, in_path, out);
    if (*fact) return detail::cmd_factorize(g, in_path, out_path, out);
    if (*parts) return detail::cmd_partitions(g, k, kprime, count_only, out);
    if (*mini) return detail::cmd_minimize(g, margs, out);
    if (*self) return detail::cmd_selftest(g, scale, inject_fault, out);
  } catch (const InvalidArgument& e) {
    err << "invalid arguments: " << e.what() << "\n";
    return kExitArgs;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitProperty;
  }
  return kExitArgs;
}

}  // namespace ncframe::cli
