#pragma once

// Self-test suites shared by the CLI `selftest` command: the exhaustive
// commutation/splitting equivalence scan, the divisibility corpus and the
// C*-identity properties.

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "ncframe/algebra.hpp"
#include "ncframe/corpus.hpp"
#include "ncframe/decomposition.hpp"
#include "ncframe/frames.hpp"
#include "ncframe/json_io.hpp"

namespace ncframe::selftest {

using nlohmann::json;

enum class Scale { quick, full };

struct SuiteResult {
  std::string name;
  bool passed = true;
  std::size_t checks = 0;
  json failures = json::array();
  double seconds = 0.0;
};

struct Options {
  Scale scale = Scale::quick;
  double tol = kDefaultTol;
  std::uint64_t seed = 0;
  bool inject_fault = false;  // corrupts one Gram evaluation in the equivalence scan
};

namespace detail {

class Stopwatch {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline json one_based(const IndexSet& set) {
  json out = json::array();
  for (std::size_t i : set) out.push_back(i + 1);
  return out;
}

/// Perturbs one entry coupling the first row to the last column.
inline Frame faulty_copy(const Frame& f) {
  AMatrix m = f.matrix;
  auto entry = m.entry(0, f.k() - 1);
  m.set_entry(0, f.k() - 1, entry + AlgebraElement::scalar(f.spec(), 1e-3));
  return Frame(std::move(m));
}

}  // namespace detail

/// Every subset I of every corpus frame: commutation side and splitting side
/// must agree.
inline SuiteResult splitting_suite(const Options& opt) {
  detail::Stopwatch watch;
  SuiteResult result{"splitting-equivalence"};
  const std::size_t max_k = opt.scale == Scale::quick ? 6 : 8;
  bool fault_pending = opt.inject_fault;
  for (const auto& spec : {AlgebraSpec{1}, AlgebraSpec{2}, AlgebraSpec{1, 1}}) {
    for (const auto& item : corpus::splitting_corpus(spec, max_k, opt.seed)) {
      const auto& f = item.frame;
      const auto tight = check_tight(f, opt.tol);
      if (!tight.is_tight) {
        result.passed = false;
        result.failures.push_back({{"frame", item.label}, {"reason", "corpus frame not tight"}});
        continue;
      }
      const bool corrupt = fault_pending && item.label.find("block") != std::string::npos;
      if (corrupt) fault_pending = false;
      const Frame lhs_frame = corrupt ? detail::faulty_copy(f) : f;
      const std::size_t k = f.k();
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
        IndexSet subset;
        for (std::size_t i = 0; i < k; ++i)
          if (mask & (std::uint64_t{1} << i)) subset.push_back(i);
        double comm = 0.0;
        const bool lhs = splitting_commutes(lhs_frame, subset, tight.b, opt.tol, &comm);
        const bool rhs = splitting_holds(f, subset, tight.b, opt.tol);
        ++result.checks;
        if (lhs != rhs) {
          result.passed = false;
          if (result.failures.size() < 50)
            result.failures.push_back({{"frame", item.label},
                                       {"subset", detail::one_based(subset)},
                                       {"commutes", lhs},
                                       {"splits", rhs},
                                       {"commutation_residual", comm}});
        }
      }
    }
  }
  result.seconds = watch.seconds();
  return result;
}

/// Block sizes of ortho-decompositions of strict-spherical tight frames are
/// multiples of k / gcd(k, n).
inline SuiteResult divisibility_suite(const Options& opt, std::size_t per_spec) {
  detail::Stopwatch watch;
  SuiteResult result{"divisibility"};
  const double tol = std::max(opt.tol, 1e-7);  // optimizer stops at residual 1e-8
  for (const auto& spec : {AlgebraSpec{1}, AlgebraSpec{2}}) {
    for (const auto& item : corpus::spherical_corpus(spec, per_spec, opt.seed)) {
      ++result.checks;
      const auto sph = is_spherical(item.frame, 1e-7);
      const auto cls = classify_sigma(item.frame, tol);
      if (!sph.spherical || !cls.in_family) {
        result.passed = false;
        result.failures.push_back({{"frame", item.label},
                                   {"spherical", sph.spherical},
                                   {"partition", io::encode_partition(cls.sigma)},
                                   {"k_prime", cls.divisibility.k_prime},
                                   {"counterexample", io::encode_frame_file(item.frame)}});
      }
    }
  }
  result.seconds = watch.seconds();
  return result;
}

/// C*-identity, submultiplicativity, involution and trace cyclicity.
inline SuiteResult cstar_suite(const Options& opt, std::size_t samples) {
  detail::Stopwatch watch;
  SuiteResult result{"cstar-identities"};
  auto fail = [&](const std::string& what, const std::string& spec, std::size_t t) {
    result.passed = false;
    if (result.failures.size() < 50) result.failures.push_back({{"property", what}, {"algebra", spec}, {"sample", t}});
  };
  for (const auto& spec : {AlgebraSpec{1}, AlgebraSpec{2}, AlgebraSpec{3}, AlgebraSpec{1, 1}, AlgebraSpec{2, 1}}) {
    for (std::size_t t = 0; t < samples; ++t) {
      Rng rng(split_seed(opt.seed, t));
      const auto a = AlgebraElement::random(spec, rng);
      const auto b = AlgebraElement::random(spec, rng);
      const double na = elem_norm(a);
      const auto astar = elem_adjoint(a);
      result.checks += 4;
      if (std::abs(elem_norm(astar * a) - na * na) > 1e-10 * std::max(1.0, na * na)) fail("c-star identity", spec.to_string(), t);
      if (elem_norm(a * b) > na * elem_norm(b) + 1e-10) fail("submultiplicativity", spec.to_string(), t);
      if (!(elem_adjoint(astar) == a) || std::abs(elem_norm(astar) - na) > 1e-12 * std::max(1.0, na))
        fail("involution", spec.to_string(), t);
      if (std::abs(normalized_trace(a * b) - normalized_trace(b * a)) > 1e-10) fail("trace cyclicity", spec.to_string(), t);
    }
  }
  result.seconds = watch.seconds();
  return result;
}

inline json encode_result(const SuiteResult& r) {
  return {{"suite", r.name}, {"passed", r.passed}, {"checks", r.checks}, {"seconds", r.seconds}, {"failures", r.failures}};
}

struct Summary {
  bool passed = true;
  std::vector<SuiteResult> suites;
  json to_json() const {
    json arr = json::array();
    for (const auto& s : suites) arr.push_back(encode_result(s));
    return {{"passed", passed}, {"suites", arr}};
  }
};

/// Suites run in a fixed order; quick scale uses k <= 6 and a smaller corpus.
inline Summary run_all(const Options& opt) {
  Summary summary;
  const bool quick = opt.scale == Scale::quick;
  summary.suites.push_back(splitting_suite(opt));
  summary.suites.push_back(divisibility_suite(opt, quick ? 40 : 260));
  summary.suites.push_back(cstar_suite(opt, 1000));
  for (const auto& s : summary.suites) summary.passed = summary.passed && s.passed;
  return summary;
}

}  // namespace ncframe::selftest
