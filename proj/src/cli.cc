#include "hofa/cli.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "hofa/affine.h"
#include "hofa/check_suite.h"
#include "hofa/decompose.h"
#include "hofa/distribution.h"
#include "hofa/error.h"
#include "hofa/factor.h"
#include "hofa/function.h"
#include "hofa/gowers.h"
#include "hofa/parallel.h"
#include "hofa/pipeline.h"
#include "hofa/polynomial.h"
#include "hofa/property.h"
#include "hofa/tester.h"
#include "hofa/version.h"

namespace hofa {
namespace {

using Json = nlohmann::ordered_json;

// An error attributable to one command-line flag.
class FlagError : public std::runtime_error {
 public:
  FlagError(const std::string& flag, const std::string& message)
      : std::runtime_error(flag + ": " + message) {}
};

class CheckFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class Fn>
auto for_flag(const std::string& flag, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw FlagError(flag, e.what());
  }
}

template <class T, class Parse>
T load(const std::string& flag, const std::string& path, Parse&& parse) {
  return for_flag(flag, [&] {
    if (path == "-") return parse(std::cin, std::string("<stdin>"));
    std::ifstream in(path);
    if (!in) throw FlagError(flag, "cannot open '" + path + "'");
    return parse(in, path);
  });
}

FiniteFunction load_function(const std::string& flag, const std::string& path) {
  return load<FiniteFunction>(flag, path, [](std::istream& in, const std::string& name) {
    return parse_function(in, name);
  });
}

struct Globals {
  std::uint64_t seed = 0;
  int threads = 0;
  std::string format = "json";
  std::string out;
};

Json meta(const std::string& command, const Globals& g, std::uint64_t samples) {
  Json m;
  m["tool"] = "hofa";
  m["version"] = kVersion;
  m["command"] = command;
  m["seed"] = g.seed;
  m["samples"] = samples;
  return m;
}

void flatten(const Json& j, const std::string& prefix, std::ostream& os) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      flatten(value, prefix.empty() ? key : prefix + "." + key, os);
    }
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), os);
  } else if (j.is_string()) {
    os << prefix << ',' << j.get<std::string>() << '\n';
  } else {
    os << prefix << ',' << j.dump() << '\n';
  }
}

void emit(const Json& j, const Globals& g, std::ostream& out) {
  std::ostringstream text;
  if (g.format == "csv") {
    text << "key,value\n";
    flatten(j, "", text);
  } else {
    text << j.dump(2) << '\n';
  }
  if (g.out.empty()) {
    out << text.str();
    return;
  }
  std::ofstream file(g.out);
  if (!file) throw FlagError("--out", "cannot write '" + g.out + "'");
  file << text.str();
}

void write_text(const std::string& flag, const std::filesystem::path& path, const std::string& text) {
  std::ofstream file(path);
  if (!file) throw FlagError(flag, "cannot write '" + path.string() + "'");
  file << text;
}

std::string pattern_of(OutcomeKey key, int points) {
  std::string s(points, '0');
  for (int i = 0; i < points; ++i) {
    if ((key >> i) & 1U) s[i] = '1';
  }
  return s;
}

Json distribution_json(const RestrictionDistribution& mu) {
  Json j;
  j["p"] = mu.p;
  j["k"] = mu.k;
  j["exact"] = mu.exact;
  j["samples"] = mu.samples;
  int points = 1;
  for (int i = 0; i < mu.k; ++i) points *= mu.p;
  Json rows = Json::array();
  for (const auto& [key, prob] : mu.probs) {
    rows.push_back({{"outcome", pattern_of(key, points)}, {"key", key}, {"prob", prob}});
  }
  j["outcomes"] = std::move(rows);
  return j;
}

Json signature_json(const PolynomialFactor& factor) {
  Json arr = Json::array();
  for (const auto& s : factor.signature()) arr.push_back({{"degree", s.degree}, {"depth", s.depth}});
  return arr;
}

Json bound_json(const BoundCheck& b) {
  return {{"name", b.name}, {"lhs", b.lhs}, {"rhs", b.rhs}, {"holds", b.holds}};
}

DegreeCheck parse_check_mode(const std::string& mode) {
  if (mode == "auto") return DegreeCheck::kAuto;
  if (mode == "exhaustive") return DegreeCheck::kExhaustive;
  if (mode == "basis") return DegreeCheck::kBasis;
  if (mode == "randomized") return DegreeCheck::kRandomized;
  throw FlagError("--check", "unknown mode '" + mode + "'");
}

std::vector<int> parse_point(const std::string& text, const FieldParams& params) {
  std::vector<int> x;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      x.push_back(v);
    } catch (const std::exception&) {
      throw FlagError("--point", "'" + item + "' is not an integer");
    }
  }
  if (static_cast<int>(x.size()) != params.n()) {
    throw FlagError("--point", "expected " + std::to_string(params.n()) + " coordinates");
  }
  for (int v : x) {
    if (v < 0 || v >= params.p()) throw FlagError("--point", "coordinate out of range [0, p)");
  }
  return x;
}

class SabotageGuard {
 public:
  explicit SabotageGuard(bool on) { set_gowers_sabotage(on); }
  ~SabotageGuard() { set_gowers_sabotage(false); }
  SabotageGuard(const SabotageGuard&) = delete;
  SabotageGuard& operator=(const SabotageGuard&) = delete;
};

class ThreadGuard {
 public:
  explicit ThreadGuard(int threads) { set_thread_count(threads); }
  ~ThreadGuard() { set_thread_count(0); }
  ThreadGuard(const ThreadGuard&) = delete;
  ThreadGuard& operator=(const ThreadGuard&) = delete;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Higher-order Fourier analysis toolkit and affine-invariant distance tester", "hofa"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(kVersion));

  Globals g;
  app.add_option("--seed", g.seed, "master seed")->capture_default_str();
  app.add_option("--threads", g.threads, "worker threads (0: hardware)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app.add_option("--format", g.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("--out", g.out, "write the primary output here instead of stdout");

  // Shared flag storage; each subcommand binds the ones it uses.
  std::string fn, fn1, fn2, map_file, poly_file, factor_file, init_factor, property, bundle, emit_fn;
  std::string metric = "l1", check_mode = "auto", point, scale = "small", sabotage;
  int order = 2, k = 1, degree = 1, depth = 0, m = 6, max_complexity = 12, random_k = 0;
  int verify_degree_arg = -1;
  std::uint64_t samples = 0, trials = 100, embedding_samples = 100;
  double tau = 0.1, delta = 0.0, eps = 0.1, gamma = 0.15, eta = 0.0;
  bool exact = false, check = false, no_gowers = false;

  auto* gowers_cmd = app.add_subcommand("gowers", "Gowers uniformity norm of a function");
  gowers_cmd->add_option("--fn", fn, "function file ('-' for stdin)")->required();
  gowers_cmd->add_option("--order", order, "norm order d >= 1")->required();
  auto* gowers_exact = gowers_cmd->add_flag("--exact", exact, "exact evaluation (default)");
  gowers_cmd->add_option("--samples", samples, "Monte-Carlo samples")->excludes(gowers_exact);

  auto* restrict_cmd = app.add_subcommand("restrict", "Compose a function with an affine embedding");
  restrict_cmd->add_option("--fn", fn, "function file")->required();
  auto* restrict_map = restrict_cmd->add_option("--map", map_file, "affine map file");
  restrict_cmd->add_option("--random-k", random_k, "sample an embedding of this dimension")
      ->excludes(restrict_map);
  restrict_cmd->add_option("--emit", emit_fn, "also write the restricted function file");

  auto* dist_cmd = app.add_subcommand("dist", "Distance between two functions");
  dist_cmd->add_option("--fn1", fn1, "first function file")->required();
  dist_cmd->add_option("--fn2", fn2, "second function file")->required();
  dist_cmd->add_option("--metric", metric, "l1, l2, linf, hamming or gowers")
      ->check(CLI::IsMember({"l1", "l2", "linf", "hamming", "gowers"}))
      ->capture_default_str();
  dist_cmd->add_option("--order", order, "Gowers order for --metric gowers")->capture_default_str();

  auto* mu_cmd = app.add_subcommand("mu", "Restriction distribution of f to k-dimensional subspaces");
  mu_cmd->add_option("--fn", fn, "function file")->required();
  mu_cmd->add_option("-k", k, "subspace dimension")->required();
  auto* mu_exact_flag = mu_cmd->add_flag("--exact", exact, "enumerate every embedding (default)");
  mu_cmd->add_option("--samples", samples, "sampled embeddings")->excludes(mu_exact_flag);

  auto* mu_dist_cmd = app.add_subcommand("mu-dist", "Statistical distance between two restriction distributions");
  mu_dist_cmd->add_option("--fn1", fn1, "first function file")->required();
  mu_dist_cmd->add_option("--fn2", fn2, "second function file")->required();
  mu_dist_cmd->add_option("-k", k, "subspace dimension")->required();
  mu_dist_cmd->add_option("--samples", samples, "sampled embeddings (0: exact)");

  auto* poly_eval_cmd = app.add_subcommand("poly-eval", "Evaluate a non-classical polynomial");
  poly_eval_cmd->add_option("--poly", poly_file, "polynomial file")->required();
  poly_eval_cmd->add_option("--point", point, "comma-separated coordinates; omit for the full table");

  auto* poly_verify_cmd = app.add_subcommand("poly-verify", "Check a degree bound by vanishing derivatives");
  poly_verify_cmd->add_option("--poly", poly_file, "polynomial file")->required();
  poly_verify_cmd->add_option("--degree", verify_degree_arg, "degree bound (default: declared degree)");
  poly_verify_cmd->add_option("--check", check_mode, "auto, exhaustive, basis or randomized")
      ->capture_default_str();
  poly_verify_cmd->add_option("--samples", samples, "tuples for randomized mode");

  auto* factor_cmd = app.add_subcommand("factor-stats", "Atom statistics and rank proxy of a factor");
  factor_cmd->add_option("--factor", factor_file, "factor file")->required();
  factor_cmd->add_flag("--no-gowers", no_gowers, "skip the Gowers surrogate");

  auto* decompose_cmd = app.add_subcommand("decompose", "Energy-increment decomposition f = f1 + f2 + f3");
  decompose_cmd->add_option("--fn", fn, "function file")->required();
  decompose_cmd->add_option("--degree", degree, "candidate degree bound")->capture_default_str();
  decompose_cmd->add_option("--depth", depth, "candidate depth bound")->capture_default_str();
  decompose_cmd->add_option("--tau", tau, "correlation threshold")->capture_default_str();
  decompose_cmd->add_option("--max-complexity", max_complexity, "factor size cap")->capture_default_str();
  decompose_cmd->add_option("--init-factor", init_factor, "initial factor file");
  decompose_cmd->add_option("--bundle", bundle, "directory for f1/f2/f3/factor files and the certificate");
  decompose_cmd->add_flag("--check", check, "exit 3 when a certificate bound fails");

  auto* test_cmd = app.add_subcommand("test", "Distance tester on random affine subspaces");
  test_cmd->add_option("--fn", fn, "function file")->required();
  test_cmd->add_option("--property", property, "rm:D[:p], delta:X:<property> or file:PATH")->required();
  test_cmd->add_option("--delta", delta, "closeness parameter")->capture_default_str();
  test_cmd->add_option("--eps", eps, "gap parameter")->capture_default_str();
  test_cmd->add_option("-m", m, "subspace dimension")->capture_default_str();
  test_cmd->add_option("--trials", trials, "independent subspaces")->capture_default_str();

  auto* pipeline_cmd = app.add_subcommand("pipeline", "Soundness constructions with bound diagnostics");
  pipeline_cmd->add_option("--fn", fn, "function file")->required();
  pipeline_cmd->add_option("--property", property, "property spec")->required();
  pipeline_cmd->add_option("-m", m, "subspace dimension")->capture_default_str();
  pipeline_cmd->add_option("--degree", degree, "decomposition degree")->capture_default_str();
  pipeline_cmd->add_option("--depth", depth, "candidate depth bound")->capture_default_str();
  pipeline_cmd->add_option("--tau", tau, "correlation threshold")->capture_default_str();
  pipeline_cmd->add_option("--gamma", gamma, "gamma")->capture_default_str();
  pipeline_cmd->add_option("--eta", eta, "eta (<= 0: tau)")->capture_default_str();
  pipeline_cmd->add_option("--max-complexity", max_complexity, "factor size cap")->capture_default_str();
  pipeline_cmd->add_option("--embedding-samples", embedding_samples, "embeddings searched")
      ->capture_default_str();
  pipeline_cmd->add_flag("--check", check, "exit 3 when a bound fails");

  auto* check_cmd = app.add_subcommand("check", "Run the inequality battery");
  check_cmd->add_option("--scale", scale, "small or medium")
      ->check(CLI::IsMember({"small", "medium"}))
      ->capture_default_str();
  check_cmd->add_option("--sabotage", sabotage, "fault injection target")
      ->check(CLI::IsMember({"gowers"}));

  // Flag defaults differ between subcommands.
  pipeline_cmd->preparse_callback([&](std::size_t) { tau = 0.2; });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "hofa: error: " << e.what() << '\n';
    return kExitError;
  }

  const ThreadGuard threads(g.threads);
  try {
    if (*gowers_cmd) {
      const auto f = load_function("--fn", fn);
      const auto est = for_flag("--order", [&] {
        return samples > 0 ? gowers_norm_estimate(f, order, samples, g.seed) : gowers_norm_exact(f, order);
      });
      Json j;
      j["meta"] = meta("gowers", g, est.samples);
      j["mode"] = est.exact ? "exact" : "monte_carlo";
      j["order"] = est.order;
      j["value"] = est.value;
      j["power"] = est.power;
      j["std_error"] = est.std_error;
      j["clamped"] = est.clamped;
      emit(j, g, out);
    } else if (*restrict_cmd) {
      const auto f = load_function("--fn", fn);
      AffineMap a = AffineMap::identity(f.params().p(), f.params().n());
      if (!map_file.empty()) {
        a = load<AffineMap>("--map", map_file, [](std::istream& in, const std::string& name) {
          return parse_affine_map(in, name);
        });
      } else {
        if (random_k <= 0) throw FlagError("--random-k", "give --map FILE or --random-k K with K >= 1");
        CounterRng rng(g.seed);
        a = for_flag("--random-k", [&] {
          return sample_affine_embedding(rng, random_k, f.params().n(), f.params().p());
        });
      }
      const auto r = for_flag(map_file.empty() ? "--random-k" : "--map", [&] { return restrict(f, a); });
      if (!emit_fn.empty()) write_text("--emit", emit_fn, format_function(r));
      Json j;
      j["meta"] = meta("restrict", g, 0);
      j["map"] = format_affine_map(a);
      j["function"] = format_function(r);
      j["mean"] = mean(r);
      emit(j, g, out);
    } else if (*dist_cmd) {
      const auto f = load_function("--fn1", fn1);
      const auto h = load_function("--fn2", fn2);
      const double value = for_flag("--fn2", [&] {
        if (metric == "l1") return l1_distance(f, h);
        if (metric == "l2") return l2_distance(f, h);
        if (metric == "linf") return linf_distance(f, h);
        if (metric == "hamming") return hamming_distance(f, h);
        return gowers_norm(subtract(f, h), order);
      });
      Json j;
      j["meta"] = meta("dist", g, 0);
      j["metric"] = metric;
      if (metric == "gowers") j["order"] = order;
      j["value"] = value;
      emit(j, g, out);
    } else if (*mu_cmd) {
      const auto f = load_function("--fn", fn);
      const auto mu = for_flag("-k", [&] { return samples > 0 ? mu_estimate(f, k, samples, g.seed) : mu_exact(f, k); });
      Json j;
      j["meta"] = meta("mu", g, mu.samples);
      j["distribution"] = distribution_json(mu);
      emit(j, g, out);
    } else if (*mu_dist_cmd) {
      const auto f = load_function("--fn1", fn1);
      const auto h = load_function("--fn2", fn2);
      if (f.params().p() != h.params().p()) throw FlagError("--fn2", "field differs from --fn1");
      const double value = for_flag("-k", [&] {
        if (samples > 0) {
          return stat_distance(mu_estimate(f, k, samples, CounterRng::derive(g.seed, 0).next()),
                               mu_estimate(h, k, samples, CounterRng::derive(g.seed, 1).next()));
        }
        return stat_distance(mu_exact(f, k), mu_exact(h, k));
      });
      Json j;
      j["meta"] = meta("mu-dist", g, samples);
      j["k"] = k;
      j["exact"] = samples == 0;
      j["value"] = value;
      emit(j, g, out);
    } else if (*poly_eval_cmd) {
      const auto poly = load<NonClassicalPoly>("--poly", poly_file, [](std::istream& in, const std::string& name) {
        return parse_poly(in, name);
      });
      Json j;
      j["meta"] = meta("poly-eval", g, 0);
      j["degree"] = poly.degree();
      j["depth"] = poly.depth();
      if (!point.empty()) {
        const auto x = parse_point(point, poly.params());
        const auto v = poly.evaluate(std::span<const int>(x));
        j["point"] = x;
        j["level"] = v.level;
        j["numerator"] = v.numerator;
        j["value"] = v.to_double();
      } else {
        const auto table = poly.table();
        std::vector<std::uint64_t> nums(table.size());
        for (std::size_t i = 0; i < nums.size(); ++i) nums[i] = table.numerator(i);
        j["level"] = table.level();
        j["modulus"] = table.modulus();
        j["numerators"] = std::move(nums);
      }
      emit(j, g, out);
    } else if (*poly_verify_cmd) {
      const auto poly = load<NonClassicalPoly>("--poly", poly_file, [](std::istream& in, const std::string& name) {
        return parse_poly(in, name);
      });
      DegreeCheckOptions opts;
      opts.mode = parse_check_mode(check_mode);
      opts.seed = g.seed;
      if (samples > 0) opts.samples = samples;
      const bool declared = verify_degree_arg < 0;
      const int d = declared ? poly.degree() : verify_degree_arg;
      const bool ok = for_flag("--degree", [&] { return verify_degree(poly, d, opts); });
      Json j;
      j["meta"] = meta("poly-verify", g, opts.mode == DegreeCheck::kRandomized ? opts.samples : 0);
      j["declared_degree"] = poly.degree();
      j["depth"] = poly.depth();
      j["degree"] = d;
      j["mode"] = check_mode;
      j["verified"] = ok;
      emit(j, g, out);
      if (declared && !ok) throw CheckFailed("declared degree not confirmed");
    } else if (*factor_cmd) {
      const auto factor = load<PolynomialFactor>("--factor", factor_file, [](std::istream& in, const std::string& name) {
        return parse_factor(in, name);
      });
      const auto stats = atom_stats(factor);
      const auto proxy = for_flag("--factor", [&] { return factor_rank_proxy(factor, !no_gowers); });
      Json atoms = Json::array();
      for (const auto& [label, prob] : stats.probabilities) atoms.push_back({{"label", label}, {"prob", prob}});
      Json j;
      j["meta"] = meta("factor-stats", g, 0);
      j["complexity"] = factor.complexity();
      j["degree"] = factor.degree();
      j["order"] = factor.order();
      j["signature"] = signature_json(factor);
      j["nonempty_atoms"] = stats.nonempty;
      j["max_deviation"] = stats.max_deviation;
      j["atoms"] = std::move(atoms);
      j["rank_proxy"] = {{"combinations", proxy.combinations},
                         {"max_bias", proxy.max_bias},
                         {"worst_lambda", proxy.worst_lambda},
                         {"gowers_order", proxy.gowers_order},
                         {"max_gowers", proxy.max_gowers}};
      emit(j, g, out);
    } else if (*decompose_cmd) {
      const auto f = load_function("--fn", fn);
      DecomposeOptions opts;
      opts.degree = degree;
      opts.max_depth = depth;
      opts.tau = tau;
      opts.max_complexity = max_complexity;
      PolynomialFactor initial(f.params());
      if (!init_factor.empty()) {
        initial = load<PolynomialFactor>("--init-factor", init_factor, [](std::istream& in, const std::string& name) {
          return parse_factor(in, name);
        });
        if (!(initial.params() == f.params())) throw FlagError("--init-factor", "field differs from --fn");
      }
      const auto dec = for_flag("--degree", [&] { return decompose(f, opts, initial); });

      std::vector<BoundCheck> checks;
      double worst_gap = 0.0;
      for (std::size_t i = 1; i < dec.energies.size(); ++i) {
        const double gap = dec.energies[i] - dec.energies[i - 1];
        if (i == 1 || gap < worst_gap) worst_gap = gap;
      }
      if (dec.energies.size() > 1) {
        checks.push_back({"energy_increment", tau * tau, worst_gap, worst_gap >= tau * tau - 1e-12});
      }
      const double recon = linf_distance(f, [&] {
        std::vector<Complex> sum(f.size());
        for (std::size_t x = 0; x < sum.size(); ++x) {
          sum[x] = dec.f1.complex_at(x) + dec.f2.complex_at(x) + dec.f3.complex_at(x);
        }
        return FiniteFunction::complex(f.params(), std::move(sum));
      }());
      checks.push_back({"reconstruction", recon, 1e-12, recon <= 1e-12});

      Json cert;
      cert["meta"] = meta("decompose", g, 0);
      cert["degree"] = degree;
      cert["depth"] = depth;
      cert["tau"] = tau;
      cert["initial_complexity"] = dec.initial_complexity;
      cert["complexity"] = dec.factor.complexity();
      cert["order"] = dec.factor.order();
      cert["signature"] = signature_json(dec.factor);
      cert["energies"] = dec.energies;
      cert["correlations"] = dec.correlations;
      cert["f2_l2"] = dec.f2_l2;
      cert["f3_order"] = dec.f3_order;
      cert["f3_gowers"] = dec.f3_gowers;
      cert["non_convergence"] = dec.non_convergence;
      Json cj = Json::array();
      bool all = true;
      for (const auto& c : checks) {
        cj.push_back(bound_json(c));
        all = all && c.holds;
      }
      cert["checks"] = std::move(cj);
      if (!bundle.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(bundle, ec);
        if (ec) throw FlagError("--bundle", "cannot create '" + bundle + "': " + ec.message());
        const std::filesystem::path dir(bundle);
        write_text("--bundle", dir / "f1.txt", format_function(dec.f1));
        write_text("--bundle", dir / "f2.txt", format_function(dec.f2));
        write_text("--bundle", dir / "f3.txt", format_function(dec.f3));
        write_text("--bundle", dir / "factor.txt", format_factor(dec.factor));
        write_text("--bundle", dir / "certificate.json", cert.dump(2) + "\n");
      }
      emit(cert, g, out);
      if (check && !all) throw CheckFailed("decomposition certificate bound failed");
    } else if (*test_cmd) {
      const auto f = load_function("--fn", fn);
      const auto prop = for_flag("--property", [&] { return make_property(property, f.params().p()); });
      TesterConfig cfg;
      cfg.delta = delta;
      cfg.eps = eps;
      cfg.m = m;
      cfg.trials = trials;
      cfg.seed = g.seed;
      const auto r = for_flag("-m", [&] { return distance_tester(f, *prop, cfg); });
      Json j;
      j["meta"] = meta("test", g, trials);
      j["property"] = prop->name();
      j["delta"] = delta;
      j["eps"] = eps;
      j["m"] = m;
      j["threshold"] = r.threshold;
      j["accepted"] = r.accepted;
      j["accept_fraction"] = r.accept_fraction;
      j["verdict"] = r.accept ? "accept" : "reject";
      j["per_trial_distances"] = r.distances;
      emit(j, g, out);
    } else if (*pipeline_cmd) {
      const auto f = load_function("--fn", fn);
      const auto prop = for_flag("--property", [&] { return make_property(property, f.params().p()); });
      PipelineConfig cfg;
      cfg.m = m;
      cfg.degree = degree;
      cfg.max_depth = depth;
      cfg.tau = tau;
      cfg.gamma = gamma;
      cfg.eta = eta;
      cfg.max_complexity = max_complexity;
      cfg.embedding_samples = embedding_samples;
      cfg.seed = g.seed;
      const auto r = for_flag("--fn", [&] { return soundness_pipeline(f, *prop, cfg); });
      Json j;
      j["meta"] = meta("pipeline", g, embedding_samples);
      j["property"] = prop->name();
      j["order"] = r.order;
      j["eta"] = r.eta;
      j["b0_complexity"] = r.b0_complexity;
      j["f2_l2"] = r.f2_l2;
      j["f3_gowers"] = r.f3_gowers;
      j["f_non_convergence"] = r.f_non_convergence;
      j["embeddings"] = {{"tried", r.embeddings_tried}, {"e1", r.e1_count}, {"e2", r.e2_count},
                         {"e3", r.e3_count},           {"all", r.all_count},  {"chosen", r.chosen}};
      j["events"] = {{"e1", r.events.e1},
                     {"e2", r.events.e2},
                     {"e3", r.events.e3},
                     {"af2_l2", r.events.af2_l2},
                     {"af3_gowers", r.events.af3_gowers},
                     {"e3_gap", r.events.e3_gap}};
      j["af_h_distance"] = r.af_h_distance;
      j["b1_complexity"] = r.b1_complexity;
      j["h3_gowers"] = r.h3_gowers;
      j["h_non_convergence"] = r.h_non_convergence;
      j["unrealized_points"] = r.unrealized_points;
      j["unrealized_atoms"] = r.unrealized_atoms;
      j["gamma_measured"] = r.gamma_measured;
      j["f_g_distance"] = r.f_g_distance;
      Json cj = Json::array();
      for (const auto& c : r.checks) cj.push_back(bound_json(c));
      j["checks"] = std::move(cj);
      j["all_hold"] = r.all_hold();
      emit(j, g, out);
      if (check && !r.all_hold()) throw CheckFailed("pipeline bound failed");
    } else if (*check_cmd) {
      const SabotageGuard guard(sabotage == "gowers");
      const auto results = run_check_suite(scale == "medium" ? CheckScale::kMedium : CheckScale::kSmall, g.seed);
      Json cj = Json::array();
      bool all = true;
      for (const auto& c : results) {
        cj.push_back({{"name", c.name},
                      {"passed", c.passed()},
                      {"instances", c.instances},
                      {"violations", c.violations},
                      {"min_slack", c.min_slack}});
        all = all && c.passed();
      }
      Json j;
      j["meta"] = meta("check", g, 0);
      j["scale"] = scale;
      j["sabotage"] = sabotage.empty() ? "none" : sabotage;
      j["checks"] = std::move(cj);
      j["passed"] = all;
      emit(j, g, out);
      if (!all) throw CheckFailed("check suite reported failures");
    }
  } catch (const CheckFailed& e) {
    err << "hofa: check failed: " << e.what() << '\n';
    return kExitCheckFailed;
  } catch (const FlagError& e) {
    err << "hofa: error: " << e.what() << '\n';
    return kExitError;
  } catch (const Error& e) {
    err << "hofa: error (" << error_code_name(e.code()) << "): " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    err << "hofa: error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitOk;
}

}  // namespace hofa
