#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "trxy/errors.hpp"
#include "trxy/expression.hpp"
#include "trxy/free_probability.hpp"
#include "trxy/graphs.hpp"
#include "trxy/serialize.hpp"
#include "trxy/swap.hpp"
#include "trxy/verify.hpp"

using namespace trxy;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCurve = 3;

struct Options {
  std::string curve;
  std::string x;
  std::string y;
  int g = 0;
  int n = 1;
  std::string method = "graphs";
  int order = -1;
  bool terms = false;
  std::string out = "text";
  std::string cache;
  int max_euler = 4;
  std::string cumulants;
  std::string side = "moments";
  std::vector<int> criteria;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

bool structured(const Options& o) { return o.out == "structured"; }

SpectralCurve curve_from(const Options& o) {
  const bool expr = !o.x.empty() || !o.y.empty();
  if (!o.curve.empty() && expr) throw UsageError("--curve cannot be combined with --x/--y");
  if (expr) {
    if (o.x.empty() || o.y.empty()) throw UsageError("--x and --y must be given together");
    const VarMask z = VarMask(1) << var_z();
    return SpectralCurve(parse_rational_function(o.x, z), parse_rational_function(o.y, z), "custom");
  }
  if (o.curve.empty()) throw UsageError("a curve is required: --curve NAME or --x EXPR --y EXPR");
  return catalog_curve(o.curve);
}

void check_indices(const Options& o, bool allow_unstable) {
  if (o.g < 0 || o.n < 1) throw UsageError("need --g >= 0 and --n >= 1");
  if (o.n > kMaxIndexedZ) throw UsageError("--n exceeds " + std::to_string(kMaxIndexedZ));
  const int chi = 2 * o.g - 2 + o.n;
  if (!allow_unstable && chi <= 0) throw UsageError("(g,n) must satisfy 2g-2+n > 0");
  if (chi > o.max_euler) {
    throw UsageError("2g-2+n = " + std::to_string(chi) + " exceeds --max-euler " + std::to_string(o.max_euler));
  }
}

std::string cache_dir(const Options& o) {
  if (!o.cache.empty()) return o.cache;
  const char* env = std::getenv("TRXY_CACHE_DIR");
  return env ? env : "";
}

void attach_cache(CorrelatorTable& t, const Options& o) {
  if (auto dir = cache_dir(o); !dir.empty()) t.attach_cache(dir);
}

CorrelatorRecord record(const SpectralCurve& c, int g, int n, RationalFunction w) {
  return CorrelatorRecord{c.name(), c.x().to_string(), c.y().to_string(), g, n, std::move(w)};
}

int run_catalog() {
  for (const auto& name : catalog_names()) {
    SpectralCurve c = catalog_curve(name);
    std::ostringstream xs, ys;
    for (const auto& p : ramification_points(c, Branch::X)) xs << (xs.tellp() ? "," : "") << to_string(p.location);
    for (const auto& p : ramification_points(c, Branch::Y)) ys << (ys.tellp() ? "," : "") << to_string(p.location);
    std::cout << name << ": x=" << c.x() << ", y=" << c.y() << ", dx=0 at [" << xs.str() << "], dy=0 at [" << ys.str()
              << "]\n";
  }
  return kExitOk;
}

int run_correlators(const Options& o) {
  check_indices(o, true);
  SpectralCurve c = curve_from(o);
  CorrelatorTable t(c);
  attach_cache(t, o);
  RationalFunction w = t.get(o.g, o.n);
  if (structured(o)) {
    std::cout << emit_correlator(record(c, o.g, o.n, w));
  } else {
    std::cout << w << "\n";
  }
  return kExitOk;
}

int run_swap(const Options& o) {
  check_indices(o, true);
  auto method = parse_swap_method(o.method);
  if (!method) throw UsageError("unknown --method '" + o.method + "' (graphs|operator|tree|exp|hand)");
  if (o.terms && *method != SwapMethod::Graphs) throw UsageError("--terms needs --method graphs");
  if (!SwapEngine::applies(*method, o.g, o.n)) {
    throw UsageError("method " + o.method + " does not apply to (" + std::to_string(o.g) + "," + std::to_string(o.n) + ")");
  }
  SpectralCurve c = curve_from(o);
  CorrelatorTable t(c);
  attach_cache(t, o);
  SwapEngine e(t);
  if (o.terms) {
    TermReport report;
    e.swap_correlator(o.g, o.n, &report);
    if (structured(o)) {
      std::cout << emit_term_report(TermReportRecord{o.g, o.n, report});
      return kExitOk;
    }
    for (const auto& entry : report.entries) {
      std::cout << entry.graph.canonical() << "\n  1/|Aut| = " << to_string(entry.inverse_aut)
                << "\n  term = " << entry.contribution << "\n  running total = " << entry.running_total << "\n";
    }
    for (const auto& [group, total] : report.group_totals()) std::cout << "group " << group << ": " << total << "\n";
    std::cout << "total: " << report.total << "\n";
    return kExitOk;
  }
  RationalFunction w = e.compute(o.g, o.n, *method);
  if (structured(o)) {
    std::cout << emit_correlator(record(swap_roles(c), o.g, o.n, w));
  } else {
    std::cout << w << "\n";
  }
  return kExitOk;
}

int run_graphs(const Options& o) {
  check_indices(o, true);
  auto gs = enumerate_decorated(o.n, o.g);
  if (structured(o)) {
    std::cout << emit_graphs(gs);
  } else {
    for (const auto& g : gs) std::cout << g.canonical() << "\n";
  }
  return kExitOk;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int default_order(int n) { return n == 1 ? 10 : (n == 2 ? 8 : 6); }

int run_freeprob(const Options& o) {
  check_indices(o, true);
  const int order = o.order >= 0 ? o.order : default_order(o.n);
  MultiSeries result;
  std::string letter = "X";
  if (!o.cumulants.empty()) {
    if (!o.curve.empty() || !o.x.empty()) throw UsageError("--cumulants cannot be combined with a curve");
    CumulantSeries c = parse_series_file(read_file(o.cumulants));
    result = moments_from_cumulants(c, o.g, o.n, order);
  } else {
    SeriesSide side;
    if (o.side == "moments") {
      side = SeriesSide::Moments;
    } else if (o.side == "cumulants") {
      side = SeriesSide::Cumulants;
      letter = "Y";
    } else {
      throw UsageError("--side must be moments or cumulants");
    }
    SpectralCurve c = curve_from(o);
    CorrelatorTable t(c);
    attach_cache(t, o);
    result = identify_entry(t, side, o.g, o.n, order);
  }
  if (structured(o)) {
    std::cout << emit_series(SeriesRecord{o.g, o.n, result});
  } else {
    std::cout << (letter == "X" ? "M" : "C") << "(" << o.g << "," << o.n << ") = " << result.to_string(letter) << "\n";
  }
  return kExitOk;
}

int run_verify_command(const Options& o) {
  VerifyConfig config;
  config.criteria = o.criteria;
  if (!o.curve.empty() || !o.x.empty()) config.curve = curve_from(o);
  if (auto dir = cache_dir(o); !dir.empty()) config.cache_dir = dir;
  VerifyReport report = run_verify(config);
  std::cout << report.to_text();
  for (int k : report.criteria()) std::cout << report.summary_line(k) << "\n";
  return report.passed() ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact topological recursion, x-y swap and free cumulants on rational spectral curves"};
  app.require_subcommand(1);
  Options o;

  auto curve_flags = [&](CLI::App* s) {
    s->add_option("--curve", o.curve, "catalog curve name (see `catalog`)");
    s->add_option("--x", o.x, "x(z) as an expression in z");
    s->add_option("--y", o.y, "y(z) as an expression in z");
    s->add_option("--cache", o.cache, "correlator cache directory (default: $TRXY_CACHE_DIR)");
  };
  auto index_flags = [&](CLI::App* s) {
    s->add_option("--g", o.g, "genus")->required();
    s->add_option("--n", o.n, "number of points")->required();
    s->add_option("--max-euler", o.max_euler, "cap on 2g-2+n")->check(CLI::NonNegativeNumber);
  };
  auto out_flag = [&](CLI::App* s) {
    s->add_option("--out", o.out, "output format")->check(CLI::IsMember({"text", "structured"}));
  };

  std::function<int()> action;

  auto* catalog = app.add_subcommand("catalog", "list the named curves");
  catalog->callback([&] { action = [] { return run_catalog(); }; });

  auto* corr = app.add_subcommand("correlators", "W_{g,n} on the z-plane by topological recursion");
  curve_flags(corr);
  index_flags(corr);
  out_flag(corr);
  corr->callback([&] { action = [&] { return run_correlators(o); }; });

  auto* swap = app.add_subcommand("swap", "dual correlators of the curve with x and y exchanged");
  curve_flags(swap);
  index_flags(swap);
  out_flag(swap);
  swap->add_option("--method", o.method, "graphs|operator|tree|exp|hand");
  swap->add_flag("--terms", o.terms, "emit the per-graph term report");
  swap->callback([&] { action = [&] { return run_swap(o); }; });

  auto* graphs = app.add_subcommand("graphs", "decorated bicoloured graphs for (g,n)");
  index_flags(graphs);
  out_flag(graphs);
  graphs->callback([&] { action = [&] { return run_graphs(o); }; });

  auto* fp = app.add_subcommand("freeprob", "moment series from free cumulants, or series read off a curve");
  curve_flags(fp);
  index_flags(fp);
  out_flag(fp);
  fp->add_option("--cumulants", o.cumulants, "JSON file of cumulant series");
  fp->add_option("--order", o.order, "truncation order (default 10, 8, 6 for n = 1, 2, >2)")->check(CLI::NonNegativeNumber);
  fp->add_option("--side", o.side, "with a curve: moments|cumulants");
  fp->callback([&] { action = [&] { return run_freeprob(o); }; });

  auto* verify = app.add_subcommand("verify", "run the acceptance checks, or the property suite on one curve");
  curve_flags(verify);
  verify->add_option("--criterion", o.criteria, "criteria to run (1-8); default all")->check(CLI::Range(1, kCriterionCount));
  verify->callback([&] { action = [&] { return run_verify_command(o); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  try {
    return action();
  } catch (const CurveError& e) {
    std::cerr << "curve assumption violated: " << e.what() << "\n";
    return kExitCurve;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
