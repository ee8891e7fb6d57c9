#include "ricci/cli.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "ricci/asymptotics.hpp"
#include "ricci/growth.hpp"
#include "ricci/reduction.hpp"
#include "ricci/ricci_matrix.hpp"

namespace ricci {

namespace {

using ordered_json = nlohmann::ordered_json;

// 12 significant digits in machine-readable output, 6 in human-facing text
std::string fmt(double x, int digits) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, x);
  return buf;
}
std::string fmt12(double x) { return fmt(x, 12); }
std::string fmt6(double x) { return fmt(x, 6); }

// numbers in JSON are rounded to 12 significant digits so output is stable
// and documented; infinities become the string "inf"
ordered_json jnum(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return std::stod(fmt12(x));
}

ordered_json jvec(const Vec& v) {
  ordered_json arr = ordered_json::array();
  for (double x : v) arr.push_back(jnum(x));
  return arr;
}

long long parse_k_token(const std::string& tok) {
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0' || errno != 0)
    fail(ErrorKind::ParseError, "bad k value '" + tok + "'");
  if (!(x >= 0) || x > 1e12)
    fail(ErrorKind::ParseError, "k out of range: '" + tok + "'");
  const double r = std::round(x);
  if (std::fabs(x - r) > 1e-6)
    fail(ErrorKind::ParseError, "k must be an integer: '" + tok + "'");
  return static_cast<long long>(r);
}

struct Config {
  std::string tree_path;
  std::string pivot;
  std::string ks_spec;
  std::string diag_ks_spec;
  std::string orbit_path;
  std::string format = "csv";
  bool oracle = false;
};

Tree load_tree(const Config& cfg) { return read_tree_file(cfg.tree_path); }

std::optional<OrbitPartition> load_orbits(const Config& cfg, const Tree& t) {
  if (cfg.orbit_path.empty()) return std::nullopt;
  return read_orbit_partition_file(cfg.orbit_path, t);
}

int cmd_eig(const Config& cfg, std::ostream& out) {
  const Tree t = load_tree(cfg);
  const EinsteinCheck res = einstein_check(t);
  if (cfg.format == "json") {
    ordered_json doc;
    doc["lambda_max"] = jnum(res.lambda_max);
    doc["kappa"] = jnum(-res.lambda_max);
    doc["deviation"] = jnum(res.max_deviation);
    ordered_json w;
    for (int i = 0; i < t.n_edges(); ++i) w[t.edge_label(i)] = jnum(res.weights[i]);
    doc["weights"] = w;
    out << doc.dump(2) << '\n';
  } else {
    out << "# lambda_max = " << fmt12(res.lambda_max) << '\n'
        << "# kappa = " << fmt12(-res.lambda_max) << '\n'
        << "# deviation = " << fmt12(res.max_deviation) << '\n'
        << "edge,weight\n";
    for (int i = 0; i < t.n_edges(); ++i)
      out << t.edge_label(i) << ',' << fmt12(res.weights[i]) << '\n';
  }
  return 0;
}

int cmd_grow(const Config& cfg, std::ostream& out) {
  const Tree t = load_tree(cfg);
  const auto orbits = load_orbits(cfg, t);
  const std::vector<long long> ks = parse_k_spec(cfg.ks_spec);
  const ReducedSystem rs = reduced_system(t, cfg.pivot, orbits);
  const LimitValue lim = lambda_infinity(rs);

  struct Row {
    long long k;
    double lambda, g;
    bool has_full = false;
    double full = 0, diff = 0;
  };
  std::vector<Row> rows;
  for (long long k : ks) {
    Row r{};
    r.k = k;
    r.lambda = (k == 0) ? sym_eigen(ricci_matrix(t)).values[0] : reduced_lambda(rs, k);
    r.g = (r.lambda - lim.value) * static_cast<double>(rs.d + k);
    if (cfg.oracle && t.n_edges() + k <= kOracleDimensionCap) {
      const Tree grown = attach_leaves(t, cfg.pivot, static_cast<int>(k));
      r.full = sym_eigen(ricci_matrix(grown)).values[0];
      r.diff = std::fabs(r.lambda - r.full);
      r.has_full = true;
    }
    rows.push_back(r);
  }

  if (cfg.format == "json") {
    ordered_json doc;
    doc["pivot"] = cfg.pivot;
    doc["d"] = rs.d;
    doc["lambda_inf"] = jnum(lim.value);
    ordered_json arr = ordered_json::array();
    for (const Row& r : rows) {
      ordered_json jr;
      jr["k"] = r.k;
      jr["lambda_k"] = jnum(r.lambda);
      jr["g_k"] = jnum(r.g);
      if (cfg.oracle) {
        jr["lambda_full"] = r.has_full ? jnum(r.full) : ordered_json(nullptr);
        jr["diff"] = r.has_full ? jnum(r.diff) : ordered_json(nullptr);
      }
      arr.push_back(jr);
    }
    doc["rows"] = arr;
    out << doc.dump(2) << '\n';
  } else {
    out << "k,lambda_k,g_k";
    if (cfg.oracle) out << ",lambda_full,diff";
    out << '\n';
    for (const Row& r : rows) {
      out << r.k << ',' << fmt12(r.lambda) << ',' << fmt12(r.g);
      if (cfg.oracle) {
        if (r.has_full)
          out << ',' << fmt12(r.full) << ',' << fmt12(r.diff);
        else
          out << ",,";
      }
      out << '\n';
    }
  }
  return 0;
}

ordered_json report_json(const AsymptoticsReport& rep) {
  ordered_json doc;
  doc["lambda_inf"] = jnum(rep.lambda_inf);
  doc["achiever"] = rep.achiever < 0 ? "scalar" : "branch";
  if (rep.achiever >= 0) doc["branch_index"] = rep.achiever;
  doc["simple"] = rep.simple;
  if (rep.simple)
    doc["alpha"] = jnum(rep.alpha);
  else
    doc["alpha_max"] = jnum(rep.alpha);
  doc["multiplicity"] = rep.multiplicity;
  doc["direction"] = to_string(rep.direction);
  if (rep.simple) {
    doc["r"] = jvec(rep.r);
    doc["l"] = jvec(rep.l);
  }
  return doc;
}

int cmd_alpha(const Config& cfg, std::ostream& out) {
  const Tree t = load_tree(cfg);
  const auto orbits = load_orbits(cfg, t);
  const ReducedSystem rs = reduced_system(t, cfg.pivot, orbits);
  const AsymptoticsReport rep = analyze(rs);

  ordered_json doc = report_json(rep);
  if (!cfg.diag_ks_spec.empty()) {
    const Diagnostics diag =
        convergence_diagnostics(t, cfg.pivot, parse_k_spec(cfg.diag_ks_spec));
    ordered_json rows = ordered_json::array();
    for (const auto& r : diag.rows) {
      ordered_json jr;
      jr["k"] = r.k;
      jr["lambda_k"] = jnum(r.lambda_k);
      jr["g_k"] = jnum(r.g_k);
      rows.push_back(jr);
    }
    doc["diagnostics"] =
        ordered_json{{"rows", rows},
                     {"alpha_hat", jnum(diag.alpha_hat)},
                     {"fit_error", jnum(diag.fit_error)}};
  }

  if (cfg.format == "json") {
    out << doc.dump(2) << '\n';
  } else {
    out << "quantity,value\n"
        << "lambda_inf," << fmt12(rep.lambda_inf) << '\n'
        << "achiever," << (rep.achiever < 0 ? std::string("scalar")
                                            : "branch" + std::to_string(rep.achiever))
        << '\n'
        << "simple," << (rep.simple ? "true" : "false") << '\n'
        << (rep.simple ? "alpha," : "alpha_max,") << fmt12(rep.alpha) << '\n'
        << "direction," << to_string(rep.direction) << '\n';
    if (!cfg.diag_ks_spec.empty()) {
      const Diagnostics diag =
          convergence_diagnostics(t, cfg.pivot, parse_k_spec(cfg.diag_ks_spec));
      out << "alpha_hat," << fmt12(diag.alpha_hat) << '\n';
    }
  }
  return 0;
}

int cmd_limit(const Config& cfg, std::ostream& out) {
  const Tree t = load_tree(cfg);
  const auto orbits = load_orbits(cfg, t);
  const ReducedSystem rs = reduced_system(t, cfg.pivot, orbits);
  const LimitValue lim = lambda_infinity(rs);

  // top of each branch block
  Vec tops(rs.branch_blocks.size(),
           -std::numeric_limits<double>::infinity());
  for (const auto& [value, block] : triangular_labeled_spectrum(rs.block_triangular()))
    if (block >= 0) tops[block] = std::max(tops[block], value);

  if (cfg.format == "json") {
    ordered_json doc;
    doc["lambda_inf"] = jnum(lim.value);
    doc["achiever"] = lim.achiever < 0 ? "scalar" : "branch";
    if (lim.achiever >= 0) doc["branch_index"] = lim.achiever;
    doc["degenerate_tie"] = lim.degenerate;
    ordered_json arr = ordered_json::array();
    for (size_t j = 0; j < tops.size(); ++j) {
      ordered_json b;
      b["root_neighbor"] = rs.decomposition.branches[j].root_neighbor;
      b["lambda_max"] = jnum(tops[j]);
      b["dim"] = rs.branch_blocks[j].rows();
      arr.push_back(b);
    }
    doc["branches"] = arr;
    out << doc.dump(2) << '\n';
  } else {
    out << "quantity,value\n"
        << "lambda_inf," << fmt12(lim.value) << '\n'
        << "achiever,"
        << (lim.achiever < 0 ? std::string("scalar")
                             : "branch" + std::to_string(lim.achiever))
        << '\n'
        << "degenerate_tie," << (lim.degenerate ? "true" : "false") << '\n';
    for (size_t j = 0; j < tops.size(); ++j)
      out << "branch" << j << "_lambda_max," << fmt12(tops[j]) << '\n';
  }
  return 0;
}

int cmd_criterion(const Config& cfg, std::ostream& out) {
  const Tree t = load_tree(cfg);
  const GuaranteeResult res = one_step_guarantee(t, cfg.pivot);
  const OneStepAnalysis& a = res.analysis;
  if (cfg.format == "json") {
    ordered_json doc;
    doc["d"] = a.d;
    doc["mu"] = jnum(a.mu);
    doc["rho"] = jnum(a.rho);
    doc["theta"] = jnum(theta(a.d));
    doc["applicable"] = a.applicable;
    doc["criterion_holds"] = a.criterion_holds;
    doc["guaranteed"] = res.guaranteed;
    if (a.applicable) {
      doc["y_star"] = jnum(a.y_star);
      doc["max_gain"] = jnum(a.max_gain);
    }
    out << doc.dump(2) << '\n';
  } else {
    out << "quantity,value\n"
        << "d," << a.d << '\n'
        << "mu," << fmt6(a.mu) << '\n'
        << "rho," << fmt6(a.rho) << '\n'
        << "theta," << fmt6(theta(a.d)) << '\n'
        << "applicable," << (a.applicable ? "true" : "false") << '\n'
        << "criterion_holds," << (a.criterion_holds ? "true" : "false") << '\n'
        << "guaranteed," << (res.guaranteed ? "true" : "false") << '\n';
    if (a.applicable)
      out << "y_star," << fmt6(a.y_star) << '\n'
          << "max_gain," << fmt6(a.max_gain) << '\n';
  }
  return 0;
}

int cmd_split(const Config& cfg, std::ostream& out) {
  const Tree t = load_tree(cfg);
  const SchrodingerSplit s = schrodinger_split(t);
  double worst_row = 0.0;
  for (int i = 0; i < s.laplacian.rows(); ++i) {
    double sum = 0.0;
    for (int j = 0; j < s.laplacian.cols(); ++j) sum += s.laplacian(i, j);
    worst_row = std::max(worst_row, std::fabs(sum));
  }
  if (cfg.format == "json") {
    ordered_json doc;
    ordered_json edges = ordered_json::array();
    for (int i = 0; i < t.n_edges(); ++i) edges.push_back(t.edge_label(i));
    doc["edges"] = edges;
    ordered_json lap = ordered_json::array();
    for (int i = 0; i < s.laplacian.rows(); ++i) {
      ordered_json row = ordered_json::array();
      for (int j = 0; j < s.laplacian.cols(); ++j) row.push_back(jnum(s.laplacian(i, j)));
      lap.push_back(row);
    }
    doc["laplacian"] = lap;
    doc["potential"] = jvec(s.potential);
    doc["max_row_sum"] = jnum(worst_row);
    out << doc.dump(2) << '\n';
  } else {
    out << "# laplacian (rows sum to zero; max |row sum| = " << fmt12(worst_row)
        << ")\n";
    write_matrix_csv(out, t, s.laplacian);
    out << "# potential\n";
    for (int i = 0; i < t.n_edges(); ++i)
      out << t.edge_label(i) << ',' << fmt12(s.potential[i]) << '\n';
  }
  return 0;
}

}  // namespace

std::vector<long long> parse_k_spec(const std::string& spec) {
  if (spec.empty()) fail(ErrorKind::ParseError, "empty k specification");
  std::vector<long long> ks;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) fail(ErrorKind::ParseError, "empty k token");
    const size_t dots = tok.find("..");
    if (dots != std::string::npos) {
      const long long a = parse_k_token(tok.substr(0, dots));
      const long long b = parse_k_token(tok.substr(dots + 2));
      if (b < a) fail(ErrorKind::ParseError, "descending range '" + tok + "'");
      if (b - a > 1000000)
        fail(ErrorKind::ParseError, "range too large: '" + tok + "'");
      for (long long k = a; k <= b; ++k) ks.push_back(k);
    } else {
      ks.push_back(parse_k_token(tok));
    }
  }
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  return ks;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"tree curvature matrix toolkit"};
  app.require_subcommand(1);

  Config cfg;
  auto add_common = [&](CLI::App* sub, bool needs_pivot) {
    sub->add_option("--tree", cfg.tree_path, "edge-list file")->required();
    auto* fmt_opt = sub->add_option("--format", cfg.format, "csv or json");
    fmt_opt->check(CLI::IsMember({"csv", "json"}));
    if (needs_pivot)
      sub->add_option("--pivot", cfg.pivot, "growth vertex")->required();
    return sub;
  };

  add_common(app.add_subcommand("eig", "top eigenpair and curvature"), false);
  CLI::App* grow = add_common(app.add_subcommand("grow", "growth sequence table"), true);
  grow->add_option("--ks", cfg.ks_spec, "k values, e.g. 0,1,2,10..20")->required();
  grow->add_option("--orbits", cfg.orbit_path, "orbit classes (JSON)");
  grow->add_flag("--oracle", cfg.oracle, "also solve the full matrix per k");
  CLI::App* alpha = add_common(app.add_subcommand("alpha", "limit and first-order coefficient"), true);
  alpha->add_option("--orbits", cfg.orbit_path, "orbit classes (JSON)");
  alpha->add_option("--diag-ks", cfg.diag_ks_spec, "k values for the slope cross-check");
  CLI::App* limit_cmd = add_common(app.add_subcommand("limit", "limit value and branch blocks"), true);
  limit_cmd->add_option("--orbits", cfg.orbit_path, "orbit classes (JSON)");
  add_common(app.add_subcommand("criterion", "one-step leaf-addition test"), true);
  add_common(app.add_subcommand("split", "line-graph Laplacian / potential split"), false);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (app.got_subcommand("eig")) return cmd_eig(cfg, out);
    if (app.got_subcommand("grow")) return cmd_grow(cfg, out);
    if (app.got_subcommand("alpha")) return cmd_alpha(cfg, out);
    if (app.got_subcommand("limit")) return cmd_limit(cfg, out);
    if (app.got_subcommand("criterion")) return cmd_criterion(cfg, out);
    if (app.got_subcommand("split")) return cmd_split(cfg, out);
  } catch (const RicciError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
  return 2;
}

}  // namespace ricci
