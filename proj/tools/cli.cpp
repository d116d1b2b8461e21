#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "soupdiv/approx.hpp"
#include "soupdiv/greedy.hpp"
#include "soupdiv/periodic.hpp"
#include "soupdiv/signs.hpp"
#include "soupdiv/sim.hpp"

namespace soupdiv::cli {
namespace {

using nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// JSON reals carry 15 significant digits; the shortest round-trip form of the
// rounded value is what nlohmann emits.
ordered_json real(double v) {
  if (!std::isfinite(v)) return nullptr;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return std::strtod(buf, nullptr);
}

std::string text_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string csv_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

double parse_real(const std::string& text, const char* flag) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (text.empty() || end != begin + text.size() || !std::isfinite(v)) {
    throw UsageError(std::string("malformed number for ") + flag + ": '" + text + "'");
  }
  return v;
}

double parse_q(const std::string& text) {
  const double q = parse_real(text, "--q");
  if (!(q > 0.0 && q < 1.0)) throw UsageError("--q must lie in (0, 1), got " + text);
  return q;
}

bool looks_inline(const std::string& s) {
  if (s.empty()) return false;
  try {
    (void)SignSeq::parse(s);
    return true;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

SignSeq load_signs(const std::string& arg) {
  if (looks_inline(arg)) return SignSeq::parse(arg);
  std::ifstream in(arg);
  if (!in) throw UsageError("--signs is neither a +/- string nor a readable file: " + arg);
  std::vector<Sign> signs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string tok = line.substr(first, last - first + 1);
    if (tok == "+" || tok == "+1" || tok == "1") {
      signs.push_back(kPlus);
    } else if (tok == "-" || tok == "-1") {
      signs.push_back(kMinus);
    } else {
      throw UsageError(arg + ":" + std::to_string(line_no) + ": expected one sign per line");
    }
  }
  if (signs.empty()) throw UsageError("sign file " + arg + " is empty");
  return SignSeq(std::move(signs));
}

ordered_json checks_json(const CertificateChecks& c) {
  auto family = [](const FamilyCheck& f) {
    return ordered_json{{"holds", f.holds}, {"worst_margin", real(f.worst_margin)}};
  };
  return ordered_json{{"upper_endpoint", family(c.upper_endpoint)},
                      {"gaps", family(c.gaps)},
                      {"lower_endpoint", family(c.lower_endpoint)}};
}

ordered_json certificate_json(const Certificate& c) {
  ordered_json pn = ordered_json::array();
  for (double v : c.pn_values) pn.push_back(real(v));
  return ordered_json{{"q", real(c.q)},       {"N", c.N},
                      {"A", real(c.A)},       {"pn_values", pn},
                      {"checks", checks_json(c.checks)},
                      {"ratio", real(c.ratio)}, {"p_infinity", real(c.p_inf)}};
}

ordered_json failure_json(double q, const CertificateOutcome& o) {
  ordered_json j{{"q", real(q)}, {"ok", false}};
  if (o.failure) {
    const auto& f = *o.failure;
    j["failure"] = ordered_json{{"family", to_string(f.family)}, {"index", f.index},
                                {"lhs", real(f.lhs)},           {"rhs", real(f.rhs)},
                                {"N", f.N},                     {"A", real(f.A)}};
  }
  j["checks"] = checks_json(o.checks);
  j["ratio"] = real(o.ratio);
  j["p_infinity"] = real(o.p_inf);
  return j;
}

struct Common {
  std::string format;
  std::string out_path;
};

// Each handler writes into `out` and returns an exit code.
using Handler = std::function<int(std::ostream& out)>;

void add_common(CLI::App* sub, Common& common, const std::string& default_format) {
  sub->add_option("--format", common.format, "Output format (default " + default_format + ")")
      ->check(CLI::IsMember({"json", "text", "csv"}));
  sub->add_option("--out", common.out_path, "Write results to this path instead of stdout");
}

void require_format(const Common& c, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (c.format == a) return;
  }
  throw UsageError("--format " + c.format + " is not supported by this subcommand");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fair soup division: constructions and checks", "soupdiv"};
  app.require_subcommand(1);
  app.allow_extras(false);

  Common common;
  Handler handler;
  std::string q_text;

  // qinf
  double qinf_tol = 1e-12;
  auto* qinf = app.add_subcommand("qinf", "Positive root of x^4 + x^3 + 2x^2 - 1");
  qinf->add_option("--tol", qinf_tol, "Bisection bracket width");

  // classify
  int search_degree = 12;
  auto* classify_cmd = app.add_subcommand("classify", "Classify q by the known constructions");
  classify_cmd->add_option("--q", q_text, "Decay quotient in (0, 1)")->required();
  classify_cmd->add_option("--search-degree", search_degree, "Largest pattern degree searched");

  // greedy
  std::size_t greedy_scoops = 0;
  auto* greedy_cmd = app.add_subcommand("greedy", "Pairwise greedy division for q >= 1/sqrt 2");
  greedy_cmd->add_option("--q", q_text, "Decay quotient")->required();
  greedy_cmd->add_option("--scoops", greedy_scoops, "Even number of scoops")->required();

  // periodic-search
  int max_degree = 0;
  int grid = 4096;
  double root_tol = 1e-12;
  unsigned threads = 1;
  auto* periodic_cmd =
      app.add_subcommand("periodic-search", "Balanced patterns with a root in (0, 1)");
  periodic_cmd->add_option("--max-degree", max_degree, "Largest degree")->required();
  periodic_cmd->add_option("--grid", grid, "Sample subintervals of (0, 1)");
  periodic_cmd->add_option("--tol", root_tol, "Root bracket width");
  periodic_cmd->add_option("--threads", threads, "Worker threads");

  // certify
  std::optional<int> cert_N;
  auto* certify_cmd = app.add_subcommand("certify", "Covering certificate for q");
  certify_cmd->add_option("--q", q_text, "Decay quotient in (1/2, 1)")->required();
  certify_cmd->add_option("-N,--N", cert_N, "Fixed N (default: search N = 1, 2, 4, ..., 64)");

  // construct
  std::size_t construct_scoops = 0;
  std::optional<int> construct_N;
  auto* construct_cmd = app.add_subcommand("construct", "Block construction from a certificate");
  construct_cmd->add_option("--q", q_text, "Decay quotient in (1/2, 1)")->required();
  construct_cmd->add_option("--scoops", construct_scoops, "Minimum number of scoops")->required();
  construct_cmd->add_option("-N,--N", construct_N, "Certificate N");

  // simulate
  std::string signs_arg;
  std::optional<std::size_t> steps;
  std::string csv_path;
  int cap = 2;
  auto* simulate_cmd = app.add_subcommand("simulate", "Scoop-by-scoop simulation");
  simulate_cmd->add_option("--q", q_text, "Decay quotient")->required();
  simulate_cmd->add_option("--signs", signs_arg, "+/- string or file with one sign per line")
      ->required();
  simulate_cmd->add_option("--steps", steps, "Number of scoops (default: all)");
  simulate_cmd->add_option("--csv", csv_path, "Write the per-scoop trace as CSV");
  simulate_cmd->add_option("--cap", cap, "Largest tolerated |sign sum|");

  add_common(qinf, common, "text");
  for (auto* sub : {classify_cmd, greedy_cmd, periodic_cmd, certify_cmd, construct_cmd,
                    simulate_cmd}) {
    add_common(sub, common, "json");
  }

  qinf->callback([&] {
    handler = [&](std::ostream& o) {
      require_format(common, {"text", "json"});
      if (!(qinf_tol > 0.0)) throw UsageError("--tol must be positive");
      const double v = q_infinity(qinf_tol);
      if (common.format == "json") {
        o << ordered_json{{"q_infinity", real(v)},
                          {"tol", real(qinf_tol)},
                          {"residual", real(q_infinity_poly(v))}}
                 .dump(2)
          << '\n';
      } else {
        const int decimals = std::clamp(static_cast<int>(std::ceil(-std::log10(qinf_tol))), 1, 15);
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
        o << buf << '\n';
      }
      return kSuccess;
    };
  });

  classify_cmd->callback([&] {
    handler = [&](std::ostream& o) {
      require_format(common, {"text", "json"});
      const double q = parse_q(q_text);
      if (search_degree < 2) throw UsageError("--search-degree must be at least 2");
      const auto c = classify(q, search_degree);
      const bool found = c.kind != FeasibilityKind::kUnknown && c.kind != FeasibilityKind::kInfeasible;
      if (common.format == "json") {
        ordered_json j{{"q", real(q)}, {"class", to_string(c.kind)}};
        if (c.gap) j["gap"] = real(*c.gap);
        if (c.certificate) j["certificate"] = certificate_json(*c.certificate);
        if (c.pattern) j["pattern"] = c.pattern->to_string();
        if (c.root) j["root"] = real(*c.root);
        o << j.dump(2) << '\n';
      } else {
        o << "class " << to_string(c.kind) << '\n';
        if (c.gap) o << "gap " << text_real(*c.gap) << '\n';
        if (c.certificate) {
          o << "N " << c.certificate->N << "\nA " << text_real(c.certificate->A) << '\n';
        }
        if (c.pattern) o << "pattern " << c.pattern->to_string() << '\n';
        if (c.root) o << "root " << text_real(*c.root) << '\n';
      }
      return found ? kSuccess : kNegative;
    };
  });

  greedy_cmd->callback([&] {
    handler = [&](std::ostream& o) {
      require_format(common, {"text", "json"});
      const double q = parse_q(q_text);
      const SignSeq seq = geometric_fair_division(q, greedy_scoops);
      const auto diag = prefix_diagnostics(seq, q);
      int max_sum = 0;
      for (int s : diag.sign_sums) max_sum = std::max(max_sum, std::abs(s));
      const double final_residual = diag.residuals.back();
      const double bound = greedy_pair_bound(q, greedy_scoops / 2);
      if (common.format == "json") {
        o << ordered_json{{"q", real(q)},
                          {"scoops", greedy_scoops},
                          {"signs", seq.to_string()},
                          {"max_abs_sign_sum", max_sum},
                          {"final_residual", real(final_residual)},
                          {"final_bound", real(bound)}}
                 .dump(2)
          << '\n';
      } else {
        o << seq.to_string() << '\n'
          << "max_abs_sign_sum " << max_sum << '\n'
          << "final_residual " << text_real(final_residual) << '\n'
          << "final_bound " << text_real(bound) << '\n';
      }
      return kSuccess;
    };
  });

  periodic_cmd->callback([&] {
    handler = [&](std::ostream& o) {
      require_format(common, {"text", "json"});
      if (max_degree < 2) throw UsageError("--max-degree must be at least 2");
      if (grid < 2) throw UsageError("--grid must be at least 2");
      if (!(root_tol > 0.0)) throw UsageError("--tol must be positive");
      PeriodSearchOptions opts;
      opts.roots.grid = grid;
      opts.roots.root_tol = root_tol;
      opts.threads = std::max(1u, threads);
      const auto found = min_period_search(max_degree, opts);
      std::size_t total = 0;
      if (common.format == "json") {
        ordered_json rows = ordered_json::array();
        for (const auto& [degree, reports] : found) {
          for (const auto& r : reports) {
            ordered_json roots = ordered_json::array();
            for (const auto& root : r.roots) roots.push_back(real(root.value));
            rows.push_back(ordered_json{{"degree", degree},
                                        {"pattern", r.pattern.to_string()},
                                        {"roots", roots},
                                        {"negation_partner", r.negation_partner}});
            ++total;
          }
        }
        o << rows.dump(2) << '\n';
      } else {
        o << "degree\tpattern\troots\n";
        for (const auto& [degree, reports] : found) {
          for (const auto& r : reports) {
            o << degree << '\t' << r.pattern.to_string() << '\t';
            for (std::size_t i = 0; i < r.roots.size(); ++i) {
              o << (i ? "," : "") << text_real(r.roots[i].value);
            }
            o << (r.negation_partner ? "\t(plate swap)" : "") << '\n';
            ++total;
          }
        }
      }
      return total > 0 ? kSuccess : kNegative;
    };
  });

  certify_cmd->callback([&] {
    handler = [&](std::ostream& o) {
      require_format(common, {"text", "json"});
      const double q = parse_q(q_text);
      if (!(q > 0.5)) throw UsageError("--q must lie in (1/2, 1) for a certificate");
      if (cert_N && *cert_N < 1) throw UsageError("--N must be at least 1");
      const auto outcome = cert_N ? verify_certificate(q, *cert_N) : auto_certificate(q);
      if (common.format == "json") {
        o << (outcome.ok() ? certificate_json(*outcome.certificate) : failure_json(q, outcome))
                 .dump(2)
          << '\n';
      } else if (outcome.ok()) {
        const auto& c = *outcome.certificate;
        o << "certified q " << text_real(q) << " N " << c.N << " A " << text_real(c.A) << '\n'
          << "ratio " << text_real(c.ratio) << " p_infinity " << text_real(c.p_inf) << '\n';
      } else {
        const auto& f = *outcome.failure;
        o << "not certified q " << text_real(q) << ": " << to_string(f.family) << " at n "
          << f.index << " (lhs " << text_real(f.lhs) << ", rhs " << text_real(f.rhs) << ")\n"
          << "ratio " << text_real(outcome.ratio) << " p_infinity " << text_real(outcome.p_inf)
          << '\n';
      }
      return outcome.ok() ? kSuccess : kNegative;
    };
  });

  construct_cmd->callback([&] {
    handler = [&](std::ostream& o) {
      require_format(common, {"text", "json"});
      const double q = parse_q(q_text);
      if (!(q > 0.5)) throw UsageError("--q must lie in (1/2, 1) for a construction");
      if (construct_scoops < 2) throw UsageError("--scoops must be at least 2");
      const auto outcome = construct_N ? verify_certificate(q, *construct_N) : auto_certificate(q);
      if (!outcome.ok()) {
        if (common.format == "json") o << failure_json(q, outcome).dump(2) << '\n';
        else o << "no certificate for q " << text_real(q) << '\n';
        return kNegative;
      }
      const auto plan = construct_bounded(q, construct_scoops, outcome.certificate);
      if (common.format == "json") {
        ordered_json blocks = ordered_json::array();
        for (const auto& b : plan.blocks) {
          blocks.push_back(ordered_json{{"start", b.start},
                                        {"end", b.end},
                                        {"n", b.n},
                                        {"negated", b.negated},
                                        {"residual", real(b.residual)},
                                        {"normalized_residual", real(b.normalized_residual)}});
        }
        o << ordered_json{{"q", real(q)},
                          {"N", plan.certificate.N},
                          {"A", real(plan.certificate.A)},
                          {"scoops", plan.seq.size()},
                          {"signs", plan.seq.to_string()},
                          {"blocks", blocks}}
                 .dump(2)
          << '\n';
      } else {
        o << plan.seq.to_string() << '\n' << "start\tend\tn\tnegated\tnormalized_residual\n";
        for (const auto& b : plan.blocks) {
          o << b.start << '\t' << b.end << '\t' << b.n << '\t' << (b.negated ? "yes" : "no") << '\t'
            << text_real(b.normalized_residual) << '\n';
        }
      }
      return kSuccess;
    };
  });

  simulate_cmd->callback([&] {
    handler = [&](std::ostream& o) {
      const double q = parse_q(q_text);
      const SignSeq seq = load_signs(signs_arg);
      const std::size_t k = steps.value_or(seq.size());
      const auto trace = simulate(q, seq, k);
      FairnessCriteria criteria;
      criteria.imbalance1_cap = cap;
      const auto report = fairness_report(trace, criteria);

      auto write_csv = [&](std::ostream& csv) {
        csv << "i,sign,stuff1_plus,stuff1_minus,stuff2_plus,stuff2_minus,imbalance1,imbalance2\n";
        for (const auto& r : trace.rows) {
          csv << r.i << ',' << (r.sign > 0 ? '+' : '-') << ',' << csv_real(r.stuff1_plus) << ','
              << csv_real(r.stuff1_minus) << ',' << csv_real(r.stuff2_plus) << ','
              << csv_real(r.stuff2_minus) << ',' << r.imbalance1 << ',' << csv_real(r.imbalance2)
              << '\n';
        }
      };
      if (!csv_path.empty()) {
        std::ofstream csv(csv_path);
        if (!csv) throw UsageError("cannot write " + csv_path);
        write_csv(csv);
      }
      const auto& last = trace.rows.back();
      const double conservation =
          last.stuff2_plus + last.stuff2_minus + trace.remaining_surface() - 1.0;
      if (common.format == "csv") {
        write_csv(o);
      } else if (common.format == "json") {
        o << ordered_json{{"q", real(q)},
                          {"steps", k},
                          {"imbalance1", last.imbalance1},
                          {"imbalance2", real(last.imbalance2)},
                          {"max_abs_imbalance1", report.max_abs_imbalance1},
                          {"max_abs_imbalance2", real(report.max_abs_imbalance2)},
                          {"remaining_surface", real(trace.remaining_surface())},
                          {"conservation_error", real(conservation)},
                          {"verdict", to_string(report.verdict)}}
                 .dump(2)
          << '\n';
      } else {
        o << "steps " << k << "\nimbalance1 " << last.imbalance1 << "\nimbalance2 "
          << text_real(last.imbalance2) << "\nmax_abs_imbalance1 " << report.max_abs_imbalance1
          << "\nverdict " << to_string(report.verdict) << '\n';
      }
      return report.verdict == Verdict::kDiverging ? kNegative : kSuccess;
    };
  });

  try {
    common.format.clear();
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "soupdiv: " << e.what() << '\n';
    return kUsage;
  }

  if (common.format.empty()) common.format = app.got_subcommand(qinf) ? "text" : "json";

  try {
    std::ostringstream buffer;
    const int code = handler(buffer);
    if (common.out_path.empty()) {
      out << buffer.str();
    } else {
      std::ofstream file(common.out_path, std::ios::binary);
      if (!file) throw UsageError("cannot write " + common.out_path);
      file << buffer.str();
    }
    return code;
  } catch (const UsageError& e) {
    err << "soupdiv: " << e.what() << '\n';
  } catch (const std::domain_error& e) {
    err << "soupdiv: " << e.what() << '\n';
  } catch (const std::invalid_argument& e) {
    err << "soupdiv: " << e.what() << '\n';
  } catch (const std::out_of_range& e) {
    err << "soupdiv: " << e.what() << '\n';
  }
  return kUsage;
}

}  // namespace soupdiv::cli
