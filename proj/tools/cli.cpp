#include "cli.hpp"

#include <CLI11.hpp>
#include <fmt/core.h>

#include <cmath>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <regex>
#include <sstream>

#include "commonsys/certify.hpp"
#include "commonsys/counting.hpp"
#include "commonsys/digest.hpp"
#include "commonsys/error.hpp"
#include "commonsys/harmonic.hpp"
#include "commonsys/linsys.hpp"
#include "commonsys/optimize.hpp"
#include "commonsys/parallel.hpp"
#include "commonsys/serialize.hpp"

namespace commonsys::cli {

namespace {

struct Options {
  std::string system = "phi";
  std::int64_t p = 3;
  std::uint32_t n = 1;
  std::string function_path;
  std::string const_value;
  std::string coset;
  std::string property = "common";
  std::optional<std::uint64_t> l;
  std::string alpha;
  std::uint64_t seed = 1;
  std::size_t restarts = 16;
  std::size_t max_iters = 500;
  std::size_t resolution = 9;
  std::string method = "fourier";
  std::string out;
  std::string export_path;
  unsigned threads = 0;
  bool negate_q = false;
  std::optional<std::uint64_t> check_l;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::MalformedDocument, "cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::InvalidArgument, "cannot write '" + path + "'");
  out << data;
}

LinearSystem load_system(const Options& o, RunManifest& m) {
  LinearSystem s = is_preset_name(o.system) ? preset_system(o.system, o.p) : parse_system(read_file(o.system));
  m.input_digests["system"] = sha256_hex(s.to_document());
  return s;
}

struct LoadedFunction {
  GroupFunction approx;
  ExactFunction exact;
};

// "x1=1", "x1+2*x2=0", "-x2 = 2"
std::pair<std::vector<std::uint32_t>, std::uint32_t> parse_coset(const std::string& text, std::uint32_t p,
                                                                 std::uint32_t n) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  auto eq = s.find('=');
  if (eq == std::string::npos) throw Error(Errc::MalformedDocument, "coset needs '=': " + text);
  std::string lhs = s.substr(0, eq), rhs = s.substr(eq + 1);
  auto mod = [p](long long v) { return static_cast<std::uint32_t>(((v % p) + p) % p); };
  std::vector<std::uint32_t> a(n, 0);
  static const std::regex term(R"(([+-]?)(\d*)\*?x(\d+))");
  std::size_t consumed = 0;
  for (auto it = std::sregex_iterator(lhs.begin(), lhs.end(), term); it != std::sregex_iterator(); ++it) {
    const auto& mt = *it;
    if (static_cast<std::size_t>(mt.position()) != consumed) throw Error(Errc::MalformedDocument, "bad coset: " + text);
    consumed += mt.length();
    long long c = mt[2].str().empty() ? 1 : std::stoll(mt[2].str());
    if (mt[1] == "-") c = -c;
    std::size_t idx = std::stoul(mt[3].str());
    if (idx == 0 || idx > n) throw Error(Errc::MalformedDocument, "coset variable x" + mt[3].str() + " out of range");
    a[idx - 1] = mod(static_cast<long long>(a[idx - 1]) + c);
  }
  if (consumed != lhs.size() || lhs.empty()) throw Error(Errc::MalformedDocument, "bad coset: " + text);
  long long b;
  try {
    b = std::stoll(rhs);
  } catch (const std::exception&) {
    throw Error(Errc::MalformedDocument, "bad coset right-hand side: " + text);
  }
  return {a, mod(b)};
}

LoadedFunction load_function(const Options& o, const LinearSystem& s, RunManifest& m) {
  int given = !o.function_path.empty() + !o.const_value.empty() + !o.coset.empty();
  if (given != 1) throw Error(Errc::InvalidArgument, "give exactly one of --function, --const, --coset");
  const std::uint32_t p = s.modulus();
  if (!o.function_path.empty()) {
    std::string bytes = read_file(o.function_path);
    m.input_digests["function"] = sha256_hex(bytes);
    GroupFunction f = parse_function(bytes);
    if (f.p() != p) throw Error(Errc::InvalidArgument, "function modulus differs from system modulus");
    return {f, to_exact(f)};
  }
  FpnSpace space(p, o.n);
  if (space.size() > kMaxGroupSize) throw Error(Errc::TooLarge, "p^n exceeds 2^24");
  if (!o.const_value.empty()) {
    Rational c = parse_rational(o.const_value);
    m.input_digests["function"] = sha256_hex("const:" + to_string(c));
    ExactFunction e{p, o.n, std::vector<Rational>(space.size(), c)};
    return {e.to_double(), e};
  }
  auto [a, b] = parse_coset(o.coset, p, o.n);
  m.input_digests["function"] = sha256_hex("coset:" + o.coset);
  GroupFunction f = GroupFunction::coset_indicator(p, o.n, a, b);
  return {f, to_exact(f)};
}

Property load_property(const Options& o) {
  Property prop;
  prop.kind = parse_property_kind(o.property);
  if (prop.kind == PropertyKind::Alon) {
    if (!o.l) throw Error(Errc::MissingL, "--property alon needs --l");
    prop.l = o.l;
  }
  if (prop.kind == PropertyKind::Prevalence) {
    if (o.alpha.empty()) throw Error(Errc::InvalidArgument, "--property prevalence needs --alpha");
    prop.alpha = to_double(parse_rational(o.alpha));
  }
  return prop;
}

RunManifest start_manifest(const std::string& sub, const Options& o) {
  RunManifest m;
  m.subcommand = sub;
  m.seed = o.seed;
  m.timestamp = utc_timestamp();
  m.parameters = {{"property", o.property}, {"method", o.method}, {"p", std::to_string(o.p)}, {"n", std::to_string(o.n)}};
  if (o.l) m.parameters["l"] = std::to_string(*o.l);
  if (!o.alpha.empty()) m.parameters["alpha"] = o.alpha;
  if (!o.out.empty()) m.outputs.push_back(o.out);
  return m;
}

// JSON to --out (with a one-line summary on `out`), or to `out` directly.
void emit(const Options& o, Json doc, const RunManifest& m, const std::string& summary, std::ostream& out) {
  doc["manifest"] = to_json(m);
  if (o.out.empty()) {
    out << doc.dump(2) << "\n";
  } else {
    write_file(o.out, doc.dump(2) + "\n");
    out << summary << "\n";
  }
}

int cmd_eval(const Options& o, std::ostream& out) {
  RunManifest m = start_manifest("eval", o);
  LinearSystem s = load_system(o, m);
  LoadedFunction f = load_function(o, s, m);
  Property prop = load_property(o);
  Json doc;
  std::string summary;
  if (o.method == "fourier") {
    DefectReport r = defect(s, f.approx, prop, Method::Fourier);
    doc["report"] = to_json(r);
    summary = fmt::format("defect {:.12g} (T(f) = {:.12g}, T(1-f) = {:.12g})", r.scaled_value, r.t_f, r.t_1mf);
  } else if (o.method == "brute") {
    DefectReport r = defect(s, f.exact, prop);
    doc["report"] = to_json(r);
    summary = fmt::format("defect {:.12g} exact {}", r.scaled_value, r.exact_value ? to_string(*r.exact_value) : "-");
  } else if (o.method == "both") {
    DefectReport b = defect(s, f.exact, prop);
    DefectReport q = defect(s, f.approx, prop, Method::Fourier);
    double gap = std::abs(b.scaled_value - q.scaled_value);
    doc["brute"] = to_json(b);
    doc["fourier"] = to_json(q);
    doc["discrepancy"] = gap;
    summary = fmt::format("defect brute {:.12g} fourier {:.12g} discrepancy {:.3g}", b.scaled_value, q.scaled_value, gap);
  } else {
    throw Error(Errc::InvalidArgument, "--method must be brute, fourier or both");
  }
  emit(o, std::move(doc), m, summary, out);
  return kOk;
}

SearchConfig search_config(const Options& o, const LinearSystem& s) {
  SearchConfig cfg;
  cfg.objective = load_property(o);
  cfg.p = s.modulus();
  cfg.n = o.n;
  cfg.restarts = o.restarts;
  cfg.max_iters = o.max_iters;
  cfg.seed = o.seed;
  if (!o.alpha.empty()) cfg.mean = to_double(parse_rational(o.alpha));
  return cfg;
}

void export_function(const std::string& path, const GroupFunction& f) {
  bool binary = path.size() > 4 && path.substr(path.size() - 4) == ".bin";
  write_file(path, binary ? function_to_binary(f) : function_to_text(f));
}

int cmd_search(const Options& o, std::ostream& out) {
  RunManifest m = start_manifest("search", o);
  m.parameters["restarts"] = std::to_string(o.restarts);
  m.parameters["max_iters"] = std::to_string(o.max_iters);
  LinearSystem s = load_system(o, m);
  SearchConfig cfg = search_config(o, s);
  SearchResult r = minimize_defect(s, cfg);
  if (!o.export_path.empty()) {
    export_function(o.export_path, r.best);
    m.outputs.push_back(o.export_path);
  }
  Json doc{{"config", to_json(cfg)}, {"result", to_json(r)}};
  emit(o, std::move(doc), m,
       fmt::format("best defect {:.12g} violation {} restart {} seed {}", r.best_defect, r.violation, r.best_restart,
                   r.best_seed),
       out);
  return kOk;
}

int cmd_scan(const Options& o, std::ostream& out) {
  RunManifest m = start_manifest("scan-alpha", o);
  m.parameters["resolution"] = std::to_string(o.resolution);
  m.parameters["restarts"] = std::to_string(o.restarts);
  LinearSystem s = load_system(o, m);
  Options base_opts = o;
  base_opts.alpha.clear();
  SearchConfig base = search_config(base_opts, s);
  if (base.objective.kind == PropertyKind::Prevalence && !base.objective.alpha) base.objective.alpha = 0.5;
  auto rows = scan_alpha(s, base, o.resolution);
  std::ostringstream table;
  table << "# manifest " << manifest_digest(m) << "\n";
  table << "alpha,best_defect,violation,t_f,t_1mf,best_seed\n";
  for (const auto& row : rows)
    table << fmt::format("{:.9g},{:.12g},{},{:.12g},{:.12g},{}\n", row.alpha, row.result.best_defect,
                         row.result.violation ? 1 : 0, row.result.report.t_f, row.result.report.t_1mf,
                         row.result.best_seed);
  if (o.out.empty()) {
    out << table.str();
  } else {
    write_file(o.out, table.str());
    out << "wrote " << rows.size() << " rows to " << o.out << "\n";
  }
  return kOk;
}

std::string cert_line(const Certificate& c) {
  return fmt::format("{:<16} {:<14} {:<9} {}", c.id, to_string(c.method), c.verified ? "verified" : "FAILED", c.claim);
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
  RunManifest m = start_manifest("verify", o);
  LemmaSuiteOptions opts;
  opts.negate_q = o.negate_q;
  auto certs = lemma_suite(opts);
  std::size_t ok = 0;
  Json arr = Json::array();
  for (const auto& c : certs) {
    ok += c.verified;
    out << cert_line(c) << "\n";
    arr.push_back(to_json(c));
  }
  out << ok << "/" << certs.size() << " certificates verified\n";
  if (!o.out.empty()) write_file(o.out, Json{{"certificates", arr}, {"manifest", to_json(m)}}.dump(2) + "\n");
  for (const auto& c : certs)
    if (!c.verified) {
      err << "verification failed: " << c.id << " (" << c.claim << ")\n";
      return kVerificationFailure;
    }
  return kOk;
}

int cmd_constants(const Options& o, std::ostream& out, std::ostream& err) {
  RunManifest m = start_manifest("constants", o);
  auto suite = lemma_suite();
  for (const auto& c : suite)
    if (!c.verified) {
      err << "verification failed: " << c.id << " (" << c.claim << ")\n";
      return kVerificationFailure;
    }
  ConstantLedger L = derive_constants();
  auto row = [&](const char* name, const Rational& q) {
    out << fmt::format("{:<6} {:<22.12g} {}\n", name, to_double(q), to_string(q));
  };
  row("c0", L.c0);
  row("c1", L.c1);
  row("c2", L.c2);
  row("c3", L.c3);
  row("C4", L.C4);
  row("c5", L.c5);
  row("c6", L.c6);
  out << fmt::format("{:<6} {}\n", "l0", L.l0);
  for (const auto& r : L.slack) {
    out << fmt::format("l = {}:", r.l);
    for (const auto& c : r.conditions) out << fmt::format(" ({}) {:.4g}", c.index, to_double(c.slack()));
    out << (r.all_hold && r.coverage ? "  all hold\n" : "  FAILS\n");
  }
  std::size_t verified = 0;
  for (const auto& c : L.certificates) verified += c.verified;
  out << verified << "/" << L.certificates.size() << " ledger certificates verified\n";

  Json doc = to_json(L);
  Json lemmas = Json::array();
  for (const auto& c : suite) lemmas.push_back(to_json(c));
  doc["lemma_certificates"] = lemmas;
  if (o.check_l) {
    SlackRow r = check_l(L, *o.check_l);
    doc["check_l"] = to_json(r);
    out << fmt::format("check l = {}:", r.l);
    bool any = false;
    for (const auto& c : r.conditions)
      if (!c.holds) {
        out << fmt::format(" condition ({}) fails [{}]", c.index, c.statement);
        any = true;
      }
    if (!r.coverage) {
      out << " case coverage fails (c5/sqrt(l) > 1/6)";
      any = true;
    }
    out << (any ? "\n" : " all conditions hold\n");
  }
  if (!o.out.empty()) {
    doc["manifest"] = to_json(m);
    write_file(o.out, doc.dump(2) + "\n");
  }
  for (const auto& c : L.certificates)
    if (!c.verified) {
      err << "verification failed: " << c.id << "\n";
      return kVerificationFailure;
    }
  return kOk;
}

int cmd_witness(const Options& o, std::ostream& out) {
  RunManifest m = start_manifest("witness", o);
  LinearSystem s = load_system(o, m);
  LoadedFunction f = load_function(o, s, m);
  if (!o.l) throw Error(Errc::MissingL, "witness needs --l");
  AlonWitness w = alon_witness(f.approx, s, *o.l);
  if (!o.export_path.empty()) {
    export_function(o.export_path, w.function);
    m.outputs.push_back(o.export_path);
  }
  Json doc{{"swapped", w.swapped}, {"c", w.c},         {"support", w.support},
           {"added", w.added},     {"mean", mean(w.function)}, {"size", w.function.size()}};
  emit(o, std::move(doc), m, fmt::format("c {:.9g} |S| {} added {:.9g} mean {:.12g}", w.c, w.support, w.added, mean(w.function)),
       out);
  return kOk;
}

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::TooLarge: return kSizeCap;
    case Errc::VerificationFailed: return kVerificationFailure;
    default: return kInputError;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Monochromatic solution densities, commonness searches and certified constants"};
  app.require_subcommand(1);

  auto system_opts = [&](CLI::App* sub) {
    sub->add_option("--system", o.system, "preset (phi, a4, a5, ap3, schur) or system file")->capture_default_str();
    sub->add_option("--p", o.p, "modulus for presets")->capture_default_str();
    sub->add_option("--n", o.n, "dimension of F_p^n")->capture_default_str();
  };
  auto function_opts = [&](CLI::App* sub) {
    sub->add_option("--function", o.function_path, "function file (text or GFPN binary)");
    sub->add_option("--const", o.const_value, "constant function value");
    sub->add_option("--coset", o.coset, "coset indicator, e.g. x1=1");
  };
  auto property_opts = [&](CLI::App* sub) {
    sub->add_option("--property", o.property, "common|geometric|sidorenko|alon|prevalence")->capture_default_str();
    sub->add_option("--l", o.l, "free variables for alon");
    sub->add_option("--alpha", o.alpha, "target or pinned mean");
  };
  auto search_opts = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed)->capture_default_str();
    sub->add_option("--restarts", o.restarts)->capture_default_str();
    sub->add_option("--max-iters", o.max_iters)->capture_default_str();
  };
  auto common_opts = [&](CLI::App* sub) {
    sub->add_option("--out", o.out, "write the report here");
    sub->add_option("--threads", o.threads, "worker cap (0 = hardware)");
  };

  auto* eval = app.add_subcommand("eval", "evaluate T and a defect");
  system_opts(eval);
  function_opts(eval);
  property_opts(eval);
  eval->add_option("--method", o.method, "brute|fourier|both")->capture_default_str();
  common_opts(eval);

  auto* search = app.add_subcommand("search", "projected gradient search for violations");
  system_opts(search);
  property_opts(search);
  search_opts(search);
  search->add_option("--export", o.export_path, "write the best function (.bin for binary)");
  common_opts(search);

  auto* scan = app.add_subcommand("scan-alpha", "pinned-mean searches across a grid");
  system_opts(scan);
  property_opts(scan);
  search_opts(scan);
  scan->add_option("--resolution", o.resolution, "grid points k/(r+1), k = 1..r")->capture_default_str();
  common_opts(scan);

  auto* verify = app.add_subcommand("verify", "certify the lemma inequalities");
  verify->add_flag("--negate-q", o.negate_q, "self-test: flip the sign of q");
  common_opts(verify);

  auto* constants = app.add_subcommand("constants", "derive the certified constant ledger");
  constants->add_option("--check-l", o.check_l, "replay the l-conditions at this l");
  common_opts(constants);

  auto* witness = app.add_subcommand("witness", "free-variable witness f + g");
  system_opts(witness);
  function_opts(witness);
  witness->add_option("--l", o.l, "free variables")->required();
  witness->add_option("--export", o.export_path, "write the witness function");
  common_opts(witness);

  std::vector<std::string> argv_store{"commonsys"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    set_max_threads(o.threads);
    if (*eval) return cmd_eval(o, out);
    if (*search) return cmd_search(o, out);
    if (*scan) return cmd_scan(o, out);
    if (*verify) return cmd_verify(o, out, err);
    if (*constants) return cmd_constants(o, out, err);
    if (*witness) return cmd_witness(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace commonsys::cli
