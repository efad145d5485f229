// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "commonsys/certify.hpp"
#include "commonsys/counting.hpp"
#include "commonsys/optimize.hpp"
#include "commonsys/serialize.hpp"
#include "oracles.hpp"

using namespace commonsys;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

void expect(Outcome& o, bool cond, const std::string& what) {
  if (!cond && o.pass) {
    o.pass = false;
    o.detail = what;
  }
}

int failures = 0;

void criterion(int id, const std::string& name, double budget_s, const std::function<Outcome()>& body) {
  auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs > budget_s && o.pass) o = {false, "over time budget"};
  if (!o.pass) ++failures;
  std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << id << ": " << name << "  (" << std::fixed
            << std::setprecision(2) << secs << " s / " << budget_s << " s)";
  if (!o.detail.empty()) std::cout << "  " << o.detail;
  std::cout << std::endl;
}

GroupFunction with_mean(std::uint32_t p, std::uint32_t n, double alpha, std::mt19937_64& rng) {
  return project_box_mean(oracle::random_function(p, n, rng), alpha);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Rational rat(const Json& entry) { return parse_rational(entry.at("exact").get<std::string>()); }

}  // namespace

int main() {
  std::cout << std::scientific;

  criterion(1, "Fourier evaluation agrees with exact enumeration on 200 random instances", 60, [] {
    Outcome o;
    std::mt19937_64 rng(20240101);
    std::uniform_int_distribution<int> pick_p(0, 1), pick_n(1, 2), pick_m(1, 2);
    int done = 0;
    double worst = 0;
    while (done < 200) {
      std::uint32_t p = pick_p(rng) ? 5 : 3, n = static_cast<std::uint32_t>(pick_n(rng));
      std::size_t m = static_cast<std::size_t>(pick_m(rng));
      std::uniform_int_distribution<std::size_t> pick_t(m + 1, 9);
      std::size_t t = pick_t(rng);
      // Keep the exact enumeration at desk scale.
      if (std::pow(double(p), double(n * (t - m))) > 6e4) continue;
      auto s = oracle::random_system(p, m, t, rng);
      auto f = oracle::random_function(p, n, rng);
      double exact = to_double(t_brute(s, f));
      double err = std::abs(t_fourier(s, f) - exact) / std::max(1.0, std::abs(exact));
      worst = std::max(worst, err);
      expect(o, err <= 1e-9, "mismatch at instance " + std::to_string(done));
      ++done;
    }
    std::ostringstream d;
    d << "worst relative error " << worst;
    if (o.pass) o.detail = d.str();
    return o;
  });

  criterion(2, "two-block system: no Common violation with 64 restarts at n = 1, 2", 300, [] {
    Outcome o;
    auto phi = preset_system("phi", 3);
    double best = 1e300;
    for (std::uint32_t n : {1u, 2u}) {
      SearchConfig c;
      c.objective = Property::common();
      c.p = 3;
      c.n = n;
      c.restarts = 64;
      c.seed = 2024;
      auto r = minimize_defect(phi, c);
      best = std::min(best, r.best_defect);
      expect(o, r.best_defect >= -1e-6, "violation found at n = " + std::to_string(n));
    }
    std::ostringstream d;
    d << "best defect " << best;
    if (o.pass) o.detail = d.str();
    return o;
  });

  criterion(3, "coset {x1 = 1} has Sidorenko defect exactly -(1/3)^9", 1, [] {
    Outcome o;
    auto phi = preset_system("phi", 3);
    for (std::uint32_t n : {1u, 2u}) {
      std::vector<std::uint32_t> a(n, 0);
      a[0] = 1;
      auto f = to_exact(GroupFunction::coset_indicator(3, n, a, 1));
      auto r = defect(phi, f, Property::sidorenko());
      expect(o, *r.exact_t_f == 0, "T is not zero");
      expect(o, *r.exact_value == -pow(Rational(1, 3), 9), "defect is not -(1/3)^9");
    }
    return o;
  });

  criterion(4, "x1+x2+x3+x4 = 0 over F_5 is uncommon (search and character bump)", 60, [] {
    Outcome o;
    auto s = LinearSystem::from_rows(5, {{1, 1, 1, 1}});
    SearchConfig c;
    c.objective = Property::common();
    c.p = 5;
    c.n = 1;
    c.restarts = 16;
    c.seed = 7;
    auto r = minimize_defect(s, c);
    expect(o, r.best_defect <= -1e-4, "search did not reach -1e-4");

    // Bump 1/2 + eps cos(2 pi (x + k)/5): T(f) + T(1-f) - 2^-3 = (eps^4/4) cos(8 pi k / 5).
    const double eps = 0.5;
    std::uint32_t k = 0;
    for (std::uint32_t j = 0; j < 5; ++j)
      if (std::cos(8 * std::numbers::pi * j / 5) < 0) {
        k = j;
        break;
      }
    std::vector<double> v(5);
    for (std::uint32_t x = 0; x < 5; ++x) v[x] = 0.5 + eps * std::cos(2 * std::numbers::pi * (x + k) / 5);
    auto bump = GroupFunction(5, 1, v);
    auto exact = defect(s, to_exact(bump), Property::common());
    double predicted = std::pow(eps, 4) / 4 * std::cos(8 * std::numbers::pi * k / 5);
    expect(o, sgn(*exact.exact_value) < 0, "bump defect is not negative");
    expect(o, std::abs(to_double(*exact.exact_value) - predicted) < 1e-12, "bump defect differs from closed form");
    std::ostringstream d;
    d << "search " << r.best_defect << ", bump " << to_double(*exact.exact_value);
    if (o.pass) o.detail = d.str();
    return o;
  });

  criterion(5, "verify emits 7 exactly verified lemma certificates", 30, [] {
    Outcome o;
    std::ostringstream out, err;
    int code = cli::run({"verify"}, out, err);
    expect(o, code == 0, "verify exited with " + std::to_string(code));
    expect(o, out.str().find("7/7 certificates verified") != std::string::npos, "summary line missing");
    auto certs = lemma_suite();
    std::set<std::string> ids;
    for (const auto& c : certs) {
      std::string why;
      expect(o, verify_certificate(c, &why), c.id + " does not re-verify: " + why);
      ids.insert(c.id);
    }
    expect(o, certs.size() == 7 && ids.size() == 7, "wrong certificate count");
    const std::vector<std::pair<std::string, CertMethod>> want{
        {"lemma.i", CertMethod::Sturm},     {"lemma.ii", CertMethod::Sturm},       {"lemma.iii", CertMethod::Sturm},
        {"lemma.iv", CertMethod::RationalChain}, {"lemma.v", CertMethod::Subdivision}, {"lemma.vi", CertMethod::Sturm},
        {"lemma.vii", CertMethod::Identity}};
    for (const auto& [id, method] : want) {
      bool found = false;
      for (const auto& c : certs) found |= c.id == id && c.method == method;
      expect(o, found, id + " missing or uses the wrong method");
    }
    return o;
  });

  criterion(6, "constant ledger: positive constants, l0 <= 10^7, slack table replays", 600, [] {
    Outcome o;
    auto path = std::filesystem::temp_directory_path() / "commonsys_acceptance_ledger.json";
    std::ostringstream out, err;
    int code = cli::run({"constants", "--out", path.string()}, out, err);
    expect(o, code == 0, "constants exited with " + std::to_string(code));
    auto j = Json::parse(slurp(path));
    const auto& k = j.at("constants");
    for (const char* name : {"c0", "c1", "c3", "c5", "c6"}) expect(o, sgn(rat(k.at(name))) > 0, std::string(name) + " <= 0");
    expect(o, std::isfinite(k.at("C4").at("approx").get<double>()), "C4 not finite");
    std::uint64_t l0 = k.at("l0").get<std::uint64_t>();
    expect(o, l0 >= 1 && l0 <= 10'000'000, "l0 out of range");
    for (const auto& c : j.at("certificates")) expect(o, c.at("verified").get<bool>(), c.at("id").get<std::string>() + " unverified");

    // Rebuild the ledger from the emitted rationals and replay.
    ConstantLedger L;
    L.c0 = rat(k.at("c0"));
    L.c1 = rat(k.at("c1"));
    L.c2 = rat(k.at("c2"));
    L.c3 = rat(k.at("c3"));
    L.C4 = rat(k.at("C4"));
    L.c5 = rat(k.at("c5"));
    L.c6 = rat(k.at("c6"));
    L.log_gap = rat(k.at("log_gap"));
    const auto& rows = j.at("slack");
    expect(o, rows.size() == 3, "slack table needs three rows");
    std::uint64_t mult[3] = {1, 2, 10};
    for (std::size_t r = 0; r < rows.size() && r < 3; ++r) {
      std::uint64_t l = rows[r].at("l").get<std::uint64_t>();
      expect(o, l == mult[r] * l0, "slack row at the wrong l");
      auto replay = check_l(L, l);
      expect(o, replay.all_hold && replay.coverage, "replay fails at l = " + std::to_string(l));
      for (std::size_t c = 0; c < 4; ++c) {
        Rational emitted = parse_rational(rows[r].at("conditions")[c].at("slack").get<std::string>());
        expect(o, sgn(emitted) >= 0, "negative slack");
        expect(o, emitted == replay.conditions[c].slack(), "emitted slack differs from replay");
      }
      // Independent floating checks of the original (unrearranged) conditions.
      long double lc = l, c5 = to_double(L.c5), c6 = to_double(L.c6);
      long double m = std::min(to_double(L.c2), 1.0 / 6);
      expect(o, c5 / std::sqrt(lc) <= m, "(1) fails in floating point");
      expect(o, to_double(L.C4) * c5 / std::sqrt(lc) <= 0.5L * to_double(L.c3) * std::pow((long double)to_double(L.c1), 4) * (1 + 1e-12L),
             "(2) fails in floating point");
      expect(o, (lc / 2) * std::log1p(-4 * c5 * c5 / lc) + std::log1p(256 * c6) >= -1e-15L, "(3) fails in floating point");
      expect(o, std::log((long double)to_double(L.c0)) + lc * std::log1p(2 * c5 / std::sqrt(lc)) >= -8 * std::log(2.0L),
             "(4) fails in floating point");
    }
    std::ostringstream d;
    d << "l0 = " << l0;
    if (o.pass) o.detail = d.str();
    return o;
  });

  const auto ledger = derive_constants();

  criterion(7, "T(f) >= c0 - 1e-9 for 1000 random f with mean >= 0.45", 120, [&] {
    Outcome o;
    auto phi = preset_system("phi", 3);
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> a(0.45, 1.0);
    const double c0 = to_double(ledger.c0);
    double worst = 1e300;
    for (int rep = 0; rep < 1000; ++rep) {
      std::uint32_t n = 1 + rep % 3;
      double alpha = rep % 5 == 0 ? 0.45 : a(rng);
      auto f = with_mean(3, n, alpha, rng);
      double t = t_fourier(phi, f);
      worst = std::min(worst, t - c0);
      expect(o, t >= c0 - 1e-9, "T below c0 at sample " + std::to_string(rep));
    }
    std::ostringstream d;
    d << "min T - c0 = " << worst;
    if (o.pass) o.detail = d.str();
    return o;
  });

  criterion(8, "geometric bound near mean 1/2 holds on 1000 random f", 120, [&] {
    Outcome o;
    auto phi = preset_system("phi", 3);
    std::mt19937_64 rng(88);
    const double c2 = to_double(ledger.c2), c3 = to_double(ledger.c3), C4 = to_double(ledger.C4);
    std::uniform_real_distribution<double> d(-c2, c2);
    double worst = 1e300;
    for (int rep = 0; rep < 1000; ++rep) {
      std::uint32_t n = 1 + rep % 3;
      double alpha = 0.5 + (rep % 7 == 0 ? 0.0 : d(rng));
      GroupFunction f = with_mean(3, n, alpha, rng);
      if (rep % 4 == 1) {
        // Character bumps push the spectrum to its extremes.
        std::uniform_int_distribution<std::size_t> h(1, f.size() - 1);
        std::uniform_int_distribution<std::uint32_t> kk(0, 2);
        f = project_box_mean(character_bump(3, n, h(rng), kk(rng), 0.5), alpha);
      }
      double a = mean(f);
      if (std::abs(a - 0.5) > c2) continue;
      double lhs = t_fourier(phi, f) * t_fourier(phi, f.complement());
      double g = spectral_sup(f.shifted(a));
      double rhs = std::pow(2.0, -18) + c3 * std::pow(g, 4) - C4 * std::abs(a - 0.5) - 1e-8;
      worst = std::min(worst, lhs - rhs);
      expect(o, lhs >= rhs, "bound fails at sample " + std::to_string(rep));
    }
    std::ostringstream s;
    s << "min slack " << worst;
    if (o.pass) o.detail = s.str();
    return o;
  });

  criterion(9, "free-variable witness contract on 50 random inputs", 30, [] {
    Outcome o;
    std::mt19937_64 rng(99);
    const char* systems[] = {"phi", "a5", "schur"};
    int done = 0;
    while (done < 50) {
      auto s = preset_system(systems[done % 3], 3);
      std::uint32_t n = 1 + done % 3;
      auto f = with_mean(3, n, 0.5, rng);
      double tf = t_product(s, f), t1 = t_product(s, f.complement());
      if (std::min(tf, t1) <= 0) continue;
      double c = 0.5 * std::abs(std::log(t1 / tf));
      std::uint64_t need = static_cast<std::uint64_t>(std::ceil(45 * c / 4));
      std::uint64_t l = std::max<std::uint64_t>(1, need) + done * 37;
      auto w = alon_witness(f, s, l);
      expect(o, w.function.in_unit_box(), "witness leaves [0,1]");
      expect(o, std::abs(mean(w.function) - (0.5 + w.c / (2.0 * l))) <= 1e-9, "witness mean is off");
      expect(o, std::abs(w.c - c) <= 1e-12, "c differs from an independent computation");
      expect(o, 9 * w.support >= 4 * f.size(), "|S| < 4 p^n / 9");
      std::size_t support = 0;
      const GroupFunction& base = w.swapped ? f.complement() : f;
      for (double v : base.values()) support += v <= 0.9;
      expect(o, support == w.support, "|S| differs from a direct count");
      ++done;
    }
    return o;
  });

  criterion(10, "mean-1/3 searches reach T <= 1e-6 for Schur and the two-block system", 120, [] {
    Outcome o;
    std::ostringstream d;
    for (const char* name : {"schur", "phi"}) {
      auto s = preset_system(name, 3);
      SearchConfig c;
      c.objective = Property::prevalence(1.0 / 3);
      c.p = 3;
      c.n = 2;
      c.restarts = 16;
      c.seed = 3;
      auto r = minimize_defect(s, c);
      expect(o, r.best_defect <= 1e-6, std::string(name) + " search stayed above 1e-6");
      expect(o, std::abs(mean(r.best) - 1.0 / 3) <= 1e-9, std::string(name) + " mean drifted");
      d << name << " T = " << r.best_defect << "  ";
    }
    // The coset {x1 = 1} is the explicit witness: mean 1/3, no solutions,
    // possible because neither system is translation invariant.
    auto coset = to_exact(GroupFunction::coset_indicator(3, 2, {1, 0}, 1));
    for (const char* name : {"schur", "phi"}) {
      auto s = preset_system(name, 3);
      expect(o, !is_translation_invariant(s), std::string(name) + " is translation invariant");
      expect(o, t_brute(s, coset) == 0, std::string(name) + " has solutions in the coset");
    }
    expect(o, coset.mean() == Rational(1, 3), "coset mean is not 1/3");
    if (o.pass) o.detail = d.str();
    return o;
  });

  std::cout << (failures == 0 ? "all acceptance criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
