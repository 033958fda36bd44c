#include "prohecke/suites.hpp"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <random>
#include <set>
#include <sstream>

#include "prohecke/dga.hpp"
#include "prohecke/error.hpp"
#include "prohecke/hecke.hpp"
#include "prohecke/models.hpp"
#include "prohecke/modules.hpp"
#include "prohecke/scheme.hpp"

namespace prohecke::suites {

using gf::FieldElt;

const std::vector<std::string>& all_suite_names() {
  static const std::vector<std::string> names{"blocks", "models", "modules", "scheme", "dga", "endo"};
  return names;
}

namespace {

bool group_dependent(const std::string& suite) { return suite != "modules" && suite != "dga"; }

std::string join(const std::vector<std::size_t>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// Config and report

void RunConfig::validate() const {
  std::uint32_t p = 0;
  try {
    p = split_prime_power(q).first;
  } catch (const Error& e) {
    throw Error(ErrorKind::ConfigError, "q = " + std::to_string(q) + " is not a prime power");
  }
  if (ambient_degree < 1) throw Error(ErrorKind::ConfigError, "ambient degree must be at least 1");
  if (groups.empty()) throw Error(ErrorKind::ConfigError, "no group selected");
  std::vector<std::string> chosen = suites.empty() ? all_suite_names() : suites;
  for (const auto& s : chosen)
    if (std::find(all_suite_names().begin(), all_suite_names().end(), s) == all_suite_names().end())
      throw Error(ErrorKind::ConfigError, "unknown suite '" + s + "'");
  if (p == 2) {
    if (std::find(groups.begin(), groups.end(), GroupKind::PGL2) != groups.end())
      throw Error(ErrorKind::ConfigError, "PGL2 needs odd q");
    if (std::find(chosen.begin(), chosen.end(), "scheme") != chosen.end())
      throw Error(ErrorKind::ConfigError, "the scheme suite needs odd q");
  }
  std::uint64_t order = 1;
  for (std::uint32_t i = 0; i < ambient_degree; ++i) order *= q;
  if (order > 65536) throw Error(ErrorKind::ConfigError, "ambient field too large");
  for (auto l : lambdas)
    if (l == 0 || l >= order) throw Error(ErrorKind::ConfigError, "lambda codes must be nonzero field elements");
  if (max_length < 1) throw Error(ErrorKind::ConfigError, "max length must be positive");
  if (trunc_degree < 2) throw Error(ErrorKind::ConfigError, "truncation degree must be at least 2");
  if (window < 2) throw Error(ErrorKind::ConfigError, "window must be at least 2");
  if (format != "table" && format != "json") throw Error(ErrorKind::ConfigError, "format is table or json");
  if (module_samples < 0 || dga_samples < 0) throw Error(ErrorKind::ConfigError, "sample counts must be nonnegative");
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json gs = nlohmann::json::array();
  for (auto g : groups) gs.push_back(prohecke::to_string(g));
  auto [p, e] = split_prime_power(q);
  return {{"q", q},
          {"p", p},
          {"e", e},
          {"ambient_degree", ambient_degree},
          {"groups", gs},
          {"lambdas", lambdas},
          {"max_length", max_length},
          {"trunc_degree", trunc_degree},
          {"window", window},
          {"seed", seed},
          {"suites", suites.empty() ? all_suite_names() : suites},
          {"module_samples", module_samples},
          {"dga_samples", dga_samples}};
}

void SuiteResult::fail(const std::string& why) {
  if (pass) first_failure = why;
  pass = false;
}

nlohmann::json SuiteResult::to_json(bool with_timing) const {
  nlohmann::json j = {{"name", name}, {"pass", pass}, {"details", details}};
  if (!group.empty()) j["group"] = group;
  if (!pass) j["first_failure"] = first_failure;
  if (with_timing) j["seconds"] = seconds;
  return j;
}

bool Report::pass() const {
  return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.pass; });
}

nlohmann::json Report::to_json() const {
  nlohmann::json ss = nlohmann::json::array();
  for (const auto& s : suites) ss.push_back(s.to_json(config.timing));
  return {{"version", kSchemaVersion}, {"config", config.to_json()}, {"suites", ss}, {"pass", pass()}};
}

std::vector<FieldElt> resolve_lambdas(const RunConfig& c, const gf::FieldPtr& field) {
  std::vector<FieldElt> out;
  if (c.lambdas.empty()) {
    torus::Torus t(GroupKind::GL2, c.q, field);
    for (std::int64_t k = 0; k + 1 < static_cast<std::int64_t>(c.q); ++k) out.push_back(t.zeta_pow(k));
    std::sort(out.begin(), out.end());
  } else {
    for (auto code : c.lambdas) out.push_back(field->elt(code));
  }
  return out;
}

// ---------------------------------------------------------------------------
// blocks: central idempotents, orbit counts, supersingular census

SuiteResult blocks_suite(GroupKind kind, std::uint32_t q, const gf::FieldPtr& field) {
  SuiteResult r{"blocks", prohecke::to_string(kind)};
  hecke::HeckeAlgebra alg(kind, q, field);
  const auto& tor = alg.torus();
  auto orbits = tor.orbits();
  std::size_t regular = 0, nonregular = 0;
  for (const auto& g : orbits) (g.regular ? regular : nonregular)++;

  // Expected counts from the character group alone.
  std::size_t chars = tor.characters().size(), fixed = 0;
  for (const auto& xi : tor.characters()) fixed += tor.s0_twist(xi) == xi;
  std::size_t want_reg = (chars - fixed) / 2, want_non = fixed;
  if (kind == GroupKind::GL2) {
    want_non = q - 1;
    want_reg = (q - 1) * (q - 2) / 2;
  }
  r.expect(regular == want_reg, "regular orbit count");
  r.expect(nonregular == want_non, "non-regular orbit count");

  hecke::HeckeElt sum = alg.zero();
  std::vector<hecke::HeckeElt> idem;
  for (const auto& g : orbits) idem.push_back(alg.orbit_idempotent(g));
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < idem.size(); ++i) {
    const auto& e = idem[i];
    r.expect(alg.mul(e, e) == e, "e_gamma is not idempotent");
    r.expect(alg.is_central(e), "e_gamma is not central");
    for (std::size_t j = i + 1; j < idem.size(); ++j, ++pairs)
      r.expect(alg.mul(e, idem[j]).is_zero() && alg.mul(idem[j], e).is_zero(), "idempotents not orthogonal");
    sum = sum.plus(e);
  }
  r.expect(sum == alg.one(), "idempotents do not sum to 1");

  // Census: one character per xi nontrivial on the coroot image, two otherwise.
  auto ss = hecke::enumerate_supersingular_chars(alg);
  std::size_t want_total = 0, infinite = 0;
  for (const auto& xi : tor.characters()) want_total += tor.trivial_on_coroot(xi) ? 2 : 1;
  for (const auto& c : ss) infinite += !c.finite_pd;
  r.expect(ss.size() == want_total, "supersingular character count");
  if (kind == GroupKind::SL2) r.expect(infinite == q - 2, "SL2 infinite-pd supersingular count");

  r.details = {{"q", q},
               {"characters", chars},
               {"regular_orbits", regular},
               {"nonregular_orbits", nonregular},
               {"orthogonal_pairs", pairs},
               {"supersingular_chars", ss.size()},
               {"infinite_pd_chars", infinite}};
  std::ostringstream os;
  os << "orbits: " << regular << " regular, " << nonregular << " non-regular; supersingular characters: " << ss.size()
     << " (" << infinite << " of infinite pd)";
  r.lines.push_back(os.str());
  return r;
}

// ---------------------------------------------------------------------------
// models: matrix models, centre, three-term resolution

SuiteResult models_suite(GroupKind kind, std::uint32_t q, const gf::FieldPtr& field, int max_length,
                         int trunc_degree, const std::vector<FieldElt>& lambdas) {
  SuiteResult r{"models", prohecke::to_string(kind)};
  hecke::HeckeAlgebra alg(kind, q, field);
  models::ModelVerifier verifier(alg, static_cast<std::size_t>(max_length));
  std::size_t verified = 0, skipped = 0, checks = 0, resolutions = 0;
  for (const auto& g : alg.torus().orbits()) {
    if (!models::has_model(alg, g)) {
      ++skipped;
      continue;
    }
    try {
      auto rep = verifier.verify(models::build_model(alg, g));
      for (const auto& c : rep.checks) {
        checks += c.checked;
        r.expect(c.passed, "model check '" + c.name + "': " + c.detail);
      }
      ++verified;
    } catch (const Error& e) {
      r.fail(e.what());
    }
    if (kind == GroupKind::GL2 && g.regular) {
      for (const auto& lam : lambdas) {
        auto m = hecke::supersingular_module(alg, g, lam);
        auto rep = models::os_resolution_check(alg, g, m, lam, trunc_degree);
        r.expect(rep.passed && rep.counit_surjective, "three-term resolution not exact");
        ++resolutions;
      }
    }
  }
  r.details = {{"max_length", max_length},
               {"blocks_verified", verified},
               {"blocks_without_model", skipped},
               {"identities_checked", checks},
               {"resolutions_checked", resolutions},
               {"trunc_degree", trunc_degree}};
  std::ostringstream os;
  os << verified << " block models verified up to length " << max_length << " (" << checks << " identities)";
  if (skipped) os << ", " << skipped << " block without model";
  r.lines.push_back(os.str());
  if (resolutions) r.lines.push_back(std::to_string(resolutions) + " three-term resolutions exact up to degree " +
                                     std::to_string(trunc_degree - 1));
  return r;
}

// ---------------------------------------------------------------------------
// modules: decomposition certificates, Ext and stable tables, A-side table

SuiteResult modules_suite(const gf::FieldPtr& field, std::uint64_t seed, int samples, int trunc_degree) {
  using namespace modules;
  SuiteResult r{"modules", ""};
  const gf::FieldCtx* f = field.get();
  std::mt19937 rng(static_cast<std::mt19937::result_type>(seed));
  std::uniform_int_distribution<std::size_t> dim(0, 6);
  int certified = 0;
  for (int s = 0; s < samples; ++s) {
    std::size_t n = dim(rng);
    std::uniform_int_distribution<std::size_t> split(0, n);
    std::size_t d1 = split(rng);
    FDModule m = random_r_module(f, d1, n - d1, rng);
    DecompResult d = decompose(m);
    FDModule std_m = standard_module(f, AlgebraKind::R, d.a1, d.a2, d.b1, d.b2);
    FDModule moved = m.change_basis(d.basis);
    bool same = true;
    for (const auto& g : generator_names(AlgebraKind::R)) same = same && moved.act(g) == std_m.act(g);
    same = same && d.a1 + d.a2 + 2 * (d.b1 + d.b2) == m.dim;
    if (same)
      ++certified;
    else
      r.fail("decomposition certificate fails on sample " + std::to_string(s));
  }

  nlohmann::json ext = nlohmann::json::object();
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j) {
      std::vector<std::size_t> row;
      for (int n = 0; n <= 8; ++n) {
        std::size_t v = ext_group(chi(f, i), chi(f, j), n);
        row.push_back(v);
        // Ext^n(chi_i, chi_j) is 1 exactly when n and i - j have the same parity.
        r.expect(v == ((n + i + j) % 2 == 0 ? 1u : 0u), "Ext table entry");
      }
      std::size_t st = stable_hom(chi(f, i), chi(f, j)).dim;
      r.expect(st == (i == j ? 1u : 0u), "stable Hom between simples");
      std::string key = "chi" + std::to_string(i) + "->chi" + std::to_string(j);
      ext[key] = {{"ext", row}, {"stable_hom", st}};
      r.lines.push_back("Ext^0..8(" + key + ") = " + join(row) + ", stable Hom " + std::to_string(st));
    }
  r.expect(decompose(shift(chi(f, 1))) == decompose(chi(f, 2)), "shift chi_1 is not chi_2");
  r.expect(shift(projective(f, 1)).dim == 0, "shift of a projective is not zero");

  nlohmann::json aside = nlohmann::json::object();
  for (int s = 1; s <= 2; ++s)
    for (int t = 1; t <= 2; ++t) {
      auto row = a_side_ext(s, t, 6, trunc_degree);
      for (int j = 0; j <= 6; ++j) {
        std::size_t want = s == t ? (j == 0 ? static_cast<std::size_t>(trunc_degree) : (j % 2 == 0 ? 1u : 0u))
                                  : (j % 2 == 1 ? 1u : 0u);
        r.expect(row[static_cast<std::size_t>(j)] == want, "A-side Ext table entry");
      }
      std::string key = "M" + std::to_string(s) + "->M" + std::to_string(t);
      aside[key] = row;
      r.lines.push_back("A-side Ext^0..6(" + key + ") = " + join(row));
    }
  r.details = {{"samples", samples},
               {"certified", certified},
               {"seed", seed},
               {"ext_tables", ext},
               {"a_side_tables", aside},
               {"trunc_degree", trunc_degree}};
  r.lines.insert(r.lines.begin(), std::to_string(certified) + "/" + std::to_string(samples) +
                                      " random R-modules decomposed with verified certificates");
  return r;
}

// ---------------------------------------------------------------------------
// scheme: correspondence tables

SuiteResult scheme_suite(GroupKind kind, std::uint32_t q, const gf::FieldPtr& field,
                         const std::vector<FieldElt>& lambdas) {
  SuiteResult r{"scheme", prohecke::to_string(kind)};
  auto s = scheme::build_scheme(kind, q);
  auto rep = scheme::correspondence_table(kind, q, lambdas, field);
  r.expect(rep.nodes_only, "a parameter is not a node");
  r.expect(rep.surjective, "some node is not hit");
  r.expect(rep.image_size == rep.node_count, "image size differs from node count");
  if (kind == GroupKind::SL2)
    r.expect(rep.fibers_match_packets, "fibers differ from the packets {chi_i, chi_(q-1-i)}");
  else
    r.expect(rep.injective, "parameter map is not injective");
  if (kind == GroupKind::GL2)
    r.expect(rep.rows.size() == lambdas.size() * (q - 1) * (q - 2) / 2, "module count per z");
  r.details = {{"scheme", s.to_json()}, {"correspondence", rep.to_json()}};
  std::ostringstream head;
  head << rep.rows.size() << " modules -> " << rep.image_size << " of " << rep.node_count << " nodes";
  r.lines.push_back(head.str());
  r.lines.push_back("| module | component | node | fiber |");
  r.lines.push_back("|---|---|---|---|");
  for (const auto& row : rep.rows) {
    auto p = row.point.canonical();
    std::ostringstream os;
    os << "| " << row.module << " | " << p.component << " | " << p.segment;
    if (p.gm) os << " @z=" << p.gm->to_string();
    os << " | " << row.fiber_id << " |";
    r.lines.push_back(os.str());
  }
  return r;
}

// ---------------------------------------------------------------------------
// dga: differential, product, cohomology, degree-0 dictionary

SuiteResult dga_suite(std::uint32_t q, const gf::FieldPtr& field, std::uint64_t seed, int samples, int window) {
  SuiteResult r{"dga", ""};
  const gf::FieldCtx* f = field.get();
  std::mt19937 rng(static_cast<std::mt19937::result_type>(seed + 17));
  // Degrees up to 3 shift by at most 3 indices, so windows start at 2 to leave room for d and the product.
  std::uniform_int_distribution<int> deg(-3, 3), len(2, std::max(2, window + 2));
  int good = 0;
  for (int s = 0; s < samples; ++s) {
    int L = len(rng);
    auto x = dga::random_elt(f, deg(rng), -L, L, rng);
    auto y = dga::random_elt(f, deg(rng), -L, L, rng);
    bool ok = dga::dga_d(dga::dga_d(x)).is_zero();
    auto lhs = dga::dga_d(dga::dga_mul(x, y));
    auto a = dga::dga_mul(dga::dga_d(x), y);
    auto b = dga::dga_mul(x, dga::dga_d(y));
    int lo = std::max({lhs.lo(), a.lo(), b.lo()}), hi = std::min({lhs.hi(), a.hi(), b.hi()});
    FieldElt sign = f->from_int(x.degree % 2 == 0 ? 1 : -1);
    ok = ok && lo <= hi &&
         lhs.restrict_to(lo, hi) == a.restrict_to(lo, hi) + b.restrict_to(lo, hi).scaled(sign);
    if (ok)
      ++good;
    else
      r.fail("d^2 or Leibniz fails on sample " + std::to_string(s));
  }

  nlohmann::json coh = nlohmann::json::array();
  for (int n = -4; n <= 4; ++n) {
    auto small = dga::dga_cohomology(f, n, std::abs(n) + 2);
    auto big = dga::dga_cohomology(f, n, std::abs(n) + 4);
    std::size_t diag = n % 2 == 0 ? 1 : 0;
    bool pattern = small.block_ranks[0][0] == diag && small.block_ranks[1][1] == diag &&
                   small.block_ranks[0][1] == 1 - diag && small.block_ranks[1][0] == 1 - diag;
    r.expect(pattern, "cohomology ranks in degree " + std::to_string(n));
    r.expect(small.block_ranks == big.block_ranks, "cohomology not window-stable in degree " + std::to_string(n));
    coh.push_back({{"degree", n}, {"block_ranks", small.to_json()["block_ranks"]}});
    std::ostringstream os;
    os << "H_" << n << " ranks (" << small.block_ranks[0][0] << " " << small.block_ranks[0][1] << "; "
       << small.block_ranks[1][0] << " " << small.block_ranks[1][1] << ")";
    r.lines.push_back(os.str());
  }
  auto ring = dga::cohomology_ring_check(f, 3, 3);
  r.expect(ring.ok, "cohomology products: " + ring.first_failure);

  hecke::HeckeAlgebra gl(GroupKind::GL2, q, field);
  std::size_t dict = 0;
  int max_l = std::min(window, 4);
  for (const auto& g : gl.torus().orbits()) {
    if (!g.regular) continue;
    for (int L = 0; L <= max_l; ++L) {
      auto rep = dga::degree0_check(gl, g, L);
      r.expect(rep.ok(), "degree-0 dictionary: " + rep.first_failure);
      ++dict;
    }
  }
  r.details = {{"samples", samples},
               {"d2_leibniz_ok", good},
               {"cohomology", coh},
               {"ring_products", ring.products},
               {"degree0_checks", dict},
               {"degree0_max_window", max_l}};
  r.lines.insert(r.lines.begin(), std::to_string(good) + "/" + std::to_string(samples) +
                                      " random pairs satisfy d^2 = 0 and Leibniz");
  r.lines.push_back(std::to_string(ring.products) + " class products match (R_e R_o; R_o R_e)");
  r.lines.push_back(std::to_string(dict) + " degree-0 dictionaries verified (windows up to " +
                    std::to_string(max_l) + ")");
  return r;
}

// ---------------------------------------------------------------------------
// endo: stable endomorphisms of supersingular modules

SuiteResult endo_suite(GroupKind kind, std::uint32_t q, const gf::FieldPtr& field,
                       const std::vector<FieldElt>& lambdas) {
  SuiteResult r{"endo", prohecke::to_string(kind)};
  if (kind == GroupKind::SL2) {
    r.details = {{"applicable", false}};
    r.lines.push_back("not applicable to SL2");
    return r;
  }
  hecke::HeckeAlgebra alg(kind, q, field);
  std::vector<FieldElt> lams = lambdas;
  if (kind == GroupKind::PGL2) lams = {field->one()};
  std::size_t matched = 0, total = 0;
  for (const auto& lam : lams) {
    for (int i = 1; i <= 2; ++i)
      for (int j = 1; j <= 2; ++j)
        r.expect(modules::ext_s_specialized(i, j, lam, 2) == 1, "stable Hom over S is not one-dimensional");
    for (const auto& g : alg.torus().orbits()) {
      if (!g.regular) continue;
      ++total;
      try {
        auto res = modules::stable_endo_supersingular(alg, g, lam);
        if (res.matches && res.algebra.dim == 4)
          ++matched;
        else
          r.fail("stable endomorphisms differ from R");
      } catch (const Error& e) {
        r.fail(e.what());
      }
    }
  }
  r.details = {{"applicable", true}, {"modules", total}, {"matched", matched}, {"lambdas", lams.size()}};
  r.lines.push_back(std::to_string(matched) + "/" + std::to_string(total) +
                    " supersingular modules have stable endomorphism algebra R");
  return r;
}

// ---------------------------------------------------------------------------

Report run(const RunConfig& config) {
  config.validate();
  Report rep;
  rep.config = config;
  auto field = make_field(config.q, config.ambient_degree);
  auto lambdas = resolve_lambdas(config, field);
  std::vector<std::string> chosen = config.suites.empty() ? all_suite_names() : config.suites;
  for (const auto& name : all_suite_names()) {
    if (std::find(chosen.begin(), chosen.end(), name) == chosen.end()) continue;
    std::vector<std::optional<GroupKind>> kinds;
    if (group_dependent(name))
      for (auto g : config.groups) kinds.push_back(g);
    else
      kinds.push_back(std::nullopt);
    for (const auto& kind : kinds) {
      auto t0 = std::chrono::steady_clock::now();
      SuiteResult res;
      try {
        if (name == "blocks") res = blocks_suite(*kind, config.q, field);
        if (name == "models")
          res = models_suite(*kind, config.q, field, config.max_length, config.trunc_degree, lambdas);
        if (name == "modules") res = modules_suite(field, config.seed, config.module_samples, config.trunc_degree);
        if (name == "scheme") res = scheme_suite(*kind, config.q, field, lambdas);
        if (name == "dga") res = dga_suite(config.q, field, config.seed, config.dga_samples, config.window);
        if (name == "endo") res = endo_suite(*kind, config.q, field, lambdas);
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::ConfigError) throw;
        res = SuiteResult{name, kind ? prohecke::to_string(*kind) : ""};
        res.fail(e.what());
      }
      res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      rep.suites.push_back(std::move(res));
    }
  }
  return rep;
}

std::string emit(const Report& report, const std::string& format) {
  if (format == "json") return report.to_json().dump(2) + "\n";
  std::ostringstream os;
  os << "prohecke report v" << kSchemaVersion << "  q=" << report.config.q << " seed=" << report.config.seed << "\n";
  for (const auto& s : report.suites) {
    os << "\n[" << (s.pass ? "PASS" : "FAIL") << "] " << s.name;
    if (!s.group.empty()) os << " (" << s.group << ")";
    os << "  " << std::fixed << std::setprecision(2) << s.seconds << " s\n";
    if (!s.pass) os << "  first failure: " << s.first_failure << "\n";
    for (const auto& l : s.lines) os << "  " << l << "\n";
  }
  os << "\n" << (report.pass() ? "all suites passed" : "some suites failed") << "\n";
  return os.str();
}

}  // namespace prohecke::suites
