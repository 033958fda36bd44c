// Acceptance harness: one PASS/FAIL line per criterion, then the overall time budget.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "prohecke/error.hpp"
#include "prohecke/hecke.hpp"
#include "prohecke/models.hpp"
#include "prohecke/modules.hpp"
#include "prohecke/suites.hpp"
#include "support/module_oracle.hpp"

using namespace prohecke;
using Clock = std::chrono::steady_clock;

namespace {

const std::vector<std::uint32_t> kSmallQ{3, 5, 7, 9};
const std::vector<GroupKind> kKinds{GroupKind::GL2, GroupKind::SL2, GroupKind::PGL2};

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string note;
  void fail(const std::string& why) {
    if (pass) note = why;
    pass = false;
  }
  void absorb(const suites::SuiteResult& r, const std::string& where) {
    if (!r.pass) fail(where + ": " + r.first_failure);
  }
};

int failures = 0;

void criterion(int id, const std::string& title, const std::function<Outcome()>& body) {
  auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.fail(std::string("exception: ") + e.what());
  }
  failures += !o.pass;
  std::printf("[%s] criterion %d: %s (%.2f s)%s%s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), since(t0),
              o.note.empty() ? "" : " - ", o.note.c_str());
  std::fflush(stdout);
}

std::string tag(GroupKind k, std::uint32_t q) { return std::string(to_string(k)) + " q=" + std::to_string(q); }

}  // namespace

int main() {
  auto start = Clock::now();

  criterion(1, "block idempotents and orbit counts, q in {3,5,7,9}, < 10 s per q", [] {
    Outcome o;
    for (auto q : kSmallQ) {
      auto t0 = Clock::now();
      auto field = make_field(q);
      for (auto k : kKinds) {
        auto r = suites::blocks_suite(k, q, field);
        o.absorb(r, tag(k, q));
        // Direct count for GL2: (j, l) with j = l are fixed, the rest pair up.
        if (k == GroupKind::GL2) {
          if (r.details["nonregular_orbits"] != q - 1) o.fail(tag(k, q) + ": non-regular count");
          if (r.details["regular_orbits"] != (q - 1) * (q - 2) / 2) o.fail(tag(k, q) + ": regular count");
        }
      }
      if (since(t0) >= 10) o.fail("q=" + std::to_string(q) + " took over 10 s");
    }
    return o;
  });

  criterion(2, "matrix models at length bound 6, all kinds and blocks, < 60 s", [] {
    Outcome o;
    auto t0 = Clock::now();
    for (auto q : kSmallQ) {
      auto field = make_field(q);
      for (auto k : kKinds) o.absorb(suites::models_suite(k, q, field, 6, 8, {}), tag(k, q));
    }
    if (since(t0) >= 60) o.fail("over 60 s");
    return o;
  });

  criterion(3, "decomposition of >= 200 random R-modules over F3/F5 with brute force at dim <= 4", [] {
    Outcome o;
    int certified = 0, brute = 0;
    for (std::uint32_t p : {3u, 5u}) {
      auto f = make_field(p);
      std::mt19937 rng(7000 + p);
      std::uniform_int_distribution<std::size_t> dim(1, 6);
      for (int s = 0; s < 110; ++s) {
        std::size_t n = dim(rng);
        std::uniform_int_distribution<std::size_t> split(0, n);
        std::size_t d1 = split(rng);
        auto m = oracle::random_r_module(f.get(), d1, n - d1, rng);
        auto d = modules::decompose(m);
        auto adapted = m.change_basis(d.basis);
        auto expected = modules::standard_module(f.get(), modules::AlgebraKind::R, d.a1, d.a2, d.b1, d.b2);
        bool same = true;
        for (const auto& g : modules::generator_names(modules::AlgebraKind::R))
          same = same && adapted.act(g) == expected.act(g);
        if (!same) {
          o.fail("certificate fails at p=" + std::to_string(p) + " sample " + std::to_string(s));
          continue;
        }
        ++certified;
        if (n <= 4) {
          ++brute;
          if (oracle::brute_force_summands(m) != std::array<std::size_t, 4>{d.a1, d.a2, d.b1, d.b2})
            o.fail("brute force disagrees at p=" + std::to_string(p) + " sample " + std::to_string(s));
        }
      }
    }
    if (certified < 200) o.fail("only " + std::to_string(certified) + " certified");
    o.note = o.pass ? std::to_string(certified) + " certified, " + std::to_string(brute) + " brute-forced" : o.note;
    return o;
  });

  criterion(4, "stable Hom and Ext tables for n <= 8, A-side table for j <= 6 at D = 8", [] {
    Outcome o;
    for (std::uint32_t p : {3u, 5u}) {
      auto r = suites::modules_suite(make_field(p), 1, 0, 8);
      o.absorb(r, "p=" + std::to_string(p));
      const auto& ext = r.details["ext_tables"];
      for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 2; ++j) {
          const auto& e = ext["chi" + std::to_string(i) + "->chi" + std::to_string(j)];
          if (e["stable_hom"] != (i == j ? 1 : 0)) o.fail("stable Hom not delta");
          for (int n = 0; n <= 8; ++n)
            if (i == j && e["ext"][n] != (n % 2 == 0 ? 1 : 0)) o.fail("self-Ext parity");
        }
      const auto& a = r.details["a_side_tables"];
      if (a["M1->M1"] != std::vector<int>{8, 0, 1, 0, 1, 0, 1}) o.fail("A-side self table");
      if (a["M1->M2"] != std::vector<int>{0, 1, 0, 1, 0, 1, 0}) o.fail("A-side cross table");
    }
    return o;
  });

  criterion(5, "stable endomorphisms of supersingular modules, q in {5,7,9}, every regular block and lambda", [] {
    Outcome o;
    for (std::uint32_t q : {5u, 7u, 9u}) {
      auto field = make_field(q);
      suites::RunConfig cfg;
      cfg.q = q;
      auto lambdas = suites::resolve_lambdas(cfg, field);
      for (auto k : {GroupKind::GL2, GroupKind::PGL2}) {
        auto r = suites::endo_suite(k, q, field, lambdas);
        o.absorb(r, tag(k, q));
        if (r.details["matched"] != r.details["modules"]) o.fail(tag(k, q) + ": unmatched module");
      }
    }
    return o;
  });

  criterion(6, "parameter map onto the nodes, q in {3,5,7,9}, < 30 s", [] {
    Outcome o;
    auto t0 = Clock::now();
    for (auto q : kSmallQ) {
      auto field = make_field(q);
      suites::RunConfig cfg;
      cfg.q = q;
      auto lambdas = suites::resolve_lambdas(cfg, field);
      for (auto k : kKinds) {
        auto r = suites::scheme_suite(k, q, field, lambdas);
        o.absorb(r, tag(k, q));
        const auto& c = r.details["correspondence"];
        std::size_t per_z = (q - 1) * (q - 2) / 2;
        if (k == GroupKind::GL2 && c["node_count"] != per_z * (q - 1)) o.fail(tag(k, q) + ": node count");
        // A chain of (q-1)/2 lines has (q-3)/2 nodes, one per regular block.
        if (k == GroupKind::PGL2 && c["node_count"] != (q - 3) / 2) o.fail(tag(k, q) + ": node count");
        if (k == GroupKind::SL2 && !c["fibers_match_packets"].get<bool>()) o.fail(tag(k, q) + ": packets");
      }
    }
    if (since(t0) >= 30) o.fail("over 30 s");
    return o;
  });

  criterion(7, "DGA: d^2, Leibniz, cohomology pattern and degree-0 dictionary for windows <= 4", [] {
    Outcome o;
    for (std::uint32_t q : {3u, 5u}) {
      auto r = suites::dga_suite(q, make_field(q), 1, 100, 4);
      o.absorb(r, "q=" + std::to_string(q));
      if (r.details["d2_leibniz_ok"] != 100) o.fail("d^2 or Leibniz sample failed");
      if (r.details["degree0_max_window"] != 4) o.fail("degree-0 windows stop short of 4");
    }
    return o;
  });

  criterion(8, "three-term resolution exact at D = 6, q in {3,5}, GL2 regular blocks", [] {
    Outcome o;
    std::size_t n = 0;
    for (std::uint32_t q : {3u, 5u}) {
      hecke::HeckeAlgebra gl(GroupKind::GL2, q, make_field(q));
      for (const auto& g : gl.torus().orbits()) {
        if (!g.regular) continue;
        for (const auto& lam : gl.field().units()) {
          auto m = hecke::supersingular_module(gl, g, lam);
          auto rep = models::os_resolution_check(gl, g, m, lam, 6);
          ++n;
          if (!rep.passed || !rep.counit_surjective) o.fail("q=" + std::to_string(q) + " not exact");
        }
      }
    }
    if (n == 0) o.fail("no blocks checked");
    return o;
  });

  criterion(9, "SL2 supersingular census: q-2 of infinite pd, q in total", [] {
    Outcome o;
    for (auto q : kSmallQ) {
      hecke::HeckeAlgebra sl(GroupKind::SL2, q, make_field(q));
      auto chars = hecke::enumerate_supersingular_chars(sl);
      std::size_t infinite = 0;
      for (const auto& c : chars) infinite += !c.finite_pd;
      if (infinite != q - 2) o.fail("q=" + std::to_string(q) + ": infinite pd count " + std::to_string(infinite));
      if (chars.size() != q) o.fail("q=" + std::to_string(q) + ": total " + std::to_string(chars.size()));
    }
    return o;
  });

  double total = since(start);
  bool in_budget = total < 300;
  failures += !in_budget;
  std::printf("[%s] total time under 5 min (%.2f s)\n", in_budget ? "PASS" : "FAIL", total);
  return failures == 0 ? 0 : 1;
}
