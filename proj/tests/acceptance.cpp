// Acceptance run: one PASS/FAIL line per criterion, with timings.

#include "k3lines/config_io.hpp"
#include "oracles.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

using namespace k3lines;
using namespace k3test;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream detail;
  void expect(bool cond, const std::string& what) {
    if (!cond && ok) detail << what;
    ok = ok && cond;
  }
};

std::vector<std::string> corpus_files() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(K3LINES_CORPUS))
    if (e.path().extension() == ".json") out.push_back(e.path().string());
  std::sort(out.begin(), out.end());
  return out;
}

const Multigraph& catalog_graph(const std::string& name) {
  for (const auto& e : fragment_catalog())
    if (e.name == name) return e.graph;
  throw std::runtime_error("no catalog entry " + name);
}

void catalog_invariants(Check& c) {
  struct Row {
    const char* name;
    std::size_t r, g;
    int s;
  };
  for (const Row& row : {Row{"prism", 6, 3, 12}, Row{"K33", 6, 4, 72}, Row{"K3uK32", 8, 3, 12}, Row{"wagner", 8, 4, 16},
                         Row{"cube", 8, 4, 48}}) {
    auto inv = graph_invariants(catalog_graph(row.name));
    c.expect(inv.rank == row.r && inv.girth == row.g && inv.aut_order == row.s, std::string(row.name) + " invariants differ");
  }
}

void involution_census(Check& c) {
  auto d = discriminant_form(build_lattice("2U(3)"));
  auto all = involution_classes(d);
  auto t = t_side_involution_classes(TwoU{3});
  c.expect(all.size() == 8, "expected 8 classes, got " + std::to_string(all.size()));
  c.expect(t.known && t.classes.size() == 3, "expected 3 realizable classes, got " + std::to_string(t.classes.size()));
}

void two_u_list(Check& c) {
  Lattice l = build_lattice("2U");
  auto invs = two_u_involutions();
  c.expect(invs.size() == 5, "expected five involutions");
  for (const auto& inv : invs) {
    c.expect(is_isometry(l, inv.matrix) && inv.matrix * inv.matrix == IntegerMatrix::identity(4), inv.label + " is not an involution");
    c.expect(sign_structure_action(l, inv.matrix) == -1, inv.label + " has sign +1");
    auto plus = invariant_sublattice(l, inv.matrix).lattice;
    c.expect(plus.signature().plus == 1, inv.label + ": sigma_+ != 1");
    c.expect(isometric_lattices(plus, build_lattice(inv.label)), inv.label + ": invariant sublattice differs");
  }
}

void schur(Check& c) {
  Lattice l = build_lattice("[8,4,8]");
  // Oracle: isometries send the basis to norm-8 pairs with product 4.
  auto vs = norm_vectors_in_box(l, 8, 3);
  std::size_t count = 0;
  for (const auto& a : vs)
    for (const auto& b : vs)
      if (l.product(a, b) == 4 && abs(a[0] * b[1] - a[1] * b[0]) == 1) ++count;
  c.expect(count == 12, "oracle |O| = " + std::to_string(count));
  c.expect(orthogonal_group_definite(l).size() == 12, "|O([8,4,8])| != 12");
  auto d = discriminant_form(l);
  c.expect(d.orders() == std::vector<std::int64_t>{4, 12}, "discr is not Z/4 + Z/12");
  auto dn = d.negated();
  c.expect(totally_real_criterion(dn, 2, -48).kind == VerdictKind::No, "criterion is not NO");
  std::size_t mates = 0;
  for (const auto& t : reduced_binary_forms(48)) {
    if (!anti_isometric(discriminant_form(t), dn)) continue;
    ++mates;
    c.expect(min_norm_binary(t) > 2, "a genus mate contains [2]");
  }
  c.expect(mates > 0, "binary-form oracle found no genus mate");
}

void milgram(Check& c) {
  std::vector<Lattice> ls;
  for (const char* s : {"U", "U(2)", "2U(3)", "A1", "A2", "A3", "A4", "D4", "D5", "E6", "E7", "E8", "[2]", "[-2]",
                        "[8,4,8]", "[2,1,4]", "U(2)+[-2]", "3*A2", "A2(-1)", "[6]", "D4(2)"})
    ls.push_back(build_lattice(s));
  while (ls.size() < 121) {
    Lattice l = random_even_lattice(6, 10);
    if (abs(l.det()) <= 1'000'000) ls.push_back(l);
  }
  std::size_t bad = 0;
  for (const auto& l : ls) {
    long sig = static_cast<long>(l.signature().plus) - static_cast<long>(l.signature().minus);
    if (brown_invariant(discriminant_form(l)) != ((sig % 8) + 8) % 8) ++bad;
  }
  c.expect(bad == 0, std::to_string(bad) + " of " + std::to_string(ls.size()) + " lattices violate Milgram");
}

void fragment_oracle(Check& c) {
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::int64_t deg = 2 * uniform(1, 4);
    std::size_t n = static_cast<std::size_t>(uniform(deg, 12));
    LineConfiguration cfg;
    cfg.degree = deg;
    cfg.graph = random_multigraph(n, uniform(0, 2) ? static_cast<std::size_t>(deg) : 0);
    std::vector<std::vector<std::size_t>> got;
    for (const auto& f : enumerate_fragments(cfg)) got.push_back(f.vertices);
    if (got != brute_force_fragments(cfg)) ++mismatches;
  }
  c.expect(mismatches == 0, std::to_string(mismatches) + " mismatches in 200 trials");
}

void catalog_counts(Check& c) {
  for (const auto& e : fragment_catalog())
    for (std::int64_t deg : {2, 4, 6, 8}) {
      LineConfiguration cfg;
      cfg.graph = e.graph;
      cfg.degree = deg;
      auto f = enumerate_fragments(cfg);
      if (static_cast<std::size_t>(deg) == e.graph.size())
        c.expect(f.size() == 1 && f[0].type == e.name, e.name + " is not its own unique fragment");
      else
        c.expect(f.empty(), e.name + " has fragments at 2d=" + std::to_string(deg));
    }
}

void soundness(Check& c) {
  std::size_t bad = 0;
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t r = static_cast<std::size_t>(uniform(2, 6));
    Lattice t = direct_sum(build_lattice("[2]"), random_lattice_with_signature(1, r - 2, 6));
    if (totally_real_criterion(discriminant_form(t).negated(), static_cast<long>(r), t.det()).kind == VerdictKind::No) ++bad;
  }
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t r = static_cast<std::size_t>(uniform(3, 6));
    Lattice t = direct_sum(build_lattice("U(2)"), random_lattice_with_signature(1, r - 3, 6));
    if (totally_real_criterion(discriminant_form(t).negated(), static_cast<long>(r), t.det()).kind == VerdictKind::No) ++bad;
  }
  c.expect(bad == 0, std::to_string(bad) + " NO verdicts on 120 constructed lattices");
}

void real_counts(Check& c) {
  for (const auto& path : corpus_files()) {
    auto cfg = load_configuration(path);
    auto a = real_structure_candidates(cfg);
    for (const auto& cand : a.candidates)
      c.expect(cand.counts.num_rr <= cand.counts.num_r && cand.counts.num_r <= a.fragments.size(), path + ": count order violated");
    auto aut = AutomorphismGroup(cfg.graph).elements();
    std::vector<Permutation> involutions;
    for (const auto& s : aut)
      if (is_identity(compose(s, s))) involutions.push_back(s);
    for (int k = 0; k < 100; ++k) {
      const auto& s = involutions[static_cast<std::size_t>(uniform(0, static_cast<long>(involutions.size()) - 1))];
      const auto& g = aut[static_cast<std::size_t>(uniform(0, static_cast<long>(aut.size()) - 1))];
      auto x = count_fragments_under(a.fragments, s);
      auto y = count_fragments_under(a.fragments, compose(compose(g, s), inverse(g)));
      c.expect(x.num_r == y.num_r && x.num_rr == y.num_rr, path + ": counts change under conjugation");
    }
  }
}

std::pair<int, std::string> run(const std::string& cmd) {
  std::string out;
  FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
  if (!pipe) return {-1, ""};
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

void determinism(Check& c) {
  std::vector<std::string> commands;
  for (const char* spec : {"[8,4,8]", "E8", "2U(3)", "U(2)+[-2]"}) commands.push_back(std::string("lattice '") + spec + "'");
  for (const auto& path : corpus_files())
    for (const char* sub : {"fragments --list-fragments", "real", "totally-real"})
      commands.push_back(std::string(sub) + " '" + path + "'");
  for (const auto& cmd : commands)
    for (const char* mode : {" --json", ""}) {
      auto one = run(std::string("'") + K3LINES_CLI + "' --threads 1" + mode + " " + cmd);
      auto eight = run(std::string("'") + K3LINES_CLI + "' --threads 8" + mode + " " + cmd);
      c.expect(one.first >= 0 && one.first <= 3 && !one.second.empty(), cmd + ": CLI did not run");
      c.expect(one == eight, cmd + mode + ": output differs between 1 and 8 threads");
    }
}

}  // namespace

int main() {
  struct Criterion {
    const char* title;
    void (*body)(Check&);
    double budget_s;
  };
  const Criterion criteria[] = {
      {"catalog invariants (r, girth, |Aut|)", catalog_invariants, 1},
      {"involution census of discr 2U(3): 8 classes, 3 realizable", involution_census, 60},
      {"five involutions of 2U with the listed invariant sublattices", two_u_list, 1},
      {"Schur quartic arithmetic and criterion NO", schur, 10},
      {"Milgram suite on builtins and 100 random lattices", milgram, 30},
      {"fragment enumeration equals the all-subsets oracle (200 graphs)", fragment_oracle, 60},
      {"catalog graphs are their own unique fragments", catalog_counts, 1},
      {"criterion soundness on [2]+T' and U(2)+T'", soundness, 60},
      {"real-count sanity and conjugation invariance on the corpus", real_counts, 10},
      {"CLI corpus output identical for 1 and 8 threads", determinism, 120},
  };
  int failures = 0;
  int index = 0;
  for (const auto& crit : criteria) {
    ++index;
    Check c;
    auto start = std::chrono::steady_clock::now();
    try {
      crit.body(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.expect(secs <= crit.budget_s, "over time budget");
    if (!c.ok) ++failures;
    std::printf("[%s] criterion %2d: %s (%.2f s)%s%s\n", c.ok ? "PASS" : "FAIL", index, crit.title, secs,
                c.ok ? "" : " -- ", c.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", index - failures, index);
  return failures == 0 ? 0 : 1;
}
