// Command-line front end for the k3lines library.

#include "k3lines/config_io.hpp"
#include "k3lines/fano.hpp"
#include "k3lines/fqf.hpp"
#include "k3lines/lattice.hpp"
#include "k3lines/real_criteria.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

namespace {

using Json = nlohmann::json;
using namespace k3lines;

enum Exit { kOk = 0, kInputError = 1, kUnknownStrict = 2, kCapExceeded = 3 };

std::string fnv1a(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string cycles(const Permutation& p) {
  std::string out;
  std::vector<bool> seen(p.size(), false);
  for (std::size_t v = 0; v < p.size(); ++v) {
    if (seen[v] || p[v] == v) continue;
    out += "(";
    for (std::size_t w = v; !seen[w]; w = p[w]) {
      if (w != v) out += " ";
      out += std::to_string(w);
      seen[w] = true;
    }
    out += ")";
  }
  return out.empty() ? "id" : out;
}

Json form_json(const FiniteQuadraticForm& d) {
  Json j;
  j["factors"] = Json::array();
  j["qvalues"] = Json::array();
  for (std::size_t i = 0; i < d.generator_count(); ++i) {
    j["factors"].push_back(d.order_of_generator(i));
    j["qvalues"].push_back(to_string(d.q_value(i)));
  }
  j["pairing"] = Json::array();
  for (std::size_t i = 0; i < d.generator_count(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < d.generator_count(); ++k) row.push_back(to_string(d.pairing(i, k)));
    j["pairing"].push_back(row);
  }
  return j;
}

std::string group_string(const FiniteQuadraticForm& d) {
  if (d.trivial()) return "trivial";
  std::string s;
  for (std::size_t i = 0; i < d.generator_count(); ++i) s += (i ? " + Z/" : "Z/") + std::to_string(d.order_of_generator(i));
  return s;
}

struct Report {
  std::string command;
  std::string digest;
  Json results = Json::object();
  std::vector<std::string> warnings;
  std::ostringstream text;
  bool unknown = false;

  Json json() const {
    Json j;
    j["command"] = command;
    j["input_digest"] = digest;
    j["results"] = results;
    j["warnings"] = warnings;
    return j;
  }
};

void cmd_lattice(const std::string& spec, Report& r) {
  Lattice l = build_lattice(spec);
  r.digest = fnv1a(spec);
  const auto& s = l.signature();
  Json& j = r.results;
  j["rank"] = l.rank();
  j["signature"] = {s.plus, s.minus};
  j["determinant"] = l.det().str();
  r.text << "lattice " << spec << "\n  rank " << l.rank() << "\n  signature (" << s.plus << "," << s.minus << ")\n  det "
         << l.det() << "\n";
  if (!l.nondegenerate()) {
    r.warnings.push_back("degenerate lattice; no discriminant form");
    return;
  }
  FiniteQuadraticForm d = discriminant_form(l);
  j["discriminant"] = form_json(d);
  Json ell = Json::object();
  for (const auto& p : d.primes()) ell[p.str()] = d.ell(p);
  j["ell"] = ell;
  r.text << "  discr " << group_string(d) << "\n";
  if (!d.trivial()) {
    r.text << "  q on generators:";
    for (std::size_t i = 0; i < d.generator_count(); ++i) r.text << " " << to_string(d.q_value(i));
    r.text << "\n";
  }
  for (const auto& p : d.primes()) r.text << "  ell_" << p << " = " << d.ell(p) << "\n";
  int brown = brown_invariant(d);
  long sig = static_cast<long>(s.plus) - static_cast<long>(s.minus);
  bool milgram = ((sig - brown) % 8 + 8) % 8 == 0;
  j["brown_invariant"] = brown;
  j["milgram_check"] = milgram ? "ok" : "FAILED";
  r.text << "  Brown invariant " << brown << " (signature mod 8: " << ((sig % 8) + 8) % 8 << ", "
         << (milgram ? "Milgram check ok" : "Milgram check FAILED") << ")\n";
  if (!milgram) r.warnings.push_back("Milgram check failed");
}

void cmd_fragments(const std::string& path, bool list, Report& r) {
  std::string text = read_file(path);
  r.digest = fnv1a(text);
  LineConfiguration cfg = parse_configuration(text);
  auto frags = enumerate_fragments(cfg);
  auto inv = graph_invariants(cfg.graph);
  std::map<std::string, std::size_t> types;
  for (const auto& f : frags) ++types[f.type];
  Json& j = r.results;
  j["degree"] = cfg.degree;
  j["vertices"] = cfg.size();
  j["total"] = frags.size();
  j["types"] = types;
  j["invariants"] = {{"r", inv.rank}, {"girth", inv.girth ? Json(*inv.girth) : Json(nullptr)}, {"aut_order", inv.aut_order.str()}};
  r.text << "configuration " << path << " (2d=" << cfg.degree << ", " << cfg.size() << " lines)\n";
  r.text << "  invariants (r, g, s) = (" << inv.rank << ", " << (inv.girth ? std::to_string(*inv.girth) : "inf") << ", "
         << inv.aut_order << ")\n";
  r.text << "  fragments: " << frags.size() << "\n";
  for (const auto& [t, c] : types) r.text << "    " << t << ": " << c << "\n";
  if (list) {
    Json arr = Json::array();
    for (const auto& f : frags) {
      arr.push_back({{"vertices", f.vertices}, {"type", f.type}});
      r.text << "    {";
      for (std::size_t i = 0; i < f.vertices.size(); ++i) r.text << (i ? " " : "") << f.vertices[i];
      r.text << "} " << f.type << "\n";
    }
    j["fragments"] = arr;
  }
  for (const auto& w : fano_lattice(cfg).warnings) r.warnings.push_back(w);
}

Json verdict_json(const Verdict& v) { return {{"verdict", to_string(v.kind)}, {"trace", v.trace}}; }

void cmd_real(const std::string& path, Report& r) {
  std::string text = read_file(path);
  r.digest = fnv1a(text);
  LineConfiguration cfg = parse_configuration(text);
  RealAnalysis a = real_structure_candidates(cfg);
  Json& j = r.results;
  j["num_c"] = a.fragments.size();
  j["rank_n"] = a.extension.lattice.rank();
  j["stabilizer_order"] = a.stabilizer.order.str();
  if (a.criterion) j["totally_real_criterion"] = verdict_json(*a.criterion);
  Json cands = Json::array();
  r.text << "configuration " << path << "\n  fragments: " << a.fragments.size() << "\n  |stabilizer| = " << a.stabilizer.order
         << "\n  candidates (g = -sigma):\n";
  for (const auto& c : a.candidates) {
    cands.push_back({{"sigma", cycles(c.sigma)},
                     {"epsilon", c.epsilon},
                     {"class_size", c.class_size},
                     {"real_lines", c.real_lines},
                     {"num_r", c.counts.num_r},
                     {"num_rr", c.counts.num_rr},
                     {"admissibility", to_string(c.admissibility)},
                     {"reason", c.reason}});
    r.text << "    sigma " << cycles(c.sigma) << " [class " << c.class_size << ", " << c.real_lines
           << " real lines]: numR " << c.counts.num_r << ", numRR " << c.counts.num_rr << ", "
           << to_string(c.admissibility) << " (" << c.reason << ")\n";
    if (c.admissibility == Admissibility::Unknown) r.unknown = true;
  }
  j["candidates"] = cands;
  r.warnings.insert(r.warnings.end(), a.notes.begin(), a.notes.end());
}

void cmd_totally_real(const std::string& path, Report& r) {
  std::string text = read_file(path);
  r.digest = fnv1a(text);
  LineConfiguration cfg = parse_configuration(text);
  Extension e = extension_lattice(cfg);
  const long rank_t = 22 - static_cast<long>(e.lattice.rank());
  if (rank_t < 1) throw InputError("rank N = " + std::to_string(e.lattice.rank()) + " leaves no room for T");
  if (e.lattice.signature().plus != 1 || !e.lattice.nondegenerate()) throw InputError("N is not hyperbolic");
  Discriminant d = discriminant(e.lattice);
  Verdict v = totally_real_criterion(d.form, rank_t, e.lattice.det());
  Json& j = r.results;
  j["rank_n"] = e.lattice.rank();
  j["r"] = rank_t;
  j["det_n"] = e.lattice.det().str();
  j["discriminant"] = form_json(d.form);
  j["criterion"] = verdict_json(v);
  r.text << "configuration " << path << "\n  rank N " << e.lattice.rank() << ", r = " << rank_t << ", det N "
         << e.lattice.det() << ", discr " << group_string(d.form) << "\n  verdict " << to_string(v.kind) << "\n";
  for (const auto& t : v.trace) r.text << "    " << t << "\n";
  if (v.kind == VerdictKind::Unknown) r.unknown = true;
  for (const auto& w : e.fano.warnings) r.warnings.push_back(w);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lines, h-fragments and real structures on polarized K3 surfaces"};
  app.require_subcommand(1);
  bool json = false, strict = false, list = false;
  unsigned threads = 0;
  app.add_flag("--json", json, "machine-readable output");
  app.add_option("--threads", threads, "worker threads (0: all cores)");
  app.add_flag("--strict", strict, "exit with status 2 when a verdict is UNKNOWN");

  std::string spec, path;
  auto* lat = app.add_subcommand("lattice", "invariants of a lattice given by a spec such as \"[8,4,8]\" or \"2U(3)\"");
  lat->add_option("spec", spec, "lattice spec")->required();
  auto* frag = app.add_subcommand("fragments", "enumerate h-fragments of a configuration file");
  frag->add_option("file", path, "configuration file")->required();
  frag->add_flag("--list-fragments", list, "print every fragment");
  auto* real = app.add_subcommand("real", "real structure candidates with fragment counts");
  real->add_option("file", path, "configuration file")->required();
  auto* tr = app.add_subcommand("totally-real", "totally real criterion for a configuration file");
  tr->add_option("file", path, "configuration file")->required();
  for (auto* sub : {lat, frag, real, tr}) {
    sub->add_flag("--json", json, "machine-readable output");
    sub->add_option("--threads", threads, "worker threads (0: all cores)");
    sub->add_flag("--strict", strict, "exit with status 2 when a verdict is UNKNOWN");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }
  set_thread_count(threads);

  Report report;
  try {
    if (lat->parsed()) {
      report.command = "lattice " + spec;
      cmd_lattice(spec, report);
    } else if (frag->parsed()) {
      report.command = "fragments " + path;
      cmd_fragments(path, list, report);
    } else if (real->parsed()) {
      report.command = "real " + path;
      cmd_real(path, report);
    } else {
      report.command = "totally-real " + path;
      cmd_totally_real(path, report);
    }
  } catch (const CapExceeded& e) {
    std::cerr << "error: cap exceeded: " << e.what() << "\n";
    return kCapExceeded;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }

  if (json) {
    std::cout << report.json().dump(2) << "\n";
  } else {
    std::cout << report.text.str();
    for (const auto& w : report.warnings) std::cout << "warning: " << w << "\n";
  }
  return strict && report.unknown ? kUnknownStrict : kOk;
}
