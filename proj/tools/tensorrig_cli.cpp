// tensorrig: command line front end.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "tensorrig/tensorrig.hpp"

using namespace tensorrig;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  unsigned trials = 1;
  std::string out;
  std::string format = "json";
  unsigned width = 1;
};

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out);
  if (!f) throw std::invalid_argument("cannot open output file " + g.out);
  f << text;
}

std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

FieldKind parse_field(const std::string& s) { return s == "complex" ? FieldKind::complex : FieldKind::real; }

// ---------------------------------------------------------------------------

struct GenArgs {
  std::string model = "gnm";
  std::uint32_t n = 3;
  std::size_t k = 3;
  std::uint64_t m = 0;
  double p = 0.5;
};

void run_gen(const Globals& g, const GenArgs& a) {
  const auto h = a.model == "gnp" ? gnp(a.n, a.k, a.p, g.seed) : gnm(a.n, a.k, a.m, g.seed);
  emit(g, g.format == "json" ? dump(to_json(h)) : write_text(h));
}

struct CertifyArgs {
  std::string graph;
  std::size_t d = 1;
  std::string field = "real";
};

void run_certify(const Globals& g, const CertifyArgs& a) {
  const auto h = load_hypergraph(a.graph);
  RandomizedOptions opts;
  opts.seed = g.seed;
  opts.trials = std::max(1u, g.trials);
  emit(g, dump(to_json(global_rigid(h, a.d, parse_field(a.field), opts))));
}

struct SweepArgs {
  std::size_t k = 3;
  std::uint32_t d = 1;
  std::vector<std::uint32_t> n_list;
  std::vector<std::uint64_t> m_grid;
  std::string mode = "gnm";
  std::vector<std::string> certs{"local", "global1d"};
  std::string curve;
  bool no_timing = false;
};

void run_sweep(const Globals& g, const SweepArgs& a) {
  SweepConfig cfg;
  cfg.k = a.k;
  cfg.d = a.d;
  cfg.n_list = a.n_list;
  cfg.m_grid = a.m_grid;
  cfg.mode = a.mode == "at-threshold" ? SweepMode::at_threshold : SweepMode::gnm;
  cfg.trials = g.trials;
  cfg.seed = g.seed;
  cfg.width = g.width;
  cfg.timing = !a.no_timing;
  cfg.certificates = {false, false, false, false};
  for (const auto& c : a.certs) {
    if (c == "local") cfg.certificates.local = true;
    else if (c == "global1d") cfg.certificates.global_1d = true;
    else if (c == "mm") cfg.certificates.mm = true;
    else if (c == "co") cfg.certificates.co = true;
    else throw std::invalid_argument("unknown certificate " + c);
  }
  const auto records = threshold_sweep(cfg);
  std::ostringstream os;
  if (g.format == "csv") {
    write_csv(os, records);
  } else {
    auto j = nlohmann::ordered_json::array();
    for (const auto& r : records) j.push_back(to_json(r));
    os << j.dump(2) << '\n';
  }
  emit(g, os.str());
  if (!a.curve.empty()) {
    std::ofstream f(a.curve);
    if (!f) throw std::invalid_argument("cannot open curve file " + a.curve);
    write_curve_csv(f, curve_summary(records));
  }
}

struct MdArgs {
  std::uint32_t n = 10;
  std::size_t k = 3;
  std::uint32_t d = 1;
};

void run_md(const Globals& g, const MdArgs& a) {
  const auto s = md_statistics(a.n, a.k, a.d, g.trials, g.seed, g.width);
  if (g.format == "csv") {
    std::ostringstream os;
    os << "trial,m_d,density,scaled\n";
    const double nk1 = std::pow(static_cast<double>(a.n), static_cast<double>(a.k) - 1.0);
    for (std::size_t t = 0; t < s.stopping_times.size(); ++t) {
      const auto m = static_cast<double>(s.stopping_times[t]);
      os << t << ',' << s.stopping_times[t] << ',' << m / (nk1 * a.n) << ',' << m / nk1 << '\n';
    }
    emit(g, os.str());
  } else {
    emit(g, dump(to_json(s)));
  }
}

struct OracleArgs {
  std::string graph;
  std::size_t d = 1;
  unsigned starts = 50;
};

void run_oracle(const Globals& g, const OracleArgs& a) {
  const auto h = load_hypergraph(a.graph);
  SolverOptions opts;
  opts.starts = a.starts;
  opts.width = g.width;
  RandomizedOptions cert;
  cert.seed = g.seed;
  emit(g, dump(to_json(crosscheck(h, a.d, g.trials, g.seed, opts, cert))));
}

struct DtreeArgs {
  std::size_t k = 3;
  std::uint32_t d = 1;
  std::vector<std::uint32_t> parts;
  std::string graph;
};

void run_dtree(const Globals& g, const DtreeArgs& a) {
  PartiteHypergraph h;
  if (!a.graph.empty()) {
    RandomizedOptions opts;
    opts.seed = g.seed;
    const auto found = find_spanning_dtree_in_closure(load_hypergraph(a.graph), a.d, opts);
    if (!found) {
      emit(g, g.format == "json" ? "{\"found\": false}\n" : "");
      return;
    }
    h = *found;
  } else {
    std::vector<std::uint32_t> parts = a.parts;
    if (parts.empty()) parts.assign(a.k, a.d + 1);
    h = random_dtree(parts.size(), a.d, parts, g.seed);
  }
  emit(g, g.format == "json" ? dump(to_json(h)) : write_text(h));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rigidity and identifiability of partially observed low-rank tensors"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Master seed")->capture_default_str();
  app.add_option("--trials", g.trials, "Trials or repetitions")->capture_default_str();
  app.add_option("--out", g.out, "Output path (default stdout)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_option("--width", g.width, "Worker threads (0: hardware)")->capture_default_str();

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Sample a random k-partite k-graph");
  gen_cmd->add_option("--model", gen.model)->check(CLI::IsMember({"gnm", "gnp"}))->capture_default_str();
  gen_cmd->add_option("--n", gen.n, "Vertices per part")->required();
  gen_cmd->add_option("--k", gen.k)->capture_default_str();
  gen_cmd->add_option("--m", gen.m, "Edge count (gnm)");
  gen_cmd->add_option("--p", gen.p, "Edge probability (gnp)");

  CertifyArgs cert;
  auto* cert_cmd = app.add_subcommand("certify", "Local and global rigidity certificate");
  cert_cmd->add_option("--graph", cert.graph, "Graph file (json or text)")->required()->check(CLI::ExistingFile);
  cert_cmd->add_option("--d", cert.d, "Rank / dimension")->required()->check(CLI::PositiveNumber);
  cert_cmd->add_option("--field", cert.field)->check(CLI::IsMember({"real", "complex"}))->capture_default_str();

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Monte Carlo threshold sweep");
  sweep_cmd->add_option("--k", sweep.k)->capture_default_str();
  sweep_cmd->add_option("--d", sweep.d)->capture_default_str();
  sweep_cmd->add_option("--n", sweep.n_list, "Part sizes")->required()->delimiter(',');
  sweep_cmd->add_option("--m", sweep.m_grid, "Edge counts (gnm mode)")->delimiter(',');
  sweep_cmd->add_option("--mode", sweep.mode)->check(CLI::IsMember({"gnm", "at-threshold"}))->capture_default_str();
  sweep_cmd->add_option("--cert", sweep.certs, "local,global1d,mm,co")->delimiter(',');
  sweep_cmd->add_option("--curve", sweep.curve, "Also write a success-rate table here");
  sweep_cmd->add_flag("--no-timing", sweep.no_timing, "Write 0 in the ms column");

  MdArgs md;
  auto* md_cmd = app.add_subcommand("md-stats", "Stopping times of the minimum-degree process");
  md_cmd->add_option("--n", md.n)->required();
  md_cmd->add_option("--k", md.k)->capture_default_str();
  md_cmd->add_option("--d", md.d)->capture_default_str();

  OracleArgs oracle;
  auto* oracle_cmd = app.add_subcommand("oracle", "Cross-check a certificate by numerical completion");
  oracle_cmd->add_option("--graph", oracle.graph)->required()->check(CLI::ExistingFile);
  oracle_cmd->add_option("--d", oracle.d)->capture_default_str();
  oracle_cmd->add_option("--starts", oracle.starts)->capture_default_str();

  DtreeArgs dtree;
  auto* dtree_cmd = app.add_subcommand("dtree", "Random d-tree, or a spanning d-tree in a graph's closure");
  dtree_cmd->add_option("--k", dtree.k)->capture_default_str();
  dtree_cmd->add_option("--d", dtree.d)->capture_default_str();
  dtree_cmd->add_option("--parts", dtree.parts, "Target part sizes")->delimiter(',');
  dtree_cmd->add_option("--graph", dtree.graph, "Search inside this graph instead")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*gen_cmd) run_gen(g, gen);
    else if (*cert_cmd) run_certify(g, cert);
    else if (*sweep_cmd) run_sweep(g, sweep);
    else if (*md_cmd) run_md(g, md);
    else if (*oracle_cmd) run_oracle(g, oracle);
    else if (*dtree_cmd) run_dtree(g, dtree);
  } catch (const GuardViolation& e) {
    std::cerr << "guard: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config: " << e.what() << '\n';
    return 2;
  } catch (const FormatError& e) {
    std::cerr << "input: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
