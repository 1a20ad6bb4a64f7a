// cpsp: generators, refuter, translator, verifiers and walks from the shell.
//
// Exit codes: 0 success or valid, 1 invalid proof or input, 2 usage error,
// 3 enumeration budget exceeded.

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "cpsp/depth_lab.hpp"
#include "cpsp/refuter.hpp"
#include "cpsp/translator.hpp"

namespace {

using namespace cpsp;

constexpr int kInvalid = 1;
constexpr int kUsage = 2;
constexpr int kBudget = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// "p <kind> ..." of the first non-comment line.
std::string header_kind(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string a, b;
    ls >> a;
    if (a.empty() || a == "c" || a[0] == '#') continue;
    if (a != "p" || !(ls >> b)) throw Error("missing 'p <kind>' header");
    return b;
  }
  throw Error("empty file");
}

struct Instance {
  std::string kind;  // cnf, lin, graph, poly
  Cnf cnf;
  LinSystemFq sys;
  Polytope poly;

  Polytope axioms() const {
    if (kind == "poly") return poly;
    if (kind == "cnf") return to_polytope(cnf);
    return to_polytope(to_cnf(sys));
  }
  Cnf as_cnf() const {
    if (kind == "cnf") return cnf;
    if (kind == "poly") throw UsageError("a polytope instance has no CNF");
    return to_cnf(sys);
  }
  const LinSystemFq& system() const {
    if (kind != "lin" && kind != "graph") throw UsageError("instance is not a linear system");
    return sys;
  }
};

// Files are recognised by their header; "tseitin-kN" and "tseitin-cN" name
// the odd-labelled complete graph and cycle.
Instance load_instance(const std::string& path) {
  Instance inst;
  for (const char* fam : {"tseitin-k", "tseitin-c"}) {
    const std::string prefix(fam);
    if (path.rfind(prefix, 0) == 0 && path.size() > prefix.size()) {
      std::size_t n = std::stoul(path.substr(prefix.size()));
      Graph g = prefix.back() == 'k' ? complete_graph(n) : cycle_graph(n);
      g.labels[0] = 1;
      inst.kind = "graph";
      inst.sys = tseitin(g);
      return inst;
    }
  }
  const std::string text = slurp(path);
  inst.kind = header_kind(text);
  std::istringstream in(text);
  if (inst.kind == "cnf") {
    inst.cnf = read_dimacs(in);
  } else if (inst.kind == "lin") {
    inst.sys = read_lin(in);
  } else if (inst.kind == "graph") {
    inst.sys = tseitin(read_graph(in));
  } else if (inst.kind == "poly") {
    inst.poly = read_poly(in);
  } else {
    throw UsageError("'" + path + "' is not an instance file (kind '" + inst.kind + "')");
  }
  return inst;
}

template <class F>
void write_to(const std::string& path, F&& emit) {
  if (path.empty() || path == "-") {
    emit(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write '" + path + "'");
  emit(out);
}

void write_lines(const std::string& path, const std::vector<std::string>& lines) {
  write_to(path, [&](std::ostream& o) {
    for (const auto& l : lines) o << l << "\n";
  });
}

std::string stats_line(const ProofStats& s) {
  return "size " + std::to_string(s.size) + " depth " + std::to_string(s.depth) + " max_coeff_bits " +
         std::to_string(s.max_coeff_bits);
}

// what names the failing item: "line" or "node" (1-based, as in the files),
// with SP nodes counted in preorder.
int report(const Verdict& v, const char* what = "node") {
  if (v) {
    std::cout << "Valid\n";
    return 0;
  }
  std::cout << "Invalid at " << what << " " << v.index + 1 << ": " << v.reason << "\n";
  return kInvalid;
}

Integer max_abs_coeff(const SpProof& p) {
  Integer c = 1;
  for (const auto& q : p.nodes)
    if (!q.leaf)
      for (const auto& v : q.a)
        if (abs(v) > c) c = abs(v);
  return c;
}

const std::vector<std::string> kStages{"sp", "facelike", "pathlike", "cp", "scp"};

std::size_t stage_index(const std::string& s) {
  for (std::size_t i = 0; i < kStages.size(); ++i)
    if (kStages[i] == s) return i;
  throw UsageError("unknown stage '" + s + "'");
}

int translate(const std::string& from, const std::string& to, const Instance& inst,
              const std::string& in_path, const std::string& out_path) {
  const std::size_t a = stage_index(from), b = stage_index(to);
  if (a == 4) throw UsageError("scp is only an output stage");
  if (b == 4 && a != 3) throw UsageError("--to scp needs --from cp");
  const Polytope axioms = inst.axioms();
  std::istringstream in(slurp(in_path));
  SpProof sp;
  CpProof cp;
  if (a == 3) {
    cp = read_cp(in, axioms);
    if (Verdict v = verify_cp(cp, true); !v) return report(v, "line");
    if (b == 4) {
      ScpDag d = cp_to_scp(cp, inst.as_cnf());
      write_to(out_path, [&](std::ostream& o) { write_scp(o, d); });
      return 0;
    }
    if (b == 3) {
      write_to(out_path, [&](std::ostream& o) { write_cp(o, cp); });
      return 0;
    }
    // A pathlike proof is also facelike and a plain SP proof.
    sp = cp_to_pathlike(cp);
  } else {
    sp = read_sp(in, axioms);
    if (Verdict v = verify_sp(sp); !v) return report(v);
    if (b < a) throw UsageError("an SP proof cannot be moved to an earlier stage");
    if (a == 0 && b >= 1 && !all_facelike(sp))
      sp = sp_star_to_facelike(sp, max_abs_coeff(sp), sp_diameter_bound(axioms));
    if (a == 1 && !all_facelike(sp)) throw Error("input is not facelike");
    if (a <= 1 && b >= 2) sp = facelike_to_pathlike(sp);
    if (a == 2 && !all_pathlike(sp)) throw Error("input is not pathlike");
    if (b == 3) {
      cp = pathlike_to_cp(sp);
      if (Verdict v = verify_cp(cp, true); !v) return report(v, "line");
      write_to(out_path, [&](std::ostream& o) { write_cp(o, cp); });
      return 0;
    }
  }
  if (Verdict v = verify_sp(sp); !v) return report(v);
  write_to(out_path, [&](std::ostream& o) { write_sp(o, sp); });
  return 0;
}

int stats_cmd(const std::string& proof_path, const std::string& inst_path) {
  const std::string text = slurp(proof_path);
  const std::string kind = header_kind(text);
  std::istringstream in(text);
  if (kind == "scp") {
    std::cout << stats_line(stats(read_scp(in))) << "\n";
    return 0;
  }
  if (inst_path.empty()) throw UsageError("--instance is required for sp and cp proofs");
  const Polytope axioms = load_instance(inst_path).axioms();
  if (kind == "sp") {
    std::cout << stats_line(stats(read_sp(in, axioms))) << "\n";
  } else if (kind == "cp") {
    std::cout << stats_line(stats(read_cp(in, axioms))) << "\n";
  } else {
    throw UsageError("'" + proof_path + "' is not a proof file");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cutting Planes / Stabbing Planes workbench"};
  app.require_subcommand(1);
  std::function<int()> action;

  // gen
  auto* gen = app.add_subcommand("gen", "write an instance file");
  gen->require_subcommand(1);
  std::string out_path = "-";
  std::size_t n = 0, m = 0, k = 3;
  std::uint64_t seed = 0;
  std::string family = "complete", labels = "odd", graph_file, lift_in;

  auto* g_ts = gen->add_subcommand("tseitin", "Tseitin system of a graph");
  g_ts->add_option("--graph", family, "complete | cycle")->check(CLI::IsMember({"complete", "cycle"}));
  g_ts->add_option("--n", n, "vertex count");
  g_ts->add_option("--graph-file", graph_file, "read the graph instead");
  g_ts->add_option("--labels", labels, "odd (vertex 1 charged) | even | ones")
      ->check(CLI::IsMember({"odd", "even", "ones"}));
  g_ts->add_option("-o,--output", out_path);
  g_ts->callback([&] {
    action = [&] {
      Graph g;
      if (!graph_file.empty()) {
        std::istringstream in(slurp(graph_file));
        g = read_graph(in);
      } else {
        if (n < 3) throw UsageError("--n must be at least 3");
        g = family == "complete" ? complete_graph(n) : cycle_graph(n);
        if (labels == "odd") g.labels[0] = 1;
        if (labels == "ones") g.labels.assign(g.n, 1);
      }
      LinSystemFq sys = tseitin(g);
      write_to(out_path, [&](std::ostream& o) { write_lin(o, sys); });
      return 0;
    };
  });

  auto* g_kx = gen->add_subcommand("kxor", "random k-XOR system");
  auto* g_kc = gen->add_subcommand("kcnf", "random k-CNF");
  for (auto* sc : {g_kx, g_kc}) {
    sc->add_option("--n", n)->required();
    sc->add_option("--m", m)->required();
    sc->add_option("--k", k);
    sc->add_option("--seed", seed)->required();
    sc->add_option("-o,--output", out_path);
  }
  g_kx->callback([&] {
    action = [&] {
      LinSystemFq sys = random_kxor(n, m, k, seed);
      write_to(out_path, [&](std::ostream& o) { write_lin(o, sys); });
      return 0;
    };
  });
  g_kc->callback([&] {
    action = [&] {
      Cnf f = random_kcnf(n, m, k, seed);
      write_to(out_path, [&](std::ostream& o) { write_dimacs(o, f); });
      return 0;
    };
  });

  auto* g_lift = gen->add_subcommand("lift-xor4", "compose a CNF or F_2 system with XOR of 4 fresh variables");
  g_lift->add_option("--in", lift_in)->required();
  g_lift->add_option("-o,--output", out_path);
  g_lift->callback([&] {
    action = [&] {
      Instance inst = load_instance(lift_in);
      if (inst.kind == "cnf") {
        Cnf f = xor4_lift(inst.cnf);
        write_to(out_path, [&](std::ostream& o) { write_dimacs(o, f); });
      } else {
        LinSystemFq s = xor4_lift(inst.system());
        write_to(out_path, [&](std::ostream& o) { write_lin(o, s); });
      }
      return 0;
    };
  });

  auto* g_dt = gen->add_subcommand("dtree", "semantic CP DAG of the full decision tree of an instance");
  g_dt->add_option("--in", lift_in)->required();
  g_dt->add_option("-o,--output", out_path);
  g_dt->callback([&] {
    action = [&] {
      ScpDag d = decision_tree_scp(load_instance(lift_in).as_cnf());
      write_to(out_path, [&](std::ostream& o) { write_scp(o, d); });
      return 0;
    };
  });

  // refute sp
  std::string system_path, transcript_path, report_path;
  bool balanced = false;
  auto* refute = app.add_subcommand("refute", "build a refutation");
  refute->require_subcommand(1);
  auto* r_sp = refute->add_subcommand("sp", "Stabbing Planes refutation of a linear system");
  r_sp->add_option("--system", system_path)->required();
  r_sp->add_option("-o,--output", out_path);
  r_sp->add_option("--transcript", transcript_path);
  r_sp->add_flag("--balanced", balanced, "balanced value chains (shallower, not facelike)");
  r_sp->callback([&] {
    action = [&] {
      Instance inst = load_instance(system_path);
      std::vector<std::string> lines;
      RefuteOptions opts;
      opts.mode = balanced ? ChainMode::Balanced : ChainMode::Ascending;
      opts.transcript = transcript_path.empty() ? nullptr : &lines;
      SpProof p = refute_sp(inst.system(), opts);
      if (Verdict v = verify_sp(p); !v) return report(v);
      write_to(out_path, [&](std::ostream& o) { write_sp(o, p); });
      if (!transcript_path.empty()) write_lines(transcript_path, lines);
      return 0;
    };
  });

  // compile
  auto* comp = app.add_subcommand("compile", "linear system to Cutting Planes refutation");
  comp->add_option("--system", system_path)->required();
  comp->add_option("-o,--output", out_path);
  comp->add_option("--stage-report", report_path);
  comp->callback([&] {
    action = [&] {
      Instance inst = load_instance(system_path);
      CompileResult r = compile(inst.system());
      write_to(out_path, [&](std::ostream& o) { write_cp(o, r.proof); });
      if (!report_path.empty()) {
        std::vector<std::string> lines;
        for (const auto& s : r.stages)
          lines.push_back("stage " + s.stage + " size " + std::to_string(s.size) + " depth " +
                          std::to_string(s.depth) + " max_coeff_bits " + std::to_string(s.max_coeff_bits));
        write_lines(report_path, lines);
      }
      return 0;
    };
  });

  // translate
  std::string from, to, inst_path, in_path, proof_path;
  auto* tr = app.add_subcommand("translate", "move a proof between sp, facelike, pathlike and cp");
  tr->add_option("--from", from)->required()->check(CLI::IsMember(kStages));
  tr->add_option("--to", to)->required()->check(CLI::IsMember(kStages));
  tr->add_option("--instance", inst_path)->required();
  tr->add_option("in", in_path)->required();
  tr->add_option("out", out_path)->required();
  tr->callback([&] { action = [&] { return translate(from, to, load_instance(inst_path), in_path, out_path); }; });

  // verify
  auto* ver = app.add_subcommand("verify", "check a proof against an instance");
  ver->require_subcommand(1);
  for (const char* kind : {"sp", "cp", "scp"}) {
    auto* sc = ver->add_subcommand(kind, std::string("verify a ") + kind + " proof");
    sc->add_option("proof", proof_path)->required();
    sc->add_option("--instance", inst_path)->required();
    const std::string kstr = kind;
    sc->callback([&, kstr] {
      action = [&, kstr] {
        Instance inst = load_instance(inst_path);
        std::istringstream in(slurp(proof_path));
        try {
          if (kstr == "sp") return report(verify_sp(read_sp(in, inst.axioms())));
          if (kstr == "cp") return report(verify_cp(read_cp(in, inst.axioms()), true), "line");
          return report(verify_scp(read_scp(in), inst.as_cnf()));
        } catch (const BudgetExceeded&) {
          throw;
        } catch (const Error& e) {
          std::cout << "Invalid: " << e.what() << "\n";
          return kInvalid;
        }
      };
    });
  }

  // stats
  auto* st = app.add_subcommand("stats", "size, depth and coefficient bits of a proof");
  st->add_option("proof", proof_path)->required();
  st->add_option("--instance", inst_path, "axioms for sp and cp proofs");
  st->callback([&] { action = [&] { return stats_cmd(proof_path, inst_path); }; });

  // expansion
  std::size_t r = 1, s = 1;
  std::uint64_t budget = 0;
  auto* ex = app.add_subcommand("expansion", "exact boundary expansion up to set size r");
  ex->add_option("--system", system_path)->required();
  ex->add_option("--r", r)->required();
  ex->add_option("--budget", budget, "subset budget (default 5000000 or CPSP_ENUM_BUDGET)");
  ex->callback([&] {
    action = [&] {
      ExpansionResult e = boundary_expansion(load_instance(system_path).system(), r, budget);
      std::cout << "worst_set";
      for (std::size_t i : e.worst_set) std::cout << " " << i + 1;
      std::cout << "\nratio " << to_string(e.ratio) << "\n";
      return 0;
    };
  });

  // resdepth
  std::string cnf_path;
  auto* rd = app.add_subcommand("resdepth", "exact Prover-Adversary game value");
  rd->add_option("--cnf", cnf_path)->required();
  rd->callback([&] {
    action = [&] {
      unsigned d = res_depth(load_instance(cnf_path).as_cnf());
      if (d == ProverAdversaryGame::kInfinite)
        std::cout << "inf\n";
      else
        std::cout << d << "\n";
      return 0;
    };
  });

  // walk
  std::string scp_path, base_path;
  auto* wk = app.add_subcommand("walk", "adversary walk down a semantic CP DAG");
  wk->require_subcommand(1);
  auto* w_l = wk->add_subcommand("lifted", "walk over a DAG for an XOR4-lifted formula");
  w_l->add_option("--scp", scp_path)->required();
  w_l->add_option("--instance", inst_path, "the lifted formula the DAG refutes")->required();
  w_l->add_option("--base", base_path, "the unlifted formula")->required();
  auto* w_e = wk->add_subcommand("expander", "walk over a DAG for an expanding F_2 system");
  w_e->add_option("--scp", scp_path)->required();
  w_e->add_option("--instance", inst_path)->required();
  w_e->add_option("--r", r)->required();
  w_e->add_option("--s", s)->required();
  for (auto* sc : {w_l, w_e}) sc->add_option("--transcript", transcript_path);
  auto emit_walk = [&](const WalkResult& w) {
    if (transcript_path.empty())
      for (const auto& l : w.transcript) std::cout << l << "\n";
    else
      write_lines(transcript_path, w.transcript);
    std::cout << "path_length " << w.length() << "\n";
    return 0;
  };
  w_l->callback([&] {
    action = [&] {
      std::istringstream in(slurp(scp_path));
      ScpDag d = read_scp(in);
      return emit_walk(lifted_walk(d, load_instance(inst_path).as_cnf(), load_instance(base_path).as_cnf()));
    };
  });
  w_e->callback([&] {
    action = [&] {
      std::istringstream in(slurp(scp_path));
      ScpDag d = read_scp(in);
      return emit_walk(expander_walk(d, load_instance(inst_path).system(), r, s));
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  try {
    return action ? action() : kUsage;
  } catch (const UsageError& e) {
    std::cerr << "cpsp: " << e.what() << "\n";
    return kUsage;
  } catch (const BudgetExceeded& e) {
    std::cerr << "cpsp: budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const Error& e) {
    std::cerr << "cpsp: " << e.what() << "\n";
    return kInvalid;
  }
}
