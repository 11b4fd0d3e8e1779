// aplab: command-line driver for the almost-periodicity laboratory.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "aplab/commands.hpp"
#include "aplab/set_io.hpp"

using namespace aplab;

namespace {

struct Global {
  std::uint64_t seed = 0;
  std::uint64_t max_attempts = 0;
  std::string target_fraction = "1/2";
  std::string format = "json";
  std::string out;
  unsigned threads = 1;
  std::optional<unsigned> k;
};

void add_set(Request& rq, const std::string& name, const std::string& path) {
  if (path.empty()) return;
  rq.inputs[name] = input_entry(read_set_file(path), path);
}

void add_common(Request& rq, const Global& g) {
  rq.parameters["seed"] = g.seed;
  rq.parameters["max_attempts"] = g.max_attempts;
  rq.parameters["target_fraction"] = rational_json(parse_rational(g.target_fraction));
  if (g.k) rq.parameters["k"] = *g.k;
}

json rational_param(const std::string& text) { return rational_json(parse_rational(text)); }

int emit(const RunReport& r, const Global& g) {
  std::string body = g.format == "csv" ? csv_payload(r) : serialize(r);
  if (g.out.empty()) {
    std::cout << body;
  } else {
    std::ofstream f(g.out);
    if (!f) {
      std::cerr << "error: cannot write " << g.out << "\n";
      return 2;
    }
    f << body;
  }
  for (const auto& v : r.verdicts)
    if (!v.pass) std::cerr << "FAIL " << v.name << " (margin " << to_string(v.margin) << ")\n";
  return exit_code_for(r);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"aplab: almost-periodicity laboratory"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--seed", g.seed, "Master seed")->envname("APLAB_SEED");
  app.add_option("--max-attempts", g.max_attempts, "Sampling attempt limit (0 = automatic)")
      ->envname("APLAB_MAX_ATTEMPTS");
  app.add_option("--target-fraction", g.target_fraction, "Size target fraction tau")->envname("APLAB_TARGET_FRACTION");
  app.add_option("--format", g.format, "json, or csv (convolve: element,count rows; moments-grid: "
                                       "check,params,m,value,bound,margin,pass; otherwise name,pass,margin_num,margin_den)")
      ->check(CLI::IsMember({"json", "csv"}))
      ->envname("APLAB_FORMAT");
  app.add_option("--out", g.out, "Output path (default stdout)")->envname("APLAB_OUT");
  app.add_option("--threads", g.threads, "Worker threads")->envname("APLAB_THREADS");
  app.add_option("--k", g.k, "Parameter k (overrides the derived value where one exists)")->envname("APLAB_K");

  Request rq;

  auto* conv = app.add_subcommand("convolve", "Convolution of indicator functions");
  std::vector<std::string> conv_sets;
  conv->add_option("--set", conv_sets, "Set files, convolved left to right")->required();

  auto* per = app.add_subcommand("periods", "Certified almost-periods of 1_A*1_B");
  std::string pa, pb, ps, peps, pside = "left";
  unsigned pm = 1;
  per->add_option("--A", pa)->required();
  per->add_option("--B", pb)->required();
  per->add_option("--S", ps)->required();
  per->add_option("--epsilon", peps)->required();
  per->add_option("--m", pm, "Moment parameter (p = 2m)");
  per->add_option("--side", pside)->check(CLI::IsMember({"left", "right"}));

  auto* st = app.add_subcommand("structure", "Structure in product sets");
  std::string smode, sa, sb, sd, sa1, sa2, sa3, ss, sx;
  unsigned sn = 2;
  st->add_option("mode", smode, "core | abba | abc | ab")->required()->check(CLI::IsMember({"core", "abba", "abc", "ab"}));
  st->add_option("--A", sa);
  st->add_option("--B", sb);
  st->add_option("--D", sd);
  st->add_option("--S", ss);
  st->add_option("--A1", sa1);
  st->add_option("--A2", sa2);
  st->add_option("--A3", sa3);
  st->add_option("--x", sx, "Popular element as comma-separated coordinates");
  st->add_option("--n", sn, "Subset size for mode ab");

  auto* sap = app.add_subcommand("sumset-ap", "Long progressions in A+B");
  std::string ua, ub;
  std::int64_t un = 0;
  bool usmall = false;
  sap->add_option("--A", ua)->required();
  sap->add_option("--B", ub)->required();
  sap->add_option("--N", un, "A, B inside [1, N]");
  sap->add_flag("--small", usmall, "Small-sumset version (no N)");

  auto* roth = app.add_subcommand("roth", "Three-term progressions");
  std::optional<unsigned> r_exhaustive;
  bool r_varn = false, r_approx = false, r_inc = false, r_no_enforce = false;
  std::string r_a, r_n, r_eps = "1/2", r_c1 = "1/8", r_delta = "9/10";
  std::vector<std::string> r_intervals;
  unsigned r_m = 10, r_steps = 1;
  roth->add_option("--exhaustive-r3", r_exhaustive, "r3(N) by exhaustive search, N <= 32");
  roth->add_flag("--varnavides", r_varn, "Counting lower bound on a union of intervals");
  roth->add_flag("--approx", r_approx, "T3 under smoothing by a progression");
  roth->add_flag("--increment", r_inc, "Density increment iteration");
  roth->add_option("--A", r_a);
  roth->add_option("--N", r_n);
  roth->add_option("--M", r_m);
  roth->add_option("--interval", r_intervals, "lo:hi (repeatable)");
  roth->add_flag("--no-enforce", r_no_enforce, "Evaluate the counting bound outside its range");
  roth->add_option("--epsilon", r_eps);
  roth->add_option("--c1", r_c1);
  roth->add_option("--delta", r_delta);
  roth->add_option("--steps", r_steps);

  auto* sa_cmd = app.add_subcommand("strong-approx", "Strong approximate groups");
  std::string xa, xeps = "1/2";
  std::optional<std::uint64_t> xsq;
  sa_cmd->add_option("--A", xa);
  sa_cmd->add_option("--squares", xsq, "Use the non-zero squares mod p");
  sa_cmd->add_option("--epsilon", xeps);

  auto* mg = app.add_subcommand("moments-grid", "Finite verification of the moment and deviation bounds");
  unsigned mg_n = 20, mg_m = 3;
  mg->add_option("--N-max", mg_n);
  mg->add_option("--m-max", mg_m);

  auto* ver = app.add_subcommand("verify", "Recompute a report from its inputs");
  std::string vpath;
  ver->add_option("report", vpath)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*ver) return emit(verify_report_file(vpath, g.threads), g);

    add_common(rq, g);
    if (*conv) {
      rq.command = "convolve";
      for (std::size_t i = 0; i < conv_sets.size(); ++i) {
        char name[16];
        std::snprintf(name, sizeof name, "F%03zu", i + 1);
        add_set(rq, name, conv_sets[i]);
      }
    } else if (*per) {
      rq.command = "periods";
      add_set(rq, "A", pa);
      add_set(rq, "B", pb);
      add_set(rq, "S", ps);
      rq.parameters["epsilon"] = rational_param(peps);
      rq.parameters["m"] = pm;
      rq.parameters["side"] = pside;
    } else if (*st) {
      rq.command = "structure";
      rq.parameters["mode"] = smode;
      for (auto [name, path] : {std::pair{"A", sa}, {"B", sb}, {"D", sd}, {"S", ss}, {"A1", sa1}, {"A2", sa2}, {"A3", sa3}})
        add_set(rq, name, path);
      if (!sx.empty()) {
        std::vector<std::int64_t> coords;
        std::string tok;
        std::string text = sx;
        for (char& c : text)
          if (c == '(' || c == ')') c = ' ';
        std::istringstream is(text);
        while (std::getline(is, tok, ',')) coords.push_back(std::stoll(tok));
        rq.parameters["x"] = coords;
      }
      if (smode == "ab") rq.parameters["n"] = sn;
    } else if (*sap) {
      rq.command = "sumset-ap";
      add_set(rq, "A", ua);
      add_set(rq, "B", ub);
      if (usmall)
        rq.parameters["small"] = true;
      else
        rq.parameters["N"] = un;
    } else if (*roth) {
      rq.command = "roth";
      if (r_exhaustive) {
        rq.parameters["mode"] = "r3";
        rq.parameters["N"] = *r_exhaustive;
      } else if (r_varn) {
        rq.parameters["mode"] = "varnavides";
        if (r_n.empty()) throw Error(ErrorKind::parse, "--N is required");
        rq.parameters["N"] = r_n;
        rq.parameters["M"] = r_m;
        rq.parameters["enforce"] = !r_no_enforce;
        json iv = json::array();
        for (const auto& s : r_intervals) {
          auto colon = s.find(':');
          if (colon == std::string::npos) throw Error(ErrorKind::parse, "interval must be lo:hi");
          iv.push_back({s.substr(0, colon), s.substr(colon + 1)});
        }
        rq.parameters["intervals"] = iv;
      } else if (r_approx || r_inc) {
        rq.parameters["mode"] = r_approx ? "approx" : "increment";
        add_set(rq, "A", r_a);
        rq.parameters["N"] = std::stoll(r_n);
        if (r_approx) {
          rq.parameters["epsilon"] = rational_param(r_eps);
        } else {
          rq.parameters["c1"] = rational_param(r_c1);
          rq.parameters["delta"] = rational_param(r_delta);
          rq.parameters["M"] = r_m;
          rq.parameters["steps"] = r_steps;
        }
      } else {
        throw Error(ErrorKind::parse, "roth needs one of --exhaustive-r3, --varnavides, --approx, --increment");
      }
    } else if (*sa_cmd) {
      rq.command = "strong-approx";
      if (xsq)
        rq.parameters["squares"] = *xsq;
      else
        add_set(rq, "A", xa);
      rq.parameters["epsilon"] = rational_param(xeps);
    } else if (*mg) {
      rq.command = "moments-grid";
      rq.parameters["N_max"] = mg_n;
      rq.parameters["m_max"] = mg_m;
    }
    return emit(execute(rq, g.threads), g);
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: parse: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: parse: " << e.what() << "\n";
    return 2;
  }
}
