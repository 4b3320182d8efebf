// Copyright 2026 The stb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: argument parsing, scene loading, dispatch to the
// pipelines and report output. Exit codes: 0 success, 2 usage, 3 missing
// scene file, 4 malformed scene, 5 pipeline error.

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "stb/io.hpp"
#include "stb/koszul.hpp"
#include "stb/torelli.hpp"

namespace stb::cli {

enum ExitCode : int { Ok = 0, Usage = 2, FileNotFound = 3, Schema = 4, Pipeline = 5 };

class UsageError : public std::runtime_error {
 public:
  UsageError(const std::string& what, int code = Usage) : std::runtime_error(what), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

struct Command {
  std::string verb;
  std::vector<std::string> scenes;
  std::vector<std::uint32_t> primes;
  std::optional<std::string> b_label;
  std::optional<int> p;
  std::optional<int> q;
  std::string n_label = "O";
  std::pair<int, int> window{-1, 4};
  int c = 1;
  std::optional<std::uint64_t> seed;
  std::optional<std::pair<int, int>> random;  // (r, d)
  std::string out;
  std::string format = "json";
};

inline const std::vector<std::uint32_t>& default_primes() {
  static const std::vector<std::uint32_t> primes{5, 7, 11};
  return primes;
}

/// Parses argv into a Command. Throws UsageError (code 0 for --help).
inline Command parse(int argc, const char* const* argv) {
  CLI::App app{"Steiner bundle Torelli checks"};
  app.require_subcommand(1);
  Command cmd;
  std::vector<std::uint32_t> prime, primes;
  std::string window, random;
  std::uint64_t seed = 0;
  int p = 0, q = 0;
  std::string b_label;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--prime", prime, "working prime");
    sub->add_option("--primes", primes, "comma-separated primes")->delimiter(',');
    sub->add_option("--out", cmd.out, "report file (written atomically)");
    sub->add_option("--format", cmd.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  };
  struct Verb {
    const char* name;
    const char* help;
  };
  const Verb verbs[] = {
      {"build", "validate a scene and print its invariants"},
      {"valles", "scan the Valles locus of the tautological or DK presentation"},
      {"koszul", "dimension of K_{p,q}(X, N; V)"},
      {"green", "Green's K_{r-n-1,1} test, or K_{r-2,2} for point sets"},
      {"duality", "compare K_{p,q}(N) with its dual group"},
      {"torelli", "Valles locus against the image of X, prime by prime"},
      {"recover", "recover the B-embedding from unique trivial quotients"},
      {"dk", "Dolgachev-Kapranov check for a point set"},
      {"scroll-invariance", "compare presentations of two curves on a scroll"},
  };
  for (const auto& v : verbs) {
    CLI::App* sub = app.add_subcommand(v.name, v.help);
    common(sub);
    std::string verb = v.name;
    if (verb == "scroll-invariance") {
      sub->add_option("scenes", cmd.scenes, "two scroll-curve scene files")->required()->expected(2);
      sub->add_option("--c", cmd.c, "B = K + c*A");
    } else if (verb == "dk") {
      sub->add_option("scene", cmd.scenes, "point-set scene file")->expected(0, 1);
      sub->add_option("--random", random, "generate r,d seeded random points instead of reading a file");
      sub->add_option("--seed", seed, "seed for --random");
    } else {
      sub->add_option("scene", cmd.scenes, "scene file")->required()->expected(1);
    }
    if (verb == "valles" || verb == "torelli" || verb == "recover") sub->add_option("--B", b_label, "bundle label");
    if (verb == "koszul" || verb == "duality") {
      sub->add_option("--p", p, "exterior index")->required();
      sub->add_option("--q", q, "twist index")->required();
      sub->add_option("--N", cmd.n_label, "module label (default O)");
      sub->add_option("--window", window, "twist window lo,hi (default -1,4)");
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw UsageError(app.help(), Ok);
  } catch (const CLI::CallForAllHelp&) {
    throw UsageError(app.help("", CLI::AppFormatMode::All), Ok);
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  const CLI::App* sub = app.get_subcommands().front();
  cmd.verb = sub->get_name();
  auto given = [&](const char* opt) {
    const CLI::Option* o = sub->get_option_no_throw(opt);
    return o != nullptr && o->count() > 0;
  };
  if (given("--B")) cmd.b_label = b_label;
  if (given("--p")) cmd.p = p;
  if (given("--q")) cmd.q = q;
  if (given("--seed")) cmd.seed = seed;
  cmd.primes = prime;
  cmd.primes.insert(cmd.primes.end(), primes.begin(), primes.end());
  for (auto x : cmd.primes)
    if (!is_prime(x)) throw UsageError(std::to_string(x) + " is not a prime");
  auto parse_pair = [](const std::string& text, const char* what) {
    std::pair<int, int> out;
    char comma = 0;
    std::istringstream in(text);
    if (!(in >> out.first >> comma >> out.second) || comma != ',' || !(in >> std::ws).eof())
      throw UsageError(std::string(what) + " expects two comma-separated integers, got '" + text + "'");
    return out;
  };
  if (given("--window")) cmd.window = parse_pair(window, "--window");
  if (given("--random")) cmd.random = parse_pair(random, "--random");
  if (cmd.verb == "dk" && cmd.scenes.empty() == !cmd.random)
    throw UsageError("dk needs exactly one of a scene file or --random r,d");
  return cmd;
}

struct Output {
  io::Json json;
  std::string text;
};

namespace detail {

inline std::string join(const std::vector<std::uint32_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

inline std::string point_string(const Vec<PrimeField>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ":" : "") + std::to_string(v[i]);
  return s + "]";
}

inline Scene load_scene(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open scene file '" + path + "'", FileNotFound);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return io::scene_from_string(buf.str(), std::filesystem::path(path).stem().string());
  } catch (const io::SchemaError& e) {
    throw UsageError(path + ": " + e.what(), Schema);
  }
}

inline Label label_of(const std::string& text, const Scene& s) {
  try {
    return io::parse_label(text, s);
  } catch (const io::SchemaError& e) {
    throw UsageError(e.what());
  }
}

inline const std::vector<std::uint32_t>& primes_of(const Command& cmd) {
  return cmd.primes.empty() ? default_primes() : cmd.primes;
}

inline Label required_b(const Command& cmd, const Scene& s) {
  if (!cmd.b_label) throw UsageError(cmd.verb + " needs --B");
  return label_of(*cmd.b_label, s);
}

inline Output run_build(const Command& cmd, const Scene& s) {
  io::Json j;
  j["scene"] = s.id;
  j["kind"] = std::string(kind_name(s.kind()));
  j["dimension"] = dimension(s);
  j["dim_V"] = series_dim(s);
  std::ostringstream text;
  text << "scene " << s.id << " (" << kind_name(s.kind()) << "), dim " << dimension(s) << ", dim V "
       << series_dim(s) << '\n';
  if (s.kind() != SceneKind::PointSet) j["A"] = io::label_to_string(s, polarization(s));
  if (s.kind() != SceneKind::PointSet && s.kind() != SceneKind::MonomialVariety) j["degree"] = degree(s);
  if (s.kind() != SceneKind::PointSet && s.kind() != SceneKind::MonomialVariety) {
    j["K"] = io::label_to_string(s, canonical_label(s));
    text << "A = " << io::label_to_string(s, polarization(s)) << ", K = " << io::label_to_string(s, canonical_label(s))
         << ", degree " << degree(s) << '\n';
  }
  j["points"] = io::Json::array();
  std::vector<std::vector<std::string>> rows;
  for (auto p : primes_of(cmd)) {
    auto pts = enumerate_points(s, PrimeField(p));
    std::size_t singular = 0;
    for (const auto& r : pts) singular += r.smooth ? 0 : 1;
    j["points"].push_back(io::Json{{"prime", p}, {"count", pts.size()}, {"singular", singular}});
    rows.push_back({std::to_string(p), std::to_string(pts.size()), std::to_string(singular)});
  }
  text << io::table({"prime", "points", "singular"}, rows);
  return {j, text.str()};
}

inline Output run_valles(const Command& cmd, const Scene& s) {
  io::Json j;
  j["scene"] = s.id;
  std::vector<std::vector<std::string>> rows;
  j["valles"] = io::Json::array();
  if (s.kind() != SceneKind::PointSet) j["B"] = io::label_to_string(s, required_b(cmd, s));
  for (auto p : primes_of(cmd)) {
    PrimeField f(p);
    SteinerPresentation<PrimeField> P =
        s.kind() == SceneKind::PointSet
            ? dk_presentation(f, [&] {
                std::vector<Vec<PrimeField>> reps;
                for (const auto& q : s.as<PointSet>().points) reps.push_back(stb::detail::convert(f, q));
                return reps;
              }()).presentation
            : tautological_presentation(s, f, required_b(cmd, s), H1Policy::Skip);
    j["a"] = P.a;
    j["m"] = P.m;
    j["b"] = P.b;
    auto rep = valles_locus(P);
    rows.push_back({std::to_string(p), std::to_string(rep.scanned), std::to_string(rep.unstable.size())});
    j["valles"].push_back(io::to_json(rep));
  }
  return {j, io::table({"prime", "scanned", "unstable"}, rows)};
}

template <ExactField F>
Output run_koszul_in(const Command& cmd, const Scene& s, const F& f) {
  const Label n = label_of(cmd.n_label, s);
  auto w = scene_window(s, f, n, series_basis(s, f), cmd.window.first, cmd.window.second);
  auto k = koszul_dim(w, *cmd.p, *cmd.q);
  io::Json j;
  j["scene"] = s.id;
  j["field"] = f.spec().to_string();
  j["N"] = io::label_to_string(s, n);
  j["window"] = io::Json::array({cmd.window.first, cmd.window.second});
  j["module_dims"] = io::ints_to_json(w.dims);
  j["koszul"] = io::to_json(k);
  std::ostringstream text;
  text << "K_{" << k.p << "," << k.q << "}(" << s.id << ", " << io::label_to_string(s, n) << "; V) over "
       << f.spec().to_string() << ": dim " << k.dim << " (middle " << k.middle << ", rank in " << k.rank_in
       << ", rank out " << k.rank_out << ")\n";
  return {j, text.str()};
}

inline Output run_koszul(const Command& cmd, const Scene& s) {
  if (cmd.primes.empty()) return run_koszul_in(cmd, s, RationalField{});
  return run_koszul_in(cmd, s, PrimeField(cmd.primes.front()));
}

template <ExactField F>
Output run_duality_in(const Command& cmd, const Scene& s, const F& f) {
  const Label n = label_of(cmd.n_label, s);
  auto d = duality_check(s, f, n, series_basis(s, f), *cmd.p, *cmd.q);
  io::Json j;
  j["scene"] = s.id;
  j["field"] = f.spec().to_string();
  j["N"] = io::label_to_string(s, n);
  j["lhs"] = io::to_json(d.lhs);
  j["rhs"] = io::to_json(d.rhs);
  j["hypotheses_ok"] = d.hypotheses_ok;
  j["holds"] = d.holds();
  std::ostringstream text;
  text << "K_{" << d.lhs.p << "," << d.lhs.q << "} = " << d.lhs.dim << ", dual K_{" << d.rhs.p << "," << d.rhs.q
       << "} = " << d.rhs.dim << ", hypotheses " << (d.hypotheses_ok ? "ok" : "fail") << ", "
       << (d.holds() ? "holds" : "FAILS") << '\n';
  return {j, text.str()};
}

inline Output run_duality(const Command& cmd, const Scene& s) {
  if (cmd.primes.empty()) return run_duality_in(cmd, s, RationalField{});
  return run_duality_in(cmd, s, PrimeField(cmd.primes.front()));
}

template <ExactField F>
Output run_green_in(const Scene& s, const F& f) {
  io::Json j;
  j["scene"] = s.id;
  j["field"] = f.spec().to_string();
  std::ostringstream text;
  if (s.kind() == SceneKind::PointSet) {
    std::vector<Vec<F>> pts;
    for (const auto& q : s.as<PointSet>().points) pts.push_back(stb::detail::convert(f, q));
    auto g = green_points_test(f, pts);
    j["r"] = g.r;
    j["p"] = g.r - 2;
    j["q"] = 2;
    j["dim"] = g.dim;
    j["on_rnc"] = g.on_rnc;
    text << "K_{" << g.r - 2 << ",2}(P^" << g.r << ", I; V) = " << g.dim << ", points "
         << (g.on_rnc ? "lie" : "do not lie") << " on a rational normal curve\n";
  } else {
    auto g = green_kp1(s, f);
    j["r"] = g.r;
    j["n"] = g.n;
    j["p"] = g.p;
    j["q"] = 1;
    j["dim"] = g.dim;
    j["on_minimal_degree"] = g.on_minimal_degree;
    j["degree"] = g.degree;
    j["degree_hypothesis"] = g.degree_hypothesis;
    text << "K_{" << g.p << ",1}(X; V) = " << g.dim << ", X " << (g.on_minimal_degree ? "lies" : "does not lie")
         << " on a variety of minimal degree";
    if (!g.degree_hypothesis) text << " (warning: degree " << g.degree << " below r - n + 3)";
    text << '\n';
  }
  return {j, text.str()};
}

inline Output run_green(const Command& cmd, const Scene& s) {
  if (cmd.primes.empty()) return run_green_in(s, RationalField{});
  return run_green_in(s, PrimeField(cmd.primes.front()));
}

inline Output run_torelli(const Command& cmd, const Scene& s) {
  auto rep = torelli_check(s, required_b(cmd, s), primes_of(cmd));
  std::vector<std::vector<std::string>> rows;
  for (const auto& o : rep.outcomes) {
    std::string recovery = o.recovery ? (o.recovery->all_match() ? "match" : "MISMATCH")
                                      : (o.recovery_error.empty() ? "-" : o.recovery_error);
    rows.push_back({std::to_string(o.prime), std::string(verdict_name(o.verdict)), std::to_string(o.scanned),
                    std::to_string(o.image_points), std::to_string(o.unstable_points), std::to_string(o.extra.size()),
                    std::to_string(o.singular_points), recovery});
  }
  std::ostringstream text;
  text << "scene " << rep.scene_id << ", B = " << io::label_to_string(s, rep.b_label) << ", a=" << rep.a
       << " m=" << rep.m << " b=" << rep.b << ", vanishing "
       << (rep.vanishing ? (*rep.vanishing ? "true" : "false") : "n/a") << '\n'
       << io::table({"prime", "verdict", "scanned", "image", "unstable", "extra", "singular", "recovery"}, rows)
       << "consensus " << rep.consensus;
  if (!rep.bad_primes.empty()) text << " (bad primes " << join(rep.bad_primes) << ")";
  text << '\n';
  return {io::to_json(rep, s), text.str()};
}

inline Output run_recover(const Command& cmd, const Scene& s) {
  const Label b = required_b(cmd, s);
  io::Json j;
  j["scene"] = s.id;
  j["B"] = io::label_to_string(s, b);
  j["tables"] = io::Json::array();
  std::ostringstream text;
  for (auto p : primes_of(cmd)) {
    auto t = recover_embedding_check(s, b, p);
    j["tables"].push_back(io::to_json(t));
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : t.rows)
      rows.push_back({point_string(r.params), point_string(r.lambda), point_string(r.recovered),
                      r.match ? "yes" : "NO"});
    text << "p = " << p << '\n' << io::table({"point", "lambda", "recovered", "match"}, rows);
  }
  return {j, text.str()};
}

inline Output run_dk(const Command& cmd, const Scene& s, std::optional<std::uint64_t> seed) {
  auto rep = dk_check(s, primes_of(cmd));
  rep.seed = seed;
  std::vector<std::vector<std::string>> rows;
  for (const auto& o : rep.outcomes)
    rows.push_back({std::to_string(o.prime), std::string(verdict_name(o.verdict)), o.contained ? "yes" : "no",
                    std::to_string(o.k_dim), o.rnc_flag ? "yes" : "no", std::to_string(o.extra.size()),
                    o.implication_ok ? "ok" : "VIOLATED", o.degenerate ? "yes" : "no"});
  std::ostringstream text;
  text << "point set " << rep.scene_id << ", a=" << rep.a << " m=" << rep.m << " b=" << rep.b;
  if (seed) text << ", seed " << *seed;
  text << '\n'
       << io::table({"prime", "verdict", "contained", "K_{r-2,2}", "rnc", "extra", "implication", "degenerate"}, rows)
       << "consensus " << rep.consensus << '\n';
  return {io::to_json(rep), text.str()};
}

inline Output run_scroll_invariance(const Command& cmd, const Scene& x1, const Scene& x2) {
  const std::uint32_t p = cmd.primes.empty() ? 5 : cmd.primes.front();
  auto r = scroll_invariance(x1, x2, cmd.c, p);
  io::Json j;
  j["scenes"] = io::Json::array({x1.id, x2.id});
  j["B"] = io::label_to_string(x1, r.b_label);
  j["prime"] = r.prime;
  j["a"] = r.a;
  j["m"] = r.m;
  j["b"] = r.b;
  j["identical"] = r.identical;
  j["unstable_points"] = r.unstable_points;
  j["union_points"] = r.union_points;
  j["union_contained"] = r.union_contained;
  std::ostringstream text;
  text << "B = " << io::label_to_string(x1, r.b_label) << ": presentations " << (r.identical ? "identical" : "differ")
       << "; over F_" << p << " " << r.union_points << " curve points, " << r.unstable_points << " unstable, union "
       << (r.union_contained ? "contained" : "NOT contained") << '\n';
  return {j, text.str()};
}

inline void write_atomically(const std::string& path, const std::string& bytes) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << bytes;
    if (!out.flush()) throw std::runtime_error("write to '" + tmp.string() + "' failed");
  }
  std::filesystem::rename(tmp, target);
}

}  // namespace detail

inline Output dispatch(const Command& cmd) {
  if (cmd.verb == "scroll-invariance")
    return detail::run_scroll_invariance(cmd, detail::load_scene(cmd.scenes[0]), detail::load_scene(cmd.scenes[1]));
  if (cmd.verb == "dk" && cmd.random) {
    const std::uint32_t p = detail::primes_of(cmd).front();
    auto gen = random_general_points(cmd.random->first, static_cast<std::size_t>(cmd.random->second), p,
                                     cmd.seed.value_or(0));
    Scene s = build_scene(PointSet{cmd.random->first, gen.points}, "random");
    Command c = cmd;
    if (c.primes.empty()) c.primes = {p};
    return detail::run_dk(c, s, gen.seed);
  }
  Scene s = detail::load_scene(cmd.scenes.at(0));
  if (cmd.verb == "build") return detail::run_build(cmd, s);
  if (cmd.verb == "valles") return detail::run_valles(cmd, s);
  if (cmd.verb == "koszul") return detail::run_koszul(cmd, s);
  if (cmd.verb == "green") return detail::run_green(cmd, s);
  if (cmd.verb == "duality") return detail::run_duality(cmd, s);
  if (cmd.verb == "torelli") return detail::run_torelli(cmd, s);
  if (cmd.verb == "recover") return detail::run_recover(cmd, s);
  if (cmd.verb == "dk") return detail::run_dk(cmd, s, std::nullopt);
  throw UsageError("unknown verb '" + cmd.verb + "'");
}

/// Runs a parsed command. The report goes to --out in the chosen format (or
/// to `out` when --out is absent); with --out the text summary goes to `out`.
inline int run(const Command& cmd, std::ostream& out, std::ostream& err) {
  auto emit = [&](const Output& o) {
    std::string bytes = cmd.format == "json" ? o.json.dump(2) + "\n" : o.text;
    if (cmd.out.empty()) {
      out << bytes;
    } else {
      detail::write_atomically(cmd.out, bytes);
      out << o.text;
    }
  };
  try {
    emit(dispatch(cmd));
    return Ok;
  } catch (const UsageError& e) {
    err << "stb: " << e.what() << '\n';
    return e.code();
  } catch (const Error& e) {
    err << "stb: " << e.what() << '\n';
    emit({io::error_json(e.name(), e.what()), std::string("error ") + std::string(e.name()) + ": " + e.what() + "\n"});
    return Pipeline;
  } catch (const std::exception& e) {
    err << "stb: " << e.what() << '\n';
    return Pipeline;
  }
}

inline int main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  Command cmd;
  try {
    cmd = parse(argc, argv);
  } catch (const UsageError& e) {
    (e.code() == Ok ? out : err) << e.what() << (e.code() == Ok ? "" : "\n");
    return e.code();
  }
  return run(cmd, out, err);
}

}  // namespace stb::cli
