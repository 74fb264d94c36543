#pragma once

// Command-line front end. run() is kept separate from main() so tests can drive it
// in-process with string streams.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nilmult.hpp"

namespace nilmult::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int { success = 0, verification_failure = 1, usage_error = 2 };

inline Json to_json(const Integer& v) {
  if (fits_int64(v)) return static_cast<long long>(v);
  return to_string(v);
}

inline Json to_json(const std::vector<Integer>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

inline Json to_json(const IntMatrix& m) {
  Json a = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(to_json(m.row(i)));
  return a;
}

inline Json to_json(const FgAbelianGroup& g) {
  return Json{{"free_rank", g.free_rank()}, {"invariant_factors", to_json(g.invariant_factors())}};
}

inline std::string render_matrix(const IntMatrix& m) {
  std::string s = "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    s += i ? ",[" : "[";
    for (std::size_t j = 0; j < m.cols(); ++j) s += (j ? "," : "") + to_string(m(i, j));
    s += "]";
  }
  return s + "]";
}

inline Integer parse_integer(const Json& j, const std::string& what) {
  if (j.is_number_integer()) return Integer(j.get<long long>());
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (!s.empty() && s.find_first_not_of("0123456789") == std::string::npos) return Integer(s);
  }
  throw precondition_error(what + " must be a nonnegative integer");
}

/// {"free_rank": f, "invariant_factors": [d_1, ..., d_m]} in canonical form.
inline FgAbelianGroup parse_group(const Json& j, const std::string& what) {
  if (!j.is_object() || !j.contains("free_rank") || !j.contains("invariant_factors"))
    throw precondition_error(what + " needs free_rank and invariant_factors");
  const auto& fr = j.at("free_rank");
  if (!fr.is_number_unsigned() && !(fr.is_number_integer() && fr.get<long long>() >= 0))
    throw precondition_error(what + ".free_rank must be a nonnegative integer");
  if (!j.at("invariant_factors").is_array()) throw precondition_error(what + ".invariant_factors must be an array");
  std::vector<Integer> factors;
  for (const auto& d : j.at("invariant_factors")) factors.push_back(parse_integer(d, what + " invariant factor"));
  try {
    return FgAbelianGroup(fr.get<std::uint64_t>(), factors);
  } catch (const precondition_error& e) {
    throw precondition_error(what + ": " + e.what());
  }
}

inline GroupData parse_group_data(const Json& j, const std::string& what) {
  if (!j.is_object()) throw precondition_error(what + " must be an object");
  for (const char* key : {"ab", "m1", "m2"})
    if (!j.contains(key)) throw precondition_error(what + " is missing \"" + key + "\"");
  return {parse_group(j.at("ab"), what + ".ab"), parse_group(j.at("m1"), what + ".m1"),
          parse_group(j.at("m2"), what + ".m2")};
}

struct Cell {
  std::string claim;
  VerificationCheck check;
  std::string verdict;  // pass, fail, rejected
};

struct Options {
  std::string format = "text";
  std::string out;
  std::uint64_t guard = default_monomial_guard;
  int t = 0;
  int n = 0;
  std::vector<long long> orders;
  int c = 0;
  int k = 0;
  int c_max = 2;
  int k_max = 4;
  std::string which = "all";
  std::string input = "-";
};

class Runner {
 public:
  explicit Runner(std::ostream& out) : out_(out) {}

  int basis_cmd(const Options& o) {
    const auto layer = basis(o.t, o.n);
    if (json(o)) {
      Json j{{"t", o.t}, {"n", o.n}, {"witt_rank", to_json(witt_rank(o.t, o.n))}, {"basis", layer.names}};
      return emit(o, j, success);
    }
    std::string s;
    for (const auto& name : layer.names) s += name + "\n";
    return emit(o, s, success);
  }

  int multiplier_cmd(const Options& o) {
    const CyclicFactors f = factors(o);
    const auto r = truncated_multiplier(f, o.c, o.k, o.guard);
    const std::string verdict = r.quotient.is_trivial() ? "trivial" : "nontrivial";
    if (json(o)) {
      Json ladder = Json::array();
      for (const auto& cmp : r.ladder)
        ladder.push_back({{"weight", cmp.weight},
                          {"s_layer_hnf", to_json(cmp.s_layer)},
                          {"rho_layer_hnf", to_json(cmp.rho_layer)},
                          {"free_rank", cmp.quotient.free_rank()},
                          {"invariant_factors", to_json(cmp.quotient.invariant_factors())}});
      Json j{{"orders", to_json(r.orders)},
             {"class", r.c},
             {"depth", r.k},
             {"numerator_hnf", to_json(r.numerator)},
             {"denominator_hnf", to_json(r.denominator)},
             {"free_rank", r.quotient.free_rank()},
             {"invariant_factors", to_json(r.quotient.invariant_factors())},
             {"truncation_note", r.truncation_note},
             {"verdict", verdict},
             {"ladder", ladder}};
      return emit(o, j, success);
    }
    std::string s;
    s += "orders: " + render_orders(f) + "\n";
    s += "class: " + std::to_string(r.c) + "\n";
    s += "depth: " + std::to_string(r.k) + "\n";
    s += "numerator_hnf: " + render_matrix(r.numerator) + "\n";
    s += "denominator_hnf: " + render_matrix(r.denominator) + "\n";
    s += "multiplier: " + render(r.quotient) + "\n";
    s += "note: " + r.truncation_note + "\n";
    return emit(o, s, success);
  }

  int burns_ellis_cmd(const Options& o) {
    Json in;
    try {
      if (o.input == "-") {
        in = Json::parse(std::cin);
      } else {
        std::ifstream file(o.input);
        if (!file) throw precondition_error("cannot read " + o.input);
        in = Json::parse(file);
      }
    } catch (const Json::parse_error& e) {
      throw precondition_error(std::string("malformed JSON: ") + e.what());
    }
    if (!in.is_object() || !in.contains("G") || !in.contains("H"))
      throw precondition_error("input needs objects \"G\" and \"H\"");
    const auto g = parse_group_data(in.at("G"), "G");
    const auto h = parse_group_data(in.at("H"), "H");
    const auto parts = burns_ellis_summands(g, h);
    const std::vector<std::pair<std::string, FgAbelianGroup>> named{
        {"M2(G)", parts.m2_g},
        {"M2(H)", parts.m2_h},
        {"M(G) (x) H^ab", parts.m1_g_tensor_h_ab},
        {"M(H) (x) G^ab", parts.m1_h_tensor_g_ab},
        {"Tor(G^ab, H^ab)", parts.tor_ab}};
    const auto total = parts.total();
    if (json(o)) {
      Json summands = Json::array();
      for (const auto& [name, grp] : named) {
        Json item{{"summand", name}};
        item.update(to_json(grp));
        summands.push_back(item);
      }
      Json j{{"summands", summands}};
      j.update(to_json(total));
      return emit(o, j, success);
    }
    std::string s;
    for (const auto& [name, grp] : named) s += name + " = " + render(grp) + "\n";
    s += "M2(G*H) = " + render(total) + "\n";
    return emit(o, s, success);
  }

  int verify_cmd(const Options& o) {
    const CyclicFactors f = factors(o);
    const bool all = o.which == "all";
    std::vector<Cell> cells;
    if (all || o.which == "cor22")
      run_cell("cor22", cells, [&] { return verify_intersection_layers(f, o.k_max, o.guard); });
    if (all || o.which == "lem23")
      for (int n = 1; n < o.k_max; ++n)
        run_cell("lem23", cells, [&] { return verify_rho_intersection(f, n, o.k_max, o.guard); });
    if (all || o.which == "thm25")
      run_cell("thm25", cells, [&] { return verify_coprime_triviality(f, o.c_max, o.k_max, o.guard); });

    bool failed = false, rejected = false;
    for (const auto& c : cells) {
      failed = failed || c.verdict == "fail";
      rejected = rejected || c.verdict == "rejected";
    }
    const int code = failed ? verification_failure : rejected ? usage_error : success;
    const std::string overall = failed ? "fail" : rejected ? "rejected" : "pass";
    if (json(o)) {
      Json arr = Json::array();
      for (const auto& c : cells) {
        Json cell{{"claim", c.claim}, {"check", c.check.check}, {"orders", to_json(f.orders())}};
        cell["class"] = c.check.c ? Json(c.check.c) : Json(nullptr);
        cell["depth"] = c.check.depth ? Json(c.check.depth) : Json(nullptr);
        cell["weight"] = c.check.weight ? Json(c.check.weight) : Json(nullptr);
        cell["verdict"] = c.verdict;
        cell["detail"] = c.check.detail;
        arr.push_back(cell);
      }
      Json j{{"orders", to_json(f.orders())}, {"cells", arr}, {"verdict", overall}};
      return emit(o, j, code);
    }
    std::string s;
    for (const auto& c : cells) {
      s += c.claim + " orders=" + render_orders(f);
      if (c.check.c) s += " class=" + std::to_string(c.check.c);
      if (c.check.depth) s += " depth=" + std::to_string(c.check.depth);
      if (c.check.weight) s += " weight=" + std::to_string(c.check.weight);
      s += " " + c.verdict;
      if (!c.check.check.empty()) s += " " + c.check.check;
      s += ": " + c.check.detail + "\n";
    }
    s += "verdict: " + overall + "\n";
    return emit(o, s, code);
  }

 private:
  static bool json(const Options& o) { return o.format == "json"; }

  static CyclicFactors factors(const Options& o) {
    if (o.orders.empty()) throw precondition_error("--orders is required");
    std::vector<Integer> orders;
    for (auto r : o.orders) {
      if (r < 1) throw precondition_error("orders must be at least 1, got " + std::to_string(r));
      orders.emplace_back(r);
    }
    return CyclicFactors(std::move(orders));
  }

  template <class F>
  static void run_cell(const std::string& claim, std::vector<Cell>& cells, F&& verify) {
    try {
      const auto report = verify();
      for (const auto& c : report.checks) cells.push_back({claim, c, c.pass ? "pass" : "fail"});
    } catch (const precondition_error& e) {
      cells.push_back({claim, {"", 0, 0, 0, false, e.what()}, "rejected"});
    }
  }

  int emit(const Options& o, const Json& j, int code) { return emit(o, j.dump(2) + "\n", code); }

  int emit(const Options& o, const std::string& text, int code) {
    if (o.out.empty()) {
      out_ << text;
    } else {
      std::ofstream file(o.out, std::ios::binary);
      if (!file) throw precondition_error("cannot write " + o.out);
      file << text;
    }
    return code;
  }

  std::ostream& out_;
};

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"c-nilpotent multipliers of free products of finite cyclic groups"};
  app.require_subcommand(1);
  Options o;
  auto common = [&o](CLI::App* sub) {
    sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--out", o.out, "write the report to a file instead of stdout");
    sub->add_option("--guard", o.guard, "largest allowed monomial count t^0+...+t^k");
  };

  auto* basis_sub = app.add_subcommand("basis", "basic commutators of one weight");
  basis_sub->add_option("--t", o.t, "number of generators")->required();
  basis_sub->add_option("--n", o.n, "weight")->required();
  common(basis_sub);

  auto* mult_sub = app.add_subcommand("multiplier", "truncated c-nilpotent multiplier");
  mult_sub->add_option("--orders", o.orders, "cyclic orders, comma separated")->required()->delimiter(',');
  mult_sub->add_option("--class", o.c, "nilpotency class c")->required();
  mult_sub->add_option("--depth", o.k, "truncation depth k >= c+1")->required();
  common(mult_sub);

  auto* be_sub = app.add_subcommand("burns-ellis", "2-nilpotent multiplier of a free product from group data");
  be_sub->add_option("--input", o.input, "JSON file with G and H, or - for stdin");
  common(be_sub);

  auto* verify_sub = app.add_subcommand("verify", "verification grid for the intersection and triviality claims");
  verify_sub->add_option("--orders", o.orders, "cyclic orders, comma separated")->required()->delimiter(',');
  verify_sub->add_option("--cmax", o.c_max, "largest class");
  verify_sub->add_option("--kmax", o.k_max, "largest depth");
  verify_sub->add_option("--which", o.which, "which check")
      ->transform(CLI::CheckedTransformer(std::map<std::string, std::string>{{"cor22", "cor22"},
                                                                   {"intersection-layers", "cor22"},
                                                                   {"lem23", "lem23"},
                                                                   {"rho-intersection", "lem23"},
                                                                   {"thm25", "thm25"},
                                                                   {"coprime-triviality", "thm25"},
                                                                   {"all", "all"}}));
  common(verify_sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return success;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return success;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return usage_error;
  }

  Runner runner(out);
  try {
    if (basis_sub->parsed()) return runner.basis_cmd(o);
    if (mult_sub->parsed()) return runner.multiplier_cmd(o);
    if (be_sub->parsed()) return runner.burns_ellis_cmd(o);
    return runner.verify_cmd(o);
  } catch (const precondition_error& e) {
    err << "error: " << e.what() << "\n";
    return usage_error;
  } catch (const consistency_error& e) {
    err << "internal consistency failure: " << e.what() << "\n";
    return verification_failure;
  }
}

}  // namespace nilmult::cli
