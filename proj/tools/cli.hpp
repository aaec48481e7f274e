#pragma once

// The multiorder command-line tool. run() takes the full argv and the output
// streams so the tool can be driven in-process by tests.
//
// Exit codes: 0 ok, 1 selftest failure, 2 usage or input error, 3 no witness
// in the searched box, 4 certificate invalid, 5 budget exhausted.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "multiorder/config.hpp"
#include "multiorder/finite_structures.hpp"
#include "multiorder/generators.hpp"
#include "multiorder/genericity.hpp"
#include "multiorder/json_io.hpp"
#include "multiorder/matrix_builder.hpp"
#include "multiorder/refuter.hpp"

namespace multiorder::cli {

enum Exit : int {
  kOk = 0,
  kSelftestFailed = 1,
  kUsage = 2,
  kNotFound = 3,
  kInvalidCertificate = 4,
  kBudget = 5,
};

using io::Json;

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedInput("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return io::parse(buf.str());
}

/// A JSON value given inline ("[0,2]") or as a path to a file holding one.
inline Json inline_or_file(const std::string& arg) {
  try {
    return io::parse(arg);
  } catch (const MalformedInput&) {
    return read_json_file(arg);
  }
}

/// Accepts a multiorder document or a matrix document ("rows").
inline MultiOrder load_multiorder(const Json& j) {
  if (j.contains("rows")) return from_matrix(io::matrix_from_json(j));
  return io::multiorder_from_json(j);
}

inline void emit(std::ostream& out, const Json& j) { out << io::document(j).dump(2) << '\n'; }

// ---- selftest -----------------------------------------------------------------

struct Check {
  std::string name;
  bool passed;
  std::string detail;
};

inline std::vector<Check> selftest_checks(bool full, std::uint64_t seed) {
  const int scale = full ? 5 : 1;
  std::vector<Check> checks;
  auto record = [&](std::string name, bool ok, std::string detail) {
    checks.push_back({std::move(name), ok, std::move(detail)});
  };

  {  // field: ring laws and sign consistency
    Rng rng(seed);
    bool ok = true;
    const auto basis = gen::small_basis();
    for (int t = 0; t < 200 * scale && ok; ++t) {
      const auto a = gen::random_scalar(rng, basis), b = gen::random_scalar(rng, basis);
      ok = (a + b) - b == a && (a * b == b * a) && (a - a).is_zero() && (a * a).sign() >= 0 &&
           (-a).sign() == -a.sign() && (a.is_zero() || (a * a.inverse()) == FieldScalar(1));
    }
    record("exact-field ring laws and signs", ok, std::to_string(200 * scale) + " pairs");
  }
  {  // orders: trichotomy, transitivity, translation invariance
    Rng rng(seed + 1);
    bool ok = true;
    for (int t = 0; t < 4 * scale && ok; ++t) {
      const std::size_t m = 1 + rng.index(4);
      const OrderSpec o = gen::random_order(rng, m);
      for (int s = 0; s < 100 && ok; ++s) {
        const auto x = rng.lattice(m, 10), y = rng.lattice(m, 10), z = rng.lattice(m, 10);
        const Cmp xy = o.compare(x, y);
        ok = (xy == Cmp::Equal) == (x == y) && o.compare(x + z, y + z) == xy &&
             (!(o.less(x, y) && o.less(y, z)) || o.less(x, z));
      }
    }
    record("order axioms", ok, std::to_string(4 * scale) + " orders");
  }
  {  // matrix builder
    bool ok = true;
    for (std::size_t m = 2; m <= 4; ++m)
      for (std::uint64_t s = 0; s < static_cast<std::uint64_t>(2 * scale); ++s)
        ok = ok && verify(build_order_matrix(m, s)).all();
    record("matrix conditions", ok, "m = 2..4");
  }
  {  // extension property on matrix-built multiorders
    bool ok = true;
    std::string detail;
    for (std::size_t m = 2; m <= 4; ++m) {
      const MultiOrder mo = from_matrix(build_order_matrix(m, seed));
      ExtensionConfig cfg;
      cfg.seed = seed;
      const auto rep = extension_property_test(mo, 3, static_cast<std::size_t>(20 * scale), 10, cfg);
      ok = ok && rep.passed();
      detail += (detail.empty() ? "" : ", ") + std::to_string(rep.witnesses_checked) + " witnesses";
    }
    record("extension property", ok, detail);
  }
  {  // refuter soundness on every path
    Rng rng(seed + 2);
    bool ok = true;
    int count = 0;
    const std::pair<LemmaTag, std::size_t> paths[] = {
        {LemmaTag::DiscreteBase, 1}, {LemmaTag::Dependent, 2}, {LemmaTag::RationalKernel, 2},
        {LemmaTag::SmallVolume, 2}, {LemmaTag::Dependent, 3}, {LemmaTag::RationalKernel, 3},
        {LemmaTag::SmallVolume, 3}};
    for (const auto& [tag, m] : paths) {
      for (int t = 0; t < 2 * scale && ok; ++t, ++count) {
        const auto orders = gen::tuple_for(tag, m, rng);
        const auto cert = refute(orders);
        ok = cert.tag == tag && verify_certificate(orders, cert, {.scan_box = 20, .box_point_cap = 50'000'000});
      }
    }
    record("refuter soundness", ok, std::to_string(count) + " certificates");
  }
  {  // finite structures
    Rng rng(seed + 3);
    bool ok = true;
    const MultiOrder mo = from_matrix(build_order_matrix(3, 0));
    std::vector<std::size_t> perm{1, 2, 3};
    do {
      const auto s = from_pattern(perm);
      const auto e = embed(s, mo);
      ok = ok && is_embedding(s, mo, e) && pattern_of(induced(mo, e.image)) == perm;
    } while (std::next_permutation(perm.begin(), perm.end()));
    for (int t = 0; t < 20 * scale && ok; ++t) {
      const auto a = gen::random_finite(rng, 1 + rng.index(3), 2);
      const auto [b1, f1] = gen::random_extension(rng, a, rng.index(3));
      const auto [b2, f2] = gen::random_extension(rng, a, rng.index(3));
      const auto r = amalgamate(a, b1, f1, b2, f2);
      ok = r.c.size() == b1.size() + b2.size() - a.size() && is_label_embedding(b1, r.c, r.g1) &&
           is_label_embedding(b2, r.c, r.g2);
      for (std::size_t x = 0; x < a.size(); ++x) ok = ok && r.g1[f1[x]] == r.g2[f2[x]];
      ok = ok && is_embedding(r.c, mo, embed(r.c, mo));
    }
    record("embedding and amalgamation", ok, "6 patterns, " + std::to_string(20 * scale) + " amalgams");
  }
  return checks;
}

// ---- dispatch -------------------------------------------------------------------

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Right-invariant multiorders on Z^m: generic constructions and refutations"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON file with budget overrides");

  // build-matrix
  auto* bm = app.add_subcommand("build-matrix", "Build and verify an m x m order matrix");
  std::size_t bm_m = 2;
  std::uint64_t bm_seed = 0;
  bm->add_option("--m", bm_m, "Matrix size (>= 2)")->required();
  bm->add_option("--seed", bm_seed, "Prime offset");
  bm->add_flag("--json", "Emit JSON (the only format)");

  // witness
  auto* wi = app.add_subcommand("witness", "Find a lattice point inside one interval per order");
  std::string wi_mo, wi_cons, wi_backend = "auto";
  std::int64_t wi_box = 50;
  wi->add_option("--multiorder", wi_mo, "Multiorder or matrix JSON file")->required();
  wi->add_option("--constraints", wi_cons, "JSON file with a \"constraints\" array")->required();
  wi->add_option("--backend", wi_backend, "auto, line or brute")
      ->check(CLI::IsMember({"auto", "line", "brute"}));
  wi->add_option("--box", wi_box, "Box radius for the brute backend");

  // refute
  auto* rf = app.add_subcommand("refute", "Emit a certificate that the orders are not generic");
  std::string rf_orders;
  rf->add_option("--orders", rf_orders, "Multiorder JSON file")->required();

  // verify-cert
  auto* vc = app.add_subcommand("verify-cert", "Check a certificate exactly");
  std::string vc_orders, vc_cert;
  std::int64_t vc_box = 50;
  vc->add_option("--orders", vc_orders, "Multiorder JSON file")->required();
  vc->add_option("--cert", vc_cert, "Certificate JSON file")->required();
  vc->add_option("--scan-box", vc_box, "Radius of the brute-force sanity scan");

  // embed
  auto* em = app.add_subcommand("embed", "Embed a finite n-order into a multiorder");
  std::string em_s, em_mo;
  em->add_option("--structure", em_s, "Finite n-order JSON file")->required();
  em->add_option("--multiorder", em_mo, "Multiorder or matrix JSON file")->required();

  // amalgamate
  auto* am = app.add_subcommand("amalgamate", "Strong amalgam of B1 and B2 over A");
  std::string am_a, am_b1, am_b2, am_f1, am_f2;
  am->add_option("--a", am_a, "Finite n-order A")->required();
  am->add_option("--b1", am_b1, "Finite n-order B1")->required();
  am->add_option("--b2", am_b2, "Finite n-order B2")->required();
  am->add_option("--f1", am_f1, "Label map A -> B1, inline JSON array or file")->required();
  am->add_option("--f2", am_f2, "Label map A -> B2, inline JSON array or file")->required();

  // pattern
  auto* pa = app.add_subcommand("pattern", "Permutation pattern of a 2-order, or the 2-order of a pattern");
  std::string pa_s, pa_perm;
  auto* pa_s_opt = pa->add_option("--structure", pa_s, "Finite 2-order JSON file");
  pa->add_option("--permutation", pa_perm, "1-based permutation, e.g. [2,3,1]")->excludes(pa_s_opt);

  // selftest
  auto* st = app.add_subcommand("selftest", "Run the built-in property checks");
  std::string st_level = "quick";
  st->add_option("--level", st_level, "quick or full")->check(CLI::IsMember({"quick", "full"}));

  std::vector<std::string> argv_store = args;
  if (argv_store.empty()) argv_store.push_back("multiorder");
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    Config cfg;
    if (!config_path.empty()) cfg = Config::from_json(read_json_file(config_path));
    cfg.apply_environment();
    cfg.validate();
    set_precision_cap(cfg.precision_cap);

    if (*bm) {
      const OrderMatrix a = build_order_matrix(bm_m, bm_seed);
      const MatrixReport rep = verify(a);
      Json j = io::to_json(a);
      j["seed"] = bm_seed;
      j["determinant"] = io::to_json(determinant_bareiss(as_matrix(a)));
      j["verified"] = rep.all();
      emit(out, j);
      return kOk;
    }
    if (*wi) {
      const MultiOrder mo = load_multiorder(read_json_file(wi_mo));
      const IntervalConstraint cons =
          io::constraint_from_json(io::detail::field(read_json_file(wi_cons), "constraints"));
      const bool brute = wi_backend == "brute" || (wi_backend == "auto" && !mo.direction());
      if (!brute) {
        const WitnessResult w = witness(mo, cons, cfg.witness());
        emit(out, {{"point", io::to_json(w.point)}, {"backend", to_string(w.backend)}, {"probes", w.probes}});
        return kOk;
      }
      const BruteResult br = witness_brute(mo, cons, wi_box);
      if (!br.point) {
        err << "no witness in [-" << wi_box << ", " << wi_box << "]^" << mo.rank() << '\n';
        emit(out, {{"point", nullptr}, {"backend", "brute"}, {"probes", br.probes}, {"box", wi_box}});
        return kNotFound;
      }
      emit(out, {{"point", io::to_json(*br.point)}, {"backend", "brute"}, {"probes", br.probes}});
      return kOk;
    }
    if (*rf) {
      const auto orders = io::orders_from_json(read_json_file(rf_orders));
      try {
        emit(out, io::to_json(refute(orders, cfg.refute())));
      } catch (const NoCertificateFound& e) {
        err << "no certificate: " << e.what() << '\n';
        emit(out, {{"status", "NoCertificateFound"}, {"reason", e.what()}});
      }
      return kOk;
    }
    if (*vc) {
      const auto orders = io::orders_from_json(read_json_file(vc_orders));
      bool valid = false;
      std::string reason;
      try {
        const Certificate cert = io::certificate_from_json(read_json_file(vc_cert));
        valid = verify_certificate(orders, cert, {.scan_box = vc_box, .box_point_cap = 50'000'000});
        if (!valid) reason = "verification failed";
      } catch (const MalformedInput& e) {
        reason = e.what();
      } catch (const RankMismatch& e) {
        reason = e.what();
      }
      Json j{{"valid", valid}};
      if (!valid) {
        j["reason"] = reason;
        err << "certificate invalid: " << reason << '\n';
      }
      emit(out, j);
      return valid ? kOk : kInvalidCertificate;
    }
    if (*em) {
      const FiniteNOrder s = io::structure_from_json(read_json_file(em_s));
      const MultiOrder mo = load_multiorder(read_json_file(em_mo));
      const Embedding e = embed(s, mo, cfg.embed());
      Json j = io::to_json(e);
      j["verified"] = is_embedding(s, mo, e) && isomorphic(induced(mo, e.image), s);
      emit(out, j);
      return kOk;
    }
    if (*am) {
      const auto a = io::structure_from_json(read_json_file(am_a));
      const auto b1 = io::structure_from_json(read_json_file(am_b1));
      const auto b2 = io::structure_from_json(read_json_file(am_b2));
      const auto f1 = io::labels_from_json(inline_or_file(am_f1));
      const auto f2 = io::labels_from_json(inline_or_file(am_f2));
      const Amalgam r = amalgamate(a, b1, f1, b2, f2);
      emit(out, {{"c", io::to_json(r.c)}, {"g1", r.g1}, {"g2", r.g2}});
      return kOk;
    }
    if (*pa) {
      if (!pa_perm.empty()) {
        emit(out, io::to_json(from_pattern(io::labels_from_json(inline_or_file(pa_perm)))));
        return kOk;
      }
      if (pa_s.empty()) throw InvalidArgument("pattern needs --structure or --permutation");
      emit(out, {{"pattern", pattern_of(io::structure_from_json(read_json_file(pa_s)))}});
      return kOk;
    }
    if (*st) {
      const auto checks = selftest_checks(st_level == "full", cfg.rng_seed);
      Json list = Json::array();
      bool all = true;
      for (const auto& c : checks) {
        list.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
        all = all && c.passed;
        if (!c.passed) err << "FAILED: " << c.name << '\n';
      }
      emit(out, {{"level", st_level}, {"checks", list}, {"passed", all}});
      return all ? kOk : kSelftestFailed;
    }
  } catch (const BudgetExhausted& e) {
    err << "budget exhausted: " << e.what() << '\n';
    return kBudget;
  } catch (const PrecisionCapExceeded& e) {
    err << e.what() << '\n';
    return kBudget;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Json::exception& e) {
    err << "error: json: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace multiorder::cli
