#pragma once

// JSON encoding of every value the CLI reads or writes.
//
//   scalar      "p/q" (rational) or {"basis":[2,3],"terms":[{"radicand":"6","coeff":"-1/2"}]}
//   vector      [1,-2,...]; entries beyond int64 are decimal strings
//   order       {"rank":m,"forms":[[scalar,...],...]}
//   multiorder  {"rank":m,"orders":[order,...],"direction":[scalar,...]?}
//   matrix      {"m":m,"rows":[[scalar,...],...]}
//   bound       {"lower":vector|"-inf","upper":vector|"+inf"}
//   structure   {"k":k,"n":n,"orders":[[label,...],...]}
//
// Top-level documents carry "schema": 1. Malformed input raises MalformedInput.

#include <nlohmann/json.hpp>

#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "multiorder/errors.hpp"
#include "multiorder/exact_field.hpp"
#include "multiorder/finite_structures.hpp"
#include "multiorder/genericity.hpp"
#include "multiorder/matrix_builder.hpp"
#include "multiorder/refuter.hpp"

namespace multiorder::io {

using Json = nlohmann::json;

inline constexpr int kSchema = 1;

namespace detail {

[[noreturn]] inline void bad(const std::string& what) { throw MalformedInput("json: " + what); }

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

inline std::size_t size_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
    bad(std::string("field \"") + key + "\" must be a non-negative integer");
  return v.get<std::size_t>();
}

inline const Json& array_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_array()) bad(std::string("field \"") + key + "\" must be an array");
  return v;
}

inline Integer parse_integer(const Json& j) {
  if (j.is_number_integer()) return Integer(std::to_string(j.get<std::int64_t>()));
  if (j.is_number_unsigned()) return Integer(std::to_string(j.get<std::uint64_t>()));
  if (j.is_string()) {
    Integer z;
    if (z.set_str(j.get<std::string>(), 10) != 0) bad("bad integer \"" + j.get<std::string>() + "\"");
    return z;
  }
  bad("expected an integer");
}

inline Json integer_json(const Integer& z) {
  if (z.fits_slong_p()) return Json(static_cast<std::int64_t>(z.get_si()));
  return Json(z.get_str());
}

inline Rational parse_rational(const Json& j) {
  if (j.is_number_integer() || j.is_number_unsigned()) return Rational(parse_integer(j));
  if (!j.is_string()) bad("expected a rational");
  Rational q;
  const std::string s = j.get<std::string>();
  if (s.empty() || q.set_str(s, 10) != 0 || sgn(q.get_den()) == 0) bad("bad rational \"" + s + "\"");
  q.canonicalize();
  return q;
}

/// Primes of a square-free radicand, by trial division.
inline std::vector<std::uint64_t> prime_factors(Integer r) {
  std::vector<std::uint64_t> out;
  if (r <= 0) bad("radicand must be positive");
  for (unsigned long p = 2; r > 1; ++p) {
    if (Integer(p) * p > r) {
      if (!r.fits_ulong_p()) bad("radicand too large");
      out.push_back(r.get_ui());
      break;
    }
    if (mpz_divisible_ui_p(r.get_mpz_t(), p)) {
      out.push_back(p);
      r /= p;
    }
  }
  return out;
}

}  // namespace detail

// ---- scalars and forms ------------------------------------------------------

inline Json to_json(const FieldScalar& x) {
  if (x.is_rational()) return Json(x.rational_part().get_str());
  Json basis = Json::array();
  for (auto p : x.basis()->primes()) basis.push_back(p);
  Json terms = Json::array();
  for (const auto& t : x.terms())
    terms.push_back({{"radicand", x.radicand(t.mask).get_str()}, {"coeff", t.coeff.get_str()}});
  return {{"basis", basis}, {"terms", terms}};
}

inline FieldScalar scalar_from_json(const Json& j) {
  if (!j.is_object()) return FieldScalar(detail::parse_rational(j));
  std::vector<std::pair<Integer, Rational>> parts;
  for (const auto& t : detail::array_field(j, "terms"))
    parts.emplace_back(detail::parse_integer(detail::field(t, "radicand")),
                       detail::parse_rational(detail::field(t, "coeff")));
  std::vector<std::uint64_t> primes;
  if (j.contains("basis")) {
    for (const auto& p : detail::array_field(j, "basis")) primes.push_back(detail::parse_integer(p).get_ui());
  } else {
    for (const auto& [r, q] : parts) {
      auto f = detail::prime_factors(r);
      primes.insert(primes.end(), f.begin(), f.end());
    }
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  }
  try {
    return FieldScalar::from_radicands(std::make_shared<const RadicalBasis>(std::move(primes)), parts);
  } catch (const InvalidArgument& e) {
    detail::bad(e.what());
  }
}

inline Json to_json(const LinearForm& c) {
  Json out = Json::array();
  for (const auto& x : c) out.push_back(to_json(x));
  return out;
}

inline LinearForm form_from_json(const Json& j) {
  if (!j.is_array()) detail::bad("a linear form must be an array");
  LinearForm out;
  for (const auto& x : j) out.push_back(scalar_from_json(x));
  return out;
}

// ---- lattice vectors and constraints -----------------------------------------

inline Json to_json(const LatticeVector& v) {
  Json out = Json::array();
  for (const auto& x : v.entries()) out.push_back(detail::integer_json(x));
  return out;
}

inline LatticeVector vector_from_json(const Json& j) {
  if (!j.is_array()) detail::bad("a lattice vector must be an array");
  LatticeVector out(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out[i] = detail::parse_integer(j[i]);
  return out;
}

inline Json to_json(const Bound& b) {
  return {{"lower", b.lower ? to_json(*b.lower) : Json("-inf")},
          {"upper", b.upper ? to_json(*b.upper) : Json("+inf")}};
}

inline Bound bound_from_json(const Json& j) {
  Bound b;
  const Json& lo = detail::field(j, "lower");
  const Json& hi = detail::field(j, "upper");
  if (lo.is_string() && lo.get<std::string>() == "-inf") {
  } else {
    b.lower = vector_from_json(lo);
  }
  if (hi.is_string() && hi.get<std::string>() == "+inf") {
  } else {
    b.upper = vector_from_json(hi);
  }
  return b;
}

inline Json to_json(const IntervalConstraint& cons) {
  Json out = Json::array();
  for (const auto& b : cons) out.push_back(to_json(b));
  return out;
}

inline IntervalConstraint constraint_from_json(const Json& j) {
  if (!j.is_array()) detail::bad("constraints must be an array");
  IntervalConstraint out;
  for (const auto& b : j) out.push_back(bound_from_json(b));
  return out;
}

// ---- orders, multiorders, matrices ----------------------------------------------

inline Json to_json(const OrderSpec& o) {
  Json forms = Json::array();
  for (const auto& f : o.forms()) forms.push_back(to_json(f));
  return {{"rank", o.rank()}, {"forms", forms}};
}

inline OrderSpec order_from_json(const Json& j) {
  std::vector<LinearForm> forms;
  for (const auto& f : detail::array_field(j, "forms")) forms.push_back(form_from_json(f));
  return OrderSpec(detail::size_field(j, "rank"), std::move(forms));
}

inline Json to_json(const MultiOrder& mo) {
  Json orders = Json::array();
  for (const auto& o : mo.orders()) orders.push_back(to_json(o));
  Json out{{"rank", mo.rank()}, {"orders", orders}};
  if (mo.direction()) out["direction"] = to_json(*mo.direction());
  return out;
}

inline std::vector<OrderSpec> orders_from_json(const Json& j) {
  std::vector<OrderSpec> out;
  for (const auto& o : detail::array_field(j, "orders")) out.push_back(order_from_json(o));
  return out;
}

inline MultiOrder multiorder_from_json(const Json& j) {
  std::optional<LinearForm> dir;
  if (j.contains("direction") && !j.at("direction").is_null()) dir = form_from_json(j.at("direction"));
  return MultiOrder(detail::size_field(j, "rank"), orders_from_json(j), std::move(dir));
}

inline Json to_json(const OrderMatrix& a) {
  Json rows = Json::array();
  for (const auto& r : a.rows) rows.push_back(to_json(r));
  return {{"m", a.m}, {"rows", rows}};
}

inline OrderMatrix matrix_from_json(const Json& j) {
  OrderMatrix a{detail::size_field(j, "m"), {}};
  for (const auto& r : detail::array_field(j, "rows")) {
    a.rows.push_back(form_from_json(r));
    if (a.rows.back().size() != a.m) detail::bad("matrix row has the wrong length");
  }
  if (a.rows.size() != a.m) detail::bad("matrix must have m rows");
  return a;
}

// ---- certificates -----------------------------------------------------------------

inline Json to_json(const Certificate& cert);

inline Json evidence_json(const Evidence& ev) {
  return std::visit(
      [](const auto& e) -> Json {
        using E = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<E, DependentEvidence>) {
          Json rev = Json::array();
          for (bool b : e.reversed) rev.push_back(b);
          return {{"target", e.target}, {"coefficients", to_json(LinearForm(e.coefficients))},
                  {"reversed", rev}};
        } else if constexpr (std::is_same_v<E, RationalKernelEvidence>) {
          Json basis = Json::array();
          for (const auto& b : e.basis) basis.push_back(to_json(b));
          return {{"index", e.index}, {"kernel_basis", basis}, {"inner", to_json(*e.inner)}};
        } else if constexpr (std::is_same_v<E, SmallVolumeEvidence>) {
          return {{"determinant", to_json(e.determinant)}, {"widths", to_json(LinearForm(e.widths))}};
        } else {
          return {{"index", e.index}, {"lower", to_json(e.lower)}, {"upper", to_json(e.upper)}};
        }
      },
      ev);
}

inline Json to_json(const Certificate& cert) {
  return {{"lemma", to_string(cert.tag)},
          {"constraints", to_json(cert.constraints)},
          {"evidence", evidence_json(cert.evidence)}};
}

inline Certificate certificate_from_json(const Json& j) {
  Certificate cert;
  const Json& lemma = detail::field(j, "lemma");
  if (!lemma.is_string()) detail::bad("lemma must be a string");
  const auto tag = lemma_tag_from_string(lemma.get<std::string>());
  if (!tag) detail::bad("unknown lemma \"" + lemma.get<std::string>() + "\"");
  cert.tag = *tag;
  cert.constraints = constraint_from_json(detail::field(j, "constraints"));
  const Json& ev = detail::field(j, "evidence");
  switch (*tag) {
    case LemmaTag::Dependent: {
      DependentEvidence e;
      e.target = detail::size_field(ev, "target");
      e.coefficients = form_from_json(detail::field(ev, "coefficients"));
      for (const auto& b : detail::array_field(ev, "reversed")) {
        if (!b.is_boolean()) detail::bad("reversed entries must be booleans");
        e.reversed.push_back(b.get<bool>());
      }
      cert.evidence = std::move(e);
      break;
    }
    case LemmaTag::RationalKernel: {
      RationalKernelEvidence e;
      e.index = detail::size_field(ev, "index");
      for (const auto& b : detail::array_field(ev, "kernel_basis")) e.basis.push_back(vector_from_json(b));
      e.inner = std::make_shared<const Certificate>(certificate_from_json(detail::field(ev, "inner")));
      cert.evidence = std::move(e);
      break;
    }
    case LemmaTag::SmallVolume:
      cert.evidence = SmallVolumeEvidence{scalar_from_json(detail::field(ev, "determinant")),
                                          form_from_json(detail::field(ev, "widths"))};
      break;
    case LemmaTag::DiscreteBase:
      cert.evidence = DiscreteBaseEvidence{detail::size_field(ev, "index"),
                                           vector_from_json(detail::field(ev, "lower")),
                                           vector_from_json(detail::field(ev, "upper"))};
      break;
  }
  return cert;
}

// ---- finite structures ----------------------------------------------------------

inline Json to_json(const FiniteNOrder& s) {
  return {{"k", s.size()}, {"n", s.arity()}, {"orders", s.orders()}};
}

inline std::vector<std::size_t> labels_from_json(const Json& j) {
  if (!j.is_array()) detail::bad("expected an array of labels");
  std::vector<std::size_t> out;
  for (const auto& x : j) {
    if (!x.is_number_unsigned() && !(x.is_number_integer() && x.get<std::int64_t>() >= 0))
      detail::bad("labels must be non-negative integers");
    out.push_back(x.get<std::size_t>());
  }
  return out;
}

inline FiniteNOrder structure_from_json(const Json& j) {
  const std::size_t k = detail::size_field(j, "k");
  const std::size_t n = detail::size_field(j, "n");
  std::vector<std::vector<std::size_t>> orders;
  for (const auto& o : detail::array_field(j, "orders")) orders.push_back(labels_from_json(o));
  if (orders.size() != n) detail::bad("structure lists " + std::to_string(orders.size()) + " orders, n = " + std::to_string(n));
  return FiniteNOrder(k, std::move(orders));
}

inline Json to_json(const Embedding& e) {
  Json image = Json::array();
  for (const auto& p : e.image) image.push_back(to_json(p));
  return {{"image", image}};
}

inline Embedding embedding_from_json(const Json& j) {
  Embedding e;
  for (const auto& p : detail::array_field(j, "image")) e.image.push_back(vector_from_json(p));
  return e;
}

/// Adds "schema": 1 to a top-level object.
inline Json document(Json j) {
  j["schema"] = kSchema;
  return j;
}

/// Rejects documents declaring a schema other than 1.
inline const Json& check_schema(const Json& j) {
  if (j.is_object() && j.contains("schema") && j.at("schema") != kSchema)
    detail::bad("unsupported schema " + j.at("schema").dump());
  return j;
}

inline Json parse(const std::string& text) {
  try {
    return check_schema(Json::parse(text));
  } catch (const Json::parse_error& e) {
    throw MalformedInput(std::string("json: ") + e.what());
  }
}

}  // namespace multiorder::io
