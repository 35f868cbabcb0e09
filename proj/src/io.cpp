#include "vck/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace vck {

std::string rational_str(const Rational& r) { return format_rational(r); }

Json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open input file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    // nlohmann reports a byte offset; translate to line/column.
    std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InputError(path + ":" + std::to_string(line) + ":" + std::to_string(col) +
                     ": " + e.what());
  }
}

namespace {

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw InputError("expected a rational as \"p/q\" or integer");
}

}  // namespace

SetFamily family_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("arity") || !j.contains("sizes") || !j.contains("family"))
    throw InputError("family file needs arity, sizes and family fields");
  int arity = j.at("arity").get<int>();
  std::vector<Index> sizes = j.at("sizes").get<std::vector<Index>>();
  if (static_cast<int>(sizes.size()) != arity)
    throw InputError("sizes length must equal arity");
  ProductDomain dom(sizes);

  std::vector<Relation> members;
  for (const Json& js : j.at("family")) {
    Relation r(dom);
    std::set<std::size_t> seen;
    for (const Json& jp : js) {
      Point p = jp.get<Point>();
      if (!dom.valid_point(p)) throw InputError("tuple outside the domain");
      std::size_t f = dom.flatten(p);
      if (!seen.insert(f).second) throw InputError("duplicate tuple in a set");
      r.set(f);
    }
    members.push_back(std::move(r));
  }
  return SetFamily(dom, std::move(members));
}

Json family_to_json(const SetFamily& f) {
  Json j;
  j["arity"] = f.domain.arity();
  j["sizes"] = f.domain.sizes();
  Json members = Json::array();
  for (const Relation& r : f.members) {
    Json pts = Json::array();
    for (std::size_t i = 0; i < r.total(); ++i)
      if (r.test(i)) pts.push_back(r.domain().unflatten(i));
    members.push_back(std::move(pts));
  }
  j["family"] = std::move(members);
  return j;
}

ProductMeasure measure_from_json(const Json& j, const ProductDomain& dom) {
  if (!j.is_object() || !j.contains("axes")) throw InputError("measure file needs an axes field");
  std::vector<std::vector<Rational>> axes;
  for (const Json& ja : j.at("axes")) {
    std::vector<Rational> w;
    for (const Json& jw : ja) w.push_back(rational_from_json(jw));
    axes.push_back(std::move(w));
  }
  try {
    return ProductMeasure(dom, std::move(axes));
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("bad measure: ") + e.what());
  }
}

Json measure_to_json(const ProductMeasure& mu) {
  Json axes = Json::array();
  for (const auto& a : mu.axes()) {
    Json ja = Json::array();
    for (const Rational& w : a) ja.push_back(rational_str(w));
    axes.push_back(std::move(ja));
  }
  return Json{{"axes", std::move(axes)}};
}

Json box_to_json(const Box& b) {
  Json axes = Json::array();
  for (const auto& s : b.axes) axes.push_back(s);
  return axes;
}

Json trace_reports_to_json(const std::vector<TraceReport>& reports) {
  Json rows = Json::array();
  for (const TraceReport& r : reports) {
    rows.push_back(Json{{"box", box_to_json(r.box)},
                        {"traces", r.traces},
                        {"z", r.z},
                        {"bound", r.bound},
                        {"pass", r.pass},
                        {"sampled", r.sampled}});
  }
  return rows;
}

Json certificate_to_json(const PackingCertificate& c) {
  Json j;
  j["epsilon"] = rational_str(c.epsilon);
  j["centers"] = c.centers;
  j["budget"] = Json{{"max_centers_used", c.grammar_budget.max_centers_used},
                     {"max_fibers", c.grammar_budget.max_fibers},
                     {"max_dnf_terms", c.grammar_budget.max_dnf_terms},
                     {"fiber_arity_cap", c.grammar_budget.fiber_arity_cap}};
  Json rows = Json::array();
  for (std::size_t i = 0; i < c.per_member.size(); ++i) {
    if (c.per_member[i]) {
      rows.push_back(Json{{"member", i},
                          {"expr", c.per_member[i]->expr.serialize()},
                          {"dist", rational_str(c.per_member[i]->dist)}});
    } else {
      rows.push_back(Json{{"member", i}, {"fail", true}});
    }
  }
  j["witnesses"] = std::move(rows);
  return j;
}

PackingCertificate certificate_from_json(const Json& j) {
  PackingCertificate c;
  c.epsilon = parse_rational(j.at("epsilon").get<std::string>());
  c.centers = j.at("centers").get<std::vector<int>>();
  if (j.contains("budget")) {
    const Json& b = j.at("budget");
    c.grammar_budget = ExprBudget{b.at("max_centers_used").get<int>(),
                                  b.at("max_fibers").get<int>(),
                                  b.at("max_dnf_terms").get<int>(),
                                  b.at("fiber_arity_cap").get<int>()};
  }
  std::size_t count = j.at("witnesses").size();
  c.per_member.assign(count, std::nullopt);
  for (const Json& row : j.at("witnesses")) {
    std::size_t i = row.at("member").get<std::size_t>();
    if (i >= count) throw InputError("witness member index out of range");
    if (row.contains("fail") && row.at("fail").get<bool>()) continue;
    c.per_member[i] = Witness{BoolExpr::parse(row.at("expr").get<std::string>()),
                              parse_rational(row.at("dist").get<std::string>())};
  }
  return c;
}

Json pac_report_to_json(const PacReport& r) {
  Json j;
  j["config"] = Json{{"centers", r.resolved.centers},
                     {"n1", r.resolved.n1},
                     {"ell", r.resolved.ell},
                     {"n2", r.resolved.n2},
                     {"rho_hat", rational_str(r.resolved.rho_hat)},
                     {"rho_floored", r.resolved.rho_floored}};
  Json rows = Json::array();
  for (const ConceptReport& c : r.concepts) {
    rows.push_back(Json{{"concept", c.concept_index},
                        {"trials", c.trials},
                        {"failures", c.failures},
                        {"rate", std::to_string(c.failures) + "/" + std::to_string(c.trials)},
                        {"worst_dist", rational_str(c.worst_dist)}});
  }
  j["concepts"] = std::move(rows);
  return j;
}

Json slicewise_report_to_json(const SlicewiseReport& r) {
  Json j;
  j["k"] = r.k;
  j["arity"] = r.arity;
  j["max"] = r.max;
  Json rows = Json::array();
  for (const auto& [fix, v] : r.per_fixing)
    rows.push_back(Json{{"axes", fix.axes}, {"values", fix.values}, {"vck", v}});
  j["per_fixing"] = std::move(rows);
  return j;
}

Json decomposition_to_json(const Decomposition& d) {
  Json j;
  j["k"] = d.k;
  j["sizes"] = d.sizes;
  j["n"] = d.n;
  Json comps = Json::array();
  for (const Component& c : d.components) {
    Json pts = Json::array();
    for (std::size_t i = 0; i < c.set.total(); ++i)
      if (c.set.test(i)) pts.push_back(c.set.domain().unflatten(i));
    comps.push_back(Json{{"t", c.t}, {"I", c.axes}, {"set", std::move(pts)}});
  }
  j["components"] = std::move(comps);
  return j;
}

Decomposition decomposition_from_json(const Json& j) {
  Decomposition d;
  d.k = j.at("k").get<int>();
  d.sizes = j.at("sizes").get<std::vector<Index>>();
  d.n = j.at("n").get<int>();
  int kp = static_cast<int>(d.sizes.size());
  for (const Json& jc : j.at("components")) {
    std::vector<int> axes = jc.at("I").get<std::vector<int>>();
    std::vector<Index> csizes;
    for (int a : axes) csizes.push_back(d.sizes.at(static_cast<std::size_t>(a)));
    for (int a = d.k + 1; a < kp; ++a) csizes.push_back(d.sizes.at(static_cast<std::size_t>(a)));
    Relation set{ProductDomain(csizes)};
    std::set<std::size_t> seen;
    for (const Json& jp : jc.at("set")) {
      Point p = jp.get<Point>();
      std::size_t f = set.domain().flatten(p);
      if (!seen.insert(f).second) throw InputError("duplicate tuple in a component set");
      set.set(f);
    }
    d.components.emplace_back(jc.at("t").get<int>(), std::move(axes), std::move(set));
  }
  return d;
}

Json decomp_report_to_json(const DecompReport& r, DecompMode mode, const Rational& epsilon) {
  Json j;
  j["mode"] = mode == DecompMode::All ? "all" : "almost_all";
  j["epsilon"] = rational_str(epsilon);
  j["exception_mass"] = rational_str(r.exception_mass);
  j["max_dist"] = rational_str(r.max_dist);
  j["pass"] = r.pass;
  Json rows = Json::array();
  for (const DecompRow& row : r.rows)
    rows.push_back(Json{{"tail", row.tail}, {"dist", rational_str(row.dist)}, {"pass", row.pass}});
  j["rows"] = std::move(rows);
  return j;
}

Json slicewise_certificate_to_json(const SlicewiseCertificate& c) {
  Json j;
  j["epsilon"] = rational_str(c.epsilon);
  j["anchors"] = c.anchors;
  j["budget"] = Json{{"max_centers_used", c.budget.max_centers_used},
                     {"max_fibers", c.budget.max_fibers},
                     {"max_dnf_terms", c.budget.max_dnf_terms},
                     {"fiber_arity_cap", c.budget.fiber_arity_cap}};
  Json rows = Json::array();
  for (const SliceWitnessRow& row : c.rows) {
    if (row.witness) {
      rows.push_back(Json{{"tail", row.tail},
                          {"expr", row.witness->expr.serialize()},
                          {"dist", rational_str(row.witness->dist)}});
    } else {
      rows.push_back(Json{{"tail", row.tail}, {"fail", true}});
    }
  }
  j["witnesses"] = std::move(rows);
  return j;
}

std::string csv_from_rows(const Json& rows) {
  std::ostringstream out;
  if (!rows.is_array() || rows.empty()) return "";

  std::vector<std::string> keys;
  for (auto it = rows[0].begin(); it != rows[0].end(); ++it) keys.push_back(it.key());

  auto cell = [](const Json& v) {
    std::string s = v.is_string() ? v.get<std::string>() : v.dump();
    bool quote = s.find_first_of(",\"\n") != std::string::npos;
    if (!quote) return s;
    std::string q = "\"";
    for (char ch : s) {
      if (ch == '"') q += '"';
      q += ch;
    }
    q += '"';
    return q;
  };

  for (std::size_t i = 0; i < keys.size(); ++i) out << (i ? "," : "") << keys[i];
  out << "\n";
  for (const Json& row : rows) {
    for (std::size_t i = 0; i < keys.size(); ++i)
      out << (i ? "," : "") << (row.contains(keys[i]) ? cell(row.at(keys[i])) : "");
    out << "\n";
  }
  return out.str();
}

}  // namespace vck
