// Python bindings. Tables cross the boundary as lists of rows.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bolmoufang/finder.hpp"
#include "bolmoufang/lab.hpp"
#include "bolmoufang/magma.hpp"
#include "bolmoufang/term.hpp"

namespace py = pybind11;
namespace bm = bolmoufang;

namespace {

using Rows = std::vector<std::vector<int>>;

bm::Magma to_magma(const Rows& rows) {
  const int n = static_cast<int>(rows.size());
  std::vector<bm::Element> cells;
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != n) throw py::value_error("table must be square");
    cells.insert(cells.end(), r.begin(), r.end());
  }
  return bm::Magma(n, std::move(cells));
}

Rows to_rows(const bm::Magma& m) {
  Rows rows;
  for (int a = 0; a < m.order(); ++a) rows.emplace_back(m.row(a).begin(), m.row(a).end());
  return rows;
}

py::dict report_dict(const bm::PropertyReport& r) {
  py::dict d;
  d["left_neutrals"] = r.left_neutrals;
  d["right_neutrals"] = r.right_neutrals;
  d["two_sided_neutral"] = r.two_sided_neutral;
  d["reference_neutral"] = r.reference_neutral;
  d["inverse_map_two_sided"] = r.inverse_map_two_sided;
  d["inverse_map"] = r.inverse_map;
  d["left_inverse_witnesses"] = r.left_inverse_witnesses;
  d["right_inverse_witnesses"] = r.right_inverse_witnesses;
  d["two_sided_inverse_witnesses"] = r.two_sided_inverse_witnesses;
  d["lip_map"] = r.lip_map;
  d["rip_map"] = r.rip_map;
  d["left_translations_bijective"] = r.left_translations_bijective;
  d["right_translations_bijective"] = r.right_translations_bijective;
  d["is_latin"] = r.is_latin;
  d["is_loop"] = r.is_loop;
  d["is_associative"] = r.is_associative;
  d["is_group"] = r.is_group;
  return d;
}

py::dict search(const std::vector<std::string>& identities, int min_order, int max_order,
                const std::string& neutral, const std::string& inverses, const std::string& target,
                std::optional<double> budget_seconds, int workers) {
  bm::SearchProblem p;
  p.min_order = min_order;
  p.max_order = max_order;
  p.spec = {bm::parse_neutral_side(neutral), bm::parse_inverse_side(inverses)};
  for (const auto& s : identities) p.identities.push_back(bm::resolve_identity(s));
  p.target = bm::parse_target(target);
  if (budget_seconds) p.budget = std::chrono::milliseconds(static_cast<long long>(*budget_seconds * 1000));
  p.workers = workers;
  bm::SearchOutcome o;
  {
    py::gil_scoped_release release;
    o = bm::search(p);
  }
  py::dict d;
  d["status"] = bm::to_string(o.status);
  d["witness"] = o.witness ? py::cast(to_rows(*o.witness)) : py::none();
  d["order"] = o.last_order;
  d["nodes"] = o.nodes_explored;
  d["elapsed_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(o.elapsed).count();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cayley tables, Bol-Moufang identities and finite model search";

  py::register_exception<bm::ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<bm::TableParseError>(m, "TableParseError", PyExc_ValueError);
  py::register_exception<bm::ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("decode", [](const std::string& code) { return bm::render(bm::resolve_identity(code)); },
        py::arg("code"), "Rendered identity of an Xij code or named law.");
  m.def("dual", [](const std::string& code) { return bm::to_string(bm::dual_code(bm::parse_code(code))); },
        py::arg("code"));
  m.def("codes", [] {
    std::vector<std::string> out;
    for (const auto& id : bm::enumerate_bm()) out.push_back(id.tag);
    return out;
  });
  m.def("holds", [](const std::string& identity, const Rows& table) {
    return bm::holds(bm::resolve_identity(identity), to_magma(table));
  }, py::arg("identity"), py::arg("table"));
  m.def("analyze", [](const Rows& table) { return report_dict(bm::analyze(to_magma(table))); },
        py::arg("table"));
  m.def("parse_table", [](const std::string& text) { return to_rows(bm::parse_table(text)); },
        py::arg("text"));
  m.def("format_table", [](const Rows& table) { return bm::format_table(to_magma(table)); },
        py::arg("table"));
  m.def("canonical_form", [](const Rows& table) { return to_rows(bm::canonical_form(to_magma(table))); },
        py::arg("table"));
  m.def("search", &search, py::arg("identities"), py::arg("min_order"), py::arg("max_order"),
        py::arg("neutral") = "two-sided", py::arg("inverses") = "two-sided",
        py::arg("target") = "non-loop", py::arg("budget_seconds") = py::none(),
        py::arg("workers") = 1);
  m.def("reproduce_fixtures", [] {
    py::list out;
    for (const auto& c : bm::lab::reproduce_fixtures()) {
      py::dict d;
      d["claim_id"] = c.claim_id;
      d["expectation"] = c.expectation;
      d["observed"] = c.observed;
      d["pass"] = c.pass;
      out.append(d);
    }
    return out;
  });
}
