// Copyright 2026 The hierlab Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Python bindings. Everything takes `.hier` source text and returns plain
// Python values or JSON text.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hierlab/analyzer.h"
#include "hierlab/elaborator.h"
#include "hierlab/errors.h"
#include "hierlab/printer.h"
#include "hierlab/resolution.h"
#include "hierlab/surface.h"

namespace py = pybind11;

namespace {

using ParentOrder = std::map<std::string, std::vector<std::string>>;

hierlab::EncodingStrategy make_strategy(const std::string& encoding,
                                        const ParentOrder& order) {
  auto enc = hierlab::parse_encoding(encoding);
  if (!enc) throw py::value_error("unknown encoding '" + encoding + "'");
  return {*enc, order};
}

hierlab::Elaboration load(const std::string& text, const std::string& encoding,
                          const ParentOrder& order) {
  return hierlab::elaborate(hierlab::parse(text), make_strategy(encoding, order));
}

hierlab::DefEqConfig config(bool eta_kernel, bool eta_unifier) {
  hierlab::DefEqConfig c;
  c.eta_kernel = eta_kernel;
  c.eta_unifier = eta_unifier;
  return c;
}

py::dict position(const hierlab::Position& p) {
  py::dict d;
  d["line"] = p.line;
  d["column"] = p.column;
  return d;
}

}  // namespace

PYBIND11_MODULE(_hierlab, m) {
  m.doc() = "Inheritance encodings, definitional equality and coherence analysis";

  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error_type;
  error_type.call_once_and_store_result(
      [&]() { return py::exception<hierlab::Error>(m, "HierlabError"); });
  static auto error = [](const std::string& msg) {
    py::set_error(error_type.get_stored(), msg.c_str());
  };
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const hierlab::ParseError& e) {
      error("parse error at " + std::to_string(e.position.line) + ":" +
             std::to_string(e.position.column) + ": " + e.what());
    } catch (const hierlab::ScopeError& e) {
      error("scope error at " + std::to_string(e.position.line) + ":" +
             std::to_string(e.position.column) + ": " + e.what());
    } catch (const hierlab::Error& e) {
      error(e.what());
    }
  });

  m.def("format_module",
        [](const std::string& text) {
          return hierlab::print_module(hierlab::parse(text));
        },
        py::arg("text"), "Parses and pretty-prints a module.");

  m.def("elaborate",
        [](const std::string& text, const std::string& encoding,
           const ParentOrder& parent_order, const std::string& emit) {
          hierlab::Elaboration e = load(text, encoding, parent_order);
          return emit == "json" ? hierlab::dump_json(e) : hierlab::dump_text(e);
        },
        py::arg("text"), py::arg("encoding") = "nested",
        py::arg("parent_order") = ParentOrder{}, py::arg("emit") = "json");

  m.def("defeq",
        [](const std::string& text, const std::string& encoding,
           bool eta_kernel, bool eta_unifier, const ParentOrder& parent_order) {
          hierlab::Elaboration e = load(text, encoding, parent_order);
          hierlab::DefEqConfig c = config(eta_kernel, eta_unifier);
          py::dict out;
          for (const hierlab::DefeqSpec& d : e.defeqs) {
            out[py::str(d.label)] =
                hierlab::defeq(e.env, c, d.ctx, d.lhs, d.rhs).equal;
          }
          return out;
        },
        py::arg("text"), py::arg("encoding") = "nested",
        py::arg("eta_kernel") = true, py::arg("eta_unifier") = false,
        py::arg("parent_order") = ParentOrder{},
        "Checks every defeq item; returns label -> verdict.");

  m.def("resolve",
        [](const std::string& text, const std::string& encoding,
           bool eta_kernel, bool eta_unifier, int max_depth,
           const ParentOrder& parent_order) {
          hierlab::Elaboration e = load(text, encoding, parent_order);
          hierlab::SearchConfig sc;
          sc.eta = config(eta_kernel, eta_unifier);
          sc.max_depth = max_depth;
          py::dict out;
          for (const hierlab::GoalSpec& g : e.goals) {
            hierlab::ResolveResult r =
                hierlab::resolve(e.env, e.instances, g.ctx, g.target, sc);
            py::dict item;
            item["status"] = hierlab::to_string(r.status);
            item["goal"] = hierlab::print_term(r.goal);
            item["instance"] =
                r.ok() ? py::object(py::str(hierlab::print_term(r.instance)))
                       : py::object(py::none());
            item["position"] = position(g.pos);
            out[py::str(g.label)] = item;
          }
          return out;
        },
        py::arg("text"), py::arg("encoding") = "nested",
        py::arg("eta_kernel") = true, py::arg("eta_unifier") = false,
        py::arg("max_depth") = 32, py::arg("parent_order") = ParentOrder{},
        "Resolves every goal item; returns label -> result.");

  m.def("diamonds",
        [](const std::string& text, const std::string& encoding,
           bool eta_kernel, bool eta_unifier, const ParentOrder& parent_order) {
          hierlab::Elaboration e = load(text, encoding, parent_order);
          return hierlab::report_json(
              hierlab::analyze_diamonds(e, config(eta_kernel, eta_unifier)));
        },
        py::arg("text"), py::arg("encoding") = "nested",
        py::arg("eta_kernel") = true, py::arg("eta_unifier") = false,
        py::arg("parent_order") = ParentOrder{});

  m.def("spanning_search",
        [](const std::string& text, bool eta_kernel, bool eta_unifier) {
          hierlab::DefEqConfig c = config(eta_kernel, eta_unifier);
          return hierlab::spanning_json(
              hierlab::spanning_search(hierlab::parse(text), c), c);
        },
        py::arg("text"), py::arg("eta_kernel") = true,
        py::arg("eta_unifier") = false);

  m.def("generate_hierarchy",
        [](std::uint64_t seed) { return hierlab::generate_hierarchy(seed); },
        py::arg("seed"));
}
