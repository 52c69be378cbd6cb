#include "oiglab/problem.hpp"

#include "json_util.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace oiglab {

using detail::Json;
using detail::OrderedJson;
using detail::schema_error;

namespace {

std::string index_path(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

const Json& require_array(const Json& object, const std::string& key, const std::string& path) {
  const auto& value = detail::require(object, key, path);
  if (!value.is_array()) schema_error(path + "." + key, "expected an array");
  return value;
}

std::vector<Point> points_from(const Json& value, const std::string& path) {
  std::vector<Point> out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    out.push_back(detail::point_from(value[i], index_path(path, i)));
  }
  return out;
}

Labeling labeling_from(const Json& value, const std::string& path) {
  if (!value.is_array()) schema_error(path, "expected an array of labels");
  Labeling out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    out.push_back(detail::label_from(value[i], index_path(path, i)));
  }
  return out;
}

LossFunction loss_from(const Json& value, const std::string& path) {
  const auto kind = detail::string_from(detail::require(value, "kind", path), path + ".kind");
  if (kind == "zero_one") return LossFunction::zero_one();
  if (kind == "absolute") return LossFunction::absolute();
  if (kind == "squared") return LossFunction::squared();
  if (kind != "table") schema_error(path + ".kind", "unknown loss \"" + kind + "\"");
  const auto& entries = require_array(value, "table", path);
  LossFunction::Table table;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto at = index_path(path + ".table", i);
    const auto p = detail::label_from(detail::require(entries[i], "predicted", at), at + ".predicted");
    const auto t = detail::label_from(detail::require(entries[i], "true", at), at + ".true");
    const auto v = detail::rational_from(detail::require(entries[i], "value", at), at + ".value");
    if (!table.emplace(std::pair{p, t}, v).second) schema_error(at, "duplicate loss entry");
  }
  try {
    return LossFunction::table(std::move(table));
  } catch (const std::invalid_argument& e) {
    schema_error(path, e.what());
  }
}

OrderedJson loss_to_json(const LossFunction& loss) {
  OrderedJson out;
  out["kind"] = loss.name();
  if (loss.kind() == LossFunction::Kind::table) {
    auto entries = OrderedJson::array();
    for (const auto& [key, value] : loss.entries()) {
      OrderedJson e;
      e["predicted"] = detail::to_json(key.first);
      e["true"] = detail::to_json(key.second);
      e["value"] = detail::to_json(value);
      entries.push_back(std::move(e));
    }
    out["table"] = std::move(entries);
  }
  return out;
}

OrderedJson labeling_to_json(const Labeling& y) {
  auto out = OrderedJson::array();
  for (const auto& l : y) out.push_back(detail::to_json(l));
  return out;
}

OrderedJson points_to_json(const std::vector<Point>& points) {
  auto out = OrderedJson::array();
  for (const auto& x : points) out.push_back(detail::to_json(x));
  return out;
}

}  // namespace

FamilyPtr ProblemSpec::family() const {
  switch (family_kind) {
    case FamilyKind::table:
      return std::make_shared<ExplicitTable>(domain, table_labels, hypotheses);
    case FamilyKind::rectangles:
      return std::make_shared<AxisAlignedRectangles>(dimension);
    case FamilyKind::thresholds:
      return std::make_shared<Thresholds>();
  }
  throw std::logic_error("unknown family kind");
}

FiniteDistribution ProblemSpec::finite_distribution() const {
  if (distribution) {
    std::vector<Example> support;
    std::vector<Rational> weights;
    for (const auto& [e, w] : *distribution) {
      support.push_back(e);
      weights.push_back(w);
    }
    return FiniteDistribution(std::move(support), std::move(weights));
  }
  if (!labels) throw std::invalid_argument("problem has neither a distribution nor labels");
  std::vector<Example> support;
  for (std::size_t i = 0; i < points.size(); ++i) support.push_back({points[i], (*labels)[i]});
  return FiniteDistribution::uniform(std::move(support));
}

ProblemSpec ProblemSpec::prefix(std::size_t n) const {
  if (n > points.size()) {
    throw std::invalid_argument("prefix of " + std::to_string(n) + " points requested, problem has " +
                                std::to_string(points.size()));
  }
  ProblemSpec out = *this;
  out.points.resize(n);
  if (out.labels) out.labels->resize(n);
  return out;
}

ProblemSpec parse_problem(std::string_view json_text) {
  const Json doc = detail::parse_json(json_text);
  if (!doc.is_object()) schema_error("$", "expected an object");
  ProblemSpec spec;
  if (const auto it = doc.find("name"); it != doc.end()) spec.name = detail::string_from(*it, "$.name");

  const auto family_it = doc.find("family");
  const std::string kind =
      family_it == doc.end()
          ? "table"
          : detail::string_from(detail::require(*family_it, "kind", "$.family"), "$.family.kind");
  if (kind == "table") {
    spec.family_kind = ProblemSpec::FamilyKind::table;
    spec.domain = points_from(require_array(doc, "domain_points", "$"), "$.domain_points");
    spec.table_labels = labeling_from(require_array(doc, "label_space", "$"), "$.label_space");
    const auto& rows = require_array(doc, "hypotheses", "$");
    for (std::size_t i = 0; i < rows.size(); ++i) {
      spec.hypotheses.push_back(labeling_from(rows[i], index_path("$.hypotheses", i)));
    }
  } else if (kind == "rectangles") {
    spec.family_kind = ProblemSpec::FamilyKind::rectangles;
    spec.dimension = detail::count_from(detail::require(*family_it, "d", "$.family"), "$.family.d");
  } else if (kind == "thresholds") {
    spec.family_kind = ProblemSpec::FamilyKind::thresholds;
  } else {
    schema_error("$.family.kind", "unknown family \"" + kind + "\"");
  }

  spec.points = points_from(require_array(doc, "points", "$"), "$.points");
  if (const auto it = doc.find("loss"); it != doc.end()) spec.loss = loss_from(*it, "$.loss");
  if (const auto it = doc.find("labels"); it != doc.end()) {
    spec.labels = labeling_from(*it, "$.labels");
    if (spec.labels->size() != spec.points.size()) {
      schema_error("$.labels", "has " + std::to_string(spec.labels->size()) + " entries for " +
                                   std::to_string(spec.points.size()) + " points");
    }
  }
  if (const auto it = doc.find("distribution"); it != doc.end()) {
    if (!it->is_array()) schema_error("$.distribution", "expected an array");
    std::vector<std::pair<Example, Rational>> dist;
    for (std::size_t i = 0; i < it->size(); ++i) {
      const auto at = index_path("$.distribution", i);
      const auto& entry = (*it)[i];
      Example e{detail::point_from(detail::require(entry, "x", at), at + ".x"),
                detail::label_from(detail::require(entry, "y", at), at + ".y")};
      dist.emplace_back(std::move(e),
                        detail::rational_from(detail::require(entry, "weight", at), at + ".weight"));
    }
    spec.distribution = std::move(dist);
  }

  // Semantic checks that the constructors would otherwise defer.
  try {
    (void)spec.family();
    if (spec.distribution) (void)spec.finite_distribution();
  } catch (const std::invalid_argument& e) {
    schema_error("$", e.what());
  }
  return spec;
}

std::string serialize_problem(const ProblemSpec& spec) {
  OrderedJson doc;
  if (!spec.name.empty()) doc["name"] = spec.name;
  switch (spec.family_kind) {
    case ProblemSpec::FamilyKind::table: {
      doc["domain_points"] = points_to_json(spec.domain);
      doc["label_space"] = labeling_to_json(spec.table_labels);
      auto rows = OrderedJson::array();
      for (const auto& h : spec.hypotheses) rows.push_back(labeling_to_json(h));
      doc["hypotheses"] = std::move(rows);
      break;
    }
    case ProblemSpec::FamilyKind::rectangles:
      doc["family"] = {{"kind", "rectangles"}, {"d", spec.dimension}};
      break;
    case ProblemSpec::FamilyKind::thresholds:
      doc["family"] = {{"kind", "thresholds"}};
      break;
  }
  doc["points"] = points_to_json(spec.points);
  doc["loss"] = loss_to_json(spec.loss);
  if (spec.labels) doc["labels"] = labeling_to_json(*spec.labels);
  if (spec.distribution) {
    auto dist = OrderedJson::array();
    for (const auto& [e, w] : *spec.distribution) {
      OrderedJson entry;
      entry["x"] = detail::to_json(e.x);
      entry["y"] = detail::to_json(e.y);
      entry["weight"] = detail::to_json(w);
      dist.push_back(std::move(entry));
    }
    doc["distribution"] = std::move(dist);
  }
  return detail::canonical_dump(doc);
}

Fds parse_fds(std::string_view json_text) {
  const Json doc = detail::parse_json(json_text);
  if (!doc.is_object()) schema_error("$", "expected an object");
  std::vector<FdsInput> inputs;
  std::map<std::string, std::size_t> input_index;
  const auto& in = require_array(doc, "inputs", "$");
  for (std::size_t i = 0; i < in.size(); ++i) {
    const auto at = index_path("$.inputs", i);
    FdsInput input{detail::string_from(detail::require(in[i], "name", at), at + ".name"),
                   labeling_from(detail::require(in[i], "domain", at), at + ".domain")};
    if (!input_index.emplace(input.name, i).second) schema_error(at + ".name", "duplicate input name");
    inputs.push_back(std::move(input));
  }
  std::vector<std::string> outputs;
  std::map<std::string, std::size_t> output_index;
  const auto& out = require_array(doc, "outputs", "$");
  for (std::size_t i = 0; i < out.size(); ++i) {
    outputs.push_back(detail::string_from(out[i], index_path("$.outputs", i)));
    if (!output_index.emplace(outputs.back(), i).second) {
      schema_error(index_path("$.outputs", i), "duplicate output name");
    }
  }
  const auto endpoint = [](const Json& value, const std::map<std::string, std::size_t>& names,
                           std::size_t count, const std::string& path) {
    if (value.is_string()) {
      const auto it = names.find(value.get<std::string>());
      if (it == names.end()) schema_error(path, "unknown node \"" + value.get<std::string>() + "\"");
      return it->second;
    }
    const auto index = detail::count_from(value, path);
    if (index >= count) schema_error(path, "index out of range");
    return index;
  };
  std::vector<FdsEdge> edges;
  const auto& es = require_array(doc, "edges", "$");
  for (std::size_t i = 0; i < es.size(); ++i) {
    const auto at = index_path("$.edges", i);
    FdsEdge e;
    e.left = endpoint(detail::require(es[i], "input", at), input_index, inputs.size(), at + ".input");
    e.right = endpoint(detail::require(es[i], "output", at), output_index, outputs.size(), at + ".output");
    const auto& costs = detail::require(es[i], "costs", at);
    if (!costs.is_array()) schema_error(at + ".costs", "expected an array");
    for (std::size_t k = 0; k < costs.size(); ++k) {
      e.costs.push_back(detail::rational_from(costs[k], index_path(at + ".costs", k)));
    }
    edges.push_back(std::move(e));
  }
  try {
    return Fds(std::move(inputs), std::move(outputs), std::move(edges));
  } catch (const std::invalid_argument& e) {
    schema_error("$", e.what());
  }
}

std::string serialize_fds(const Fds& fds) {
  OrderedJson doc;
  auto inputs = OrderedJson::array();
  for (const auto& in : fds.inputs()) {
    OrderedJson entry;
    entry["name"] = in.name;
    entry["domain"] = labeling_to_json(in.domain);
    inputs.push_back(std::move(entry));
  }
  doc["inputs"] = std::move(inputs);
  doc["outputs"] = fds.outputs();
  auto edges = OrderedJson::array();
  for (const auto& e : fds.edges()) {
    OrderedJson entry;
    entry["input"] = fds.inputs()[e.left].name;
    entry["output"] = fds.outputs()[e.right];
    auto costs = OrderedJson::array();
    for (const auto& c : e.costs) costs.push_back(detail::to_json(c));
    entry["costs"] = std::move(costs);
    edges.push_back(std::move(entry));
  }
  doc["edges"] = std::move(edges);
  return detail::canonical_dump(doc);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

}  // namespace oiglab
