#include "hodisc/io.hpp"

#include <cstdio>

namespace hodisc {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json to_json(const HaarIndex& idx) { return Json{{"j", idx.j}, {"m", idx.m}}; }

Json to_json(const NetWitness& w) {
  return Json{{"t_tested", w.t_tested},
              {"rows", w.rows},
              {"selection_size", w.selection_size},
              {"rank", w.rank},
              {"rank_deficit", w.selection_size - w.rank}};
}

Json to_json(const TValueReport& r) {
  Json j{{"alpha", r.alpha}, {"n", r.n}, {"d", r.dim}, {"t", r.t}};
  j["witness"] = r.witness ? to_json(*r.witness) : Json(nullptr);
  return j;
}

Json to_json(const SequenceCheck& c, std::size_t n_max, int alpha, int t) {
  Json j{{"alpha", alpha}, {"t", t}, {"n_max", n_max}, {"holds", c.holds}};
  j["failing_n"] = c.failing_n ? Json(*c.failing_n) : Json(nullptr);
  return j;
}

Json to_json(const FairIntervalReport& r) {
  Json j{{"n", r.n},
         {"order", r.order},
         {"bound", r.bound},
         {"max_occupancy", r.max_occupancy},
         {"level_vectors", r.level_vectors},
         {"passed", r.passed},
         {"vacuous", r.vacuous}};
  if (!r.warning.empty()) j["warning"] = r.warning;
  return j;
}

Json to_json(const NormReport& r) {
  auto opt = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };
  Json j{{"kind", to_string(r.kind)},
         {"params", Json{{"p", opt(r.p)}, {"q", opt(r.q)}, {"s", opt(r.s)}, {"beta", opt(r.beta)}}},
         {"value", r.value},
         {"method", r.method},
         {"truncation",
          Json{{"box_limit", r.box_limit ? Json(*r.box_limit) : Json(nullptr)},
               {"tail_value", r.tail_value},
               {"estimate", to_string(r.estimate)}}},
         {"N", r.count},
         {"d", r.dim}};
  if (r.exact_square) j["exact_square"] = *r.exact_square;
  if (r.refinement_delta) j["refinement_delta"] = *r.refinement_delta;
  if (r.resolution) j["resolution"] = *r.resolution;
  if (r.depth) j["depth"] = *r.depth;
  if (!r.p_grid.empty()) j["p_grid"] = r.p_grid;
  if (r.argmax_p) j["argmax_p"] = *r.argmax_p;
  return j;
}

Json to_json(const BoundAudit& a) {
  Json regimes = Json::array();
  for (const auto& r : a.regimes) {
    Json e{{"regime", to_string(r.regime)},
           {"max_ratio", r.max_ratio},
           {"coefficients", r.coefficients}};
    e["argmax"] = r.argmax ? to_json(*r.argmax) : Json(nullptr);
    regimes.push_back(std::move(e));
  }
  return Json{{"N", a.count}, {"d", a.dim}, {"t", a.t}, {"regimes", regimes}};
}

Json to_json(const LiftCheck& c) {
  return Json{{"N", c.count},
              {"argmax_n", c.argmax_n},
              {"max_lhs_squared", to_string(c.max_lhs_squared)},
              {"rhs_squared", to_string(c.rhs_squared)},
              {"lhs", c.lhs},
              {"rhs", c.rhs},
              {"holds", c.holds}};
}

std::string norm_csv_row(const NormReport& r) {
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  return std::to_string(r.count) + ',' + std::to_string(r.dim) + ',' + to_string(r.kind) + ',' +
         opt(r.p) + ',' + opt(r.q) + ',' + opt(r.s) + ',' + opt(r.beta) + ',' +
         format_double(r.value) + ',' + format_double(r.tail_value) + ',' + r.method;
}

}  // namespace hodisc
