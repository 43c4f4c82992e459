// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wpc Authors

#include "wpc/json_io.hpp"

#include <set>
#include <stdexcept>

namespace wpc {

namespace {

Json complex_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("expected [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json cvec_json(const CVector& v) {
  Json a = Json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(complex_json(v(i)));
  return a;
}

CVector cvec_from(const Json& j) {
  CVector v(Index(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(Index(i)) = complex_from(j[i]);
  return v;
}

Json rvec_json(const RVector& v) {
  Json a = Json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

RVector rvec_from(const Json& j) {
  RVector v(Index(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(Index(i)) = j[i].get<double>();
  return v;
}

Json cmat_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) rows.push_back(cvec_json(m.row(i).transpose()));
  return rows;
}

CMatrix cmat_from(const Json& j) {
  const Index r = Index(j.size());
  const Index c = r > 0 ? Index(j[0].size()) : 0;
  CMatrix m(r, c);
  for (Index i = 0; i < r; ++i) {
    if (Index(j[std::size_t(i)].size()) != c) throw std::invalid_argument("ragged matrix");
    m.row(i) = cvec_from(j[std::size_t(i)]).transpose();
  }
  return m;
}

Json rmat_json(const RMatrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) rows.push_back(rvec_json(m.row(i).transpose()));
  return rows;
}

template <typename T, typename F>
Json list_json(const std::vector<T>& xs, F f) {
  Json a = Json::array();
  for (const auto& x : xs) a.push_back(f(x));
  return a;
}

std::string init_name(InitStrategy s) {
  return s == InitStrategy::Random ? "random" : "deterministic";
}

InitStrategy init_from(const std::string& s) {
  if (s == "deterministic") return InitStrategy::Deterministic;
  if (s == "random") return InitStrategy::Random;
  throw std::invalid_argument("unknown init '" + s + "' (expected deterministic|random)");
}

std::string rule_name(C5Rule r) { return r == C5Rule::Lemma1 ? "lemma1" : "log_affine"; }

C5Rule rule_from(const std::string& s) {
  if (s == "log_affine") return C5Rule::LogAffine;
  if (s == "lemma1") return C5Rule::Lemma1;
  throw std::invalid_argument("unknown c5_rule '" + s + "' (expected log_affine|lemma1)");
}

void reject_unknown(const Json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw std::invalid_argument(where + ": unknown field '" + key + "'");
  }
}

template <typename T>
void read_field(const Json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(where + "." + key + ": " + e.what());
  }
}

}  // namespace

Json to_json(const ChannelSet& ch) {
  return {{"seed", ch.seed},
          {"H", list_json(ch.H, cmat_json)},
          {"G", list_json(ch.G, cmat_json)},
          {"tx_distance", rvec_json(ch.tx_distance)},
          {"rx_distance", rvec_json(ch.rx_distance)}};
}

ChannelSet channels_from_json(const Json& j) {
  ChannelSet ch;
  ch.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& m : j.at("H")) ch.H.push_back(cmat_from(m));
  for (const auto& m : j.at("G")) ch.G.push_back(cmat_from(m));
  ch.tx_distance = rvec_from(j.at("tx_distance"));
  ch.rx_distance = rvec_from(j.at("rx_distance"));
  return ch;
}

Json to_json(const Design& d) {
  Json j = {{"mode", to_string(d.mode)},
            {"tau", d.tau},
            {"s_E", list_json(d.s_E, cvec_json)},
            {"p_I", list_json(d.p_I, rvec_json)}};
  if (d.mode == Mode::Relay) {
    j["U_E"] = list_json(d.U_E, cmat_json);
    j["U_I"] = list_json(d.U_I, cmat_json);
  } else {
    j["theta_E"] = cvec_json(d.theta_E);
    j["theta_I"] = cvec_json(d.theta_I);
  }
  return j;
}

Design design_from_json(const Json& j) {
  Design d;
  d.mode = mode_from_string(j.at("mode").get<std::string>());
  d.tau = j.at("tau").get<double>();
  for (const auto& v : j.at("s_E")) d.s_E.push_back(cvec_from(v));
  for (const auto& v : j.at("p_I")) d.p_I.push_back(rvec_from(v));
  if (d.mode == Mode::Relay) {
    for (const auto& m : j.at("U_E")) d.U_E.push_back(cmat_from(m));
    for (const auto& m : j.at("U_I")) d.U_I.push_back(cmat_from(m));
  } else {
    d.theta_E = cvec_from(j.at("theta_E"));
    d.theta_I = cvec_from(j.at("theta_I"));
  }
  return d;
}

Json to_json(const RunTrace& trace) {
  Json outer = Json::array();
  for (const auto& r : trace.outer) {
    outer.push_back({{"min_rate", r.min_rate},
                     {"alpha_matrices", r.alpha_matrices},
                     {"alpha_waveforms", r.alpha_waveforms},
                     {"tau", r.tau},
                     {"energy", rvec_json(r.energy)},
                     {"solves", r.solves},
                     {"newton_steps", r.newton_steps},
                     {"wall_ms", r.wall_ms},
                     {"ms_matrices", r.ms_matrices},
                     {"ms_waveforms", r.ms_waveforms},
                     {"ms_tau", r.ms_tau}});
  }
  return {{"variant", to_string(trace.variant)},
          {"initial_min_rate", trace.initial_min_rate},
          {"initial_tau", trace.initial_tau},
          {"converged", trace.converged},
          {"final_min_rate", trace.final_min_rate()},
          {"outer", outer},
          {"notes", trace.notes}};
}

Json to_json(const SystemConfig& cfg) {
  return {{"K", cfg.K},
          {"N", cfg.N},
          {"M", cfg.M},
          {"mode", to_string(cfg.mode)},
          {"T", cfg.T},
          {"p_rf_tx", rmat_json(cfg.p_rf_tx)},
          {"p_rf_node", rvec_json(cfg.p_rf_node)},
          {"sigma2_node", rvec_json(cfg.sigma2_node)},
          {"sigma2_rx", rmat_json(cfg.sigma2_rx)},
          {"delta2_rx", rmat_json(cfg.delta2_rx)},
          {"eh", {{"a", cfg.eh.a}, {"b", cfg.eh.b}, {"c", cfg.eh.c}}},
          {"e_min", rvec_json(cfg.e_min)}};
}

Json to_json(const ResultTable& table) {
  Json rows = Json::array();
  for (const auto& r : table.rows) {
    Json row = {{"sweep", r.sweep},
                {"seed", r.seed},
                {"status", r.status},
                {"feasible", r.feasible}};
    if (r.feasible) {
      row["min_rate"] = r.min_rate;
      row["tau"] = r.tau;
      row["energy"] = rvec_json(r.energy);
      row["iters"] = r.iterations;
    }
    if (table.timing) row["ms"] = r.wall_ms;
    rows.push_back(row);
  }
  Json summary = Json::array();
  for (const auto& s : table.summary) {
    summary.push_back({{"sweep", s.sweep},
                       {"feasible", s.feasible},
                       {"infeasible", s.infeasible},
                       {"mean", s.mean},
                       {"stderr", s.stderr_mean}});
  }
  return {{"axis", table.axis}, {"rows", rows}, {"summary", summary}};
}

Json to_json(const ExperimentSpec& spec) {
  Json values = Json::array();
  if (spec.axis == SweepAxis::Variant) {
    for (Variant v : spec.variants) values.push_back(to_string(v));
  } else {
    for (double v : spec.values) values.push_back(v);
  }
  const auto& g = spec.geometry;
  const auto& st = spec.settings;
  return {{"name", spec.name},
          {"mode", to_string(spec.mode)},
          {"K", spec.K},
          {"N", spec.N},
          {"M", spec.M},
          {"e_min", spec.e_min},
          {"geometry",
           {{"d1", g.d1}, {"d2", g.d2}, {"d3", g.d3}, {"r_T", g.r_T}, {"r_R", g.r_R},
            {"d0", g.d0}, {"gamma_tilde", g.gamma_tilde}}},
          {"variant", to_string(spec.variant)},
          {"sweep", {{"axis", to_string(spec.axis)}, {"values", values}}},
          {"seeds", spec.seeds},
          {"outputs", spec.outputs},
          {"emit", to_string(spec.emit)},
          {"continuation", spec.continuation},
          {"timing", spec.timing},
          {"write_traces", spec.write_traces},
          {"settings",
           {{"eps_inner", st.eps_inner}, {"eps_outer", st.eps_outer},
            {"max_inner", st.max_inner}, {"max_outer", st.max_outer},
            {"init", init_name(st.init_strategy)}, {"init_seed", st.init_seed},
            {"c5_rule", rule_name(st.c5_rule)}, {"beta_safety", st.beta_safety},
            {"nested_start", st.nested_start}}}};
}

ExperimentSpec spec_from_json(const Json& j) {
  ExperimentSpec s;
  reject_unknown(j,
                 {"name", "mode", "K", "N", "M", "e_min", "geometry", "variant", "sweep", "seeds",
                  "outputs", "emit", "continuation", "timing", "write_traces", "settings"},
                 "spec");
  const std::string w = "spec";
  read_field(j, "name", s.name, w);
  std::string text;
  if (j.contains("mode")) {
    read_field(j, "mode", text, w);
    s.mode = mode_from_string(text);
  }
  read_field(j, "K", s.K, w);
  read_field(j, "N", s.N, w);
  read_field(j, "M", s.M, w);
  read_field(j, "e_min", s.e_min, w);
  if (j.contains("geometry")) {
    const Json& g = j.at("geometry");
    reject_unknown(g, {"d1", "d2", "d3", "r_T", "r_R", "d0", "gamma_tilde"}, "spec.geometry");
    read_field(g, "d1", s.geometry.d1, "spec.geometry");
    read_field(g, "d2", s.geometry.d2, "spec.geometry");
    read_field(g, "d3", s.geometry.d3, "spec.geometry");
    read_field(g, "r_T", s.geometry.r_T, "spec.geometry");
    read_field(g, "r_R", s.geometry.r_R, "spec.geometry");
    read_field(g, "d0", s.geometry.d0, "spec.geometry");
    read_field(g, "gamma_tilde", s.geometry.gamma_tilde, "spec.geometry");
  }
  if (j.contains("variant")) {
    read_field(j, "variant", text, w);
    s.variant = variant_from_string(text);
  }
  if (j.contains("sweep")) {
    const Json& sw = j.at("sweep");
    reject_unknown(sw, {"axis", "values"}, "spec.sweep");
    if (sw.contains("axis")) {
      read_field(sw, "axis", text, "spec.sweep");
      s.axis = sweep_axis_from_string(text);
    }
    if (sw.contains("values")) {
      if (s.axis == SweepAxis::Variant) {
        std::vector<std::string> names;
        read_field(sw, "values", names, "spec.sweep");
        for (const auto& n : names) s.variants.push_back(variant_from_string(n));
      } else {
        read_field(sw, "values", s.values, "spec.sweep");
      }
    }
  }
  read_field(j, "seeds", s.seeds, w);
  read_field(j, "outputs", s.outputs, w);
  if (j.contains("emit")) {
    read_field(j, "emit", text, w);
    s.emit = emit_format_from_string(text);
  }
  read_field(j, "continuation", s.continuation, w);
  read_field(j, "timing", s.timing, w);
  read_field(j, "write_traces", s.write_traces, w);
  if (j.contains("settings")) {
    const Json& st = j.at("settings");
    const std::string ws = "spec.settings";
    reject_unknown(st,
                   {"eps_inner", "eps_outer", "max_inner", "max_outer", "init", "init_seed",
                    "c5_rule", "beta_safety", "nested_start"},
                   ws);
    read_field(st, "eps_inner", s.settings.eps_inner, ws);
    read_field(st, "eps_outer", s.settings.eps_outer, ws);
    read_field(st, "max_inner", s.settings.max_inner, ws);
    read_field(st, "max_outer", s.settings.max_outer, ws);
    if (st.contains("init")) {
      read_field(st, "init", text, ws);
      s.settings.init_strategy = init_from(text);
    }
    read_field(st, "init_seed", s.settings.init_seed, ws);
    if (st.contains("c5_rule")) {
      read_field(st, "c5_rule", text, ws);
      s.settings.c5_rule = rule_from(text);
    }
    read_field(st, "beta_safety", s.settings.beta_safety, ws);
    read_field(st, "nested_start", s.settings.nested_start, ws);
  }
  s.settings.variant = s.variant;
  return s;
}

}  // namespace wpc
