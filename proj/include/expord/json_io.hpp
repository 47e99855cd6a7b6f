#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "expord/expord.hpp"

namespace expord::io {

using Json = nlohmann::ordered_json;  // stable field order for golden diffs

inline Json rat_array(const RatVector& v) {
  Json a = Json::array();
  for (const auto& r : v) a.push_back(render(r));
  return a;
}

inline Json rat_rows(const RatMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(render(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline RatVector parse_rat_array(const Json& a) {
  RatVector v;
  for (const auto& s : a) v.push_back(parse_rational(s.get<std::string>()));
  return v;
}

inline RatMatrix parse_rat_rows(const Json& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows[0].size();
  RatMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw DimensionMismatch("ragged rows in JSON matrix");
    for (std::size_t j = 0; j < c; ++j)
      m(i, j) = parse_rational(rows[i][j].get<std::string>());
  }
  return m;
}

// ---- experiment & prior -----------------------------------------------

inline Json to_json(const Experiment& e) {
  Json j;
  j["states"] = e.states();
  j["realizations"] = e.realizations();
  j["rows"] = rat_rows(e.matrix);
  if (!e.labels.empty()) j["labels"] = e.labels;
  return j;
}

inline Experiment parse_experiment(const Json& j) {
  RatMatrix m = parse_rat_rows(j.at("rows"));
  if (j.contains("states") && j["states"].get<std::size_t>() != m.rows())
    throw DimensionMismatch("declared state count differs from rows");
  if (j.contains("realizations") && j["realizations"].get<std::size_t>() != m.cols())
    throw DimensionMismatch("declared realization count differs from columns");
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j["labels"].get<std::vector<std::string>>();
  return validate_experiment(std::move(m), std::move(labels));
}

inline Json to_json(const Prior& p) {
  Json j;
  j["mu"] = rat_array(p.mu);
  return j;
}

inline Prior parse_prior(const Json& j) { return validate_prior(parse_rat_array(j.at("mu"))); }

inline Json to_json(const PosteriorDistribution& d) {
  Json j;
  j["atoms"] = Json::array();
  for (const auto& atom : d.atoms) {
    Json a;
    a["posterior"] = rat_array(atom.posterior);
    a["weight"] = render(atom.weight);
    j["atoms"].push_back(std::move(a));
  }
  j["dropped_realizations"] = d.dropped_realizations;
  j["note"] = "one atom per realization; equal posteriors are not merged";
  return j;
}

// ---- order verdicts ----------------------------------------------------

inline Json to_json(const OrderVerdict& v) {
  Json j;
  j["order"] = order_name(v.order);
  j["dominates"] = v.dominates;
  if (!v.dominates) {
    const auto& w = std::get<Witness>(v.certificate);
    Json wj;
    if (!w.point.empty()) wj["point"] = rat_array(w.point);
    if (!w.beta.empty()) wj["beta"] = rat_array(w.beta);
    if (!w.farkas.empty()) wj["farkas"] = rat_array(w.farkas);
    j["witness"] = std::move(wj);
    return j;
  }
  Json c;
  if (const auto* fg = std::get_if<FactorG>(&v.certificate)) {
    c["kind"] = "factor_g";
    c["G"] = rat_rows(fg->g);
  } else if (const auto* gb = std::get_if<Garbling>(&v.certificate)) {
    c["kind"] = "garbling";
    c["G"] = rat_rows(gb->g);
  } else if (const auto* fh = std::get_if<FactorH>(&v.certificate)) {
    c["kind"] = "factor_h";
    Json cols = Json::array();
    for (const auto& col : fh->columns) {
      Json cj;
      Json subset = Json::array();
      for (std::size_t b = 0; b < 32; ++b)
        if ((col.mask >> b) & 1u) subset.push_back(b + 1);
      cj["subset"] = std::move(subset);
      cj["point"] = rat_array(col.point);
      cj["h"] = rat_array(col.h);
      cols.push_back(std::move(cj));
    }
    c["columns"] = std::move(cols);
  }
  j["certificate"] = std::move(c);
  return j;
}

inline Json to_json(const RelationsSummary& s) {
  Json rows = Json::array();
  for (const auto& r : s.rows) {
    Json j;
    j["order"] = order_name(r.order);
    j["forward"] = r.forward;
    j["backward"] = r.backward;
    j["strict_forward"] = r.strict_forward();
    j["strict_backward"] = r.strict_backward();
    rows.push_back(std::move(j));
  }
  Json out;
  out["orders"] = std::move(rows);
  return out;
}

// ---- moral hazard ------------------------------------------------------

inline Json to_json(const mh::UtilitySpec& u) {
  Json j;
  if (u.risk_neutral) {
    j["kind"] = "risk_neutral";
  } else {
    j["kind"] = "plc";
    Json bps = Json::array();
    for (const auto& [t, v] : u.breakpoints) bps.push_back(Json::array({render(t), render(v)}));
    j["breakpoints"] = std::move(bps);
  }
  return j;
}

inline mh::UtilitySpec parse_utility(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "risk_neutral") return mh::UtilitySpec::rn();
  if (kind != "plc") throw Error("unknown utility kind: " + kind);
  std::vector<std::pair<Rational, Rational>> bps;
  for (const auto& bp : j.at("breakpoints"))
    bps.emplace_back(parse_rational(bp.at(0).get<std::string>()),
                     parse_rational(bp.at(1).get<std::string>()));
  return mh::UtilitySpec::plc(std::move(bps));
}

inline Json to_json(const mh::Constraints& c) {
  Json j;
  switch (c.kind) {
    case mh::ConstraintClass::None: j["kind"] = "none"; break;
    case mh::ConstraintClass::LL: j["kind"] = "ll"; break;
    case mh::ConstraintClass::LlB:
      j["kind"] = "ll_b";
      j["B"] = render(c.budget);
      break;
    case mh::ConstraintClass::BOnly:
      j["kind"] = "b_only";
      j["B"] = render(c.budget);
      break;
  }
  return j;
}

inline mh::Constraints parse_constraints(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "none") return mh::Constraints::none();
  if (kind == "ll") return mh::Constraints::ll();
  const Rational b = parse_rational(j.at("B").get<std::string>());
  if (b <= 0) throw Error("budget must be positive");
  if (kind == "ll_b") return mh::Constraints::ll_b(b);
  if (kind == "b_only") return mh::Constraints::b_only(b);
  throw Error("unknown constraint kind: " + kind);
}

inline Json to_json(const mh::Environment& env) {
  Json j;
  j["mu0"] = rat_array(env.mu0.mu);
  j["gradient"] = rat_array(env.cost.gradient);
  j["cost_level"] = render(env.cost.cost_level);
  j["outside_option"] = render(env.outside_option);
  j["utility"] = to_json(env.utility);
  j["constraints"] = to_json(env.constraints);
  return j;
}

inline mh::Environment parse_environment(const Json& j) {
  mh::Environment env;
  env.mu0 = validate_prior(parse_rat_array(j.at("mu0")));
  env.cost.gradient = parse_rat_array(j.at("gradient"));
  env.cost.cost_level = parse_rational(j.at("cost_level").get<std::string>());
  if (env.cost.cost_level < 0) throw Error("cost_level must be non-negative");
  env.outside_option = parse_rational(j.at("outside_option").get<std::string>());
  env.utility = parse_utility(j.at("utility"));
  env.constraints = parse_constraints(j.at("constraints"));
  return env;
}

inline Json to_json(const mh::MhSolution& sol) {
  Json j;
  if (!sol.optimal) {
    j["status"] = "infeasible";
    j["cost"] = "inf";
    return j;
  }
  j["status"] = "optimal";
  j["cost"] = render(sol.cost);
  j["t"] = rat_array(sol.t);
  j["lambda"] = render(sol.lambda);
  j["eta"] = rat_array(sol.eta);
  return j;
}

inline Json to_json(const mh::Counterexample& c, const std::string& name_e,
                    const std::string& name_e2) {
  Json j;
  j["environment"] = to_json(c.env);
  Json g;
  g["a"] = name_e;
  g["b"] = name_e2;
  g["cost_a"] = c.under_e.optimal ? render(c.under_e.cost) : "inf";
  g["cost_b"] = c.under_e2.optimal ? render(c.under_e2.cost) : "inf";
  g["solution_a"] = to_json(c.under_e);
  g["solution_b"] = to_json(c.under_e2);
  g["gradient_used"] = rat_array(c.gradient_used);
  j["guarantee"] = std::move(g);
  return j;
}

// ---- files -------------------------------------------------------------

inline Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  Json j;
  in >> j;
  return j;
}

inline void save_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// FNV-1a digest of a file's bytes, for run reports.
inline std::string file_digest(const std::string& path) {
  const std::string bytes = read_text(path);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace expord::io
