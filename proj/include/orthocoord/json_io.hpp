#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "orthocoord/certificates.hpp"
#include "orthocoord/error.hpp"
#include "orthocoord/obstruction_search.hpp"

namespace orthocoord {

/// Quadruple indices are written 1-based, matching e_1..e_n.
inline nlohmann::json to_json(const ObstructionReport& r) {
  nlohmann::json frame = nlohmann::json::array();
  for (int i = 0; i < r.best_frame.dim(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < r.best_frame.dim(); ++j) row.push_back(r.best_frame.rows()(i, j));
    frame.push_back(std::move(row));
  }
  nlohmann::json quads = nlohmann::json::array();
  for (const auto& q : r.per_quadruple) {
    quads.push_back({{"ijkl", {q.ijkl[0] + 1, q.ijkl[1] + 1, q.ijkl[2] + 1, q.ijkl[3] + 1}}, {"value", q.value}});
  }
  return {{"space", r.space},       {"n", r.n},
          {"best_residual", r.best_residual},
          {"best_frame", std::move(frame)},
          {"per_quadruple", std::move(quads)},
          {"restarts", r.restarts_used},
          {"seed", r.seed},         {"converged", r.converged}};
}

inline ObstructionReport report_from_json(const nlohmann::json& j) {
  try {
    ObstructionReport r;
    r.space = j.at("space").get<std::string>();
    r.n = j.at("n").get<int>();
    r.best_residual = j.at("best_residual").get<double>();
    const auto rows = j.at("best_frame").get<std::vector<std::vector<double>>>();
    Matrix F(r.n, r.n);
    if (static_cast<int>(rows.size()) != r.n) throw Error(ErrorKind::ParseError, "best_frame has wrong size");
    for (int i = 0; i < r.n; ++i) {
      if (static_cast<int>(rows[i].size()) != r.n) throw Error(ErrorKind::ParseError, "best_frame has wrong size");
      for (int k = 0; k < r.n; ++k) F(i, k) = rows[i][k];
    }
    r.best_frame = Frame(F);
    for (const auto& q : j.at("per_quadruple")) {
      const auto idx = q.at("ijkl").get<std::vector<int>>();
      if (idx.size() != 4) throw Error(ErrorKind::ParseError, "ijkl must have four entries");
      r.per_quadruple.push_back({{idx[0] - 1, idx[1] - 1, idx[2] - 1, idx[3] - 1}, q.at("value").get<double>()});
    }
    r.restarts_used = j.at("restarts").get<int>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.converged = j.at("converged").get<bool>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("malformed report: ") + e.what());
  }
}

inline nlohmann::json to_json(const CertificateResult& c) {
  nlohmann::json computed = nlohmann::json::array();
  for (const auto& q : c.computed) computed.push_back({{"quantity", q.name}, {"value", q.value}});
  return {{"name", c.name}, {"passed", c.passed}, {"computed", std::move(computed)}, {"tolerance", c.tolerance}};
}

}  // namespace orthocoord
