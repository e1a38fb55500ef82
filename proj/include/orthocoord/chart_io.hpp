#pragma once

// Chart documents:
//   {"n": 3, "kind": "builtin", "name": "sphere-stereo", "domain": [[-1,1],[-1,1],[-1,1]]}
//   {"n": 2, "kind": "table", "name": "my-chart", "domain": [[lo,hi],[lo,hi]],
//    "shape": [N1, N2], "values": [[a_1 at every node], [a_2 at every node]]}
// Table values are listed row-major over the uniform node grid spanning the
// domain (last axis fastest). Tables are interpolated with tensor-product
// cubic Lagrange stencils; derivatives come from finite differences.

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "orthocoord/diagonal_metrics.hpp"
#include "orthocoord/error.hpp"

namespace orthocoord {

class ScaleTable {
 public:
  ScaleTable(DomainBox domain, std::vector<int> shape, std::vector<std::vector<double>> values)
      : domain_(std::move(domain)), shape_(std::move(shape)), values_(std::move(values)) {
    const int n = domain_.dim();
    if (static_cast<int>(shape_.size()) != n || static_cast<int>(values_.size()) != n) {
      throw Error(ErrorKind::DimensionMismatch, "table shape/values must have one entry per axis");
    }
    std::size_t total = 1;
    for (int c : shape_) {
      if (c < 4) throw Error(ErrorKind::GridTooCoarse, "table needs at least 4 nodes per axis");
      total *= static_cast<std::size_t>(c);
    }
    for (const auto& v : values_) {
      if (v.size() != total) throw Error(ErrorKind::DimensionMismatch, "table value count does not match shape");
      for (double x : v) {
        if (!(x > 0.0)) throw Error(ErrorKind::DegenerateMetric, "table scale values must be positive");
      }
    }
  }

  Vector operator()(const Vector& x) const {
    const int n = domain_.dim();
    std::vector<int> first(n);
    std::vector<std::array<double, 4>> weights(n);
    for (int d = 0; d < n; ++d) {
      const auto [lo, hi] = domain_.bounds[d];
      const double spacing = (hi - lo) / (shape_[d] - 1);
      const double t = (x[d] - lo) / spacing;
      int base = static_cast<int>(std::floor(t)) - 1;
      base = std::clamp(base, 0, shape_[d] - 4);
      first[d] = base;
      for (int s = 0; s < 4; ++s) {
        double w = 1.0;
        for (int r = 0; r < 4; ++r) {
          if (r != s) w *= (t - (base + r)) / static_cast<double>(s - r);
        }
        weights[d][s] = w;
      }
    }

    Vector out = Vector::Zero(n);
    const int stencil = 1 << (2 * n);  // 4^n
    for (int code = 0; code < stencil; ++code) {
      int c = code;
      double w = 1.0;
      std::size_t flat = 0;
      for (int d = 0; d < n; ++d) {
        const int o = c % 4;
        c /= 4;
        w *= weights[d][o];
        flat = flat * shape_[d] + (first[d] + o);
      }
      for (int j = 0; j < n; ++j) out[j] += w * values_[j][flat];
    }
    return out;
  }

 private:
  DomainBox domain_;
  std::vector<int> shape_;
  std::vector<std::vector<double>> values_;
};

inline DomainBox parse_domain(const nlohmann::json& doc, int n) {
  DomainBox box;
  const auto& dom = doc.at("domain");
  if (!dom.is_array() || static_cast<int>(dom.size()) != n) {
    throw Error(ErrorKind::ParseError, "domain must list one [lo, hi] pair per axis");
  }
  for (const auto& pair : dom) {
    if (!pair.is_array() || pair.size() != 2) throw Error(ErrorKind::ParseError, "domain entries must be [lo, hi]");
    const double lo = pair[0].get<double>(), hi = pair[1].get<double>();
    if (!(lo < hi)) throw Error(ErrorKind::ParseError, "domain interval must have lo < hi");
    box.bounds.emplace_back(lo, hi);
  }
  return box;
}

inline DiagonalChart chart_from_json(const nlohmann::json& doc) {
  try {
    const int n = doc.at("n").get<int>();
    if (n < 2) throw Error(ErrorKind::InvalidDimension, "chart dimension must be >= 2");
    const std::string kind = doc.at("kind").get<std::string>();
    const std::string name = doc.at("name").get<std::string>();
    if (kind == "builtin") {
      DiagonalChart base = charts::builtin(name, n);
      if (!doc.contains("domain")) return base;
      DomainBox box = parse_domain(doc, n);
      for (int d = 0; d < n; ++d) {
        const auto [lo, hi] = base.domain().bounds[d];
        if (box.bounds[d].first < lo || box.bounds[d].second > hi) {
          throw Error(ErrorKind::OutOfDomain, "requested domain exceeds the builtin chart's domain");
        }
      }
      return DiagonalChart(base.name(), box, [base](const Vector& x) { return base.raw_scales(x); },
                           [base](const Vector& x) { return base.gradient(ChartPoint{x}); },
                           [base](const Vector& x) { return base.hessian(ChartPoint{x}); });
    }
    if (kind == "table") {
      DomainBox box = parse_domain(doc, n);
      auto table = std::make_shared<ScaleTable>(box, doc.at("shape").get<std::vector<int>>(),
                                                doc.at("values").get<std::vector<std::vector<double>>>());
      return DiagonalChart(name, box, [table](const Vector& x) { return (*table)(x); });
    }
    throw Error(ErrorKind::ParseError, "chart kind must be 'builtin' or 'table'");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("malformed chart document: ") + e.what());
  }
}

inline DiagonalChart load_chart_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open chart file '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("invalid JSON in chart file: ") + e.what());
  }
  return chart_from_json(doc);
}

/// "flat:3", "polar:2", "sphere-stereo:4", or a path to a chart document.
inline DiagonalChart resolve_chart(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon != std::string::npos) {
    const std::string name = spec.substr(0, colon);
    const std::string num = spec.substr(colon + 1);
    if (name == "flat" || name == "polar" || name == "sphere-stereo") {
      if (num.empty() || num.size() > 6 || num.find_first_not_of("0123456789") != std::string::npos) {
        throw Error(ErrorKind::ParseError, "expected a positive integer in chart spec '" + spec + "'");
      }
      return charts::builtin(name, std::stoi(num));
    }
  }
  return load_chart_file(spec);
}

}  // namespace orthocoord
