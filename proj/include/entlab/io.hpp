// Copyright 2026 The entlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Output helpers: CSV tables, run manifests and MPS serialization.
// Needs nlohmann/json ("json.hpp") on the include path.

#pragma once

#include <charconv>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "entlab/errors.hpp"
#include "entlab/mps.hpp"
#include "json.hpp"

namespace entlab {

using Json = nlohmann::ordered_json;

/// Shortest decimal form that parses back to the same double.
inline std::string format_double(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, r.ptr);
}

using CsvField = std::variant<std::string, double, long long>;

/// CSV with a mandatory header row, LF line endings and round-trip doubles.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::vector<std::string> header) : out_(out), width_(header.size()) {
    if (header.empty()) throw DomainError("CsvWriter: empty header");
    std::vector<CsvField> h(header.begin(), header.end());
    write(h);
  }

  void row(const std::vector<CsvField>& fields) {
    if (fields.size() != width_) throw DimensionError("CsvWriter: row width differs from header");
    write(fields);
  }

 private:
  static std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  }

  void write(const std::vector<CsvField>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ << ',';
      std::visit(
          [this](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::string>) {
              out_ << quote(v);
            } else if constexpr (std::is_same_v<T, double>) {
              out_ << format_double(v);
            } else {
              out_ << v;
            }
          },
          fields[i]);
    }
    out_ << '\n';
  }

  std::ostream& out_;
  std::size_t width_;
};

/// One embedded assertion of a CLI run.
struct CheckRecord {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Run manifest; only `timestamp` varies between identical runs.
struct RunManifest {
  std::string subcommand;
  Json parameters = Json::object();
  std::uint64_t seed = 0;
  Json tolerances = Json::object();
  Json results = Json::object();
  std::vector<std::string> outputs;
  std::vector<CheckRecord> checks;

  const CheckRecord* first_failure() const {
    for (const auto& c : checks)
      if (!c.passed) return &c;
    return nullptr;
  }

  Json to_json() const {
    Json j;
    j["tool"] = "entlab";
#ifdef ENTLAB_VERSION
    j["version"] = ENTLAB_VERSION;
#else
    j["version"] = "unknown";
#endif
    j["subcommand"] = subcommand;
    j["parameters"] = parameters;
    j["seed"] = seed;
    j["tolerances"] = tolerances;
    j["results"] = results;
    j["outputs"] = outputs;
    Json cs = Json::array();
    for (const auto& c : checks) cs.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    j["checks"] = cs;
    j["status"] = first_failure() ? "fail" : "pass";
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    j["timestamp"] = stamp;
    return j;
  }
};

namespace detail {

inline Json matrix_part(const DenseOperator& m, bool imag) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(imag ? m(i, j).imag() : m(i, j).real());
    rows.push_back(row);
  }
  return rows;
}

inline DenseOperator matrix_from(const Json& re, const Json& im) {
  const auto rows = static_cast<Eigen::Index>(re.size());
  const auto cols = rows ? static_cast<Eigen::Index>(re.at(0).size()) : 0;
  if (im.size() != re.size()) throw DimensionError("mps_from_json: real and imaginary parts differ in shape");
  DenseOperator m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& r = re.at(static_cast<std::size_t>(i));
    const Json& s = im.at(static_cast<std::size_t>(i));
    if (static_cast<Eigen::Index>(r.size()) != cols || static_cast<Eigen::Index>(s.size()) != cols)
      throw DimensionError("mps_from_json: ragged matrix");
    for (Eigen::Index j = 0; j < cols; ++j)
      m(i, j) = cplx(r.at(static_cast<std::size_t>(j)).get<double>(), s.at(static_cast<std::size_t>(j)).get<double>());
  }
  return m;
}

}  // namespace detail

/// {format, N, d, boundary, bonds, tensors[site][s] = {real, imag}, lambdas?}.
inline Json mps_to_json(const MatrixProductState& mps) {
  Json j;
  j["format"] = "entlab-mps";
  j["N"] = mps.sites();
  j["d"] = mps.phys_dim();
  j["boundary"] = boundary_name(mps.boundary());
  j["bonds"] = mps.bonds();
  Json sites = Json::array();
  for (const auto& site : mps.tensors()) {
    Json phys = Json::array();
    for (const auto& m : site) phys.push_back({{"real", detail::matrix_part(m, false)}, {"imag", detail::matrix_part(m, true)}});
    sites.push_back(phys);
  }
  j["tensors"] = sites;
  if (mps.canonical()) {
    Json lam = Json::array();
    for (const auto& l : mps.lambdas()) lam.push_back(std::vector<double>(l.data(), l.data() + l.size()));
    j["lambdas"] = lam;
  }
  return j;
}

inline MatrixProductState mps_from_json(const Json& j) {
  if (j.value("format", "") != "entlab-mps") throw DomainError("mps_from_json: not an entlab-mps document");
  const std::string b = j.at("boundary").get<std::string>();
  if (b != "open" && b != "periodic") throw DomainError("mps_from_json: unknown boundary '" + b + "'");
  std::vector<SiteTensor> tensors;
  for (const Json& site : j.at("tensors")) {
    SiteTensor t;
    for (const Json& m : site) t.push_back(detail::matrix_from(m.at("real"), m.at("imag")));
    tensors.push_back(std::move(t));
  }
  MatrixProductState mps(std::move(tensors), b == "open" ? Boundary::open : Boundary::periodic);
  if (mps.sites() != j.at("N").get<int>() || mps.phys_dim() != j.at("d").get<int>() ||
      mps.bonds() != j.at("bonds").get<std::vector<int>>())
    throw DimensionError("mps_from_json: header fields disagree with the tensors");
  if (j.contains("lambdas")) {
    std::vector<RealVector> lam;
    for (const Json& l : j.at("lambdas")) {
      const auto v = l.get<std::vector<double>>();
      lam.push_back(Eigen::Map<const RealVector>(v.data(), static_cast<Eigen::Index>(v.size())));
    }
    mps.set_canonical_data(std::move(lam));
  }
  return mps;
}

}  // namespace entlab
