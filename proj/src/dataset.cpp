#include "dpcausal/dataset.hpp"

#include "dpcausal/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

namespace dpcausal {

namespace {

using nlohmann::json;

bool is_binary(double a) { return a == 0.0 || a == 1.0; }

double parse_number(std::string_view token, const std::string& path, Index line) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw DataError(path + ":" + std::to_string(line) + ": cannot parse number '" +
                    std::string(token) + "'");
  }
  return value;
}

std::vector<std::string_view> split_line(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

}  // namespace

ValidationReport validate(const Dataset& data, const Bounds& bounds) {
  bounds.check();
  const Index n = data.size();
  if (data.treatment.size() != n || data.outcome.size() != n) {
    throw DataError("dataset: covariates, treatment and outcome lengths differ");
  }
  if (n < 2) throw DataError("dataset: need at least 2 records");

  ValidationReport report;
  if (!data.covariates.allFinite()) {
    report.non_finite_entries += (!data.covariates.array().isFinite()).count();
  }
  for (Index i = 0; i < n; ++i) {
    if (!std::isfinite(data.treatment[i]) || !std::isfinite(data.outcome[i])) {
      ++report.non_finite_entries;
      continue;
    }
    if (!is_binary(data.treatment[i])) ++report.non_binary_treatments;
    if (std::abs(data.outcome[i]) > bounds.b_mu) ++report.out_of_bound_outcomes;
  }
  if (report.non_finite_entries > 0) {
    throw DataError("dataset: " + std::to_string(report.non_finite_entries) +
                    " non-finite entries");
  }
  if (report.non_binary_treatments > 0) {
    throw DataError("dataset: non-binary treatment (" +
                    std::to_string(report.non_binary_treatments) + " records)");
  }
  return report;
}

Dataset clip_outcomes(const Dataset& data, const Bounds& bounds) {
  bounds.check();
  Dataset out = data;
  out.outcome = data.outcome.array().max(-bounds.b_mu).min(bounds.b_mu);
  return out;
}

FoldAssignment split_folds(Index n, int k, std::uint64_t seed) {
  if (k < 2 || static_cast<Index>(k) > n) {
    throw std::invalid_argument("split_folds: invalid fold count");
  }
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  RngStream rng = RngStream::keyed(seed, {0x666f6c6473ULL});  // "folds"
  for (Index i = n - 1; i > 0; --i) {
    const auto j = static_cast<Index>(rng.next_below(static_cast<std::uint64_t>(i) + 1));
    std::swap(order[i], order[j]);
  }

  FoldAssignment folds;
  folds.k = k;
  folds.fold_of.assign(static_cast<std::size_t>(n), -1);
  folds.members.resize(k);
  const Index base = n / k;
  const Index remainder = n % k;
  Index pos = 0;
  for (int f = 0; f < k; ++f) {
    const Index size = base + (f < remainder ? 1 : 0);
    auto& m = folds.members[f];
    m.reserve(static_cast<std::size_t>(size));
    for (Index j = 0; j < size; ++j) {
      const int record = order[pos++];
      m.push_back(record);
      folds.fold_of[record] = f;
    }
    std::sort(m.begin(), m.end());
  }
  return folds;
}

Dataset rescale_covariates(const Dataset& data) {
  const Index n = data.size();
  std::vector<double> norms(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) norms[static_cast<std::size_t>(i)] = data.covariates.row(i).norm();
  std::vector<double> sorted = norms;
  std::sort(sorted.begin(), sorted.end());
  const auto rank = static_cast<std::size_t>(
      std::min<Index>(n - 1, static_cast<Index>(std::ceil(0.99 * static_cast<double>(n))) - 1));
  const double q = sorted[rank];

  Dataset out = data;
  if (q > 0.0) out.covariates /= q;
  for (Index i = 0; i < n; ++i) {
    const double norm = out.covariates.row(i).norm();
    if (norm > 1.0) out.covariates.row(i) /= norm;
  }
  return out;
}

Dataset load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const auto header = split_line(line);
  if (header.size() < 3 || header[header.size() - 2] != "a" || header.back() != "y") {
    throw DataError(path + ": expected header x0..x{d-1},a,y");
  }
  const Index d = static_cast<Index>(header.size()) - 2;
  for (Index j = 0; j < d; ++j) {
    if (header[static_cast<std::size_t>(j)] != "x" + std::to_string(j)) {
      throw DataError(path + ": expected covariate column x" + std::to_string(j));
    }
  }

  std::vector<double> xs, as, ys;
  Index line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_line(line);
    if (static_cast<Index>(fields.size()) != d + 2) {
      throw DataError(path + ":" + std::to_string(line_no) + ": wrong column count");
    }
    for (Index j = 0; j < d; ++j) {
      xs.push_back(parse_number(fields[static_cast<std::size_t>(j)], path, line_no));
    }
    as.push_back(parse_number(fields[static_cast<std::size_t>(d)], path, line_no));
    ys.push_back(parse_number(fields[static_cast<std::size_t>(d) + 1], path, line_no));
  }

  const Index n = static_cast<Index>(as.size());
  Dataset data;
  data.covariates.resize(n, d);
  data.treatment.resize(n);
  data.outcome.resize(n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < d; ++j) data.covariates(i, j) = xs[static_cast<std::size_t>(i * d + j)];
    data.treatment[i] = as[static_cast<std::size_t>(i)];
    data.outcome[i] = ys[static_cast<std::size_t>(i)];
  }
  return data;
}

void save_csv(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  const Index d = data.dim();
  for (Index j = 0; j < d; ++j) out << "x" << j << ",";
  out << "a,y\n";
  char buf[32];
  auto append = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf;
  };
  for (Index i = 0; i < data.size(); ++i) {
    for (Index j = 0; j < d; ++j) {
      append(data.covariates(i, j));
      out << ',';
    }
    append(data.treatment[i]);
    out << ',';
    append(data.outcome[i]);
    out << '\n';
  }
  if (!out) throw DataError("failed writing " + path);
}

Dataset load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
  if (!j.contains("a") || !j.contains("y")) throw DataError(path + ": missing 'a' or 'y'");
  Index d = 0;
  while (j.contains("x" + std::to_string(d))) ++d;
  const auto& ya = j.at("y");
  const Index n = static_cast<Index>(ya.size());
  Dataset data;
  data.covariates.resize(n, d);
  data.treatment.resize(n);
  data.outcome.resize(n);
  for (Index col = 0; col < d; ++col) {
    const auto& xc = j.at("x" + std::to_string(col));
    if (static_cast<Index>(xc.size()) != n) throw DataError(path + ": column length mismatch");
    for (Index i = 0; i < n; ++i) data.covariates(i, col) = xc.at(i).get<double>();
  }
  const auto& aa = j.at("a");
  if (static_cast<Index>(aa.size()) != n) throw DataError(path + ": column length mismatch");
  for (Index i = 0; i < n; ++i) {
    data.treatment[i] = aa.at(i).get<double>();
    data.outcome[i] = ya.at(i).get<double>();
  }
  return data;
}

void save_json(const Dataset& data, const std::string& path) {
  json j;
  for (Index col = 0; col < data.dim(); ++col) {
    json arr = json::array();
    for (Index i = 0; i < data.size(); ++i) arr.push_back(data.covariates(i, col));
    j["x" + std::to_string(col)] = std::move(arr);
  }
  json a = json::array(), y = json::array();
  for (Index i = 0; i < data.size(); ++i) {
    a.push_back(data.treatment[i]);
    y.push_back(data.outcome[i]);
  }
  j["a"] = std::move(a);
  j["y"] = std::move(y);
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << j.dump();
  if (!out) throw DataError("failed writing " + path);
}

std::string to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::G: return "g";
    case EstimatorKind::IPW: return "ipw";
    case EstimatorKind::AIPW: return "aipw";
  }
  return "?";
}

EstimatorKind estimator_kind_from_string(std::string_view name) {
  if (name == "g" || name == "G") return EstimatorKind::G;
  if (name == "ipw" || name == "IPW") return EstimatorKind::IPW;
  if (name == "aipw" || name == "AIPW") return EstimatorKind::AIPW;
  throw ConfigError("unknown estimator kind '" + std::string(name) + "'");
}

}  // namespace dpcausal
