#include "skm/dataio.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "skm/errors.hpp"

namespace skm {
namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string where(const std::string& name, std::size_t line) {
  return (name.empty() ? std::string("csv") : name) + ":" + std::to_string(line);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw DataError("failed reading '" + path.string() + "'");
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

template <typename T>
T required(const json& doc, const char* key) {
  if (!doc.contains(key)) throw DataError(std::string("model file: missing field '") + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw DataError(std::string("model file: field '") + key + "' has the wrong type: " + e.what());
  }
}

}  // namespace

DataSet parse_csv(std::string_view text, bool has_header, std::string name) {
  std::vector<double> values;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  bool header_pending = has_header;

  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    const auto raw = text.substr(start, nl == std::string_view::npos ? text.size() - start : nl - start);
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    auto line = trim(raw);
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line = trim(line.substr(3));
    if (line.empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }

    std::size_t col = 0;
    std::size_t cell_start = 0;
    while (true) {
      const auto comma = line.find(',', cell_start);
      auto cell = trim(line.substr(cell_start, comma == std::string_view::npos ? line.size() - cell_start
                                                                                 : comma - cell_start));
      ++col;
      if (cell.starts_with('+')) cell.remove_prefix(1);
      double v = 0.0;
      const auto* end = cell.data() + cell.size();
      const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
      if (cell.empty() || ec != std::errc{} || ptr != end) {
        throw DataError(where(name, line_no) + ": column " + std::to_string(col) + ": '" +
                        std::string(cell) + "' is not a number");
      }
      if (!std::isfinite(v)) {
        throw DataError(where(name, line_no) + ": column " + std::to_string(col) +
                        ": non-finite value");
      }
      values.push_back(v);
      if (comma == std::string_view::npos) break;
      cell_start = comma + 1;
    }
    if (rows == 0) {
      cols = col;
    } else if (col != cols) {
      throw DataError(where(name, line_no) + ": expected " + std::to_string(cols) +
                      " columns, found " + std::to_string(col));
    }
    ++rows;
  }
  if (rows == 0) throw DataError((name.empty() ? std::string("csv") : name) + ": no rows");

  PointMatrix points(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  std::copy(values.begin(), values.end(), points.data());
  return DataSet(std::move(points), std::move(name));
}

DataSet load_csv(const std::filesystem::path& path, bool has_header) {
  return parse_csv(read_file(path), has_header, path.string());
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, ptr);
}

std::string format_csv(const PointMatrix& values, std::span<const std::string> header) {
  std::string out;
  if (!header.empty()) {
    for (std::size_t j = 0; j < header.size(); ++j) {
      if (j) out += ',';
      out += header[j];
    }
    out += '\n';
  }
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      if (j) out += ',';
      out += format_double(values(i, j));
    }
    out += '\n';
  }
  return out;
}

void save_csv(const DataSet& data, const std::filesystem::path& path,
              std::span<const std::string> header) {
  write_file(path, format_csv(data.points(), header));
}

bool operator==(const ModelRecord& a, const ModelRecord& b) {
  auto same_matrix = [](const auto& x, const auto& y) {
    return x.rows() == y.rows() && x.cols() == y.cols() && x == y;
  };
  return a.kernel == b.kernel && a.dim == b.dim && same_matrix(a.support, b.support) &&
         same_matrix(a.alpha, b.alpha) && a.support_indices == b.support_indices &&
         a.k0 == b.k0 && a.k_max == b.k_max && a.epsilon == b.epsilon &&
         a.density_projected == b.density_projected && a.error_trace == b.error_trace &&
         a.name == b.name;
}

void check_invariants(const ModelRecord& r) {
  if (r.dim < 1) throw DataError("model: dimension must be at least 1");
  if (r.alpha.size() < 1) throw DataError("model: empty support");
  if (r.alpha.size() != r.support.rows()) {
    throw DataError("model: alpha has " + std::to_string(r.alpha.size()) + " entries but support has " +
                    std::to_string(r.support.rows()) + " rows");
  }
  if (static_cast<std::size_t>(r.support.cols()) != r.dim) {
    throw DataError("model: support rows do not have the declared dimension");
  }
  if (r.k0 != static_cast<std::size_t>(r.alpha.size())) {
    throw DataError("model: k0 does not match the support size");
  }
  if (!r.support_indices.empty() && r.support_indices.size() != r.k0) {
    throw DataError("model: support_indices length does not match the support size");
  }
  if (!r.support.allFinite() || !r.alpha.allFinite() || !std::isfinite(r.epsilon)) {
    throw DataError("model: non-finite value");
  }
  try {
    RadialKernel(r.kernel, r.dim);
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("model: invalid kernel: ") + e.what());
  }
}

std::string serialize_model(const ModelRecord& r) {
  check_invariants(r);
  json support = json::array();
  for (Eigen::Index i = 0; i < r.support.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < r.support.cols(); ++j) row.push_back(r.support(i, j));
    support.push_back(std::move(row));
  }
  json doc = {
      {"format", "skm-model"},
      {"format_version", kModelFormatVersion},
      {"name", r.name},
      {"kernel", r.kernel.to_string()},
      {"dim", r.dim},
      {"k0", r.k0},
      {"k_max", r.k_max},
      {"epsilon", r.epsilon},
      {"density_projected", r.density_projected},
      {"support_indices", r.support_indices},
      {"alpha", std::vector<double>(r.alpha.data(), r.alpha.data() + r.alpha.size())},
      {"support", std::move(support)},
      {"error_trace", r.error_trace},
  };
  return doc.dump(2) + "\n";
}

ModelRecord deserialize_model(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("model file: not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw DataError("model file: top level must be an object");
  const int version = required<int>(doc, "format_version");
  if (version != kModelFormatVersion) {
    throw VersionError("model file: format_version " + std::to_string(version) +
                       " is not supported (expected " + std::to_string(kModelFormatVersion) + ")");
  }

  ModelRecord r;
  try {
    r.kernel = KernelSpec::parse(required<std::string>(doc, "kernel"));
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("model file: ") + e.what());
  }
  r.name = doc.value("name", std::string{});
  r.dim = required<std::size_t>(doc, "dim");
  r.k0 = required<std::size_t>(doc, "k0");
  r.k_max = required<std::size_t>(doc, "k_max");
  r.epsilon = required<double>(doc, "epsilon");
  r.density_projected = required<bool>(doc, "density_projected");
  r.support_indices = required<std::vector<Index>>(doc, "support_indices");
  r.error_trace = required<std::vector<double>>(doc, "error_trace");

  const auto alpha = required<std::vector<double>>(doc, "alpha");
  r.alpha = Eigen::Map<const Eigen::VectorXd>(alpha.data(), static_cast<Eigen::Index>(alpha.size()));

  const auto rows = required<std::vector<std::vector<double>>>(doc, "support");
  r.support.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(r.dim));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != r.dim) {
      throw DataError("model file: support row " + std::to_string(i) + " has " +
                      std::to_string(rows[i].size()) + " coordinates, expected " + std::to_string(r.dim));
    }
    for (std::size_t j = 0; j < r.dim; ++j) {
      r.support(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  check_invariants(r);
  return r;
}

void save_model(const ModelRecord& record, const std::filesystem::path& path) {
  write_file(path, serialize_model(record));
}

ModelRecord load_model(const std::filesystem::path& path) {
  return deserialize_model(read_file(path));
}

ModelRecord to_record(const SparseKernelMean& mean, std::string name) {
  ModelRecord r;
  r.kernel = mean.kernel.spec();
  r.dim = mean.dim();
  r.support = mean.support;
  r.alpha = mean.alpha;
  r.support_indices = mean.support_indices;
  r.k0 = mean.size();
  r.k_max = mean.diagnostics.k_max;
  r.epsilon = mean.diagnostics.epsilon;
  r.density_projected = mean.diagnostics.density_projected;
  r.error_trace = mean.diagnostics.error_trace;
  r.name = std::move(name);
  return r;
}

SparseKernelMean from_record(const ModelRecord& r) {
  check_invariants(r);
  SparseKernelMean m{RadialKernel(r.kernel, r.dim), r.support, r.alpha, r.support_indices, {}};
  m.diagnostics.error_trace = r.error_trace;
  m.diagnostics.k_max = r.k_max;
  m.diagnostics.epsilon = r.epsilon;
  m.diagnostics.density_projected = r.density_projected;
  return m;
}

}  // namespace skm
