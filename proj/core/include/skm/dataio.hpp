#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "skm/dataset.hpp"
#include "skm/kernels.hpp"
#include "skm/sparse_mean.hpp"

namespace skm {

/// Reads a comma-separated numeric table. Every row must have the same column
/// count and every cell must parse as a finite double; errors name the 1-based
/// line and column.
DataSet load_csv(const std::filesystem::path& path, bool has_header = false);
DataSet parse_csv(std::string_view text, bool has_header = false, std::string name = {});

/// Writes points with shortest round-trip float formatting, so that
/// load_csv(save_csv(D)) == D bit for bit.
void save_csv(const DataSet& data, const std::filesystem::path& path,
              std::span<const std::string> header = {});
std::string format_csv(const PointMatrix& values, std::span<const std::string> header = {});

/// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

/// Serialized form of a fitted sparse kernel mean.
struct ModelRecord {
  KernelSpec kernel;
  std::size_t dim = 0;
  PointMatrix support;
  Eigen::VectorXd alpha;
  std::vector<Index> support_indices;
  std::size_t k0 = 0;
  std::size_t k_max = 0;
  double epsilon = 0.0;
  bool density_projected = false;
  std::vector<double> error_trace;
  std::string name;

  friend bool operator==(const ModelRecord& a, const ModelRecord& b);
};

inline constexpr int kModelFormatVersion = 1;

void check_invariants(const ModelRecord& record);

std::string serialize_model(const ModelRecord& record);
ModelRecord deserialize_model(std::string_view text);

void save_model(const ModelRecord& record, const std::filesystem::path& path);
ModelRecord load_model(const std::filesystem::path& path);

ModelRecord to_record(const SparseKernelMean& mean, std::string name = {});
SparseKernelMean from_record(const ModelRecord& record);

}  // namespace skm
