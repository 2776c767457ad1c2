#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "skm/dataset.hpp"
#include "skm/kernels.hpp"

namespace skm::cli {

/// Bad flag values or combinations found after parsing; exits with code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

/// Kernel string with an optional data-driven scale (`sigma=iqr`,
/// `beta=jaakkola`, ...). The placeholder is resolved once data is loaded.
struct KernelArg {
  enum class Rule { fixed, iqr, jaakkola };
  KernelSpec spec;
  Rule rule = Rule::fixed;

  static KernelArg parse(const std::string& text);
  KernelSpec resolve(const DataSet& data) const;
};

/// Reads a numeric CSV; a header row is detected when the first cell does
/// not start like a number.
DataSet read_table(const std::filesystem::path& path);

/// Writes to `path`, or to `fallback` when the path is empty.
void write_output(const std::string& path, const std::string& text, std::ostream& fallback);

/// One CSV column per name; every column has the same length.
struct Column {
  std::string name;
  std::vector<double> values;
};
std::string columns_csv(const std::vector<Column>& columns);

/// x0, x1, ... header for point tables.
std::vector<std::string> coordinate_header(std::size_t d);

std::vector<double> to_std(const Eigen::VectorXd& v);

}  // namespace skm::cli
