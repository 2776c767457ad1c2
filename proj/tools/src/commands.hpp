#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cli_internal.hpp"

namespace skm::cli {

struct Common {
  std::size_t threads = 1;
  std::uint64_t seed = 0;
};

/// Flags shared by every subcommand that fits a sparse mean.
struct FitFlags {
  std::size_t kmax = 0;
  double eps = 1e-8;
  std::string first;  ///< empty: seed:<--seed>
};

struct FitArgs {
  std::string input, kernel, out, name;
  FitFlags fit;
  bool density = false;
};

struct EvalArgs {
  std::string model, queries, out;
};

struct SelectArgs {
  std::string input, first, out;
  std::size_t k = 0;
};

struct AuditArgs {
  std::string input, kernel, out;
  FitFlags fit;
};

struct EmbedArgs {
  std::vector<std::string> inputs;
  std::string kernel, mode = "rkhs", out, json;
  bool sparse = false;
  FitFlags fit{0, 1e-10, {}};
};

struct CpeArgs {
  std::vector<std::string> train;
  std::string test, kernel = "gaussian:sigma=jaakkola", out, sigma_search;
  std::optional<double> sigma;
  std::size_t search_iter = 40;
  bool sparse = false;
  FitFlags fit;
};

struct MeanshiftArgs {
  std::string input, out, shifted, compare, metrics;
  std::optional<double> sigma, merge, delta;
  double gamma = 0.0;
  std::size_t max_iter = 500;
  bool sparse = false;
  FitFlags fit;
};

struct BenchArgs {
  std::string input, kernel, out, json, first = "0";
  std::size_t kmax = 0;
  double eps = 1e-8;  ///< greedy stop rule in --compare-random mode
  bool compare_random = false;
  std::size_t seeds = 20;
  std::size_t kl_samples = 2000;
};

struct GenerateArgs {
  std::string shape = "blobs", out;
  std::size_t n = 0, d = 2;
};

/// Each command validates its flags, then sets the worker count, then reads
/// data and computes. Failures surface as exceptions mapped by run().
void cmd_fit(const FitArgs& a, const Common& c, Streams io);
void cmd_eval(const EvalArgs& a, const Common& c, Streams io);
void cmd_select(const SelectArgs& a, const Common& c, Streams io);
void cmd_audit(const AuditArgs& a, const Common& c, Streams io);
void cmd_embed(const EmbedArgs& a, const Common& c, Streams io);
void cmd_cpe(const CpeArgs& a, const Common& c, Streams io);
void cmd_meanshift(const MeanshiftArgs& a, const Common& c, Streams io);
void cmd_bench(const BenchArgs& a, const Common& c, Streams io);
void cmd_generate(const GenerateArgs& a, const Common& c, Streams io);

}  // namespace skm::cli
