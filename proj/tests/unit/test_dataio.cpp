#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "skm/dataio.hpp"
#include "skm/errors.hpp"

using namespace skm;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "skm_dataio_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string message_of(const std::string& text) {
  try {
    parse_csv(text, false, "in.csv");
  } catch (const DataError& e) {
    return e.what();
  }
  return {};
}

ModelRecord sample_record(std::size_t k, std::uint64_t seed) {
  const auto data = oracle::random_data(40, 3, seed);
  FitOptions o;
  o.k_max = k;
  o.epsilon = 0.0;
  const auto m = fit(data, RadialKernel(KernelSpec::parse("gaussian:sigma=0.7:density"), 3), o);
  return to_record(m, "sample");
}

}  // namespace

TEST(Csv, ParsesColumn) {
  const auto d = parse_csv("0\n1\n10");
  EXPECT_EQ(d.n(), 3u);
  EXPECT_EQ(d.d(), 1u);
  EXPECT_EQ(d.points()(2, 0), 10.0);
}

TEST(Csv, HeaderWhitespaceAndBlankLines) {
  const auto d = parse_csv("\xEF\xBB\xBFx,y\r\n 1.5 , -2e3\r\n\n+3,4\n", true);
  EXPECT_EQ(d.n(), 2u);
  EXPECT_EQ(d.points()(0, 1), -2000.0);
  EXPECT_EQ(d.points()(1, 0), 3.0);
}

TEST(Csv, Errors) {
  EXPECT_NE(message_of("").find("no rows"), std::string::npos);
  EXPECT_NE(message_of("1,2\na,b\n").find(":2: column 1"), std::string::npos);
  EXPECT_NE(message_of("1,2\n3\n").find("expected 2 columns"), std::string::npos);
  EXPECT_NE(message_of("1,nan\n").find("column 2"), std::string::npos);
  EXPECT_NE(message_of("1,inf\n").find("column 2"), std::string::npos);
  EXPECT_NE(message_of("1,\n").find("column 2"), std::string::npos);
  EXPECT_THROW(load_csv(scratch("missing.csv") / "nope"), DataError);
}

TEST(Csv, RoundTripRandomMatrices) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> mag(-300, 300);
  std::uniform_real_distribution<double> mant(-1, 1);
  for (int rep = 0; rep < 25; ++rep) {
    PointMatrix x(1 + rng() % 20, 1 + rng() % 6);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = mant(rng) * std::pow(10.0, mag(rng));
    x(0, 0) = std::numeric_limits<double>::denorm_min();
    const DataSet d(x);
    const auto path = scratch("rt.csv");
    const std::vector<std::string> header(x.cols(), "c");
    save_csv(d, path, header);
    EXPECT_EQ(load_csv(path, true), d);
    EXPECT_EQ(parse_csv(format_csv(x)), d);
  }
}

TEST(Model, RoundTripK5) {
  const auto r = sample_record(5, 1);
  EXPECT_EQ(r.k0, 5u);
  const auto path = scratch("m.json");
  save_model(r, path);
  EXPECT_EQ(load_model(path), r);
  const auto back = from_record(load_model(path));
  EXPECT_EQ(back.alpha, r.alpha);
  EXPECT_EQ(back.kernel, RadialKernel(r.kernel, 3));
}

TEST(Model, RoundTripRandomRecords) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  for (int rep = 0; rep < 30; ++rep) {
    ModelRecord r;
    const char* kernels[] = {"gaussian:sigma=0.31:unit:rkhs", "laplacian:gamma=2:density:rkhs",
                             "cauchy:beta=0.125:density:l2", "student:alpha=3.5,beta=1e-3:unit:rkhs"};
    r.kernel = KernelSpec::parse(kernels[rep % 4]);
    r.dim = 1 + rng() % 4;
    r.k0 = 1 + rng() % 7;
    r.support.resize(Eigen::Index(r.k0), Eigen::Index(r.dim));
    for (Eigen::Index i = 0; i < r.support.size(); ++i) r.support.data()[i] = g(rng) * 1e5;
    r.alpha.resize(Eigen::Index(r.k0));
    for (auto& a : r.alpha) a = g(rng) / 3.0;
    for (std::size_t i = 0; i < r.k0; ++i) r.support_indices.push_back(rng() % 1000);
    r.k_max = r.k0 + rng() % 5;
    r.epsilon = std::abs(g(rng)) * 1e-9;
    r.density_projected = rep % 2;
    for (std::size_t i = 0; i < r.k0; ++i) r.error_trace.push_back(-std::abs(g(rng)));
    r.name = "rec" + std::to_string(rep);
    EXPECT_EQ(deserialize_model(serialize_model(r)), r);
  }
}

TEST(Model, CorruptedInputs) {
  const auto r = sample_record(4, 2);
  auto text = serialize_model(r);

  auto bad = r;
  bad.alpha.conservativeResize(3);
  EXPECT_THROW(serialize_model(bad), DataError);

  auto replace = [&](const std::string& from, const std::string& to) {
    auto t = text;
    const auto pos = t.find(from);
    EXPECT_NE(pos, std::string::npos) << from;
    return t.replace(pos, from.size(), to);
  };
  EXPECT_THROW(deserialize_model(replace("\"format_version\": 1", "\"format_version\": 7")), VersionError);
  EXPECT_THROW(deserialize_model(replace("\"alpha\": [", "\"alpha\": [0.5,")), DataError);
  EXPECT_THROW(deserialize_model(replace("\"kernel\": \"gaussian", "\"kernel\": \"gauss")), DataError);
  EXPECT_THROW(deserialize_model(replace("\"dim\": 3", "\"dim\": 2")), DataError);
  EXPECT_THROW(deserialize_model("{not json"), DataError);
  EXPECT_THROW(deserialize_model("{\"format_version\": 1}"), DataError);
}

TEST(DataSetType, Invariants) {
  EXPECT_THROW(DataSet(PointMatrix(0, 2)), DataError);
  EXPECT_THROW(DataSet(PointMatrix(2, 0)), DataError);
  PointMatrix x = PointMatrix::Zero(2, 2);
  x(1, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(DataSet{x}, DataError);

  const auto d = oracle::random_data(5, 2, 0);
  const auto split = split_even_odd(d);
  EXPECT_EQ(split.even.n(), 3u);
  EXPECT_EQ(split.odd.n(), 2u);
  EXPECT_EQ(split.odd.points().row(1), d.points().row(3));
  const std::vector<Index> rows{4, 0};
  EXPECT_EQ(d.subset(rows).points().row(0), d.points().row(4));
}
