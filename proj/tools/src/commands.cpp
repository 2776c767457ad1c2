#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include <json.hpp>

#include "skm/bench_compare.hpp"
#include "skm/coefficients.hpp"
#include "skm/cpe.hpp"
#include "skm/dataio.hpp"
#include "skm/divergences.hpp"
#include "skm/errors.hpp"
#include "skm/kcenter.hpp"
#include "skm/meanshift.hpp"
#include "skm/parallel.hpp"
#include "skm/sparse_mean.hpp"
#include "skm/synthetic.hpp"

namespace skm::cli {
namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

FirstCenter parse_first(const std::string& text, std::uint64_t seed) {
  if (text.empty()) return FirstCenter::seeded(seed);
  try {
    return FirstCenter::parse(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--first: ") + e.what());
  }
}

FitOptions fit_options(const FitFlags& f, std::uint64_t seed, bool density) {
  FitOptions o;
  o.k_max = f.kmax;
  o.epsilon = f.eps;
  o.density_mode = density;
  o.first = parse_first(f.first, seed);
  return o;
}

void start_workers(const Common& c) { set_thread_count(c.threads); }

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

std::pair<double, double> parse_interval(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw UsageError("--sigma-search expects lo,hi");
  double lo = 0.0, hi = 0.0;
  try {
    std::size_t used = 0;
    lo = std::stod(text.substr(0, comma), &used);
    if (used != comma) throw std::invalid_argument(text);
    const auto rest = text.substr(comma + 1);
    hi = std::stod(rest, &used);
    if (used != rest.size()) throw std::invalid_argument(text);
  } catch (const std::exception&) {
    throw UsageError("--sigma-search: '" + text + "' is not lo,hi");
  }
  if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi)) {
    throw UsageError("--sigma-search needs 0 < lo < hi");
  }
  return {lo, hi};
}

// Held-out mixture for the bandwidth search: odd rows of each class mixed with
// Dirichlet(1) proportions, rounded to whole rows.
struct Validation {
  DataSet data;
  Eigen::VectorXd pi;
};

Validation make_validation(const std::vector<DataSet>& odd, std::uint64_t seed) {
  const std::size_t classes = odd.size();
  const Eigen::VectorXd target = dirichlet_sample(classes, 1.0, seed);
  std::size_t pool = std::numeric_limits<std::size_t>::max();
  for (const auto& s : odd) pool = std::min(pool, s.n());

  std::vector<DataSet> parts;
  Eigen::VectorXd pi = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(classes));
  for (std::size_t i = 0; i < classes; ++i) {
    const auto take = static_cast<std::size_t>(std::lround(target(static_cast<Eigen::Index>(i)) *
                                                           static_cast<double>(pool)));
    if (take == 0) continue;
    std::vector<Index> rows(odd[i].n());
    std::iota(rows.begin(), rows.end(), Index{0});
    std::mt19937_64 rng(seed + 1 + i);
    std::shuffle(rows.begin(), rows.end(), rng);
    rows.resize(take);
    parts.push_back(odd[i].subset(rows));
    pi(static_cast<Eigen::Index>(i)) = static_cast<double>(take);
  }
  if (parts.empty()) throw DataError("cpe: classes too small to build a validation mixture");
  pi /= pi.sum();
  return {DataSet::concat(parts, "validation"), pi};
}

}  // namespace

void cmd_fit(const FitArgs& a, const Common& c, Streams io) {
  KernelArg karg = KernelArg::parse(a.kernel);
  if (a.density) karg.spec.normalization = Normalization::density;
  const FitOptions opts = fit_options(a.fit, c.seed, a.density);
  start_workers(c);

  const DataSet data = read_table(a.input);
  const RadialKernel kernel(karg.resolve(data), data.d());
  const auto t0 = Clock::now();
  const SparseKernelMean mean = fit(data, kernel, opts);
  const double secs = seconds_since(t0);
  save_model(to_record(mean, a.name.empty() ? data.name() : a.name), a.out);

  io.err << "fit: n=" << data.n() << " d=" << data.d() << " k0=" << mean.size()
         << " skipped=" << mean.diagnostics.skipped.size()
         << " stopped_early=" << (mean.diagnostics.stopped_early ? "true" : "false")
         << " kernel=" << kernel.spec().to_string() << " seconds=" << secs << "\n";
}

void cmd_eval(const EvalArgs& a, const Common& c, Streams io) {
  start_workers(c);
  const SparseKernelMean mean = from_record(load_model(a.model));
  const DataSet queries = read_table(a.queries);
  if (queries.d() != mean.dim()) {
    throw DataError("queries have " + std::to_string(queries.d()) + " columns, model expects " +
                    std::to_string(mean.dim()));
  }
  const auto t0 = Clock::now();
  const Eigen::VectorXd v = evaluate(mean, queries.points());
  const double secs = seconds_since(t0);
  write_output(a.out, columns_csv({{"value", to_std(v)}}), io.out);
  io.err << "eval: queries=" << queries.n() << " k0=" << mean.size() << " seconds=" << secs << "\n";
}

void cmd_select(const SelectArgs& a, const Common& c, Streams io) {
  const FirstCenter first = parse_first(a.first, c.seed);
  start_workers(c);
  const DataSet data = read_table(a.input);
  const auto t0 = Clock::now();
  const Selection sel = kcenter_greedy(data, a.k, first);
  const double secs = seconds_since(t0);

  Column m{"m", {}}, idx{"index", {}}, rad{"radius", sel.radius_trace};
  for (std::size_t i = 0; i < sel.size(); ++i) {
    m.values.push_back(static_cast<double>(i + 1));
    idx.values.push_back(static_cast<double>(sel.order[i]));
  }
  write_output(a.out, columns_csv({m, idx, rad}), io.out);
  io.err << "select: n=" << data.n() << " k=" << sel.size() << " radius=" << sel.radius()
         << (sel.zero_radius_additions ? " (duplicates selected at zero radius)" : "")
         << " seconds=" << secs << "\n";
}

void cmd_audit(const AuditArgs& a, const Common& c, Streams io) {
  const KernelArg karg = KernelArg::parse(a.kernel);
  const FitOptions opts = fit_options(a.fit, c.seed, false);
  start_workers(c);

  const DataSet data = read_table(a.input);
  const std::size_t n = data.n();
  if (n > kAuditMaxN) {
    throw DataError("audit: n = " + std::to_string(n) + " exceeds the audit guard of " +
                    std::to_string(kAuditMaxN) + " rows");
  }
  const RadialKernel kernel(karg.resolve(data), data.d());
  const auto t0 = Clock::now();
  const SparseKernelMean mean = fit(data, kernel, opts);
  const double norm_sq = mean_norm_sq(data, kernel);
  const double cz = kernel.g_zero();

  // Residual per accepted prefix from |z_bar - z_I|^2 = |z_bar|^2 + E_m, and
  // the bound from the coverage radius of the same prefix.
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  std::vector<bool> in(n, false);
  Column m{"m", {}}, idx{"index", {}}, err{"E_m", {}}, res{"residual", {}}, bnd{"bound", {}};
  std::size_t violations = 0;
  for (std::size_t t = 0; t < mean.size(); ++t) {
    const Index s = mean.support_indices[t];
    in[s] = true;
    for (std::size_t j = 0; j < n; ++j) {
      dist[j] = std::min(dist[j], std::sqrt(squared_distance(data.row(j), data.row(s))));
    }
    double w = -1.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (!in[j]) w = std::max(w, dist[j]);
    }
    const double nu = w < 0.0 ? cz : kernel.inner_at(w);
    const double e = mean.diagnostics.error_trace[t];
    const double r = std::sqrt(std::max(0.0, norm_sq + e));
    const double b = bound_value(n, t + 1, cz, nu);
    if (r > b + 1e-9) ++violations;
    m.values.push_back(static_cast<double>(t + 1));
    idx.values.push_back(static_cast<double>(s));
    err.values.push_back(e);
    res.values.push_back(r);
    bnd.values.push_back(b);
  }
  const double direct =
      std::sqrt(std::max(0.0, residual_norm_sq(data, kernel, mean.support_indices, mean.alpha)));
  const double secs = seconds_since(t0);
  write_output(a.out, columns_csv({m, idx, err, res, bnd}), io.out);
  io.err << "audit: n=" << n << " k0=" << mean.size() << " residual_direct=" << direct
         << " residual_identity=" << res.values.back() << " bound_violations=" << violations
         << " seconds=" << secs << "\n";
}

void cmd_embed(const EmbedArgs& a, const Common& c, Streams io) {
  if (a.inputs.size() < 2) throw UsageError("embed needs at least two --inputs");
  const KernelArg karg = KernelArg::parse(a.kernel);
  DistanceOptions opts;
  try {
    opts.mode = parse_distance_mode(a.mode);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--mode: ") + e.what());
  }
  opts.sparse = a.sparse;
  opts.k_max = a.fit.kmax;
  opts.epsilon = a.fit.eps;
  opts.first = parse_first(a.fit.first, c.seed);
  start_workers(c);

  std::vector<DataSet> samples;
  for (const auto& path : a.inputs) samples.push_back(read_table(path));
  const KernelSpec spec = karg.resolve(DataSet::concat(samples));
  const DistanceMatrix dm = distance_matrix(samples, spec, opts);

  std::vector<Column> cols;
  for (std::size_t j = 0; j < dm.labels.size(); ++j) {
    Column col{dm.labels[j], {}};
    for (Eigen::Index i = 0; i < dm.values.rows(); ++i) {
      col.values.push_back(dm.values(i, static_cast<Eigen::Index>(j)));
    }
    cols.push_back(std::move(col));
  }
  write_output(a.out, columns_csv(cols), io.out);
  if (!a.json.empty()) {
    const json sidecar = {
        {"mode", to_string(dm.mode)},
        {"kernel", spec.to_string()},
        {"sparse", a.sparse},
        {"labels", dm.labels},
        {"support_sizes", dm.support_sizes},
        {"timings", {{"fit_seconds", dm.fit_seconds}, {"fill_seconds", dm.fill_seconds}}},
    };
    write_output(a.json, dump(sidecar), io.out);
  }
  io.err << "embed: samples=" << samples.size() << " mode=" << to_string(dm.mode)
         << " fit_seconds=" << dm.fit_seconds << " fill_seconds=" << dm.fill_seconds << "\n";
}

void cmd_cpe(const CpeArgs& a, const Common& c, Streams io) {
  if (a.train.size() < 2) throw UsageError("cpe needs at least two --train files");
  const KernelArg karg = KernelArg::parse(a.kernel);
  std::optional<std::pair<double, double>> interval;
  if (!a.sigma_search.empty()) interval = parse_interval(a.sigma_search);
  CpeOptions opts;
  opts.sparse = a.sparse;
  opts.k_max = a.fit.kmax;
  opts.epsilon = a.fit.eps;
  opts.first = parse_first(a.fit.first, c.seed);
  start_workers(c);

  std::vector<DataSet> train;
  for (const auto& path : a.train) train.push_back(read_table(path));
  const DataSet test = read_table(a.test);
  for (const auto& t : train) {
    if (t.d() != test.d()) throw DataError("cpe: training and test dimensions differ");
  }

  KernelSpec spec = karg.spec;
  json search = nullptr;
  double search_seconds = 0.0;
  if (a.sigma) {
    spec = spec.with_bandwidth(*a.sigma);
  } else if (interval) {
    const auto t0 = Clock::now();
    std::vector<DataSet> even, odd;
    for (const auto& t : train) {
      if (t.n() < 2) throw DataError("cpe: bandwidth search needs two rows per class");
      auto halves = split_even_odd(t);
      even.push_back(std::move(halves.even));
      odd.push_back(std::move(halves.odd));
    }
    const Validation val = make_validation(odd, c.seed);
    const ProportionModel model(even, spec.with_bandwidth(std::sqrt(interval->first * interval->second)),
                                opts);
    const BandwidthSearchResult found =
        search_bandwidth(model, val.data, val.pi, interval->first, interval->second, a.search_iter);
    spec = spec.with_bandwidth(found.bandwidth);
    search_seconds = seconds_since(t0);
    search = {{"lo", interval->first},
              {"hi", interval->second},
              {"evaluations", found.evaluations},
              {"validation_l1", found.l1}};
  } else {
    spec = karg.resolve(DataSet::concat(train));
  }

  const auto t1 = Clock::now();
  const ProportionModel model(train, spec, opts);
  const double fit_seconds = seconds_since(t1);
  const auto t2 = Clock::now();
  const ProportionEstimate est = model.estimate(test, spec.bandwidth());
  const double solve_seconds = seconds_since(t2);

  std::vector<std::string> labels;
  for (const auto& t : train) labels.push_back(t.name());
  std::vector<std::size_t> sizes;
  for (const auto& s : model.supports()) sizes.push_back(s.size());
  json doc = {
      {"pi_hat", to_std(est.pi_hat)},
      {"was_projected", est.was_projected},
      {"sigma", spec.bandwidth()},
      {"kernel", spec.to_string()},
      {"residual", est.residual},
      {"classes", labels},
      {"timings",
       {{"search_seconds", search_seconds}, {"fit_seconds", fit_seconds}, {"solve_seconds", solve_seconds}}},
  };
  if (a.sparse) doc["support_sizes"] = sizes;
  if (!search.is_null()) doc["search"] = search;
  write_output(a.out, dump(doc), io.out);
  io.err << "cpe: classes=" << train.size() << " sigma=" << spec.bandwidth()
         << " search_seconds=" << search_seconds << " fit_seconds=" << fit_seconds
         << " solve_seconds=" << solve_seconds << "\n";
}

void cmd_meanshift(const MeanshiftArgs& a, const Common& c, Streams io) {
  if (a.sigma && !(*a.sigma > 0.0)) throw UsageError("--sigma must be positive");
  if (a.merge && !(*a.merge > 0.0)) throw UsageError("--merge must be positive");
  if (a.delta && !(*a.delta >= 0.0)) throw UsageError("--delta must be nonnegative");
  if (!a.compare.empty() && a.metrics.empty()) throw UsageError("--compare needs --metrics");
  const FitOptions opts = fit_options(a.fit, c.seed, true);
  start_workers(c);

  const DataSet data = read_table(a.input);
  const double sigma = a.sigma ? *a.sigma : bandwidth_iqr(data);
  if (!(sigma > 0.0)) throw DataError("meanshift: iqr bandwidth is zero; pass --sigma");
  KernelSpec spec;
  spec.sigma = sigma;
  spec.normalization = Normalization::density;
  const RadialKernel kernel(spec, data.d());
  const double merge = a.merge ? *a.merge : sigma;

  const auto t0 = Clock::now();
  const SparseKernelMean backend = a.sparse ? fit(data, kernel, opts) : full_mean(data, kernel);
  const double fit_seconds = seconds_since(t0);

  ShiftOptions sopts;
  sopts.gamma = a.gamma;
  sopts.max_iter = a.max_iter;
  EvalCounter counter;
  const auto t1 = Clock::now();
  const ShiftResult shifted = mean_shift_all(data, backend, a.sparse ? ShiftBackend::skm : ShiftBackend::full,
                                             sopts, &counter);
  const double shift_seconds = seconds_since(t1);
  const Clustering clusters = cluster_modes(shifted.shifted, merge);

  Column labels{"label", {}};
  for (const auto l : clusters.labels) labels.values.push_back(static_cast<double>(l));
  write_output(a.out, columns_csv({labels}), io.out);
  if (!a.shifted.empty()) {
    const auto header = coordinate_header(data.d());
    write_output(a.shifted, format_csv(shifted.shifted, header), io.out);
  }

  if (!a.compare.empty()) {
    const DataSet ref = read_table(a.compare);
    if (ref.n() != data.n() || ref.d() != data.d()) {
      throw DataError("--compare table must have the same shape as --input");
    }
    const Clustering ref_clusters = cluster_modes(ref.points(), merge);
    const double delta = a.delta ? *a.delta : 3.0 * sigma;
    const json metrics = {
        {"discrepancy", discrepancy_index(shifted.shifted, ref.points(), delta)},
        {"delta", delta},
        {"hausdorff", hausdorff_clustering_distance(clusters, ref_clusters)},
        {"clusters", clusters.cluster_count()},
        {"reference_clusters", ref_clusters.cluster_count()},
        {"kernel_evaluations", counter.count()},
        {"k0", backend.size()},
    };
    write_output(a.metrics, dump(metrics), io.out);
  }

  io.err << "meanshift: n=" << data.n() << " sigma=" << sigma << " k0=" << backend.size()
         << " clusters=" << clusters.cluster_count() << " kernel_evaluations=" << counter.count()
         << " unconverged=" << shifted.unconverged << " fit_seconds=" << fit_seconds
         << " shift_seconds=" << shift_seconds << "\n";
  if (shifted.underflows > 0) {
    io.err << "meanshift: warning: " << shifted.underflows
           << " points had every kernel weight underflow; increase --sigma\n";
  }
}

void cmd_bench(const BenchArgs& a, const Common& c, Streams io) {
  const KernelArg karg = KernelArg::parse(a.kernel);
  const FirstCenter first = parse_first(a.first, c.seed);
  start_workers(c);

  const DataSet data = read_table(a.input);
  const RadialKernel kernel(karg.resolve(data), data.d());
  const std::size_t k_max = a.kmax == 0 ? default_k_max(data.n()) : a.kmax;
  if (k_max > data.n()) {
    throw DataError("bench: --kmax " + std::to_string(k_max) + " exceeds n = " + std::to_string(data.n()));
  }

  if (a.compare_random) {
    BenchOptions bo;
    bo.k_max = k_max;
    bo.epsilon = a.eps;
    bo.seeds = a.seeds;
    bo.base_seed = c.seed;
    bo.first = first;
    bo.kl_samples = a.kl_samples;
    const auto t0 = Clock::now();
    const BenchReport rep = bench_compare(data, kernel, bo);
    const double secs = seconds_since(t0);
    Column m{"m", {}};
    for (std::size_t i = 0; i < rep.greedy_curve.size(); ++i) m.values.push_back(static_cast<double>(i + 1));
    write_output(a.out, columns_csv({m, {"greedy_E", rep.greedy_curve}, {"random_E", rep.random_curve}}),
                 io.out);
    if (!a.json.empty()) {
      const json doc = {
          {"k_max", k_max},
          {"epsilon", a.eps},
          {"seeds", a.seeds},
          {"greedy_k0", rep.greedy_k0},
          {"random_mean_k", rep.random_mean_k},
          {"greedy_kl",
           {{"full_to_sparse", rep.greedy_kl.full_to_sparse}, {"sparse_to_full", rep.greedy_kl.sparse_to_full}}},
          {"random_kl",
           {{"full_to_sparse", rep.random_kl.full_to_sparse}, {"sparse_to_full", rep.random_kl.sparse_to_full}}},
      };
      write_output(a.json, dump(doc), io.out);
    }
    io.err << "bench: n=" << data.n() << " k_max=" << k_max << " seeds=" << a.seeds << " seconds=" << secs
           << "\n";
    return;
  }

  // Same lockstep as fit with the stop rule disabled, timed per accepted point.
  const auto t0 = Clock::now();
  const Index start = first.resolve(data.n());
  Selection sel = start_selection(data, start);
  CoeffState state = init_state(data, kernel, start);
  Column m{"m", {1.0}}, e{"E_m", {state.error_trace.back()}},
      ms{"wall_ms", {1e3 * seconds_since(t0)}};
  while (state.size() < k_max && !sel.complete() && sel.radius() > 0.0) {
    extend_selection_in_place(sel, data);
    if (!try_extend_state(state, data, kernel, sel.order.back())) continue;
    m.values.push_back(static_cast<double>(state.size()));
    e.values.push_back(state.error_trace.back());
    ms.values.push_back(1e3 * seconds_since(t0));
  }
  write_output(a.out, columns_csv({m, e, ms}), io.out);
  io.err << "bench: n=" << data.n() << " k=" << state.size() << " seconds=" << seconds_since(t0) << "\n";
}

void cmd_generate(const GenerateArgs& a, const Common& c, Streams io) {
  if (a.n == 0) throw UsageError("--n must be positive");
  if (a.d == 0) throw UsageError("--d must be positive");
  DataSet data;
  try {
    data = synthetic::generate(a.shape, a.n, a.d, c.seed);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("generate: ") + e.what());
  }
  write_output(a.out, format_csv(data.points(), coordinate_header(data.d())), io.out);
}

}  // namespace skm::cli
