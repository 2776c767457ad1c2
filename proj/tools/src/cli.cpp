#include "skm/cli.hpp"

#include <functional>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "skm/errors.hpp"

namespace skm::cli {
namespace {

void add_fit_flags(CLI::App* sub, FitFlags& f) {
  sub->add_option("--kmax", f.kmax, "Sparsity budget; 0 selects floor(3 sqrt(n))")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--eps", f.eps, "Stop-rule tolerance")->check(CLI::NonNegativeNumber)->capture_default_str();
  sub->add_option("--first", f.first, "First center: <index> or seed:<s> (default seed:<--seed>)");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse kernel means: fit, evaluate and apply greedy sparse KDEs/KMEs", "skm"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", "skm 0.1.0");

  Common common;
  app.add_option("--threads", common.threads, "Worker threads (env SKM_THREADS)")
      ->envname("SKM_THREADS")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1024}))
      ->capture_default_str();
  app.add_option("--seed", common.seed, "Seed for every random choice")->capture_default_str();

  std::function<void()> action;
  const Streams io{out, err};

  FitArgs fit;
  auto* s_fit = app.add_subcommand("fit", "Fit a sparse kernel mean and write a model file");
  s_fit->add_option("--input", fit.input, "Training CSV")->required();
  s_fit->add_option("--kernel", fit.kernel, "Kernel spec, e.g. gaussian:sigma=1:density:rkhs")->required();
  s_fit->add_flag("--density", fit.density, "Density normalization and simplex-projected weights");
  s_fit->add_option("--out", fit.out, "Model JSON path")->required();
  s_fit->add_option("--name", fit.name, "Name stored in the model (default: input file stem)");
  add_fit_flags(s_fit, fit.fit);
  s_fit->callback([&] { action = [&] { cmd_fit(fit, common, io); }; });

  EvalArgs ev;
  auto* s_eval = app.add_subcommand("eval", "Evaluate a model at query points");
  s_eval->add_option("--model", ev.model, "Model JSON")->required();
  s_eval->add_option("--queries", ev.queries, "Query CSV")->required();
  s_eval->add_option("--out", ev.out, "Output CSV (default stdout)");
  s_eval->callback([&] { action = [&] { cmd_eval(ev, common, io); }; });

  SelectArgs sel;
  auto* s_sel = app.add_subcommand("select", "Greedy k-center order and radius trace");
  s_sel->add_option("--input", sel.input, "Input CSV")->required();
  s_sel->add_option("--k", sel.k, "Number of centers")->required()->check(CLI::PositiveNumber);
  s_sel->add_option("--first", sel.first, "First center: <index> or seed:<s> (default seed:<--seed>)");
  s_sel->add_option("--out", sel.out, "Output CSV (default stdout)");
  s_sel->callback([&] { action = [&] { cmd_select(sel, common, io); }; });

  AuditArgs au;
  auto* s_audit = app.add_subcommand("audit", "Residual norm against the approximation bound per prefix");
  s_audit->add_option("--input", au.input, "Input CSV")->required();
  s_audit->add_option("--kernel", au.kernel, "Kernel spec")->required();
  s_audit->add_option("--out", au.out, "Output CSV (default stdout)");
  add_fit_flags(s_audit, au.fit);
  s_audit->callback([&] { action = [&] { cmd_audit(au, common, io); }; });

  EmbedArgs em;
  auto* s_embed = app.add_subcommand("embed", "Pairwise distance matrix between samples");
  s_embed->add_option("--inputs", em.inputs, "One CSV per sample")->required()->expected(2, -1);
  s_embed->add_option("--kernel", em.kernel, "Kernel spec")->required();
  s_embed->add_option("--mode", em.mode, "rkhs or symkl")->capture_default_str();
  s_embed->add_flag("--sparse", em.sparse, "Use sparse kernel means");
  s_embed->add_option("--out", em.out, "Matrix CSV (default stdout)");
  s_embed->add_option("--json", em.json, "Sidecar JSON with support sizes and timings");
  add_fit_flags(s_embed, em.fit);
  s_embed->callback([&] { action = [&] { cmd_embed(em, common, io); }; });

  CpeArgs cp;
  auto* s_cpe = app.add_subcommand("cpe", "Class proportion estimation");
  s_cpe->add_option("--train", cp.train, "One CSV per class")->required()->expected(2, -1);
  s_cpe->add_option("--test", cp.test, "Unlabelled test CSV")->required();
  s_cpe->add_option("--kernel", cp.kernel, "Kernel spec")->capture_default_str();
  s_cpe->add_flag("--sparse", cp.sparse, "Sparse class means");
  auto* o_sigma = s_cpe->add_option("--sigma", cp.sigma, "Fixed bandwidth")->check(CLI::PositiveNumber);
  auto* o_search = s_cpe->add_option("--sigma-search", cp.sigma_search, "Search interval lo,hi");
  o_sigma->excludes(o_search);
  s_cpe->add_option("--search-iter", cp.search_iter, "Golden-section iterations")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  s_cpe->add_option("--out", cp.out, "Result JSON (default stdout)");
  add_fit_flags(s_cpe, cp.fit);
  s_cpe->callback([&] { action = [&] { cmd_cpe(cp, common, io); }; });

  MeanshiftArgs ms;
  auto* s_ms = app.add_subcommand("meanshift", "Gaussian mean-shift clustering");
  s_ms->add_option("--input", ms.input, "Feature CSV")->required();
  s_ms->add_option("--sigma", ms.sigma, "Bandwidth (default: iqr rule)");
  s_ms->add_option("--gamma", ms.gamma, "Convergence step; 0 selects 1e-3 sigma")->check(CLI::NonNegativeNumber);
  s_ms->add_option("--merge", ms.merge, "Mode merge distance (default sigma)");
  s_ms->add_option("--max-iter", ms.max_iter, "Iteration cap per point")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  s_ms->add_flag("--sparse", ms.sparse, "Sparse backend");
  s_ms->add_option("--out", ms.out, "Labels CSV (default stdout)");
  s_ms->add_option("--shifted", ms.shifted, "Write shifted points to this CSV");
  s_ms->add_option("--compare", ms.compare, "Reference shifted points CSV");
  s_ms->add_option("--delta", ms.delta, "Discrepancy threshold (default 3 sigma)");
  s_ms->add_option("--metrics", ms.metrics, "Metrics JSON path (with --compare)");
  add_fit_flags(s_ms, ms.fit);
  s_ms->callback([&] { action = [&] { cmd_meanshift(ms, common, io); }; });

  BenchArgs be;
  auto* s_bench = app.add_subcommand("bench", "Error indicator curve against support size");
  s_bench->add_option("--input", be.input, "Input CSV")->required();
  s_bench->add_option("--kernel", be.kernel, "Kernel spec")->required();
  s_bench->add_option("--kmax", be.kmax, "Largest support; 0 selects floor(3 sqrt(n))")
      ->check(CLI::NonNegativeNumber);
  s_bench->add_option("--first", be.first, "First center: <index> or seed:<s>")->capture_default_str();
  s_bench->add_flag("--compare-random", be.compare_random, "Add uniformly random supports and KL terms");
  s_bench->add_option("--eps", be.eps, "Greedy stop rule with --compare-random; 0 runs to --kmax")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  s_bench->add_option("--seeds", be.seeds, "Random supports to average")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  s_bench->add_option("--kl-samples", be.kl_samples, "Monte Carlo draws per KL term")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  s_bench->add_option("--out", be.out, "Curve CSV (default stdout)");
  s_bench->add_option("--json", be.json, "KL summary JSON (with --compare-random)");
  s_bench->callback([&] { action = [&] { cmd_bench(be, common, io); }; });

  GenerateArgs ge;
  auto* s_gen = app.add_subcommand("generate", "Synthetic data set");
  s_gen->add_option("--shape", ge.shape, "blobs, gaussian, banana, moons or ring")->capture_default_str();
  s_gen->add_option("--n", ge.n, "Rows")->required()->check(CLI::PositiveNumber);
  s_gen->add_option("--d", ge.d, "Columns")->check(CLI::PositiveNumber)->capture_default_str();
  s_gen->add_option("--out", ge.out, "Output CSV (default stdout)");
  s_gen->callback([&] { action = [&] { cmd_generate(ge, common, io); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    action();
  } catch (const UsageError& e) {
    err << "skm: usage: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "skm: error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

int run(int argc, const char* const* argv) { return run(argc, argv, std::cout, std::cerr); }

}  // namespace skm::cli
