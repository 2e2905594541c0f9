#include <CLI11.hpp>
#include <iostream>

#include "dcki/app/commands.hpp"

int main(int argc, char** argv) {
  using namespace dcki::app;

  CLI::App app{"Data-collaboration analysis with kernel-based integration"};
  app.require_subcommand(1);

  std::string config_path;
  CommandOptions opts;
  std::string axis;
  std::vector<dcki::Index> values;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON experiment config")->required();
    sub->add_option("--out", opts.out, "output directory")->capture_default_str();
    sub->add_option("--jobs", opts.jobs, "concurrent trials")->check(CLI::PositiveNumber);
    sub->add_flag("--bench", opts.bench, "single-threaded kernels, no trial parallelism");
    sub->add_option("--seed-offset", opts.seed_offset, "added to the config seed");
  };
  auto* run = app.add_subcommand("run", "run every configured method over n_seed trials");
  auto* sweep = app.add_subcommand("sweep", "repeat run over one config axis");
  auto* attack = app.add_subcommand("attack", "reconstruction-attack audit");
  auto* anchors = app.add_subcommand("anchors", "write the anchor set to CSV");
  auto* bench = app.add_subcommand("bench", "fit/transform timing over bench.n_a");
  for (auto* sub : {run, sweep, attack, anchors, bench}) common(sub);
  sweep->add_option("--axis", axis, "K, n_a, n_a_smote or d_tilde");
  sweep->add_option("--values", values, "axis values")->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    const AppConfig config = load_config(config_path);
    if (run->parsed()) {
      cmd_run(config, opts);
    } else if (sweep->parsed()) {
      std::optional<SweepAxis> a;
      if (!axis.empty()) {
        a = parse_axis(axis);
        if (!a) {
          std::cerr << "error: --axis: unknown axis '" << axis << "'\n";
          return 2;
        }
      }
      std::optional<std::vector<dcki::Index>> v;
      if (!values.empty()) v = values;
      cmd_sweep(config, opts, a, v);
    } else if (attack->parsed()) {
      cmd_attack(config, opts);
    } else if (anchors->parsed()) {
      cmd_anchors(config, opts);
    } else {
      cmd_bench(config, opts);
    }
  } catch (const dcki::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == dcki::ErrorCode::kConfig ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cout << "wrote " << opts.out.string() << "\n";
  return 0;
}
