#include "axplore/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "axplore/encode.hpp"
#include "axplore/explore.hpp"
#include "axplore/model_io.hpp"
#include "axplore/oracle.hpp"

namespace axplore::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

std::string fmt_double(const char* spec, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

snn::LayerParams load_checked_model(const RunConfig& config) {
  if (config.model.empty()) {
    throw ConfigError("no model path configured");
  }
  return io::load_model(config.model);
}

void check_train_width(const snn::LayerParams& params, const std::vector<snn::SpikeTrain>& trains) {
  for (std::size_t t = 0; t < trains.size(); ++t) {
    if (trains[t].width() != params.n_inputs) {
      throw ShapeError("spike cache " + std::to_string(t) + " has width " + std::to_string(trains[t].width()) +
                       " but the model has n_inputs " + std::to_string(params.n_inputs));
    }
  }
}

}  // namespace

snn::IaOptions RunConfig::ia_options() const {
  snn::IaOptions o;
  o.thresh_cut = fixed::CutDepth{exploration.thresh_cut};
  o.reset_cut = fixed::CutDepth{exploration.reset_cut};
  return o;
}

void RunConfig::validate() const {
  if (exploration.image_count < 1) {
    throw ConfigError("image_count must be at least 1");
  }
  if (encoder.timesteps < 1) {
    throw ConfigError("timesteps must be at least 1");
  }
  if (exploration.tau && *exploration.tau < 0.0) {
    throw ConfigError("tau must be non-negative");
  }
  if (verify_samples < 1) {
    throw ConfigError("verify samples must be at least 1");
  }
  (void)ia_options();
}

RunConfig parse_config(const std::string& text, const fs::path& base) {
  RunConfig c;
  try {
    const json doc = json::parse(text);
    if (doc.contains("model")) c.model = resolve(base, doc["model"].get<std::string>());
    if (doc.contains("data_dir")) c.data_dir = resolve(base, doc["data_dir"].get<std::string>());
    if (doc.contains("images_file")) c.images_file = doc["images_file"].get<std::string>();
    if (doc.contains("labels_file")) c.labels_file = doc["labels_file"].get<std::string>();
    if (doc.contains("output_dir")) c.output_dir = resolve(base, doc["output_dir"].get<std::string>());
    if (doc.contains("trains_dir")) c.trains_dir = resolve(base, doc["trains_dir"].get<std::string>());
    if (doc.contains("verify_samples")) c.verify_samples = doc["verify_samples"].get<std::size_t>();
    if (doc.contains("encoder")) {
      const auto& e = doc["encoder"];
      if (e.contains("timesteps")) c.encoder.timesteps = e["timesteps"].get<std::size_t>();
      if (e.contains("rate_scale") && !e["rate_scale"].is_null()) c.encoder.rate_scale = e["rate_scale"].get<double>();
      if (e.contains("target_total")) c.encoder.target_total = e["target_total"].get<double>();
      if (e.contains("seed")) c.encoder.seed = e["seed"].get<std::uint64_t>();
    }
    if (doc.contains("exploration")) {
      const auto& x = doc["exploration"];
      if (x.contains("max_rounds")) c.exploration.max_rounds = x["max_rounds"].get<std::size_t>();
      if (x.contains("image_count")) c.exploration.image_count = x["image_count"].get<std::size_t>();
      if (x.contains("tau") && !x["tau"].is_null()) c.exploration.tau = x["tau"].get<double>();
      if (x.contains("thresh_cut")) c.exploration.thresh_cut = x["thresh_cut"].get<int>();
      if (x.contains("reset_cut")) c.exploration.reset_cut = x["reset_cut"].get<int>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  return c;
}

RunConfig load_config(const fs::path& path) {
  return parse_config(io::read_text(path), path.parent_path());
}

void apply_env(RunConfig& config) {
  if (const char* dir = std::getenv(kDataDirEnv); dir != nullptr && *dir != '\0') {
    config.data_dir = dir;
  }
}

fs::path train_file(const fs::path& dir, std::size_t index) {
  char name[32];
  std::snprintf(name, sizeof name, "image_%05zu.spkt", index);
  return dir / name;
}

std::vector<snn::SpikeTrain> load_trains(const RunConfig& config) {
  std::vector<snn::SpikeTrain> trains;
  for (std::size_t i = 0; i < config.exploration.image_count; ++i) {
    const fs::path p = train_file(config.trains_path(), i);
    if (!fs::exists(p)) {
      throw ConfigError("missing spike cache " + p.string() + " (run `axplore encode` first)");
    }
    trains.push_back(encode::read_cache(p));
  }
  return trains;
}

int cmd_encode(const RunConfig& config, std::ostream& log) {
  const fs::path images = config.data_dir / config.images_file;
  const fs::path labels = config.data_dir / config.labels_file;
  for (const auto& p : {images, labels}) {
    if (!fs::exists(p)) {
      throw ConfigError("missing MNIST file " + p.string() + " (set data_dir or " + kDataDirEnv + ")");
    }
  }
  const auto all = encode::load_idx(images, labels);
  if (all.size() < config.exploration.image_count) {
    throw ConfigError("requested " + std::to_string(config.exploration.image_count) + " images but " +
                      images.string() + " holds " + std::to_string(all.size()));
  }
  const std::span<const encode::Image> selected(all.data(), config.exploration.image_count);

  encode::EncoderConfig enc;
  enc.timesteps = config.encoder.timesteps;
  enc.seed = config.encoder.seed;
  if (config.encoder.rate_scale) {
    enc.rate_scale = *config.encoder.rate_scale;
  } else {
    enc.rate_scale = encode::calibrate_rate(selected, enc.timesteps, config.encoder.target_total);
    log << "calibrated rate_scale " << fmt_double("%.9g", enc.rate_scale) << " for "
        << config.encoder.target_total << " spikes per image over " << enc.timesteps << " steps\n";
  }

  const fs::path dir = config.trains_path();
  fs::create_directories(dir);
  std::ostringstream label_csv;
  label_csv << "image,label\n";
  double total = 0.0;
  for (std::size_t i = 0; i < selected.size(); ++i) {
    const auto train = encode::encode(selected[i], i, enc);
    total += static_cast<double>(train.total_spikes());
    encode::write_cache(train_file(dir, i), train);
    label_csv << i << ',' << static_cast<int>(selected[i].label) << '\n';
  }
  io::write_text(dir / "labels.csv", label_csv.str());
  log << "encoded " << selected.size() << " images, mean spikes per image "
      << fmt_double("%.2f", total / static_cast<double>(selected.size())) << '\n';
  return kExitOk;
}

int cmd_simulate(const RunConfig& config, SimMode mode, const fs::path& k_path, std::ostream& log) {
  const auto params = load_checked_model(config);
  const auto trains = load_trains(config);
  check_train_width(params, trains);
  fs::create_directories(config.output_dir);

  std::ostringstream csv;
  fs::path out;
  if (mode == SimMode::Exact) {
    csv << "image,neuron,counter\n";
    for (std::size_t t = 0; t < trains.size(); ++t) {
      const auto counters = snn::run_exact(params, trains[t]);
      for (std::size_t i = 0; i < counters.size(); ++i) {
        csv << t << ',' << i << ',' << counters[i] << '\n';
      }
    }
    out = config.output_dir / "counters_exact.csv";
  } else {
    const snn::CutMatrix k = k_path.empty() ? snn::CutMatrix(params.n_neurons, params.n_inputs)
                                            : io::load_cut_matrix(k_path);
    if (k.rows() != params.n_neurons || k.cols() != params.n_inputs) {
      throw ShapeError("k matrix shape does not match the model");
    }
    csv << "image,neuron,lo,hi\n";
    for (std::size_t t = 0; t < trains.size(); ++t) {
      const auto counters = snn::run_ia(params, k, trains[t], config.ia_options());
      for (std::size_t i = 0; i < counters.size(); ++i) {
        csv << t << ',' << i << ',' << counters[i].lo << ',' << counters[i].hi << '\n';
      }
    }
    out = config.output_dir / "counters_ia.csv";
  }
  io::write_text(out, csv.str());
  log << "wrote " << out.string() << '\n';
  return kExitOk;
}

int cmd_explore(const RunConfig& config, std::ostream& log) {
  const auto params = load_checked_model(config);
  const auto trains = load_trains(config);
  check_train_width(params, trains);

  explore::ExploreConfig ec;
  ec.max_rounds = config.exploration.max_rounds;
  ec.ia = config.ia_options();
  if (config.exploration.tau) {
    ec.tau = Interval::from_raw(0, fixed::quantize(*config.exploration.tau).raw());
  }
  const auto report = explore::explore(params, trains, ec);

  fs::create_directories(config.output_dir);
  io::write_text(config.output_dir / "report.csv", explore::report_csv(report));
  io::write_text(config.output_dir / "report.json", explore::report_json(report));
  io::write_text(config.output_dir / "k_best.txt", io::cut_matrix_text(report.final_k));
  log << "exploration " << explore::outcome_name(report.outcome) << " after " << report.rounds.size()
      << " rounds; k range [" << report.final_k.min_bits() << ", " << report.final_k.max_bits() << "]\n";
  return report.converged ? kExitOk : kExitFailure;
}

int cmd_verify(const RunConfig& config, const fs::path& k_path, std::ostream& log) {
  const auto params = load_checked_model(config);
  const auto k = io::load_cut_matrix(k_path);
  if (k.rows() != params.n_neurons || k.cols() != params.n_inputs) {
    throw ShapeError("k matrix " + std::to_string(k.rows()) + "x" + std::to_string(k.cols()) +
                     " does not match the model " + std::to_string(params.n_neurons) + "x" +
                     std::to_string(params.n_inputs));
  }
  const auto trains = load_trains(config);
  check_train_width(params, trains);

  const auto violations =
      oracle::check_containment(params, k, trains, config.verify_samples, config.encoder.seed, config.ia_options());
  const oracle::TruncationAssignment chosen{k, config.ia_options().thresh_cut, config.ia_options().reset_cut};
  std::size_t matches = 0;
  for (const auto& t : trains) {
    const auto full = snn::run_exact(params, t);
    const auto cut = oracle::run_truncated(params, chosen, t);
    matches += oracle::argmax_match(full, cut) ? 1 : 0;
  }
  fs::create_directories(config.output_dir);
  io::write_text(config.output_dir / "violations.csv", oracle::violations_csv(violations));

  const std::size_t mismatches = trains.size() - matches;
  log << "argmax match " << matches << "/" << trains.size() << " ("
      << fmt_double("%.2f", 100.0 * static_cast<double>(matches) / static_cast<double>(trains.size())) << "%), "
      << "containment violations " << violations.size() << " over " << config.verify_samples << " samples\n";
  log << (violations.empty() && mismatches == 0 ? "PASS" : "FAIL") << '\n';
  return violations.empty() && mismatches == 0 ? kExitOk : kExitFailure;
}

int cmd_report(const fs::path& report_csv, const fs::path& out_csv, std::ostream& log) {
  std::istringstream in(io::read_text(report_csv));
  std::string line;
  if (!std::getline(in, line) || line.rfind("round,neurons_involved,fraction", 0) != 0) {
    throw ConfigError(report_csv.string() + " is not an exploration report");
  }
  std::ostringstream out;
  out << "round,percent_involved\n";
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    std::istringstream ls(line);
    std::string round, involved, fraction;
    if (!std::getline(ls, round, ',') || !std::getline(ls, involved, ',') || !std::getline(ls, fraction, ',')) {
      throw ConfigError("malformed report row: " + line);
    }
    out << round << ',' << fmt_double("%.2f", 100.0 * std::stod(fraction)) << '\n';
    ++rows;
  }
  if (!out_csv.parent_path().empty()) {
    fs::create_directories(out_csv.parent_path());
  }
  io::write_text(out_csv, out.str());
  log << "wrote " << rows << " rounds to " << out_csv.string() << '\n';
  return kExitOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Interval-arithmetic precision exploration for fixed-point spiking networks", "axplore"};
  app.require_subcommand(1);

  std::string config_path;
  std::string model, data_dir, output_dir, trains_dir;
  std::optional<std::size_t> images, timesteps, max_rounds, samples;
  std::optional<std::uint64_t> seed;
  std::optional<double> target_total, rate_scale, tau;
  std::string mode = "exact";
  std::string k_path;
  std::string report_in, report_out;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_path, "JSON config file");
    sub->add_option("--model", model, "model JSON");
    sub->add_option("--out", output_dir, "output directory");
    sub->add_option("--trains-dir", trains_dir, "spike cache directory");
    sub->add_option("--images", images, "number of images");
    sub->add_option("--seed", seed, "random seed");
  };

  auto* enc = app.add_subcommand("encode", "encode MNIST images into spike-train caches");
  add_common(enc);
  enc->add_option("--data-dir", data_dir, "MNIST directory (also " + std::string(kDataDirEnv) + ")");
  enc->add_option("--timesteps", timesteps, "timesteps per image");
  enc->add_option("--target-total", target_total, "calibrate to this many spikes per image");
  enc->add_option("--rate-scale", rate_scale, "fixed spike probability per intensity unit");

  auto* sim = app.add_subcommand("simulate", "run the exact or interval simulator over cached trains");
  add_common(sim);
  sim->add_option("--mode", mode, "exact | ia")->check(CLI::IsMember({"exact", "ia"}));
  sim->add_option("--k", k_path, "cut matrix for ia mode (default all zero)");

  auto* exp = app.add_subcommand("explore", "search per-weight precision reductions");
  add_common(exp);
  exp->add_option("--max-rounds", max_rounds, "round cap");
  exp->add_option("--tau", tau, "acceptable error upper bound");

  auto* ver = app.add_subcommand("verify", "check a cut matrix against brute-force truncated runs");
  add_common(ver);
  ver->add_option("--k-best", k_path, "cut matrix file")->required();
  ver->add_option("--samples", samples, "random assignments to check");

  auto* rep = app.add_subcommand("report", "per-round percentage of neurons involved");
  rep->add_option("--input", report_in, "exploration report CSV")->required();
  rep->add_option("--output", report_out, "output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (rep->parsed()) {
      return cmd_report(report_in, report_out, err);
    }
    RunConfig config = config_path.empty() ? RunConfig{} : load_config(config_path);
    apply_env(config);
    if (!model.empty()) config.model = model;
    if (!data_dir.empty()) config.data_dir = data_dir;
    if (!output_dir.empty()) config.output_dir = output_dir;
    if (!trains_dir.empty()) config.trains_dir = trains_dir;
    if (images) config.exploration.image_count = *images;
    if (seed) config.encoder.seed = *seed;
    if (timesteps) config.encoder.timesteps = *timesteps;
    if (target_total) config.encoder.target_total = *target_total;
    if (rate_scale) config.encoder.rate_scale = *rate_scale;
    if (max_rounds) config.exploration.max_rounds = *max_rounds;
    if (tau) config.exploration.tau = *tau;
    if (samples) config.verify_samples = *samples;
    config.validate();

    if (enc->parsed()) {
      return cmd_encode(config, err);
    }
    if (sim->parsed()) {
      return cmd_simulate(config, mode == "ia" ? SimMode::Ia : SimMode::Exact, k_path, err);
    }
    if (exp->parsed()) {
      return cmd_explore(config, err);
    }
    if (ver->parsed()) {
      return cmd_verify(config, k_path, err);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace axplore::cli
