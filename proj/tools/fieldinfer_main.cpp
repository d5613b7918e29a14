#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fieldinfer.h"
#include "json.hpp"

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void die(int code, const std::string& msg) {
  std::fprintf(stderr, "error: %s\n", msg.c_str());
  std::exit(code);
}

[[noreturn]] void die_api(int code) { die(code, fi_last_error()); }

void check(int rc) {
  if (rc != FI_OK) die_api(rc);
}

void check_input(const std::string& path) {
  if (!std::filesystem::exists(path)) die(2, "input not found: " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) die(3, "cannot read " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  if (in.bad()) die(3, "cannot read " + path);
  return text;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) die(3, "cannot write " + path);
}

std::string fnv64_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) die(3, "cannot read " + path);
  uint64_t h = 1469598103934665603ull;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof(buf));
    std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; i++) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
  }
  char hex[32];
  std::snprintf(hex, sizeof(hex), "fnv64:%016llx",
                static_cast<unsigned long long>(h));
  return hex;
}

struct Timer {
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  }
};

// Reproducibility sidecar next to every output file. wall_clock_seconds is the
// only non-deterministic entry.
void write_manifest(const std::string& output, const std::string& command,
                    ordered_json config, const std::vector<std::string>& inputs,
                    double wall_clock) {
  ordered_json j;
  j["schema"] = "run-manifest/1";
  j["command"] = command;
  j["config"] = std::move(config);
  ordered_json sums = ordered_json::object();
  for (const std::string& p : inputs) sums[p] = fnv64_hex(p);
  j["inputs"] = std::move(sums);
  j["versions"]["fieldinfer"] = fi_version();
  j["wall_clock_seconds"] = wall_clock;
  write_text(output + ".manifest.json", j.dump(2) + "\n");
}

struct CiOptions {
  std::string input, output;
  int k = 10;
  double b = 2.0;
  int grid = 20;
  double alpha = 0.05;
  int replicates = 1000;
  std::string mode = "homogeneous";
  uint64_t seed = 0;
  int threads = 1;
  std::string kernel_g = "quartic", kernel_k = "gaussian";
  int k_max = 20;
};

void add_ci_options(CLI::App* sub, CiOptions& o, bool with_bootstrap) {
  sub->add_option("-i,--input", o.input, "observed field (CSV)")->required();
  sub->add_option("-o,--output", o.output, "result file")->required();
  sub->add_option("--k", o.k, "smoothing bandwidth, 0 = cross-validated")
      ->capture_default_str();
  sub->add_option("--kernel-g", o.kernel_g, "smoothing kernel")
      ->check(CLI::IsMember({"quartic", "triangular", "uniform"}))
      ->capture_default_str();
  if (!with_bootstrap) return;
  sub->add_option("--b", o.b, "variance bandwidth, 0 = block-matched")
      ->capture_default_str();
  sub->add_option("--grid", o.grid, "confidence positions per axis")
      ->capture_default_str();
  sub->add_option("--alpha", o.alpha, "simultaneous level is 1-alpha")
      ->capture_default_str();
  sub->add_option("--replicates", o.replicates, "bootstrap replicates")
      ->capture_default_str();
  sub->add_option("--mode", o.mode, "variance normalization")
      ->check(CLI::IsMember({"homogeneous", "heterogeneous"}))
      ->capture_default_str();
  sub->add_option("--seed", o.seed, "bootstrap seed")->capture_default_str();
  sub->add_option("--threads", o.threads, "worker threads")
      ->envname("FIELDINFER_THREADS")
      ->capture_default_str();
  sub->add_option("--kernel-k", o.kernel_k, "variance kernel")
      ->check(CLI::IsMember({"gaussian"}))
      ->capture_default_str();
  sub->add_option("--k-max", o.k_max, "cross-validation search bound")
      ->capture_default_str();
}

fi_ci_config to_ci_config(const CiOptions& o) {
  fi_ci_config cfg;
  fi_ci_config_init(&cfg);
  cfg.k = o.k;
  cfg.b = o.b;
  cfg.grid = o.grid;
  cfg.alpha = o.alpha;
  cfg.replicates = o.replicates;
  cfg.mode =
      o.mode == "heterogeneous" ? FI_TAU_HETEROGENEOUS : FI_TAU_HOMOGENEOUS;
  cfg.seed = o.seed;
  cfg.threads = o.threads;
  cfg.kernel_g = o.kernel_g.c_str();
  cfg.kernel_k = o.kernel_k.c_str();
  cfg.k_max = o.k_max;
  return cfg;
}

ordered_json ci_manifest_config(const CiOptions& o, const fi_result* result) {
  ordered_json c;
  c["k"] = fi_result_k(result);
  c["b"] = fi_result_b(result);
  c["grid"] = o.grid;
  c["alpha"] = o.alpha;
  c["replicates"] = o.replicates;
  c["mode"] = o.mode;
  c["seed"] = o.seed;
  c["threads"] = o.threads;
  c["kernel_g"] = o.kernel_g;
  c["kernel_k"] = o.kernel_k;
  return c;
}

void write_result(const fi_result* result, const std::string& path) {
  char* json = nullptr;
  check(fi_result_to_json(result, &json));
  write_text(path, json);
  fi_string_free(json);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simultaneous inference for means of non-stationary lattice "
               "fields"};
  app.require_subcommand(1);
  app.set_version_flag("--version", fi_version());

  CiOptions est;
  CLI::App* sub_estimate = app.add_subcommand(
      "estimate", "Local mean surface over the interior lattice");
  add_ci_options(sub_estimate, est, false);

  CiOptions ci;
  CLI::App* sub_ci = app.add_subcommand(
      "ci", "Simultaneous confidence bands on a position grid");
  add_ci_options(sub_ci, ci, true);

  CiOptions tst;
  std::string mu0_path;
  CLI::App* sub_test =
      app.add_subcommand("test", "Test a hypothesized mean surface");
  add_ci_options(sub_test, tst, true);
  sub_test->add_option("--mu0", mu0_path,
                       "hypothesized means, grid×grid CSV (default: zero)");

  std::string sel_input, sel_output;
  int sel_k_max = 20, sel_blocks = 15, sel_replicates = 200;
  double sel_pilot = 5.0, sel_q = 0.1;
  uint64_t sel_seed = 0;
  std::string sel_kernel_g = "quartic", sel_kernel_k = "gaussian";
  CLI::App* sub_select = app.add_subcommand(
      "select-bandwidth", "Data-driven smoothing and variance bandwidths");
  sub_select->add_option("-i,--input", sel_input, "observed field (CSV)")
      ->required();
  sub_select->add_option("-o,--output", sel_output, "report file")->required();
  sub_select->add_option("--k-max", sel_k_max, "cross-validation search bound")
      ->capture_default_str();
  sub_select->add_option("--pilot-b", sel_pilot, "pilot variance bandwidth")
      ->capture_default_str();
  sub_select->add_option("--blocks", sel_blocks, "blocks matched per candidate")
      ->capture_default_str();
  sub_select
      ->add_option("--replicates", sel_replicates,
                   "bootstrap replicates per variance estimate")
      ->capture_default_str();
  sub_select->add_option("--q", sel_q, "block side fraction")
      ->capture_default_str();
  sub_select->add_option("--seed", sel_seed, "block sampling seed")
      ->capture_default_str();
  sub_select->add_option("--kernel-g", sel_kernel_g, "smoothing kernel")
      ->check(CLI::IsMember({"quartic", "triangular", "uniform"}))
      ->capture_default_str();
  sub_select->add_option("--kernel-k", sel_kernel_k, "variance kernel")
      ->check(CLI::IsMember({"gaussian"}))
      ->capture_default_str();

  std::string sim_mean = "elliptical", sim_noise = "ar", sim_output;
  int sim_rows = 200, sim_cols = 200;
  uint64_t sim_seed = 0;
  double disc_height = 0.3, disc_radius = 0.1, disc_cx = 0.5, disc_cy = 0.5;
  CLI::App* sub_simulate =
      app.add_subcommand("simulate", "Draw a synthetic observed field");
  sub_simulate->add_option("-o,--output", sim_output, "field file (CSV)")
      ->required();
  sub_simulate->add_option("--mean", sim_mean, "mean surface")
      ->check(CLI::IsMember({"zero", "elliptical", "sinusoidal", "disc"}))
      ->capture_default_str();
  sub_simulate->add_option("--noise", sim_noise, "error field")
      ->check(CLI::IsMember({"iid", "ar", "ma"}))
      ->capture_default_str();
  sub_simulate->add_option("--rows", sim_rows, "lattice rows")
      ->capture_default_str();
  sub_simulate->add_option("--cols", sim_cols, "lattice columns")
      ->capture_default_str();
  sub_simulate->add_option("--seed", sim_seed, "noise seed")
      ->capture_default_str();
  sub_simulate->add_option("--disc-height", disc_height, "disc bump height")
      ->capture_default_str();
  sub_simulate->add_option("--disc-radius", disc_radius, "disc bump radius")
      ->capture_default_str();
  sub_simulate->add_option("--disc-cx", disc_cx, "disc centre x")
      ->capture_default_str();
  sub_simulate->add_option("--disc-cy", disc_cy, "disc centre y")
      ->capture_default_str();

  std::string study_config, study_output;
  CLI::App* sub_study = app.add_subcommand(
      "study", "Coverage or size/power simulation study (CSV table)");
  sub_study->add_option("-c,--config", study_config, "study description (JSON)")
      ->required();
  sub_study->add_option("-o,--output", study_output, "table file (CSV)")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  Timer timer;

  if (*sub_estimate) {
    check_input(est.input);
    fi_field* field = nullptr;
    check(fi_field_load_csv(est.input.c_str(), &field));
    fi_field* surface = nullptr;
    check(fi_nw_surface(field, est.k, est.kernel_g.c_str(), &surface));
    check(fi_field_save_csv(surface, est.output.c_str()));
    ordered_json c;
    c["k"] = est.k;
    c["kernel_g"] = est.kernel_g;
    write_manifest(est.output, "estimate", std::move(c), {est.input},
                   timer.seconds());
    fi_field_free(surface);
    fi_field_free(field);
    return 0;
  }

  if (*sub_ci || *sub_test) {
    CiOptions& o = *sub_ci ? ci : tst;
    check_input(o.input);
    std::vector<std::string> inputs = {o.input};
    fi_field* field = nullptr;
    check(fi_field_load_csv(o.input.c_str(), &field));
    fi_ci_config cfg = to_ci_config(o);
    fi_result* result = nullptr;
    if (*sub_ci) {
      check(fi_ci_run(field, &cfg, &result));
    } else {
      std::vector<double> mu0;
      if (!mu0_path.empty()) {
        check_input(mu0_path);
        inputs.push_back(mu0_path);
        fi_field* hyp = nullptr;
        check(fi_field_load_csv(mu0_path.c_str(), &hyp));
        if (fi_field_rows(hyp) != o.grid || fi_field_cols(hyp) != o.grid)
          die(2, "--mu0 must be a " + std::to_string(o.grid) + "x" +
                     std::to_string(o.grid) + " grid");
        const double* data = fi_field_data(hyp);
        mu0.assign(data, data + static_cast<size_t>(o.grid) * o.grid);
        fi_field_free(hyp);
      }
      check(fi_test_run(field, &cfg, mu0.empty() ? nullptr : mu0.data(),
                        &result));
    }
    write_result(result, o.output);
    ordered_json c = ci_manifest_config(o, result);
    if (*sub_test) c["mu0"] = mu0_path.empty() ? "zero" : mu0_path;
    write_manifest(o.output, *sub_ci ? "ci" : "test", std::move(c), inputs,
                   timer.seconds());
    fi_result_free(result);
    fi_field_free(field);
    return 0;
  }

  if (*sub_select) {
    check_input(sel_input);
    fi_field* field = nullptr;
    check(fi_field_load_csv(sel_input.c_str(), &field));
    fi_bandwidth_config cfg;
    fi_bandwidth_config_init(&cfg);
    cfg.k_max = sel_k_max;
    cfg.pilot_b = sel_pilot;
    cfg.blocks = sel_blocks;
    cfg.replicates = sel_replicates;
    cfg.q = sel_q;
    cfg.seed = sel_seed;
    cfg.kernel_g = sel_kernel_g.c_str();
    cfg.kernel_k = sel_kernel_k.c_str();
    int k = 0;
    double b = 0.0;
    char* report = nullptr;
    check(fi_select_bandwidth(field, &cfg, &k, &b, &report));
    write_text(sel_output, report);
    fi_string_free(report);
    ordered_json c;
    c["k"] = k;
    c["b"] = b;
    c["k_max"] = sel_k_max;
    c["pilot_b"] = sel_pilot;
    c["blocks"] = sel_blocks;
    c["replicates"] = sel_replicates;
    c["q"] = sel_q;
    c["seed"] = sel_seed;
    c["kernel_g"] = sel_kernel_g;
    c["kernel_k"] = sel_kernel_k;
    write_manifest(sel_output, "select-bandwidth", std::move(c), {sel_input},
                   timer.seconds());
    fi_field_free(field);
    return 0;
  }

  if (*sub_simulate) {
    int mean_kind = FI_MEAN_ZERO;
    if (sim_mean == "elliptical") mean_kind = FI_MEAN_ELLIPTICAL;
    else if (sim_mean == "sinusoidal") mean_kind = FI_MEAN_SINUSOIDAL;
    else if (sim_mean == "disc") mean_kind = FI_MEAN_DISC;
    int noise_kind = sim_noise == "iid"  ? FI_NOISE_IID
                     : sim_noise == "ma" ? FI_NOISE_MA
                                         : FI_NOISE_AR;
    fi_disc_spec disc{disc_height, disc_radius, disc_cx, disc_cy};
    fi_field* field = nullptr;
    check(fi_simulate(mean_kind, &disc, noise_kind, sim_rows, sim_cols,
                      sim_seed, &field));
    check(fi_field_save_csv(field, sim_output.c_str()));
    ordered_json c;
    c["mean"] = sim_mean;
    c["noise"] = sim_noise;
    c["rows"] = sim_rows;
    c["cols"] = sim_cols;
    c["seed"] = sim_seed;
    if (sim_mean == "disc") {
      c["disc"] = {{"height", disc_height},
                   {"radius", disc_radius},
                   {"cx", disc_cx},
                   {"cy", disc_cy}};
    }
    write_manifest(sim_output, "simulate", std::move(c), {}, timer.seconds());
    fi_field_free(field);
    return 0;
  }

  if (*sub_study) {
    check_input(study_config);
    std::string text = read_text(study_config);
    char* csv = nullptr;
    int rc = fi_study_run(text.c_str(), &csv);
    if (rc != FI_OK) die_api(rc);
    write_text(study_output, csv);
    fi_string_free(csv);
    ordered_json c = ordered_json::parse(text, nullptr, false);
    if (c.is_discarded()) c = ordered_json::object();
    write_manifest(study_output, "study", std::move(c), {study_config},
                   timer.seconds());
    return 0;
  }

  return 2;
}
