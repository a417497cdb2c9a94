// Command-line front end: expectation queries, survival/CDF queries,
// completion tables, quantiles, Monte Carlo batches, and a cross-method
// consistency suite. Defaults are the 2022 World Cup album instance
// (670 stickers, packets of 5, 4 BRL per packet).
//
// Exit codes: 0 ok, 2 usage error, 3 precision failure, 4 check-suite
// failure.
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "stickers/stickers.hpp"

namespace {

using stickers::AlbumSpec;
using stickers::BigFloatConfig;
using stickers::Integer;
using stickers::PacketModel;
using stickers::Rational;
using Json = stickers::report::Json;

const std::vector<std::int64_t> kDefaultTableKs = {
    500,  600,  650,  700,  750,  800,  826,  850,  900,  918,  950,  1000,
    1036, 1100, 1150, 1200, 1300, 1500, 1600, 1650, 1700, 1750, 1755};

struct CommonOptions {
  int album_size = 670;
  int packet_size = 5;
  std::string price = "4";
  std::string model = "distinct";
  std::string method = "exact";
  long precision_bits = 0;  // 0: max(256, album_size + 64)
  std::string format;       // empty: environment override, then "table"
  std::string output;       // empty: standard output
};

void add_spec_options(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--album-size", opts.album_size, "Sticker types in the album")
      ->capture_default_str();
  cmd->add_option("--packet-size", opts.packet_size, "Stickers per packet")
      ->capture_default_str();
  cmd->add_option("--price", opts.price, "Currency units per packet")->capture_default_str();
}

void add_output_options(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--format", opts.format, "Output format: table, csv, or json")
      ->check(CLI::IsMember({"table", "csv", "json"}));
  cmd->add_option("--output", opts.output, "Write output to this file instead of stdout");
}

void add_model_option(CLI::App* cmd, CommonOptions& opts, const char* default_model) {
  opts.model = default_model;
  cmd->add_option("--model", opts.model, "Packet model: distinct or iid")
      ->check(CLI::IsMember({"distinct", "iid"}))
      ->capture_default_str();
}

void add_method_option(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--method", opts.method, "Backend: exact (inclusion-exclusion) or dp")
      ->check(CLI::IsMember({"exact", "dp"}))
      ->capture_default_str();
  cmd->add_option("--precision-bits", opts.precision_bits,
                  "Working precision for the exact backend (default max(256, album size + 64))");
}

AlbumSpec make_spec(const CommonOptions& opts) {
  return AlbumSpec(opts.album_size, opts.packet_size, stickers::parse_decimal(opts.price));
}

BigFloatConfig make_config(const CommonOptions& opts, const AlbumSpec& spec) {
  if (opts.precision_bits == 0) return BigFloatConfig::for_album(spec.total_stickers);
  return BigFloatConfig(opts.precision_bits);
}

std::string resolve_format(const CommonOptions& opts) {
  std::string format = opts.format;
  if (format.empty()) {
    if (const char* env = std::getenv("STICKERS_FORMAT")) format = env;
  }
  if (format.empty()) format = "table";
  if (format != "table" && format != "csv" && format != "json")
    throw std::invalid_argument("unknown output format: " + format);
  return format;
}

void write_output(const std::string& text, const CommonOptions& opts) {
  if (opts.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(opts.output, std::ios::binary);
  if (!file) throw std::invalid_argument("cannot open output file: " + opts.output);
  file << text;
}

void write_file(const std::string& text, const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::invalid_argument("cannot open output file: " + path);
  file << text;
}

// Flat record emission shared by expect/survival/quantile/simulate.
std::string record_text(const std::vector<std::pair<std::string, Json>>& fields,
                        const std::string& format) {
  if (format == "json") {
    Json object;
    for (const auto& [name, value] : fields) object[name] = value;
    return object.dump(2) + "\n";
  }
  auto scalar = [](const Json& value) {
    return value.is_string() ? value.get<std::string>() : value.dump();
  };
  std::string out;
  if (format == "csv") {
    out += "field,value\n";
    for (const auto& [name, value] : fields) out += name + "," + scalar(value) + "\n";
    return out;
  }
  std::size_t width = 0;
  for (const auto& [name, value] : fields) width = std::max(width, name.size());
  for (const auto& [name, value] : fields) {
    out += name;
    out.append(width - name.size() + 2, ' ');
    out += scalar(value) + "\n";
  }
  return out;
}

std::string scientific(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.3e", value);
  return buffer;
}

Integer ceil_rational(const Rational& value) {
  Integer quotient = numerator(value) / denominator(value);
  if (quotient * denominator(value) != numerator(value) && value > 0) quotient += 1;
  return quotient;
}

std::string trimmed_probability(double p) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%g", p);
  return buffer;
}

std::vector<std::pair<std::string, Json>> spec_fields(const AlbumSpec& spec) {
  return {{"album_size", spec.total_stickers},
          {"packet_size", spec.packet_size},
          {"packet_price", stickers::render_fixed(spec.packet_price, 2)}};
}

// ---- expect ----

int run_expect(const CommonOptions& opts) {
  AlbumSpec spec = make_spec(opts);
  PacketModel model = stickers::packet_model_from_string(opts.model);
  std::string format = resolve_format(opts);

  Rational expectation;
  double tail_bound = -1.0;
  if (opts.method == "exact") {
    BigFloatConfig config = make_config(opts, spec);
    expectation = stickers::exact::expected_packets_rational(spec, model);
    double cross = stickers::exact::expected_packets_exact(spec, config, model);
    double reference = stickers::to_double(expectation);
    if (std::abs(cross - reference) > 1e-6 * std::abs(reference))
      throw stickers::precision_error("float and rational expectation paths disagree");
  } else {
    auto result = stickers::dp::expectation_dp(spec, model);
    expectation = stickers::rational_from_double(result.expectation);
    tail_bound = result.tail_bound;
  }

  Rational displayed(stickers::round_scaled_half_even(expectation, 2), stickers::pow10(2));
  Rational mean_cost = spec.packet_price * displayed;

  Rational stickers_exact = stickers::exact::expected_stickers_exact(spec.total_stickers);
  double stickers_approx = stickers::exact::expected_stickers_approx(spec.total_stickers);

  auto fields = spec_fields(spec);
  fields.emplace_back("model", opts.model);
  fields.emplace_back("method", opts.method);
  fields.emplace_back("expected_packets", stickers::render_fixed(expectation, 2));
  fields.emplace_back("expected_packets_10dp", stickers::render_fixed(expectation, 10));
  fields.emplace_back("mean_cost", stickers::render_fixed(mean_cost, 2));
  fields.emplace_back("expected_stickers_10dp", stickers::render_fixed(stickers_exact, 10));
  fields.emplace_back("expected_stickers_ceil",
                      static_cast<std::int64_t>(ceil_rational(stickers_exact)));
  fields.emplace_back(
      "expected_stickers_round",
      static_cast<std::int64_t>(stickers::round_scaled_half_even(stickers_exact, 0)));
  fields.emplace_back(
      "expected_stickers_approx",
      stickers::render_fixed(stickers::rational_from_double(stickers_approx), 4));
  if (tail_bound >= 0) fields.emplace_back("tail_bound", scientific(tail_bound));

  write_output(record_text(fields, format), opts);
  return 0;
}

// ---- survival ----

int run_survival(const CommonOptions& opts, std::int64_t k) {
  AlbumSpec spec = make_spec(opts);
  PacketModel model = stickers::packet_model_from_string(opts.model);
  std::string format = resolve_format(opts);

  double survival;
  if (opts.method == "exact") {
    BigFloatConfig config = make_config(opts, spec);
    if (model == PacketModel::DistinctWithinPacket)
      survival = stickers::exact::survival_exact(spec, k, config);
    else
      survival = stickers::exact::sticker_survival_iid(spec.total_stickers,
                                                       k * spec.packet_size, config);
  } else {
    survival = stickers::dp::survival_dp(spec, model, k);
  }

  auto fields = spec_fields(spec);
  fields.emplace_back("model", opts.model);
  fields.emplace_back("method", opts.method);
  fields.emplace_back("k", k);
  fields.emplace_back("survival",
                      stickers::render_fixed(stickers::rational_from_double(survival), 5));
  fields.emplace_back(
      "cdf", stickers::render_fixed(Rational(1) - stickers::rational_from_double(survival), 5));
  fields.emplace_back("survival_precise", scientific(survival));
  write_output(record_text(fields, format), opts);
  return 0;
}

// ---- table ----

std::string table_rows_text(const std::vector<stickers::report::CompletionTableRow>& rows,
                            const std::string& format) {
  if (format == "csv") return stickers::report::to_csv(rows);
  if (format == "json") return stickers::report::to_json(rows).dump(2) + "\n";
  std::string out = "    k  probability  cost\n";
  for (const auto& row : rows) {
    char line[96];
    std::snprintf(line, sizeof(line), "%5lld  %-11s  %s%s\n",
                  static_cast<long long>(row.k), row.probability.c_str(), row.cost_text.c_str(),
                  row.near_boundary ? "  (near rounding boundary)" : "");
    out += line;
  }
  return out;
}

int run_table(const CommonOptions& opts, const std::vector<std::int64_t>& ks) {
  AlbumSpec spec = make_spec(opts);
  PacketModel model = stickers::packet_model_from_string(opts.model);
  BigFloatConfig config = make_config(opts, spec);
  std::string format = resolve_format(opts);
  auto backend = stickers::report::backend_from_string(opts.method);
  auto rows = stickers::report::completion_table(spec, ks, backend, model, config);
  write_output(table_rows_text(rows, format), opts);
  return 0;
}

// ---- quantile ----

int run_quantile(const CommonOptions& opts, const std::vector<double>& levels) {
  AlbumSpec spec = make_spec(opts);
  PacketModel model = stickers::packet_model_from_string(opts.model);
  std::string format = resolve_format(opts);

  struct Entry {
    double p;
    std::int64_t k;
    double cdf_prev, cdf;
  };
  std::vector<Entry> entries;
  for (double p : levels) {
    std::int64_t k = stickers::dp::quantile_dp(spec, model, p);
    double cdf = 1.0 - stickers::dp::survival_dp(spec, model, k);
    double cdf_prev = k > 0 ? 1.0 - stickers::dp::survival_dp(spec, model, k - 1) : 0.0;
    entries.push_back({p, k, cdf_prev, cdf});
  }

  auto render5 = [](double v) {
    return stickers::render_fixed(stickers::rational_from_double(v), 5);
  };
  if (format == "csv") {
    std::string out = "p,k,cdf,cdf_prev\n";
    for (const auto& e : entries)
      out += trimmed_probability(e.p) + "," + std::to_string(e.k) + "," + render5(e.cdf) + "," +
             render5(e.cdf_prev) + "\n";
    write_output(out, opts);
  } else if (format == "json") {
    Json array = Json::array();
    for (const auto& e : entries) {
      Json item;
      item["p"] = e.p;
      item["k"] = e.k;
      item["cdf"] = render5(e.cdf);
      item["cdf_prev"] = render5(e.cdf_prev);
      array.push_back(std::move(item));
    }
    write_output(array.dump(2) + "\n", opts);
  } else {
    std::string out;
    for (const auto& e : entries) {
      char line[160];
      std::snprintf(line, sizeof(line), "p=%-6s k=%-6lld CDF(%lld)=%s, CDF(%lld)=%s\n",
                    trimmed_probability(e.p).c_str(), static_cast<long long>(e.k),
                    static_cast<long long>(e.k - 1), render5(e.cdf_prev).c_str(),
                    static_cast<long long>(e.k), render5(e.cdf).c_str());
      out += line;
    }
    write_output(out, opts);
  }
  return 0;
}

// ---- curve ----

int run_curve(const CommonOptions& opts, std::int64_t k_min, std::int64_t k_max,
              std::int64_t step) {
  AlbumSpec spec = make_spec(opts);
  PacketModel model = stickers::packet_model_from_string(opts.model);
  BigFloatConfig config = make_config(opts, spec);
  std::string format = resolve_format(opts);
  auto backend = stickers::report::backend_from_string(opts.method);

  if (k_min < 0) k_min = spec.coverage_bound();
  if (k_max < 0) k_max = stickers::dp::quantile_dp(spec, model, 0.9999);

  auto points = stickers::report::cdf_curve(spec, k_min, k_max, step, backend, model, config);
  if (format == "json")
    write_output(stickers::report::to_json(points).dump(2) + "\n", opts);
  else  // the dense series reads the same in csv and table form
    write_output(stickers::report::to_csv(points), opts);
  return 0;
}

// ---- simulate ----

int run_simulate(const CommonOptions& opts, std::int64_t reps, std::uint64_t seed, int threads,
                 std::int64_t bin_width, const std::string& raw_out, const std::string& hist_out,
                 const std::string& trace_out, const std::vector<std::int64_t>& snapshots) {
  AlbumSpec spec = make_spec(opts);
  std::string format = resolve_format(opts);

  stickers::mc::SimulationConfig config;
  config.spec = spec;
  config.model = stickers::packet_model_from_string(opts.model);
  config.replications = reps;
  config.master_seed = seed;
  config.threads = threads;

  std::vector<stickers::mc::ReplicationOutcome> raw;
  auto summary = stickers::mc::simulate_batch(config, bin_width,
                                              raw_out.empty() ? nullptr : &raw);

  if (!raw_out.empty()) write_file(stickers::report::to_csv(raw), raw_out);
  if (!hist_out.empty()) write_file(stickers::report::to_csv(summary.histogram), hist_out);
  if (!trace_out.empty()) {
    auto trace = stickers::mc::trace_collection(spec, config.model,
                                                stickers::mc::stream_seed(seed, 0), snapshots);
    Json record;
    record["seed"] = seed;
    record["stream"] = 0;
    record["model"] = std::string(to_string(config.model));
    record["packets"] = trace.outcome.packets;
    record["duplicates"] = trace.outcome.duplicates;
    record["owned_after_packet"] = trace.owned_after_packet;
    Json snaps = Json::array();
    for (const auto& snapshot : trace.snapshots)
      snaps.push_back(Json{{"packet", snapshot.packet}, {"owned", snapshot.owned}});
    record["snapshots"] = std::move(snaps);
    write_file(record.dump(2) + "\n", trace_out);
  }

  if (format == "json") {
    write_output(stickers::report::to_json(config, summary).dump(2) + "\n", opts);
    return 0;
  }
  auto fields = spec_fields(spec);
  fields.emplace_back("model", std::string(to_string(config.model)));
  fields.emplace_back("replications", summary.replications);
  fields.emplace_back("seed", seed);
  fields.emplace_back("mean_packets", stickers::render_fixed(summary.mean_packets, 2));
  fields.emplace_back("mean_duplicates", stickers::render_fixed(summary.mean_duplicates, 2));
  fields.emplace_back("min_packets", summary.min_packets);
  fields.emplace_back("q25", summary.q25);
  fields.emplace_back("q50", summary.q50);
  fields.emplace_back("q75", summary.q75);
  fields.emplace_back("max_packets", summary.max_packets);
  fields.emplace_back("total_cost_mean", stickers::render_fixed(summary.total_cost_mean, 2));
  write_output(record_text(fields, format), opts);
  return 0;
}

// ---- check ----

int run_check(const CommonOptions& opts, std::uint64_t seed) {
  AlbumSpec spec = make_spec(opts);
  BigFloatConfig config = make_config(opts, spec);
  bool all_ok = true;
  auto report_line = [&all_ok](bool ok, const std::string& name, const std::string& detail) {
    all_ok = all_ok && ok;
    std::cout << (ok ? "PASS" : "FAIL") << "  " << name << ": " << detail << "\n";
  };

  using namespace stickers;

  // Sample points: the distinct-model quartiles plus the head of the support.
  std::vector<std::int64_t> ks;
  ks.push_back(spec.coverage_bound() + 1);
  for (double p : {0.25, 0.5, 0.75, 0.99}) {
    std::int64_t k = dp::quantile_dp(spec, PacketModel::DistinctWithinPacket, p);
    if (ks.empty() || k > ks.back()) ks.push_back(k);
  }

  {
    double worst = 0.0;
    for (std::int64_t k : ks) {
      double d = std::abs(dp::survival_dp(spec, PacketModel::DistinctWithinPacket, k) -
                          exact::survival_exact(spec, k, config));
      worst = std::max(worst, d);
    }
    report_line(worst <= 1e-9, "survival distinct: dp vs inclusion-exclusion",
                "max |diff| = " + scientific(worst) + " over k in sampled quartile grid");
  }
  {
    double worst = 0.0;
    for (std::int64_t k : ks) {
      double d = std::abs(
          dp::survival_dp(spec, PacketModel::IidWithReplacement, k) -
          exact::sticker_survival_iid(spec.total_stickers, k * spec.packet_size, config));
      worst = std::max(worst, d);
    }
    report_line(worst <= 1e-9, "survival iid: dp vs single-draw inclusion-exclusion",
                "max |diff| = " + scientific(worst));
  }
  {
    Rational exact_value = exact::expected_packets_rational(spec);
    double reference = to_double(exact_value);
    double big = exact::expected_packets_exact(spec, config);
    double via_dp =
        dp::expectation_dp(spec, PacketModel::DistinctWithinPacket).expectation;
    bool ok_big = std::abs(big - reference) <= 1e-6 * reference;
    bool ok_dp = std::abs(via_dp - reference) <= 1e-9 * reference;
    report_line(ok_big && ok_dp, "expectation distinct: rational vs float vs dp",
                "rational " + render_fixed(exact_value, 6) + ", float dev " +
                    scientific(std::abs(big - reference)) + ", dp dev " +
                    scientific(std::abs(via_dp - reference)));
  }
  {
    Rational exact_iid = exact::expected_packets_rational(spec, PacketModel::IidWithReplacement);
    double reference = to_double(exact_iid);
    double via_dp = dp::expectation_dp(spec, PacketModel::IidWithReplacement).expectation;
    double lower = to_double(exact::expected_stickers_exact(spec.total_stickers)) /
                   spec.packet_size;
    bool in_bracket = via_dp >= lower - 1e-9 && via_dp <= lower + 1.0 + 1e-9;
    bool agrees = std::abs(via_dp - reference) <= 1e-9 * reference;
    report_line(in_bracket && agrees, "expectation iid: dp vs rational vs ceiling bracket",
                "dp " + render_fixed(rational_from_double(via_dp), 6) + " in [" +
                    render_fixed(rational_from_double(lower), 4) + ", that + 1]");
  }
  {
    double distinct = dp::expectation_dp(spec, PacketModel::DistinctWithinPacket).expectation;
    double iid = dp::expectation_dp(spec, PacketModel::IidWithReplacement).expectation;
    report_line(distinct <= iid + 1e-9, "model ordering: distinct completes no slower",
                render_fixed(rational_from_double(distinct), 4) + " <= " +
                    render_fixed(rational_from_double(iid), 4));
  }
  {
    std::int64_t k = ks[ks.size() / 2];
    double lhs = exact::pmf_exact(spec, k, config);
    double rhs = exact::survival_exact(spec, k - 1, config) -
                 exact::survival_exact(spec, k, config);
    double slack = std::ldexp(1.0, -40);
    report_line(std::abs(lhs - rhs) <= slack, "pmf telescoping at the median",
                "|pmf - survival difference| = " + scientific(std::abs(lhs - rhs)));
  }
  {
    mc::SimulationConfig sim;
    sim.spec = spec;
    sim.model = PacketModel::IidWithReplacement;
    sim.replications = 300;
    sim.master_seed = seed;
    auto first = mc::simulate_raw(sim);
    auto second = mc::simulate_raw(sim);
    bool identity = true, deterministic = true;
    for (std::size_t i = 0; i < first.size(); ++i) {
      identity = identity &&
                 (static_cast<std::int64_t>(spec.packet_size) * first[i].packets ==
                  spec.total_stickers + first[i].duplicates);
      deterministic = deterministic && first[i].packets == second[i].packets &&
                      first[i].duplicates == second[i].duplicates;
    }
    report_line(identity && deterministic, "simulation: accounting identity and determinism",
                std::to_string(first.size()) + " replications, n*T = N + D on every one");
  }

  if (!all_ok) return 4;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Album completion calculator: exact analytics, absorbing-chain DP, "
               "and seeded Monte Carlo for the sticker collector problem"};
  app.require_subcommand(1);
  int exit_code = 0;

  CommonOptions expect_opts;
  auto* expect_cmd = app.add_subcommand("expect", "Expected packets, stickers, and mean cost");
  add_spec_options(expect_cmd, expect_opts);
  add_model_option(expect_cmd, expect_opts, "distinct");
  add_method_option(expect_cmd, expect_opts);
  add_output_options(expect_cmd, expect_opts);
  expect_cmd->callback([&] { exit_code = run_expect(expect_opts); });

  CommonOptions survival_opts;
  std::int64_t survival_k = 0;
  auto* survival_cmd = app.add_subcommand("survival", "P(T > k) for a single packet count");
  add_spec_options(survival_cmd, survival_opts);
  add_model_option(survival_cmd, survival_opts, "distinct");
  add_method_option(survival_cmd, survival_opts);
  add_output_options(survival_cmd, survival_opts);
  survival_cmd->add_option("--k", survival_k, "Packet count")->required();
  survival_cmd->callback([&] { exit_code = run_survival(survival_opts, survival_k); });

  CommonOptions table_opts;
  std::vector<std::int64_t> table_ks = kDefaultTableKs;
  auto* table_cmd = app.add_subcommand("table", "Completion probability and cost per packet count");
  add_spec_options(table_cmd, table_opts);
  add_model_option(table_cmd, table_opts, "distinct");
  add_method_option(table_cmd, table_opts);
  add_output_options(table_cmd, table_opts);
  table_cmd->add_option("--ks", table_ks, "Comma-separated packet counts (strictly increasing)")
      ->delimiter(',');
  table_cmd->callback([&] { exit_code = run_table(table_opts, table_ks); });

  CommonOptions quantile_opts;
  std::vector<double> quantile_ps = {0.25, 0.5, 0.75};
  auto* quantile_cmd = app.add_subcommand("quantile", "Smallest k whose CDF reaches p");
  add_spec_options(quantile_cmd, quantile_opts);
  add_model_option(quantile_cmd, quantile_opts, "distinct");
  add_output_options(quantile_cmd, quantile_opts);
  quantile_cmd->add_option("--p", quantile_ps, "Comma-separated levels in (0,1)")->delimiter(',');
  quantile_cmd->callback([&] { exit_code = run_quantile(quantile_opts, quantile_ps); });

  CommonOptions curve_opts;
  std::int64_t curve_min = -1, curve_max = -1, curve_step = 1;
  auto* curve_cmd = app.add_subcommand("curve", "Dense CDF series for plotting");
  add_spec_options(curve_cmd, curve_opts);
  add_model_option(curve_cmd, curve_opts, "distinct");
  add_method_option(curve_cmd, curve_opts);
  add_output_options(curve_cmd, curve_opts);
  curve_cmd->add_option("--k-min", curve_min, "Series start (default: coverage bound)");
  curve_cmd->add_option("--k-max", curve_max, "Series end (default: 0.9999 quantile)");
  curve_cmd->add_option("--step", curve_step, "Series stride")->capture_default_str();
  curve_cmd->callback(
      [&] { exit_code = run_curve(curve_opts, curve_min, curve_max, curve_step); });

  CommonOptions simulate_opts;
  std::int64_t sim_reps = 100000;
  std::uint64_t sim_seed = 20220801;
  int sim_threads = 0;
  std::int64_t sim_bin_width = 50;
  std::string sim_raw_out, sim_hist_out, sim_trace_out;
  std::vector<std::int64_t> sim_snapshots;
  auto* simulate_cmd = app.add_subcommand("simulate", "Seeded Monte Carlo batch");
  add_spec_options(simulate_cmd, simulate_opts);
  add_model_option(simulate_cmd, simulate_opts, "iid");
  add_output_options(simulate_cmd, simulate_opts);
  simulate_cmd->add_option("--reps", sim_reps, "Replications")->capture_default_str();
  simulate_cmd->add_option("--seed", sim_seed, "Master seed (echoed in the summary)")
      ->capture_default_str();
  simulate_cmd->add_option("--threads", sim_threads, "Worker threads (0: machine parallelism)")
      ->capture_default_str();
  simulate_cmd->add_option("--bin-width", sim_bin_width, "Histogram bin width")
      ->capture_default_str();
  simulate_cmd->add_option("--raw-out", sim_raw_out, "Write per-replication CSV here");
  simulate_cmd->add_option("--hist-out", sim_hist_out, "Write histogram CSV here");
  simulate_cmd->add_option("--trace-out", sim_trace_out,
                           "Write a JSON per-packet trace of replication 0 here");
  simulate_cmd
      ->add_option("--trace-snapshots", sim_snapshots,
                   "Packet indices at which the trace records the full owned set")
      ->delimiter(',');
  simulate_cmd->callback([&] {
    exit_code = run_simulate(simulate_opts, sim_reps, sim_seed, sim_threads, sim_bin_width,
                             sim_raw_out, sim_hist_out, sim_trace_out, sim_snapshots);
  });

  CommonOptions check_opts;
  std::uint64_t check_seed = 4242;
  auto* check_cmd = app.add_subcommand("check", "Cross-method consistency suite");
  add_spec_options(check_cmd, check_opts);
  check_cmd->add_option("--precision-bits", check_opts.precision_bits,
                        "Working precision for the exact backend");
  check_cmd->add_option("--seed", check_seed, "Seed for the simulation checks")
      ->capture_default_str();
  check_cmd->callback([&] { exit_code = run_check(check_opts, check_seed); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const stickers::precision_error& e) {
    std::cerr << "precision failure: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid arguments: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}
