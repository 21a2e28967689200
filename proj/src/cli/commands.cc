#include "xlradr/cli/commands.h"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>

#include "CLI11.hpp"
#include "xlradr/cli/batch.h"
#include "xlradr/cli/config.h"
#include "xlradr/cli/output.h"
#include "xlradr/engine/simulator.h"

namespace xlradr {

namespace {

std::vector<std::string> Split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

std::uint64_t ParseU64(const std::string& text, const std::string& flag) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigInvalid(flag, "not an unsigned integer: '" + text + "'");
  }
  return v;
}

std::optional<double> AsNumber(const std::string& text) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return v;
}

void WriteFile(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << bytes;
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

std::vector<RunMetrics> RunAll(const std::vector<Scenario>& scenarios, bool parallel) {
  return parallel ? RunBatchParallel(scenarios) : RunBatchSerial(scenarios);
}

struct Common {
  std::string config;
  std::vector<std::string> sets;
  std::string out_dir = ".";
  bool serial = false;
};

Scenario BaseScenario(const Common& c) {
  Scenario s = c.config.empty() ? Scenario{} : LoadConfig(c.config);
  for (const std::string& kv : c.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigInvalid(kv, "--set expects KEY=VALUE");
    ApplyKey(s, kv.substr(0, eq), kv.substr(eq + 1));
  }
  return s;
}

}  // namespace

std::vector<std::uint64_t> ParseSeedList(const std::string& text, const std::string& flag) {
  std::vector<std::uint64_t> seeds;
  for (const std::string& item : Split(text, ',')) {
    if (item.empty()) throw ConfigInvalid(flag, "empty entry in '" + text + "'");
    const auto dash = item.find('-');
    if (dash == std::string::npos) {
      seeds.push_back(ParseU64(item, flag));
      continue;
    }
    const std::uint64_t lo = ParseU64(item.substr(0, dash), flag);
    const std::uint64_t hi = ParseU64(item.substr(dash + 1), flag);
    if (hi < lo) throw ConfigInvalid(flag, "descending range '" + item + "'");
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
  }
  return seeds;
}

std::vector<std::string> ParseValueList(const std::string& text, const std::string& flag) {
  std::vector<std::string> values = Split(text, ',');
  if (std::any_of(values.begin(), values.end(), [](const std::string& v) { return v.empty(); })) {
    throw ConfigInvalid(flag, "empty value list");
  }
  return values;
}

std::vector<ComparePair> RunCompare(const Scenario& base, const std::vector<std::uint64_t>& seeds, bool parallel) {
  std::vector<Scenario> runs;
  for (std::uint64_t seed : seeds) {
    for (Protocol p : {Protocol::kE2xlradr, Protocol::kDsr}) {
      Scenario s = base;
      s.seed = seed;
      s.protocol = p;
      s.Validate();
      runs.push_back(std::move(s));
    }
  }
  const std::vector<RunMetrics> metrics = RunAll(runs, parallel);
  std::vector<ComparePair> pairs;
  for (std::size_t i = 0; i < seeds.size(); ++i) pairs.push_back({seeds[i], metrics[2 * i], metrics[2 * i + 1]});
  return pairs;
}

CompareSummary SummarizeCompare(const std::vector<ComparePair>& pairs) {
  CompareSummary s;
  s.pairs = pairs.size();
  double observed_sum = 0;
  double bound_sum = 0;
  bool bound_ok = !pairs.empty();
  for (const ComparePair& p : pairs) {
    const Lifetime& e = p.e2xlradr.lifetime;
    const Lifetime& d = p.dsr.lifetime;
    const double ratio = d.ticks > 0 ? static_cast<double>(e.ticks) / static_cast<double>(d.ticks) : 0.0;
    if (d.censored || d.ticks == 0) {
      bound_ok = false;
    } else {
      bound_sum += ratio;
    }
    if (!e.censored && !d.censored && d.ticks > 0) {
      ++s.observed_pairs;
      observed_sum += ratio;
    }
  }
  if (s.observed_pairs > 0) s.mean_ratio_observed = observed_sum / static_cast<double>(s.observed_pairs);
  if (bound_ok) s.mean_ratio_lower_bound = bound_sum / static_cast<double>(pairs.size());
  s.low_confidence = pairs.size() < 2 || s.observed_pairs < pairs.size();
  return s;
}

std::string CompareCsv(const std::vector<ComparePair>& pairs, const Scenario& base) {
  std::string out =
      "seed,e2xlradr_lifetime_ticks,e2xlradr_censored,dsr_lifetime_ticks,dsr_censored,ratio,censoring,scenario_hash\n";
  const std::string hash = ScenarioHash(base);
  for (const ComparePair& p : pairs) {
    const Lifetime& e = p.e2xlradr.lifetime;
    const Lifetime& d = p.dsr.lifetime;
    std::string_view censoring = "none";
    if (e.censored && d.censored) censoring = "both";
    else if (e.censored) censoring = "e2xlradr";
    else if (d.censored) censoring = "dsr";
    out += std::to_string(p.seed) + ',' + std::to_string(e.ticks) + ',' + (e.censored ? "1" : "0") + ',';
    out += std::to_string(d.ticks) + ',' + (d.censored ? "1" : "0") + ',';
    if (d.ticks > 0) out += FormatNumber(static_cast<double>(e.ticks) / static_cast<double>(d.ticks));
    out += ',';
    out += censoring;
    out += ',' + hash + '\n';
  }
  return out;
}

std::vector<SweepRow> RunSweep(const Scenario& base, const std::string& key, const std::vector<std::string>& values,
                               const std::vector<std::uint64_t>& seeds, bool parallel) {
  if (key == "protocol" || key == "seed") throw ConfigInvalid(key, "cannot be swept; every sweep covers both protocols and --seeds");
  if (std::find(ConfigKeys().begin(), ConfigKeys().end(), key) == ConfigKeys().end()) {
    throw ConfigInvalid(key, "unknown key");
  }
  if (values.empty()) throw ConfigInvalid("--vary", "empty value list");
  std::vector<SweepRow> rows;
  for (const std::string& value : values) {
    Scenario varied = base;
    ApplyKey(varied, key, value);
    for (std::uint64_t seed : seeds) {
      for (Protocol p : {Protocol::kDsr, Protocol::kE2xlradr}) {
        Scenario s = varied;
        s.seed = seed;
        s.protocol = p;
        s.Validate();
        rows.push_back({value, std::move(s), {}});
      }
    }
  }
  std::vector<Scenario> runs;
  for (const SweepRow& r : rows) runs.push_back(r.scenario);
  std::vector<RunMetrics> metrics = RunAll(runs, parallel);
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i].metrics = std::move(metrics[i]);

  const bool numeric = std::all_of(values.begin(), values.end(), [](const std::string& v) { return AsNumber(v).has_value(); });
  std::stable_sort(rows.begin(), rows.end(), [&](const SweepRow& a, const SweepRow& b) {
    if (a.value != b.value) {
      if (numeric) return *AsNumber(a.value) < *AsNumber(b.value);
      return a.value < b.value;
    }
    if (a.scenario.seed != b.scenario.seed) return a.scenario.seed < b.scenario.seed;
    return ToString(a.scenario.protocol) < ToString(b.scenario.protocol);
  });
  return rows;
}

std::string SweepCsv(const std::string& key, const std::vector<SweepRow>& rows) {
  std::string out = "key,value," + MetricsHeader();
  for (const SweepRow& r : rows) out += key + ',' + r.value + ',' + MetricsRow(r.metrics, r.scenario);
  return out;
}

int RunCli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"E2XLRADR / DSR wireless sensor network simulator"};
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", common.config, "key = value config file");
    cmd->add_option("--set", common.sets, "override one config key, KEY=VALUE (repeatable)");
    cmd->add_option("--out", common.out_dir, "output directory");
  };

  CLI::App* run = app.add_subcommand("run", "one simulation run");
  add_common(run);
  std::optional<std::uint64_t> seed;
  std::optional<std::string> protocol;
  bool trace = false;
  run->add_option("--seed", seed, "overrides the config seed");
  run->add_option("--protocol", protocol, "e2xlradr or dsr");
  run->add_flag("--trace", trace, "also write trace.csv");

  CLI::App* compare = app.add_subcommand("compare", "paired e2xlradr vs dsr lifetimes");
  add_common(compare);
  std::string seeds_text;
  compare->add_option("--seeds", seeds_text, "seed list, e.g. 1-10 or 1,4,9");
  compare->add_flag("--serial", common.serial, "run sequentially");

  CLI::App* sweep = app.add_subcommand("sweep", "vary one key over values x seeds x protocols");
  add_common(sweep);
  std::string vary;
  sweep->add_option("--vary", vary, "KEY=V1,V2,...")->required();
  sweep->add_option("--seeds", seeds_text, "seed list");
  sweep->add_flag("--serial", common.serial, "run sequentially");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    Scenario base = BaseScenario(common);
    const std::filesystem::path dir(common.out_dir);
    std::filesystem::create_directories(dir);
    const std::vector<std::uint64_t> seeds =
        seeds_text.empty() ? std::vector<std::uint64_t>{base.seed} : ParseSeedList(seeds_text);

    if (run->parsed()) {
      if (seed) base.seed = *seed;
      if (protocol) ApplyKey(base, "protocol", *protocol);
      base.Validate();
      const TraceLog log = RunScenario(base, RunOptions{.record_rows = trace});
      const RunMetrics metrics = ComputeMetrics(log);
      const std::string row = MetricsRow(metrics, base);
      WriteFile(dir / "metrics.csv", MetricsHeader() + row);
      WriteFile(dir / "lifetime_curve.csv", LifetimeCurveCsv(log));
      if (trace) WriteFile(dir / "trace.csv", TraceCsv(log));
      out << MetricsHeader() << row;
      return 0;
    }

    if (compare->parsed()) {
      base.Validate();
      const std::vector<ComparePair> pairs = RunCompare(base, seeds, !common.serial);
      std::string metrics_csv = MetricsHeader();
      for (const ComparePair& p : pairs) {
        Scenario e = base, d = base;
        e.seed = d.seed = p.seed;
        e.protocol = Protocol::kE2xlradr;
        d.protocol = Protocol::kDsr;
        metrics_csv += MetricsRow(p.e2xlradr, e) + MetricsRow(p.dsr, d);
      }
      const std::string table = CompareCsv(pairs, base);
      WriteFile(dir / "compare.csv", table);
      WriteFile(dir / "metrics.csv", metrics_csv);
      const CompareSummary s = SummarizeCompare(pairs);
      out << table;
      out << "pairs=" << s.pairs << " observed_pairs=" << s.observed_pairs << " mean_ratio_observed="
          << (s.mean_ratio_observed ? FormatNumber(*s.mean_ratio_observed) : "n/a") << " mean_ratio_lower_bound="
          << (s.mean_ratio_lower_bound ? FormatNumber(*s.mean_ratio_lower_bound) : "n/a")
          << (s.low_confidence ? " low_confidence" : "") << '\n';
      return 0;
    }

    const auto eq = vary.find('=');
    if (eq == std::string::npos) throw ConfigInvalid("--vary", "expected KEY=V1,V2,...");
    const std::string key = vary.substr(0, eq);
    const std::vector<std::string> values = ParseValueList(vary.substr(eq + 1), "--vary");
    const std::vector<SweepRow> rows = RunSweep(base, key, values, seeds, !common.serial);
    const std::string csv = SweepCsv(key, rows);
    WriteFile(dir / "sweep.csv", csv);
    out << csv;
    return 0;
  } catch (const ConfigInvalid& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace xlradr
