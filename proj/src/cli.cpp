// Copyright 2026 The lmtkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lmtkit/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lmtkit/corpus_io.hpp"
#include "lmtkit/diagnostics.hpp"
#include "lmtkit/direction.hpp"
#include "lmtkit/downsample.hpp"
#include "lmtkit/error.hpp"
#include "lmtkit/eval.hpp"
#include "lmtkit/log.hpp"
#include "lmtkit/mixture.hpp"
#include "lmtkit/prompt.hpp"
#include "lmtkit/quality_filter.hpp"
#include "lmtkit/registry.hpp"
#include "lmtkit/synthesis.hpp"

namespace lmt::cli {

namespace {

struct Options {
  // global
  std::uint64_t seed = 42;
  std::size_t workers = 1;
  std::string registry = "builtin";
  std::optional<std::string> aux;
  std::string log_level = "warn";

  // shared I/O
  std::string in = "-";
  std::string out = "-";
  std::optional<std::string> report;

  // downsample / diagnose
  std::optional<double> p;

  // mix
  std::optional<std::string> spec;
  std::optional<std::string> scores;
  std::optional<std::string> stats;

  // filter
  std::optional<std::string> rules;
  std::optional<double> tau;
  std::vector<double> thresholds{std::begin(kDefaultThresholds), std::end(kDefaultThresholds)};

  // score / synth / infer-prompt
  std::string scorer_cmd;
  std::string backend_cmd;
  std::string mode;
  std::string direction;
  double max_failure_ratio = 0.10;
  std::string strategy;

  // eval
  std::vector<std::string> models;
  std::string metric = "comet22";
  std::string format = "markdown";
  std::vector<std::string> langs;
  std::optional<std::string> langs_file;
  bool exclude_center_pairs = false;

  // validate
  std::string kind;
};

class Input {
 public:
  explicit Input(const std::string& path) {
    if (path == "-") {
      stream_ = &std::cin;
      return;
    }
    file_.open(path);
    if (!file_) throw Error(ErrorCode::kIoError, "cannot open '" + path + "' for reading");
    stream_ = &file_;
  }
  std::istream& get() { return *stream_; }

 private:
  std::ifstream file_;
  std::istream* stream_ = nullptr;
};

class Output {
 public:
  Output(const std::string& path, std::ostream& stdout_stream) : path_(path) {
    if (path == "-") {
      stream_ = &stdout_stream;
      return;
    }
    file_.open(path, std::ios::binary | std::ios::trunc);
    if (!file_) throw Error(ErrorCode::kIoError, "cannot open '" + path + "' for writing");
    stream_ = &file_;
  }
  std::ostream& get() { return *stream_; }
  void close() {
    stream_->flush();
    if (!*stream_) throw Error(ErrorCode::kIoError, "write to '" + path_ + "' failed");
    if (file_.is_open()) file_.close();
  }

 private:
  std::string path_;
  std::ofstream file_;
  std::ostream* stream_ = nullptr;
};

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  Output o(path, out);
  o.get() << text;
  o.close();
}

Registry registry_of(const Options& o) { return load_registry(o.registry, o.aux); }

std::vector<DirectionalExample> read_examples(const std::string& path, const Registry& registry) {
  Input in(path);
  return read_all_examples(in.get(), &registry);
}

// ---- subcommands -----------------------------------------------------------

int cmd_expand(const Options& o, std::ostream& out) {
  const auto registry = registry_of(o);
  const auto dirset = enumerate_directions(registry);
  Input in(o.in);
  Output output(o.out, out);
  MultiWayReader reader(in.get(), registry);
  std::size_t records = 0;
  std::size_t examples = 0;
  while (auto record = reader.next()) {
    ++records;
    for (const auto& e : expand(*record, dirset)) {
      output.get() << to_json_line(e) << '\n';
      ++examples;
    }
  }
  output.close();
  logger()->info("expand: {} records -> {} examples", records, examples);
  return 0;
}

int cmd_downsample(const Options& o, std::ostream& out, std::ostream& err) {
  const auto registry = registry_of(o);
  RetentionPolicy policy{o.p.value_or(0.05), o.seed};
  policy.validate();
  const auto examples = read_examples(o.in, registry);
  DownsampleCounts counts;
  const auto kept = downsample(examples, policy, &counts, o.workers);
  Output output(o.out, out);
  write_examples(kept, output.get());
  output.close();
  err << "forward: kept " << counts.forward_kept << "\n"
      << "reverse: kept " << counts.reverse_kept << ", dropped " << counts.reverse_dropped << "\n";
  if (o.report) {
    nlohmann::ordered_json j;
    j["p_reverse"] = policy.p_reverse;
    j["seed"] = policy.seed;
    j["forward_kept"] = counts.forward_kept;
    j["reverse_kept"] = counts.reverse_kept;
    j["reverse_dropped"] = counts.reverse_dropped;
    write_text(*o.report, j.dump(2) + "\n", out);
  }
  return 0;
}

int cmd_mix(const Options& o, std::ostream& out) {
  const auto registry = registry_of(o);
  const auto dirset = enumerate_directions(registry);
  MixtureSpec spec;
  if (o.spec) {
    Input s(*o.spec);
    spec = MixtureSpec::from_json(s.get());
  }
  spec.seed = o.seed;
  std::optional<ScoreSidecar> sidecar;
  if (o.scores) sidecar = ScoreSidecar::load_file(*o.scores);

  MixtureBuilder builder(registry, dirset, spec, sidecar ? &*sidecar : nullptr);
  {
    Input in(o.in);
    MultiWayReader reader(in.get(), registry);
    while (auto record = reader.next()) builder.add(*record);
  }
  const auto result = builder.finish(o.workers);
  for (const auto& w : result.warnings) {
    logger()->warn("mix: {}: {}", w.direction.key(), w.message);
  }
  Output output(o.out, out);
  for (const auto& e : result.examples) output.get() << to_json_line(e) << '\n';
  output.close();
  if (o.stats) {
    std::ostringstream s;
    for (const auto& st : result.stats) {
      nlohmann::ordered_json j;
      j["direction"] = st.direction.key();
      j["class"] = std::string(to_string(st.cls));
      j["supply"] = st.supply;
      j["selected"] = st.selected;
      j["retained"] = st.retained;
      j["stp"] = st.stp;
      j["pmp"] = st.pmp;
      j["missing_auxiliary"] = st.missing_auxiliary;
      s << j.dump() << '\n';
    }
    write_text(*o.stats, s.str(), out);
  }
  return 0;
}

int cmd_filter(const Options& o, std::ostream& out) {
  const auto registry = registry_of(o);
  std::vector<FilterRule> rules = default_rules();
  if (o.rules) {
    Input r(*o.rules);
    rules = parse_rules(r.get());
  }
  if (!std::is_sorted(o.thresholds.begin(), o.thresholds.end())) {
    throw Error(ErrorCode::kInvalidArgument, "--thresholds must be ascending");
  }

  // Scores come from a sidecar, or from the input itself when it is *.sjsonl
  // and a threshold is requested.
  std::optional<ScoreSidecar> sidecar;
  if (o.scores) sidecar = ScoreSidecar::load_file(*o.scores);
  const bool inline_scores = !sidecar && o.tau.has_value();

  HeuristicFilter filter(rules);
  std::vector<ScoredPair> scored;
  std::vector<DirectionalExample> plain;
  {
    Input in(o.in);
    ExampleReader reader(in.get(), &registry);
    if (inline_scores) {
      while (auto p = reader.next_scored()) {
        if (filter.accept(p->example)) scored.push_back(std::move(*p));
      }
    } else {
      while (auto e = reader.next()) {
        if (filter.accept(*e)) plain.push_back(std::move(*e));
      }
    }
  }
  if (sidecar) {
    scored = attach_scores(plain, *sidecar);
    plain.clear();
  }

  FilterReport report = filter.report();
  const bool have_scores = sidecar.has_value() || inline_scores;
  if (have_scores) {
    report.scored = scored.size();
    report.histogram = score_histogram(std::span<const ScoredPair>(scored), o.thresholds);
  }
  if (o.tau) {
    const auto before = scored.size();
    scored = threshold_filter(scored, *o.tau);
    report.rejected["qe_threshold"] = before - scored.size();
    report.kept = scored.size();
  }

  Output output(o.out, out);
  if (have_scores) {
    write_scored(scored, output.get());
  } else {
    write_examples(plain, output.get());
  }
  output.close();
  if (o.report) write_text(*o.report, report.to_json() + "\n", out);
  logger()->info("filter: {} in, {} kept", report.input, report.kept);
  return 0;
}

int cmd_score(const Options& o, std::ostream& out) {
  const auto registry = registry_of(o);
  if (o.scorer_cmd.empty()) throw Error(ErrorCode::kInvalidArgument, "--scorer-cmd is required");
  ExternalScorer scorer(o.scorer_cmd);
  Input in(o.in);
  Output output(o.out, out);
  ExampleReader reader(in.get(), &registry);
  while (auto e = reader.next()) {
    ScoredPair p{*e, scorer.score(*e)};
    output.get() << to_json_line(p) << '\n';
  }
  output.close();
  return 0;
}

int cmd_synth(const Options& o, std::ostream& out) {
  const auto registry = registry_of(o);
  if (o.backend_cmd.empty()) throw Error(ErrorCode::kInvalidArgument, "--backend-cmd is required");
  SubprocessBackend backend(o.backend_cmd);
  SynthesisOptions options{o.max_failure_ratio};
  SynthesisResult result;
  if (o.mode == "direct") {
    if (o.direction.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "--direction is required for direct synthesis");
    }
    const auto direction = parse_direction(o.direction);
    Input in(o.in);
    const auto mono = read_all_mono(in.get());
    result = synth_direct(mono, backend, direction, registry, options);
  } else {
    const auto pairs = read_examples(o.in, registry);
    result = synth_pivot(pairs, backend, registry, options);
  }
  Output output(o.out, out);
  write_examples(result.examples, output.get());
  output.close();
  logger()->info("synth: {} attempted, {} failed, {} examples", result.attempted, result.failed,
                 result.examples.size());
  return 0;
}

// {"id","src_lang","tgt_lang","src"[,"aux"]} per line; other keys (tgt,
// provenance, ...) are ignored so *.djsonl files work as input.
std::vector<InferenceInput> read_inference_inputs(std::istream& in, const Registry& registry) {
  std::vector<InferenceInput> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      InferenceInput x;
      x.id = j.at("id").get<std::string>();
      x.direction = {j.at("src_lang").get<std::string>(), j.at("tgt_lang").get<std::string>()};
      x.src = j.at("src").get<std::string>();
      if (auto a = j.find("aux"); a != j.end() && !a->is_null()) x.aux = a->get<std::string>();
      registry.at(x.direction.src);
      registry.at(x.direction.tgt);
      out.push_back(std::move(x));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParseError, e.what(), n);
    } catch (const Error& e) {
      throw Error(e.code(), e.detail(), n);
    }
  }
  return out;
}

int cmd_infer_prompt(const Options& o, std::ostream& out) {
  const auto registry = registry_of(o);
  const auto strategy = parse_inference_strategy(o.strategy);
  std::unique_ptr<SubprocessBackend> backend;
  if (!o.backend_cmd.empty()) backend = std::make_unique<SubprocessBackend>(o.backend_cmd);
  Input in(o.in);
  const auto inputs = read_inference_inputs(in.get(), registry);
  Output output(o.out, out);
  for (const auto& x : inputs) {
    for (const auto& p : build_inference_prompt(strategy, x, registry, backend.get())) {
      output.get() << to_json_line(p) << '\n';
    }
  }
  output.close();
  return 0;
}

std::set<std::string> read_langs_file(const std::string& path) {
  Input in(path);
  std::set<std::string> out;
  std::string code;
  while (in.get() >> code) out.insert(code);
  return out;
}

int cmd_eval(const Options& o, std::ostream& out) {
  const auto registry = registry_of(o);
  std::set<std::string> all;
  for (const auto& l : registry.languages()) all.insert(l.code);
  std::set<std::string> wanted = all;
  if (!o.langs.empty() || o.langs_file) {
    wanted.clear();
    wanted.insert(o.langs.begin(), o.langs.end());
    if (o.langs_file) {
      auto more = read_langs_file(*o.langs_file);
      wanted.insert(more.begin(), more.end());
    }
  }
  const auto support = intersect_support(all, wanted, registry);

  std::vector<EvalRecord> records;
  {
    Input in(o.in);
    records = read_eval_records(in.get(), registry);
  }
  AggregateOptions options;
  options.metric = parse_metric(o.metric);
  options.models = o.models;
  options.include_center_pairs = !o.exclude_center_pairs;
  const auto table = aggregate(records, registry, support, options);
  write_text(o.out, render_table(table, parse_table_format(o.format)), out);
  return 0;
}

int cmd_diagnose(const Options& o, std::ostream& out, std::ostream& err) {
  const auto registry = registry_of(o);
  const auto examples = read_examples(o.in, registry);
  const auto before = target_repetition_stats(examples, o.workers);
  std::string report;
  if (o.p) {
    RetentionPolicy policy{*o.p, o.seed};
    policy.validate();
    const auto after = repetition_after_policy(examples, policy, o.workers);
    nlohmann::ordered_json j;
    j["policy"] = {{"p_reverse", policy.p_reverse}, {"seed", policy.seed}};
    j["before"] = nlohmann::ordered_json::parse(before.to_json());
    j["after"] = nlohmann::ordered_json::parse(after.to_json());
    auto& thinned = j["thinned_mean_repetition"] = nlohmann::ordered_json::object();
    for (const auto* c : {&kEnglish, &kChinese}) {
      thinned[std::string(*c)] = thinned_mean_repetition(before, after, *c);
    }
    report = j.dump(2);
    err << "after p=" << policy.p_reverse << ":\n" << after.ascii_histogram();
  } else {
    report = before.to_json();
    err << before.ascii_histogram();
  }
  write_text(o.out, report + "\n", out);
  return 0;
}

int cmd_validate(const Options& o, std::ostream& out) {
  const auto registry = registry_of(o);
  const auto dirset = enumerate_directions(registry);
  out << registry.size() << " languages, " << dirset.direction_count() << " directions\n";
  if (o.kind.empty()) return 0;

  Input in(o.in);
  std::size_t n = 0;
  if (o.kind == "multiway") {
    MultiWayReader reader(in.get(), registry);
    while (reader.next()) ++n;
  } else if (o.kind == "examples") {
    ExampleReader reader(in.get(), &registry);
    while (reader.next()) ++n;
  } else if (o.kind == "scored") {
    ExampleReader reader(in.get(), &registry);
    while (reader.next_scored()) ++n;
  } else if (o.kind == "scores") {
    n = ScoreSidecar::load(in.get()).size();
  } else if (o.kind == "prompts") {
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in.get(), line)) {
      ++lineno;
      if (line.empty()) continue;
      try {
        prompted_from_json_line(line);
      } catch (const Error& e) {
        throw Error(e.code(), e.detail(), lineno);
      }
      ++n;
    }
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown --kind '" + o.kind + "'");
  }
  out << n << " " << o.kind << " records OK\n";
  return 0;
}

std::optional<spdlog::level::level_enum> parse_level(const std::string& s) {
  auto level = spdlog::level::from_str(s);
  if (level == spdlog::level::off && s != "off") return std::nullopt;
  return level;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Corpus engineering toolkit for center-language multilingual MT.", "lmtkit"};
  app.failure_message(CLI::FailureMessage::help);
  app.set_config("--config", "", "TOML/INI file supplying option defaults; flags override it");
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--seed", o.seed, "Seed for every random draw")->capture_default_str();
  app.add_option("--workers", o.workers, "Worker threads; outputs do not depend on it")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--registry", o.registry, "Language table path, or 'builtin'")
      ->capture_default_str();
  app.add_option("--aux", o.aux, "Auxiliary-language table for a custom registry");
  app.add_option("--log-level", o.log_level, "trace|debug|info|warn|error|off")
      ->capture_default_str();

  auto io = [&](CLI::App* sub, const char* in_help, const char* out_help) {
    sub->add_option("--in", o.in, in_help)->capture_default_str();
    sub->add_option("--out", o.out, out_help)->capture_default_str();
  };

  auto* expand_cmd = app.add_subcommand("expand", "Expand multi-way records into directional pairs");
  io(expand_cmd, "Multi-way corpus (*.mwjsonl)", "Directional pairs (*.djsonl)");

  auto* downsample_cmd =
      app.add_subcommand("downsample", "Keep forward pairs, thin reverse pairs to proportion p");
  io(downsample_cmd, "Directional pairs", "Retained pairs");
  downsample_cmd->add_option("--p", o.p, "Reverse retention probability (default 0.05)");
  downsample_cmd->add_option("--report", o.report, "Write per-class counts as JSON");

  auto* mix_cmd = app.add_subcommand("mix", "Build the SFT prompt mixture");
  io(mix_cmd, "Multi-way corpus", "Prompted examples (*.pjsonl)");
  mix_cmd->add_option("--spec", o.spec, "Mixture spec JSON");
  mix_cmd->add_option("--scores", o.scores, "QE score sidecar for best-first selection");
  mix_cmd->add_option("--stats", o.stats, "Write per-direction statistics (JSON lines)");

  auto* filter_cmd = app.add_subcommand("filter", "Heuristic cleaning and QE thresholding");
  io(filter_cmd, "Directional or scored pairs", "Kept pairs");
  filter_cmd->add_option("--rules", o.rules, "Rule list JSON (default rule set otherwise)");
  filter_cmd->add_option("--scores", o.scores, "QE score sidecar");
  filter_cmd->add_option("--tau", o.tau, "Keep pairs with qe_score >= tau")
      ->check(CLI::Range(0.0, 1.0));
  filter_cmd->add_option("--thresholds", o.thresholds, "Histogram thresholds, ascending")
      ->delimiter(',');
  filter_cmd->add_option("--report", o.report, "Write the filter report as JSON");

  auto* score_cmd = app.add_subcommand("score", "Score pairs with an external QE process");
  io(score_cmd, "Directional pairs", "Scored pairs (*.sjsonl)");
  score_cmd->add_option("--scorer-cmd", o.scorer_cmd, "Scorer command line")->required();

  auto* synth_cmd = app.add_subcommand("synth", "Synthesize pairs through a translation backend");
  io(synth_cmd, "Monolingual segments (direct) or en<->X pairs (pivot)", "Synthetic pairs");
  synth_cmd->add_option("--mode", o.mode, "direct|pivot")
      ->required()
      ->check(CLI::IsMember({"direct", "pivot"}));
  synth_cmd->add_option("--backend-cmd", o.backend_cmd, "Backend command line")->required();
  synth_cmd->add_option("--direction", o.direction, "Direction for direct mode, e.g. en2fr");
  synth_cmd->add_option("--max-failure-ratio", o.max_failure_ratio,
                        "Abort when more backend calls fail than this share")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));

  auto* infer_cmd = app.add_subcommand("infer-prompt", "Build generation prompts for inference");
  io(infer_cmd, "Inputs {id,src_lang,tgt_lang,src[,aux]}", "Prompts (*.pjsonl)");
  infer_cmd->add_option("--strategy", o.strategy, "dt|pt|pmp-o|pmp-s")
      ->required()
      ->check(CLI::IsMember({"dt", "pt", "pmp-o", "pmp-s"}));
  infer_cmd->add_option("--backend-cmd", o.backend_cmd, "Backend for pt and pmp-s");

  auto* eval_cmd = app.add_subcommand("eval", "Aggregate per-direction scores into tier tables");
  eval_cmd->add_option("--records,--in", o.in, "Metric records (JSON lines)")->required();
  eval_cmd->add_option("--out", o.out, "Rendered table")->capture_default_str();
  eval_cmd->add_option("--models", o.models, "Models to report, in order")->delimiter(',');
  eval_cmd->add_option("--metric", o.metric, "comet22|sacrebleu")->capture_default_str();
  eval_cmd->add_option("--format", o.format, "markdown|csv")
      ->capture_default_str()
      ->check(CLI::IsMember({"markdown", "csv"}));
  eval_cmd->add_option("--langs", o.langs, "Languages of the comparison set")->delimiter(',');
  eval_cmd->add_option("--langs-file", o.langs_file, "Whitespace-separated language codes");
  eval_cmd->add_flag("--exclude-center-pairs", o.exclude_center_pairs,
                     "Leave en<->zh out of the X classes");

  auto* diagnose_cmd = app.add_subcommand("diagnose", "Target-repetition statistics");
  io(diagnose_cmd, "Directional pairs", "JSON report");
  diagnose_cmd->add_option("--p", o.p, "Also report statistics after thinning at p");

  auto* validate_cmd = app.add_subcommand("validate", "Check the registry and optionally a data file");
  validate_cmd->add_option("--in", o.in, "File to validate")->capture_default_str();
  validate_cmd->add_option("--kind", o.kind, "multiway|examples|scored|scores|prompts");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  const auto level = parse_level(o.log_level);
  if (!level) {
    err << "unknown --log-level '" << o.log_level << "'\n" << app.help();
    return 2;
  }
  logger()->set_level(*level);

  try {
    if (expand_cmd->parsed()) return cmd_expand(o, out);
    if (downsample_cmd->parsed()) return cmd_downsample(o, out, err);
    if (mix_cmd->parsed()) return cmd_mix(o, out);
    if (filter_cmd->parsed()) return cmd_filter(o, out);
    if (score_cmd->parsed()) return cmd_score(o, out);
    if (synth_cmd->parsed()) return cmd_synth(o, out);
    if (infer_cmd->parsed()) return cmd_infer_prompt(o, out);
    if (eval_cmd->parsed()) return cmd_eval(o, out);
    if (diagnose_cmd->parsed()) return cmd_diagnose(o, out, err);
    if (validate_cmd->parsed()) return cmd_validate(o, out);
  } catch (const Error& e) {
    err << e.to_json_line() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << Error(ErrorCode::kIoError, e.what()).to_json_line() << '\n';
    return 1;
  }
  return 2;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + (argc > 0 ? 1 : 0), argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace lmt::cli
