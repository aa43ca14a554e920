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

#include <sstream>

#include <pybind11/functional.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lmtkit/cli.hpp"
#include "lmtkit/corpus_io.hpp"
#include "lmtkit/diagnostics.hpp"
#include "lmtkit/direction.hpp"
#include "lmtkit/downsample.hpp"
#include "lmtkit/error.hpp"
#include "lmtkit/eval.hpp"
#include "lmtkit/mixture.hpp"
#include "lmtkit/prompt.hpp"
#include "lmtkit/quality_filter.hpp"
#include "lmtkit/registry.hpp"
#include "lmtkit/synthesis.hpp"

namespace py = pybind11;
using namespace lmt;

namespace {

const Registry& reg(const Registry* r) { return r ? *r : Registry::builtin(); }

// Adapts a Python callable (src_lang, tgt_lang, text) -> str. Raising any
// exception marks the item as failed.
class CallableBackend final : public TranslationBackend {
 public:
  explicit CallableBackend(py::function fn) : fn_(std::move(fn)) {}
  std::string translate(const TranslationRequest& r) override {
    py::gil_scoped_acquire gil;
    try {
      return fn_(r.src_lang, r.tgt_lang, r.text).cast<std::string>();
    } catch (const py::error_already_set& e) {
      throw Error(ErrorCode::kBackendFailure, e.what());
    }
  }

 private:
  py::function fn_;
};

std::unique_ptr<TranslationBackend> make_backend(const py::object& backend) {
  if (backend.is_none()) return nullptr;
  if (py::isinstance<py::str>(backend)) {
    const auto spec = backend.cast<std::string>();
    if (spec == "identity") return std::make_unique<IdentityBackend>();
    return std::make_unique<SubprocessBackend>(spec);
  }
  if (py::isinstance<py::dict>(backend)) {
    // {"en2zh": {"word": "translation", ...}, ...}
    auto d = std::make_unique<DictionaryBackend>();
    for (const auto& [key, table] : backend.cast<py::dict>()) {
      d->add(parse_direction(key.cast<std::string>()),
             table.cast<std::map<std::string, std::string, std::less<>>>());
    }
    return d;
  }
  return std::make_unique<CallableBackend>(backend.cast<py::function>());
}

py::dict summary_dict(const RepetitionSummary& s) {
  py::dict d;
  d["targets"] = s.targets;
  d["sources"] = s.sources;
  d["max_repetition"] = s.max_repetition;
  d["mean_repetition"] = s.mean();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Corpus engineering for center-language multilingual MT";

  static py::exception<Error> lmt_error(m, "LmtError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = lmt_error;
      py::object instance = exc(std::string(to_string(e.code())) + ": " + e.detail());
      instance.attr("code") = std::string(to_string(e.code()));
      instance.attr("line") = e.line() ? py::cast(*e.line()) : py::none();
      PyErr_SetObject(lmt_error.ptr(), instance.ptr());
    }
  });

  // ---- registry ----
  py::class_<Language>(m, "Language")
      .def_readonly("code", &Language::code)
      .def_readonly("name", &Language::name)
      .def_readonly("script", &Language::script)
      .def_readonly("family", &Language::family)
      .def_property_readonly("tier", [](const Language& l) { return std::string(to_string(l.tier)); })
      .def("__repr__", [](const Language& l) { return "Language('" + l.code + "')"; });

  py::class_<Registry>(m, "Registry")
      .def_static("builtin", &Registry::builtin, py::return_value_policy::reference)
      .def_static("load", &load_registry, py::arg("path"), py::arg("aux_path") = py::none())
      .def_property_readonly("languages", &Registry::languages)
      .def_property_readonly("auxiliaries", &Registry::auxiliaries)
      .def("__len__", &Registry::size)
      .def("__contains__", &Registry::contains)
      .def("tier_of", [](const Registry& r, const std::string& c) {
        return std::string(to_string(r.tier_of(c)));
      })
      .def("tier_counts", [](const Registry& r) {
        const auto t = r.tier_counts();
        return py::make_tuple(t.high, t.medium, t.low);
      })
      .def("auxiliary_for", [](const Registry& r, const std::string& src, const std::string& tgt) {
        return r.auxiliary_for({src, tgt});
      });

  // ---- records ----
  py::class_<DirectionalExample>(m, "DirectionalExample")
      .def(py::init([](std::string id, std::string src_lang, std::string tgt_lang, std::string src,
                       std::string tgt, const std::string& provenance) {
             return DirectionalExample{std::move(id), std::move(src_lang), std::move(tgt_lang),
                                       std::move(src), std::move(tgt),
                                       parse_provenance(provenance)};
           }),
           py::arg("id"), py::arg("src_lang"), py::arg("tgt_lang"), py::arg("src"),
           py::arg("tgt"), py::arg("provenance") = "human")
      .def_readwrite("id", &DirectionalExample::id)
      .def_readwrite("src_lang", &DirectionalExample::src_lang)
      .def_readwrite("tgt_lang", &DirectionalExample::tgt_lang)
      .def_readwrite("src", &DirectionalExample::src)
      .def_readwrite("tgt", &DirectionalExample::tgt)
      .def_property_readonly("provenance", [](const DirectionalExample& e) {
        return std::string(to_string(e.provenance));
      })
      .def("to_json", [](const DirectionalExample& e) { return to_json_line(e); })
      .def(py::self == py::self)
      .def("__repr__", [](const DirectionalExample& e) { return "DirectionalExample('" + e.id + "')"; });

  py::class_<MultiWayRecord>(m, "MultiWayRecord")
      .def(py::init([](std::string id, std::map<std::string, std::string> sentences) {
             return MultiWayRecord{std::move(id), std::move(sentences)};
           }),
           py::arg("id"), py::arg("sentences"))
      .def_readwrite("id", &MultiWayRecord::id)
      .def_readwrite("sentences", &MultiWayRecord::sentences);

  py::class_<PromptedExample>(m, "PromptedExample")
      .def_readonly("id", &PromptedExample::id)
      .def_readonly("text", &PromptedExample::text)
      .def_readonly("loss_start", &PromptedExample::loss_start)
      .def_readonly("loss_end", &PromptedExample::loss_end)
      .def_readonly("src_lang", &PromptedExample::src_lang)
      .def_readonly("tgt_lang", &PromptedExample::tgt_lang)
      .def_readonly("aux_lang", &PromptedExample::aux_lang)
      .def_property_readonly("format", [](const PromptedExample& p) {
        return std::string(to_string(p.format));
      })
      .def("loss_slice", [](const PromptedExample& p) {
        // Byte offsets; hand back bytes so non-ASCII slicing stays exact.
        const auto s = p.text.substr(p.loss_start, p.loss_end - p.loss_start);
        return py::bytes(s);
      })
      .def("to_json", [](const PromptedExample& p) { return to_json_line(p); });

  // ---- directions ----
  m.def("enumerate_directions", [](const Registry* r) {
    std::vector<std::pair<std::string, std::string>> out;
    const auto dirset = enumerate_directions(reg(r));
    for (const auto& d : dirset.directions()) out.emplace_back(d.src, d.tgt);
    return out;
  }, py::arg("registry") = nullptr);
  m.def("expand", [](const MultiWayRecord& record, const Registry* r) {
    return expand(record, enumerate_directions(reg(r)));
  }, py::arg("record"), py::arg("registry") = nullptr);

  // ---- downsampling ----
  m.def("fnv1a64", [](const py::bytes& b) { return fnv1a64(std::string(b)); });
  m.def("seeded_hash", &seeded_hash, py::arg("seed"), py::arg("key"));
  m.def("seeded_uniform", &seeded_uniform, py::arg("seed"), py::arg("key"));
  m.def("seeded_below", &seeded_below, py::arg("seed"), py::arg("key"), py::arg("p"));
  m.def("classify", [](const std::string& src, const std::string& tgt) {
    return std::string(to_string(classify(Direction{src, tgt})));
  });
  m.def("downsample", [](const std::vector<DirectionalExample>& examples, double p,
                         std::uint64_t seed, std::size_t workers) {
    DownsampleCounts counts;
    RetentionPolicy policy{p, seed};
    policy.validate();
    std::vector<DirectionalExample> kept;
    {
      py::gil_scoped_release release;
      kept = downsample(examples, policy, &counts, workers);
    }
    py::dict c;
    c["forward_kept"] = counts.forward_kept;
    c["reverse_kept"] = counts.reverse_kept;
    c["reverse_dropped"] = counts.reverse_dropped;
    return py::make_tuple(kept, c);
  }, py::arg("examples"), py::arg("p") = 0.05, py::arg("seed") = 42, py::arg("workers") = 1);

  // ---- prompts ----
  m.def("render_stp", [](const DirectionalExample& e, const Registry* r) {
    return render_stp(e, reg(r));
  }, py::arg("example"), py::arg("registry") = nullptr);
  m.def("render_pmp", [](const DirectionalExample& e, const std::string& aux_text,
                         const std::string& aux_lang, const Registry* r) {
    return render_pmp(e, aux_text, aux_lang, reg(r));
  }, py::arg("example"), py::arg("aux_text"), py::arg("aux_lang"), py::arg("registry") = nullptr);
  m.def("render_cpt_bilingual", [](const DirectionalExample& e, bool full_sequence) {
    return render_cpt_bilingual(e, full_sequence ? CptLossSpan::kFullSequence : CptLossSpan::kTarget);
  }, py::arg("example"), py::arg("full_sequence") = false);
  m.def("render_cpt_mono", &render_cpt_mono, py::arg("id"), py::arg("lang"), py::arg("text"));
  m.def("parse_cpt_bilingual", [](const std::string& text) {
    auto p = parse_cpt_bilingual(text);
    return py::make_tuple(p.direction.src, p.direction.tgt, p.src, p.tgt);
  });

  m.def("build_sft_mixture", [](const std::vector<MultiWayRecord>& records, const py::dict& spec,
                                const Registry* r, const std::optional<std::map<std::string, double>>& scores,
                                std::size_t workers) {
    MixtureSpec s;
    std::istringstream in(py::module_::import("json").attr("dumps")(spec).cast<std::string>());
    s = MixtureSpec::from_json(in);
    std::optional<ScoreSidecar> sidecar;
    if (scores) {
      sidecar.emplace();
      for (const auto& [id, v] : *scores) sidecar->insert(id, v);
    }
    const auto& registry = reg(r);
    MixtureResult result;
    {
      py::gil_scoped_release release;
      result = build_sft_mixture(records, registry, enumerate_directions(registry), s,
                                 sidecar ? &*sidecar : nullptr, workers);
    }
    py::list stats;
    for (const auto& st : result.stats) {
      py::dict d;
      d["direction"] = st.direction.key();
      d["class"] = std::string(to_string(st.cls));
      d["supply"] = st.supply;
      d["selected"] = st.selected;
      d["retained"] = st.retained;
      d["stp"] = st.stp;
      d["pmp"] = st.pmp;
      d["missing_auxiliary"] = st.missing_auxiliary;
      stats.append(d);
    }
    py::list warnings;
    for (const auto& w : result.warnings) warnings.append(py::make_tuple(w.direction.key(), w.message));
    return py::make_tuple(result.examples, stats, warnings);
  }, py::arg("records"), py::arg("spec") = py::dict(), py::arg("registry") = nullptr,
     py::arg("scores") = py::none(), py::arg("workers") = 1);

  // ---- filtering ----
  m.def("apply_heuristics", [](const std::vector<DirectionalExample>& pairs,
                               const std::optional<std::string>& rules_json) {
    std::vector<FilterRule> rules = default_rules();
    if (rules_json) {
      std::istringstream in(*rules_json);
      rules = parse_rules(in);
    }
    auto r = apply_heuristics(pairs, std::move(rules));
    return py::make_tuple(r.kept, r.report.to_json());
  }, py::arg("pairs"), py::arg("rules_json") = py::none());
  m.def("threshold_filter", [](const std::vector<std::pair<DirectionalExample, double>>& scored,
                               double tau) {
    std::vector<ScoredPair> in;
    for (const auto& [e, s] : scored) in.push_back({e, s});
    std::vector<std::pair<DirectionalExample, double>> out;
    for (auto& p : threshold_filter(in, tau)) out.emplace_back(std::move(p.example), p.qe_score);
    return out;
  }, py::arg("scored"), py::arg("tau") = kDefaultSelectionThreshold);
  m.def("score_histogram", [](const std::vector<double>& scores, const std::vector<double>& thresholds) {
    std::vector<std::tuple<double, std::size_t, double>> out;
    for (const auto& b : score_histogram(std::span<const double>(scores), thresholds)) {
      out.emplace_back(b.tau, b.count, b.proportion);
    }
    return out;
  }, py::arg("scores"),
     py::arg("thresholds") = std::vector<double>(std::begin(kDefaultThresholds), std::end(kDefaultThresholds)));
  m.def("score_with_command", [](const std::vector<DirectionalExample>& pairs, const std::string& cmd) {
    std::vector<std::pair<DirectionalExample, double>> out;
    for (auto& p : score_with_command(pairs, cmd)) out.emplace_back(std::move(p.example), p.qe_score);
    return out;
  }, py::arg("pairs"), py::arg("command"));

  // ---- synthesis ----
  m.def("synth_direct", [](const std::vector<std::tuple<std::string, std::string, std::string>>& mono,
                           const py::object& backend, const std::string& direction,
                           const Registry* r, double max_failure_ratio) {
    std::vector<MonoSegment> segs;
    for (const auto& [id, lang, text] : mono) segs.push_back({id, lang, text});
    auto b = make_backend(backend);
    if (!b) throw Error(ErrorCode::kInvalidArgument, "a backend is required");
    auto res = synth_direct(segs, *b, parse_direction(direction), reg(r), {max_failure_ratio});
    return py::make_tuple(res.examples, res.attempted, res.failed);
  }, py::arg("mono"), py::arg("backend"), py::arg("direction"), py::arg("registry") = nullptr,
     py::arg("max_failure_ratio") = 0.10);
  m.def("synth_pivot", [](const std::vector<DirectionalExample>& pairs, const py::object& backend,
                          const Registry* r, double max_failure_ratio) {
    auto b = make_backend(backend);
    if (!b) throw Error(ErrorCode::kInvalidArgument, "a backend is required");
    auto res = synth_pivot(pairs, *b, reg(r), {max_failure_ratio});
    return py::make_tuple(res.examples, res.attempted, res.failed);
  }, py::arg("pairs"), py::arg("backend"), py::arg("registry") = nullptr,
     py::arg("max_failure_ratio") = 0.10);
  m.def("build_inference_prompt", [](const std::string& strategy, const std::string& id,
                                     const std::string& src_lang, const std::string& tgt_lang,
                                     const std::string& src, const std::optional<std::string>& aux,
                                     const py::object& backend, const Registry* r) {
    auto b = make_backend(backend);
    return build_inference_prompt(parse_inference_strategy(strategy),
                                  {id, {src_lang, tgt_lang}, src, aux}, reg(r), b.get());
  }, py::arg("strategy"), py::arg("id"), py::arg("src_lang"), py::arg("tgt_lang"), py::arg("src"),
     py::arg("aux") = py::none(), py::arg("backend") = py::none(), py::arg("registry") = nullptr);

  // ---- evaluation ----
  m.def("intersect_support", [](const std::set<std::string>& a, const std::set<std::string>& b,
                                const Registry* r) {
    const auto s = intersect_support(a, b, reg(r));
    return py::make_tuple(s.languages, py::make_tuple(s.tiers.high, s.tiers.medium, s.tiers.low),
                          s.descriptor());
  }, py::arg("a"), py::arg("b"), py::arg("registry") = nullptr);
  m.def("aggregate_table", [](const std::string& records_jsonl, const std::optional<std::set<std::string>>& langs,
                              const std::vector<std::string>& models, const std::string& metric,
                              const std::string& format, bool include_center_pairs, const Registry* r) {
    const auto& registry = reg(r);
    std::set<std::string> all;
    for (const auto& l : registry.languages()) all.insert(l.code);
    const auto support = intersect_support(all, langs.value_or(all), registry);
    std::istringstream in(records_jsonl);
    const auto records = read_eval_records(in, registry);
    AggregateOptions options;
    options.metric = parse_metric(metric);
    options.models = models;
    options.include_center_pairs = include_center_pairs;
    const auto table = aggregate(records, registry, support, options);
    return render_table(table, parse_table_format(format));
  }, py::arg("records_jsonl"), py::arg("langs") = py::none(),
     py::arg("models") = std::vector<std::string>{}, py::arg("metric") = "comet22",
     py::arg("format") = "markdown", py::arg("include_center_pairs") = true,
     py::arg("registry") = nullptr);

  // ---- diagnostics ----
  m.def("target_repetition_stats", [](const std::vector<DirectionalExample>& examples,
                                      const std::optional<double>& p, std::uint64_t seed) {
    const auto stats = p ? repetition_after_policy(examples, {*p, seed})
                         : target_repetition_stats(examples);
    py::dict d;
    d["distinct_targets"] = stats.distinct_targets();
    d["max_repetition"] = stats.max_repetition();
    d["histogram"] = stats.histogram();
    d["forward"] = summary_dict(stats.by_class(DirectionClass::kForward));
    d["reverse"] = summary_dict(stats.by_class(DirectionClass::kReverse));
    py::dict langs;
    for (const auto& [lang, s] : stats.by_target_language()) langs[py::str(lang)] = summary_dict(s);
    d["by_target_language"] = langs;
    return d;
  }, py::arg("examples"), py::arg("p") = py::none(), py::arg("seed") = 42);

  // ---- cli ----
  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"));
}
