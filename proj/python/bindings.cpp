#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nounclass/corpus.hpp"
#include "nounclass/cues.hpp"
#include "nounclass/error.hpp"
#include "nounclass/eval.hpp"
#include "nounclass/features.hpp"
#include "nounclass/gold.hpp"
#include "nounclass/synth.hpp"
#include "nounclass/tree.hpp"

namespace py = pybind11;
using namespace nounclass;

namespace {

template <typename T, typename Writer>
std::string to_text(const T& value, Writer write) {
  std::ostringstream out;
  write(out, value);
  return out.str();
}

template <typename Parser>
auto from_text(const std::string& text, Parser parse) {
  std::istringstream in(text);
  return parse(in);
}

py::object label_to_py(const std::optional<Label>& label) {
  if (!label) return py::none();
  return py::bool_(*label == Label::Member);
}

}  // namespace

PYBIND11_MODULE(_nounclass, m) {
  m.doc() = "Cue-based noun class learning: corpora, cue sets, features, C4.5 trees, evaluation";

  auto error = py::register_exception<Error>(m, "Error", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", error.ptr());

  py::class_<Corpus>(m, "Corpus")
      .def_property_readonly("language", &Corpus::language)
      .def_property_readonly("token_count", &Corpus::token_count)
      .def("__len__", [](const Corpus& c) { return c.sentences().size(); })
      .def("sentence", [](const Corpus& c, std::size_t i) {
        py::list out;
        for (const auto& t : c.sentences().at(i).tokens)
          out.append(py::make_tuple(t.surface, t.lemma, std::string(to_string(t.pos))));
        return out;
      })
      .def("to_text", [](const Corpus& c) { return to_text(c, write_corpus); });

  m.def("parse_corpus", [](const std::string& text, std::string language) {
    std::istringstream in(text);
    return parse_corpus(in, std::move(language));
  }, py::arg("text"), py::arg("language") = "other");
  m.def("read_corpus", [](const std::string& path, std::string language) {
    return parse_corpus_file(path, std::move(language));
  }, py::arg("path"), py::arg("language") = "other");

  py::class_<CueSet>(m, "CueSet")
      .def_property_readonly("class_name", &CueSet::class_name)
      .def_property_readonly("language", &CueSet::language)
      .def_property_readonly("groups", &CueSet::groups)
      .def("__len__", [](const CueSet& c) { return c.patterns().size(); })
      .def("to_text", [](const CueSet& c) { return to_text(c, write_cueset); });

  m.def("parse_cueset", [](const std::string& text, const std::string& base_dir) {
    std::istringstream in(text);
    return parse_cueset(in, base_dir);
  }, py::arg("text"), py::arg("base_dir") = ".");
  m.def("read_cueset", &parse_cueset_file, py::arg("path"));
  m.def("builtin_cueset", [](const std::string& cls, const std::string& lang) {
    return builtin_cueset(cls, lang);
  }, py::arg("class_name"), py::arg("language"));

  py::class_<GoldStandard>(m, "GoldStandard")
      .def(py::init<std::string>(), py::arg("class_name") = "")
      .def("add", [](GoldStandard& g, const std::string& lemma, bool member) {
        g.add(lemma, member ? Label::Member : Label::Nonmember);
      }, py::arg("lemma"), py::arg("member"))
      .def_property_readonly("members", &GoldStandard::members)
      .def_property_readonly("nonmembers", &GoldStandard::nonmembers)
      .def("__len__", [](const GoldStandard& g) { return g.entries().size(); })
      .def("to_text", [](const GoldStandard& g) { return to_text(g, write_gold); });

  m.def("parse_gold", [](const std::string& text) {
    std::istringstream in(text);
    return parse_gold(in);
  }, py::arg("text"));
  m.def("read_gold", [](const std::string& path) { return parse_gold_file(path); }, py::arg("path"));

  py::class_<Dataset>(m, "Dataset")
      .def_readonly("groups", &Dataset::groups)
      .def("__len__", [](const Dataset& d) { return d.rows.size(); })
      .def_property_readonly("lemmas", [](const Dataset& d) {
        std::vector<std::string> out;
        for (const auto& r : d.rows) out.push_back(r.features.lemma);
        return out;
      })
      .def_property_readonly("values", [](const Dataset& d) {
        std::vector<std::vector<double>> out;
        for (const auto& r : d.rows) out.push_back(r.features.values);
        return out;
      })
      .def_property_readonly("labels", [](const Dataset& d) {
        py::list out;
        for (const auto& r : d.rows) out.append(label_to_py(r.label));
        return out;
      })
      .def("drop_unseen", [](const Dataset& d) { return drop_unseen(d); })
      .def("to_text", [](const Dataset& d) { return to_text(d, write_dataset); });

  m.def("parse_dataset", [](const std::string& text) {
    return from_text(text, [](std::istream& in) { return parse_dataset(in); });
  }, py::arg("text"));
  m.def("extract_dataset", py::overload_cast<const Corpus&, const CueSet&, const GoldStandard&>(
            &extract_dataset), py::arg("corpus"), py::arg("cues"), py::arg("gold"));
  m.def("extract_dataset", [](const Corpus& c, const CueSet& cues, const std::vector<std::string>& vocab) {
    return extract_dataset(c, cues, vocab);
  }, py::arg("corpus"), py::arg("cues"), py::arg("vocabulary"));

  m.def("cue_frequencies", [](const Corpus& c, const CueSet& cues, const GoldStandard& gold) {
    py::list out;
    for (const auto& f : class_cue_frequencies(c, cues, gold))
      out.append(py::make_tuple(f.group, f.members, f.nonmembers));
    return out;
  }, py::arg("corpus"), py::arg("cues"), py::arg("gold"),
        "(group, member_rate, nonmember_rate) per cue group");

  py::class_<TrainParams>(m, "TrainParams")
      .def(py::init([](std::size_t min_leaf, double cf, std::optional<std::size_t> max_depth,
                       bool subtree_raising, bool laplace) {
             TrainParams p{min_leaf, cf, max_depth, subtree_raising, laplace};
             p.validate();
             return p;
           }),
           py::arg("min_leaf") = 2, py::arg("confidence_factor") = 0.25, py::arg("max_depth") = py::none(),
           py::arg("subtree_raising") = true, py::arg("laplace_confidence") = false)
      .def_readonly("min_leaf", &TrainParams::min_leaf)
      .def_readonly("confidence_factor", &TrainParams::confidence_factor)
      .def_readonly("max_depth", &TrainParams::max_depth)
      .def_readonly("subtree_raising", &TrainParams::subtree_raising)
      .def_readonly("laplace_confidence", &TrainParams::laplace_confidence);

  py::class_<Prediction>(m, "Prediction")
      .def_readonly("lemma", &Prediction::lemma)
      .def_property_readonly("member", [](const Prediction& p) { return p.label == Label::Member; })
      .def_readonly("confidence", &Prediction::confidence)
      .def("__repr__", [](const Prediction& p) {
        return "Prediction(" + p.lemma + ", " + (p.label == Label::Member ? "member" : "nonmember") +
               ", " + std::to_string(p.confidence) + ")";
      });

  py::class_<DecisionTree>(m, "DecisionTree")
      .def_readonly("groups", &DecisionTree::groups)
      .def_readonly("params", &DecisionTree::params)
      .def_property_readonly("node_count", [](const DecisionTree& t) { return node_count(t.root); })
      .def_property_readonly("leaf_count", [](const DecisionTree& t) { return leaf_count(t.root); })
      .def_property_readonly("depth", [](const DecisionTree& t) { return depth(t.root); })
      .def("classify", [](const DecisionTree& t, const std::vector<double>& values, const std::string& lemma) {
        return classify(t, {lemma, values, true});
      }, py::arg("values"), py::arg("lemma") = "")
      .def("classify_dataset", [](const DecisionTree& t, const Dataset& d) {
        std::vector<Prediction> out;
        for (const auto& r : d.rows) out.push_back(classify(t, r.features));
        return out;
      })
      .def("to_text", [](const DecisionTree& t) { return to_text(t, write_model); });

  m.def("train", &train, py::arg("dataset"), py::arg("params") = TrainParams{});
  m.def("parse_model", [](const std::string& text) {
    return from_text(text, [](std::istream& in) { return parse_model(in); });
  }, py::arg("text"));

  py::class_<ThresholdReport>(m, "ThresholdReport")
      .def_readonly("threshold", &ThresholdReport::threshold)
      .def_readonly("accuracy_above_pct", &ThresholdReport::accuracy_above_pct)
      .def_readonly("fraction_below_pct", &ThresholdReport::fraction_below_pct)
      .def_readonly("target_precision", &ThresholdReport::target_precision)
      .def_readonly("above", &ThresholdReport::above)
      .def_readonly("total", &ThresholdReport::total)
      .def_readonly("target_met", &ThresholdReport::target_met)
      .def_property_readonly("automated_pct", &automation_estimate);

  py::class_<CrossValidation>(m, "CrossValidation")
      .def_property_readonly("accuracy_pct", [](const CrossValidation& c) { return c.report.accuracy_pct; })
      .def_property_readonly("fp_pct", [](const CrossValidation& c) { return c.report.fp_pct; })
      .def_property_readonly("fn_pct", [](const CrossValidation& c) { return c.report.fn_pct; })
      .def_property_readonly("fold_accuracy_pct", [](const CrossValidation& c) {
        std::vector<double> out;
        for (const auto& f : c.report.folds) out.push_back(f.rates.accuracy_pct);
        return out;
      })
      .def_property_readonly("predictions", [](const CrossValidation& c) {
        std::vector<Prediction> out;
        for (const auto& p : c.predictions) out.push_back(p.prediction);
        return out;
      })
      .def("threshold_sweep", [](const CrossValidation& c, double target) {
        return threshold_sweep(c.predictions, target);
      }, py::arg("target_precision") = 0.9)
      .def("report", [](const CrossValidation& c, double target, const std::string& cls, std::size_t k,
                        std::uint64_t seed) {
        std::ostringstream out;
        write_report(out, c.report, threshold_sweep(c.predictions, target), {cls, k, seed});
        return out.str();
      }, py::arg("target_precision") = 0.9, py::arg("class_name") = "", py::arg("k") = 10,
         py::arg("seed") = 0);

  m.def("cross_validate", &cross_validate, py::arg("dataset"), py::arg("params") = TrainParams{},
        py::arg("k") = 10, py::arg("seed") = 0);

  m.def("published_rates", [](const std::string& cls, const std::string& lang) {
    py::list out;
    for (const auto& r : published_rates(cls, lang))
      out.append(py::make_tuple(r.group, r.member_rate, r.nonmember_rate));
    return out;
  }, py::arg("class_name"), py::arg("language"));

  m.def("synth_corpus", [](const CueSet& cues, std::optional<std::vector<std::tuple<std::string, double, double>>> rates,
                           std::size_t members, std::size_t nonmembers, std::size_t occurrences,
                           std::uint64_t seed) {
    SynthSpec spec{cues, {}, members, nonmembers, occurrences};
    if (rates) {
      for (const auto& [g, mr, nr] : *rates) spec.rates.push_back({g, mr, nr});
    } else {
      spec.rates = published_rates(cues.class_name(), cues.language());
    }
    auto syn = synth_corpus(spec, seed);
    return py::make_tuple(std::move(syn.corpus), std::move(syn.gold));
  }, py::arg("cues"), py::arg("rates") = py::none(), py::arg("members") = 200,
     py::arg("nonmembers") = 200, py::arg("occurrences") = 50, py::arg("seed") = 0,
     "Returns (corpus, gold). Without rates the builtin inventory's reference rates are used.");
}
