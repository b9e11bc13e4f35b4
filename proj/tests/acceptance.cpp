// Copyright 2026 The MorphKit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails. Pass criterion numbers as arguments to
// run a subset.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "layer_checks.hpp"
#include "morphkit/eval/metrics.hpp"
#include "morphkit/lemma/lemma_rules.hpp"
#include "morphkit/ner/scoring.hpp"
#include "morphkit/tagger/dictionary.hpp"
#include "morphkit/tagger/model.hpp"
#include "oracles.hpp"

using namespace morphkit;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

// 1. Lemma rules reproduce the lemma for fuzzed pairs and the lexicon.
Outcome lemma_roundtrip() {
  const auto t0 = Clock::now();
  Rng rng(1, "acceptance/lemma");
  size_t failures = 0, checked = 0;
  auto check_pair = [&](const std::string& form, const std::string& lemma) {
    ++checked;
    try {
      if (lemma::apply_rule(lemma::build_rule(form, lemma), form) != lemma) ++failures;
    } catch (const std::exception&) {
      ++failures;
    }
  };
  for (int i = 0; i < 10000; ++i) {
    const std::string form = testing::random_word(rng, 1, 12);
    // Half unrelated pairs, half a shared stem with new affixes.
    std::string lemma;
    if (i % 2 == 0) {
      lemma = testing::random_word(rng, 1, 12);
    } else {
      auto chars = unicode::decode(form);
      const size_t keep = 1 + rng.below(chars.size());
      const size_t from = rng.below(chars.size() - keep + 1);
      std::u32string stem = chars.substr(from, keep);
      if (rng.bernoulli(0.5)) stem[0] = unicode::to_upper(stem[0]);
      lemma = testing::random_word(rng, 0, 3) + unicode::encode(stem) + testing::random_word(rng, 0, 3);
      if (unicode::decode(lemma).size() > 12) lemma = unicode::encode(stem);
    }
    check_pair(form, lemma);
  }
  std::ifstream lexicon(testing::data_path("sample_lexicon.tsv"));
  std::string line;
  size_t lexicon_lines = 0;
  while (std::getline(lexicon, line)) {
    const auto tab = line.find('\t');
    if (tab == std::string::npos) return {false, "malformed lexicon line " + std::to_string(lexicon_lines + 1)};
    check_pair(line.substr(0, tab), line.substr(tab + 1));
    ++lexicon_lines;
  }
  const double secs = seconds_since(t0);
  return {failures == 0 && lexicon_lines == 1000 && secs < 10.0,
          std::to_string(failures) + " failures in " + std::to_string(checked) + " pairs (" +
              std::to_string(lexicon_lines) + " lexicon lines), " + fmt("%.2f s", secs)};
}

// 2. Shortest edit scripts have insert/delete-distance length.
Outcome edit_script_minimality() {
  Rng rng(2, "acceptance/edit");
  size_t mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    std::u32string a, b;
    const char32_t base = U'a';
    for (uint64_t k = rng.below(11); k > 0; --k) a.push_back(base + static_cast<char32_t>(rng.below(4)));
    for (uint64_t k = rng.below(11); k > 0; --k) b.push_back(base + static_cast<char32_t>(rng.below(4)));
    const auto script = lemma::shortest_edit_script(a, b);
    // the script must also transform a into b
    std::u32string out;
    size_t pos = 0;
    bool valid = true;
    for (const auto& op : script) {
      if (op.kind == lemma::EditKind::insert_char) {
        out.push_back(op.ch);
      } else if (pos >= a.size()) {
        valid = false;
        break;
      } else if (op.kind == lemma::EditKind::copy) {
        out.push_back(a[pos++]);
      } else {
        ++pos;
      }
    }
    valid = valid && pos == a.size() && out == b;
    if (!valid || lemma::edit_cost(script) != testing::indel_distance(a, b)) ++mismatches;
  }
  return {mismatches == 0, std::to_string(mismatches) + " mismatches in 1000 pairs"};
}

// 3. MST decoding agrees with exhaustive enumeration.
Outcome mst_exhaustive() {
  const auto t0 = Clock::now();
  Rng rng(3, "acceptance/mst");
  size_t mismatches = 0;
  for (int n = 1; n <= 4; ++n) {
    const auto trees = testing::all_single_root_trees(n);
    for (int i = 0; i < 1000; ++i) {
      const auto s = testing::random_scores(n, rng);
      if (tagger::mst_decode(s) != testing::brute_force_mst(s, trees)) ++mismatches;
    }
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs < 30.0, std::to_string(mismatches) + " mismatches in 4000 matrices, " + fmt("%.2f s", secs)};
}

// 4. Finite-difference gradient checks for every layer.
Outcome gradient_checks() {
  const std::set<std::string> required{"embedding", "gru", "lstm", "bigru", "bilstm", "softmax_cross_entropy", "biaffine"};
  std::map<std::string, int> configs;
  double worst = 0.0;
  std::string worst_layer;
  bool all_checked = true;
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    for (const auto& c : testing::run_layer_checks(seed)) {
      ++configs[c.layer];
      all_checked = all_checked && c.result.checked > 0;
      if (c.result.max_relative_error > worst) {
        worst = c.result.max_relative_error;
        worst_layer = c.layer;
      }
    }
  }
  bool covered = true;
  for (const auto& layer : required) covered = covered && configs[layer] >= 20;
  return {covered && all_checked && worst < 1e-4,
          std::to_string(configs.size()) + " layers x 20 configurations, max relative error " + fmt("%.2e", worst) +
              (worst_layer.empty() ? "" : " (" + worst_layer + ")")};
}

// 5. Joint mode memorizes the toy corpus.
Outcome toy_overfit() {
  const auto t0 = Clock::now();
  const auto corpus = conllu::read_conllu_file(testing::data_path("toy_train.conllu"));
  tagger::TaggerParserConfig cfg;
  cfg.mode = tagger::Mode::joint;
  // Default character GRU width; the remaining widths are shrunk for a single core.
  cfg.char_gru_dim = 256;
  cfg.char_dim = 24;
  cfg.word_dim = 48;
  cfg.lstm_dim = 64;
  cfg.arc_dim = 64;
  cfg.label_dim = 16;
  cfg.batch_size = 8;
  cfg.dropout = 0.1;
  cfg.word_dropout = 0.0;
  cfg.learning_rate = 3e-3;
  cfg.epochs = 200;
  eval::MetricReport last;
  int reached = -1;
  tagger::TrainOptions opt;
  opt.on_epoch = [&](const tagger::EpochReport& r, const tagger::TaggerParser& m) {
    if (r.epoch % 5) return true;
    last = eval::evaluate(corpus, m.predict(corpus));
    const bool done = last.upos.ratio() >= 0.99 && last.xpos.ratio() >= 0.99 && last.lemmas.ratio() >= 0.99 &&
                      last.uas.ratio() >= 0.95;
    if (done) reached = r.epoch;
    return !done;
  };
  tagger::TaggerParser::train(corpus, cfg, opt);
  const double secs = seconds_since(t0);
  return {reached > 0 && secs < 300.0,
          (reached > 0 ? "reached at epoch " + std::to_string(reached) : std::string("not reached in 200 epochs")) +
              ": UPOS " + fmt("%.4f", last.upos.ratio()) + ", XPOS " + fmt("%.4f", last.xpos.ratio()) + ", lemmas " +
              fmt("%.4f", last.lemmas.ratio()) + ", UAS " + fmt("%.4f", last.uas.ratio()) + ", " + fmt("%.1f s", secs)};
}

// 6. Pretrained embeddings help on unseen dev words.
Outcome ablation_direction() {
  const auto all = conllu::read_conllu_file(testing::data_path("ablation.conllu"));
  const auto we = embed::load_word_embeddings(testing::data_path("ablation_we.txt"));
  const size_t dev_size = all.sentences.size() / 5;
  conllu::Document train, dev;
  train.sentences.assign(all.sentences.begin(), all.sentences.end() - static_cast<long>(dev_size));
  dev.sentences.assign(all.sentences.end() - static_cast<long>(dev_size), all.sentences.end());
  auto run = [&](uint64_t seed, bool with_we) {
    tagger::TaggerParserConfig cfg;
    cfg.mode = tagger::Mode::tag_only;
    cfg.char_dim = 16;
    cfg.char_gru_dim = 32;
    cfg.word_dim = 32;
    cfg.lstm_dim = 32;
    cfg.batch_size = 16;
    cfg.epochs = 8;
    cfg.seed = seed;
    tagger::TrainOptions opt;
    opt.pretrained = with_we ? &we : nullptr;
    const auto model = tagger::TaggerParser::train(train, cfg, opt);
    return eval::tagging_accuracy(dev, model.predict(dev), eval::TagField::xpos).ratio();
  };
  std::vector<double> with, without;
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    with.push_back(run(seed, true));
    without.push_back(run(seed, false));
  }
  std::sort(with.begin(), with.end());
  std::sort(without.begin(), without.end());
  const double mw = with[2], mo = without[2];
  return {mw >= mo, "median dev tag accuracy with embeddings " + fmt("%.4f", mw) + ", without " + fmt("%.4f", mo) +
                        " (5 seeds, " + std::to_string(dev_size) + " dev sentences)"};
}

// 7. Dictionary-constrained decoding obeys its contract.
Outcome dictionary_contract() {
  Rng rng(7, "acceptance/dictionary");
  const std::vector<std::string> tags{"NNFS1", "NNFS2", "NNFP1", "VB-S3", "AAFS1", "Z:"};
  const std::vector<std::string> words{"kočka", "kočky", "Kočce", "hrad", "hradu", "a", "PRAHA", "dělat", "ČEZu"};
  std::vector<lemma::LemmaRule> all_rules;
  for (const auto& f : words)
    for (const auto& l : words) all_rules.push_back(lemma::build_rule(f, l));
  size_t violations = 0, constrained = 0;
  for (int i = 0; i < 1000; ++i) {
    std::vector<lemma::LemmaRule> rules;
    for (const auto& r : all_rules)
      if (rng.bernoulli(0.3)) rules.push_back(r);
    if (rules.empty()) rules.push_back(all_rules[rng.below(all_rules.size())]);
    auto distribution = [&](size_t n) {
      std::vector<double> p(n);
      double sum = 0.0;
      for (auto& x : p) sum += (x = rng.bernoulli(0.2) ? 0.0 : rng.uniform());
      if (sum == 0.0) p.assign(n, 1.0), sum = static_cast<double>(n);
      for (auto& x : p) x /= sum;
      return p;
    };
    const auto tag_dist = distribution(tags.size());
    const auto rule_dist = distribution(rules.size());
    const std::string& form = words[rng.below(words.size())];
    // random dictionary: each form gets up to 3 analyses
    tagger::MorphDictionary dict;
    for (const auto& w : words)
      for (uint64_t k = rng.below(4); k > 0; --k) dict.add(w, {tags[rng.below(tags.size())], words[rng.below(words.size())]});
    const auto analyses = dict.analyses(form);
    const auto out = tagger::constrained_decode(tag_dist, tags, rule_dist, rules, form, analyses);

    if (!analyses.empty()) {
      ++constrained;
      // member of the analyses with the best product of probabilities
      double best = -1.0, got = -1.0;
      for (const auto& a : analyses) {
        const auto t = std::find(tags.begin(), tags.end(), a.tag) - tags.begin();
        double lemma_mass = 0.0;
        for (size_t r = 0; r < rules.size(); ++r) {
          const auto produced = lemma::try_apply_rule(rules[r], form);
          if (produced && *produced == a.lemma) lemma_mass += rule_dist[r];
        }
        const double score = tag_dist[static_cast<size_t>(t)] * lemma_mass;
        best = std::max(best, score);
        if (a.tag == out.xpos && a.lemma == out.lemma) got = score;
      }
      if (got < 0.0 || got < best) ++violations;
    } else {
      const size_t tag = static_cast<size_t>(std::max_element(tag_dist.begin(), tag_dist.end()) - tag_dist.begin());
      std::vector<size_t> order(rules.size());
      for (size_t r = 0; r < order.size(); ++r) order[r] = r;
      std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return rule_dist[a] > rule_dist[b]; });
      std::string expected_lemma = form;
      for (size_t r : order)
        if (auto produced = lemma::try_apply_rule(rules[r], form)) {
          expected_lemma = *produced;
          break;
        }
      if (out.xpos != tags[tag] || out.lemma != expected_lemma) ++violations;
    }
  }
  return {violations == 0, std::to_string(violations) + " violations in 1000 cases (" + std::to_string(constrained) +
                               " with analyses)"};
}

// 8. Nested NER label codec.
Outcome ner_codec() {
  const std::vector<std::string> types{"pf", "ps", "P", "gu", "gc", "if", "io", "td"};
  Rng rng(8, "acceptance/ner");
  size_t roundtrip_failures = 0, max_depth_seen = 0;
  for (int i = 0; i < 1000; ++i) {
    const size_t n = 1 + rng.below(12);
    const auto spans = testing::random_nesting(rng, n, 4, types);
    const auto labels = ner::encode_entities(n, spans);
    for (const auto& token : labels) max_depth_seen = std::max(max_depth_seen, token.size());
    if (ner::decode_entities(labels) != spans) ++roundtrip_failures;
  }
  size_t invalid = 0, totality_failures = 0, attempts = 0;
  while (invalid < 1000 && attempts < 100000) {
    ++attempts;
    const auto labels = testing::random_labels(rng, 1 + rng.below(10), types);
    try {
      const auto spans = ner::decode_entities(labels);
      // only sequences that are not an exact encoding count as invalid
      if (ner::encode_entities(labels.size(), spans) == labels) continue;
      ++invalid;
      if (!testing::nested_or_disjoint(spans)) ++totality_failures;
      for (const auto& s : spans)
        if (s.end > labels.size()) ++totality_failures;
    } catch (const std::exception&) {
      ++invalid;
      ++totality_failures;
    }
  }
  return {roundtrip_failures == 0 && totality_failures == 0 && invalid == 1000 && max_depth_seen <= 4,
          std::to_string(roundtrip_failures) + " roundtrip failures in 1000 nestings (depth <= " +
              std::to_string(max_depth_seen) + "), " + std::to_string(totality_failures) + " violations in " +
              std::to_string(invalid) + " invalid sequences"};
}

// 9. Golden metric fixtures and metric invariants.
Outcome metric_fixtures() {
  std::ifstream in(testing::data_path("golden/metrics.golden"));
  std::map<std::string, testing::Fraction> golden;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string mode, metric, value;
    fields >> mode >> metric >> value;
    golden[mode + " " + metric] = testing::parse_fraction(value);
  }
  const auto gold = conllu::read_conllu_file(testing::data_path("golden/metrics_gold.conllu"));
  const auto sys = conllu::read_conllu_file(testing::data_path("golden/metrics_system.conllu"));
  size_t fixture_mismatches = 0, fixture_checked = 0;
  for (auto [name, mode] : {std::pair{"ud", eval::LemmaMode::ud}, std::pair{"pdt", eval::LemmaMode::pdt}}) {
    eval::EvalOptions opt;
    opt.lemma_mode = mode;
    const auto r = eval::evaluate(gold, sys, opt);
    const std::pair<const char*, eval::Score> scores[] = {{"upos", r.upos}, {"xpos", r.xpos}, {"ufeats", r.ufeats},
                                                          {"lemmas", r.lemmas}, {"uas", r.uas}, {"las", r.las},
                                                          {"mlas", r.mlas}, {"blex", r.blex}};
    for (const auto& [metric, s] : scores) {
      ++fixture_checked;
      const auto it = golden.find(std::string(name) + " " + metric);
      if (it == golden.end() || !(testing::Fraction{s.correct, s.total} == it->second)) ++fixture_mismatches;
    }
  }

  std::ifstream cin_(testing::data_path("golden/cnec.golden"));
  std::map<std::string, std::vector<testing::Fraction>> cnec_golden;
  while (std::getline(cin_, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string level, p, r, f;
    fields >> level >> p >> r >> f;
    cnec_golden[level] = {testing::parse_fraction(p), testing::parse_fraction(r), testing::parse_fraction(f)};
  }
  const auto cg = ner::read_entity_file(testing::data_path("golden/cnec_gold.entities"));
  const auto cs = ner::read_entity_file(testing::data_path("golden/cnec_system.entities"));
  const auto classes = ner::load_class_filter(testing::data_path("golden/cnec_classes.txt"));
  auto fractions = [](const ner::PrfScore& s) {
    return std::vector<testing::Fraction>{{s.correct, s.predicted}, {s.correct, s.gold}, {2 * s.correct, s.gold + s.predicted}};
  };
  const std::map<std::string, ner::PrfScore> cnec{{"types", ner::cnec_f1(cg, cs, ner::CnecLevel::types)},
                                                  {"supertypes", ner::cnec_f1(cg, cs, ner::CnecLevel::supertypes)},
                                                  {"filtered-types", ner::cnec_f1(cg, cs, ner::CnecLevel::types, &classes)}};
  for (const auto& [level, score] : cnec) {
    ++fixture_checked;
    if (!cnec_golden.count(level) || fractions(score) != cnec_golden[level]) ++fixture_mismatches;
  }

  // invariants on random prediction sets
  const auto toy = conllu::read_conllu_file(testing::data_path("toy_train.conllu"));
  const std::vector<std::string> types{"pf", "ps", "P", "gu", "gc", "if"};
  Rng rng(9, "acceptance/metrics");
  size_t invariant_failures = 0;
  for (int i = 0; i < 100; ++i) {
    auto random_sys = toy;
    for (auto& s : random_sys.sentences)
      for (auto& t : s.tokens) {
        if (rng.bernoulli(0.3)) t.head = static_cast<int>(rng.below(s.size() + 1));
        if (rng.bernoulli(0.3)) t.deprel = rng.bernoulli(0.5) ? "obl" : "nmod";
      }
    const auto [uas, las] = eval::attachment_scores(toy, random_sys);
    if (las.correct > uas.correct) ++invariant_failures;

    std::vector<ner::SentenceEntities> g, p;
    for (int s = 0; s < 10; ++s) {
      const size_t n = 1 + rng.below(10);
      g.push_back(testing::random_nesting(rng, n, 3, types));
      p.push_back(testing::random_nesting(rng, n, 3, types));
    }
    if (ner::cnec_f1(g, p, ner::CnecLevel::supertypes).f1() < ner::cnec_f1(g, p, ner::CnecLevel::types).f1())
      ++invariant_failures;
  }
  return {fixture_mismatches == 0 && fixture_checked == 19 && invariant_failures == 0,
          std::to_string(fixture_mismatches) + " of " + std::to_string(fixture_checked) + " golden values differ, " +
              std::to_string(invariant_failures) + " invariant violations in 100 random prediction sets"};
}

std::string read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// 10. Two identical command-line training runs give identical bytes.
Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / "morphkit_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path config = dir / "small.cfg";
  std::ofstream(config) << "char_dim = 16\nchar_gru_dim = 32\nword_dim = 32\nlstm_dim = 32\narc_dim = 32\n"
                           "label_dim = 16\ntag_input_dim = 16\nbatch_size = 8\nepochs = 3\n";
  const std::string cli = MORPHKIT_CLI;
  const fs::path train = testing::data_path("toy_train.conllu");
  auto run = [&](const std::string& tag) {
    const fs::path model = dir / (tag + ".mskt"), predicted = dir / (tag + ".conllu");
    const std::string env = "MORPHKIT_LOG=error ";
    const std::string train_cmd = env + "'" + cli + "' train --mode parse-predicted --train '" + train.string() +
                                  "' --dev '" + train.string() + "' --dict '" +
                                  testing::data_path("toy_dictionary.tsv").string() + "' --config '" + config.string() +
                                  "' --seed 42 --out '" + model.string() + "'";
    const std::string predict_cmd = env + "'" + cli + "' predict --model '" + model.string() + "' --input '" +
                                    train.string() + "' --output '" + predicted.string() + "' --dict '" +
                                    testing::data_path("toy_dictionary.tsv").string() + "'";
    if (std::system(train_cmd.c_str()) != 0 || std::system(predict_cmd.c_str()) != 0) return std::pair<std::string, std::string>{};
    return std::pair{read_bytes(model), read_bytes(predicted)};
  };
  const auto a = run("first");
  const auto b = run("second");
  fs::remove_all(dir);
  if (a.first.empty() || a.second.empty()) return {false, "a training or prediction run failed"};
  const bool same = a == b;
  return {same, std::string(a.first == b.first ? "identical" : "different") + " checkpoints (" +
                    std::to_string(a.first.size()) + " bytes), " +
                    (a.second == b.second ? "identical" : "different") + " predictions"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"lemma rule roundtrip", lemma_roundtrip},
      {"edit script minimality", edit_script_minimality},
      {"MST matches exhaustive search", mst_exhaustive},
      {"layer gradient checks", gradient_checks},
      {"joint toy overfit", toy_overfit},
      {"embedding ablation direction", ablation_direction},
      {"dictionary decoding contract", dictionary_contract},
      {"nested NER codec", ner_codec},
      {"metric fixtures and invariants", metric_fixtures},
      {"training determinism", determinism},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const int number = static_cast<int>(i + 1);
    if (!selected.empty() && !selected.count(number)) continue;
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    if (!outcome.pass) ++failed;
    std::printf("criterion %2d: %s  %s: %s\n", number, outcome.pass ? "PASS" : "FAIL", criteria[i].first,
                outcome.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
