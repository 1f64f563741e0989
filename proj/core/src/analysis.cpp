#include "comick/analysis.hpp"

#include <algorithm>
#include <cstdio>
#include <iomanip>
#include <map>
#include <ostream>

#include "comick/errors.hpp"

namespace comick {

namespace {

const std::vector<std::string>& ner_order() {
  static const std::vector<std::string> order = {"O",     "B-PER", "I-PER",  "B-ORG", "I-ORG",
                                                 "B-LOC", "I-LOC", "B-MISC", "I-MISC"};
  return order;
}

std::size_t ner_rank(const std::string& tag) {
  const auto& order = ner_order();
  auto it = std::find(order.begin(), order.end(), tag);
  return static_cast<std::size_t>(it - order.begin());
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void require_predictor(const Model& model) {
  if (model.config.oov_mode != OovMode::kPredictor || !model.predictor) {
    throw ConfigError("attention analysis needs a predictor-mode model");
  }
}

}  // namespace

std::string format2(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", value);
  return buf;
}

std::vector<TagAttentionRow> aggregate_attention(
    const std::vector<std::pair<std::string, AttentionTriple>>& observations, Task task) {
  std::map<std::string, TagAttentionRow> by_tag;
  for (const auto& [tag, a] : observations) {
    TagAttentionRow& row = by_tag[tag];
    row.tag = tag;
    ++row.count;
    row.word += a.word;
    row.left += a.left;
    row.right += a.right;
  }
  std::vector<TagAttentionRow> rows;
  rows.reserve(by_tag.size());
  for (auto& [tag, row] : by_tag) {
    const auto n = static_cast<double>(row.count);
    row.word /= n;
    row.left /= n;
    row.right /= n;
    rows.push_back(row);
  }
  if (task == Task::kNer) {
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
      const auto ra = ner_rank(a.tag), rb = ner_rank(b.tag);
      if (ra != rb) return ra < rb;
      return a.tag < b.tag;
    });
  } else {
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
      if (a.count != b.count) return a.count > b.count;
      return a.tag < b.tag;
    });
  }
  return rows;
}

std::vector<TagAttentionRow> attention_by_tag(const Corpus& corpus, const Model& model,
                                              const EmbeddingTable& table) {
  require_predictor(model);
  std::vector<std::pair<std::string, AttentionTriple>> observations;
  for (const Sentence& s : corpus) {
    bool any_oov = false;
    for (const Token& t : s.tokens) any_oov = any_oov || t.is_oov;
    if (!any_oov) continue;
    const SentencePrediction pred = predict_sentence(s, model, table);
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (pred.attention[i]) {
        observations.emplace_back(gold_tag(s.tokens[i], model.config.task), *pred.attention[i]);
      }
    }
  }
  return aggregate_attention(observations, model.config.task);
}

std::string render_excerpt(const Sentence& sentence, std::size_t position, std::size_t k_show) {
  if (position >= sentence.size()) {
    throw IndexError("excerpt position " + std::to_string(position) + " out of range");
  }
  std::vector<std::string> parts;
  const std::size_t first = position >= k_show ? position - k_show : 0;
  if (position < k_show) parts.emplace_back("<BOS>");
  for (std::size_t i = first; i < position; ++i) parts.push_back(sentence.tokens[i].surface);
  parts.push_back("*" + sentence.tokens[position].surface + "*");
  const std::size_t after = sentence.size() - position - 1;
  const std::size_t last = position + std::min(k_show, after);
  for (std::size_t i = position + 1; i <= last; ++i) parts.push_back(sentence.tokens[i].surface);
  if (after < k_show) parts.emplace_back("<EOS>");
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ' ';
    out += parts[i];
  }
  return out;
}

std::vector<TraceRow> attention_trace(const std::string& target, const Corpus& corpus,
                                      const Model& model, const EmbeddingTable& table,
                                      std::size_t k_show) {
  require_predictor(model);
  const std::string needle = ascii_lower(target);
  const WordSources sources = model.sources(table);
  std::vector<TraceRow> rows;
  for (const Sentence& s : corpus) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      const Token& t = s.tokens[i];
      if (!t.is_oov || ascii_lower(t.surface) != needle) continue;
      Graph g(Graph::Mode::kInference);
      const OovPrediction p =
          predict_oov(g, s, i, model.config.k_ctx, *model.predictor, model.lexicon, sources);
      rows.push_back({p.triple.word, p.triple.left, p.triple.right, render_excerpt(s, i, k_show)});
    }
  }
  return rows;
}

void write_tag_attention_text(std::ostream& out, const std::vector<TagAttentionRow>& rows) {
  std::size_t tag_w = 3;
  for (const auto& r : rows) tag_w = std::max(tag_w, r.tag.size());
  out << std::left << std::setw(static_cast<int>(tag_w)) << "Tag" << std::right << "  "
      << std::setw(6) << "Ex" << "  " << std::setw(5) << "Word" << "  " << std::setw(5)
      << "Left" << "  " << std::setw(5) << "Right" << '\n';
  for (const auto& r : rows) {
    out << std::left << std::setw(static_cast<int>(tag_w)) << r.tag << std::right << "  "
        << std::setw(6) << r.count << "  " << std::setw(5) << format2(r.word) << "  "
        << std::setw(5) << format2(r.left) << "  " << std::setw(5) << format2(r.right) << '\n';
  }
}

void write_tag_attention_csv(std::ostream& out, const std::vector<TagAttentionRow>& rows) {
  out << "tag,ex,word,left,right\n";
  for (const auto& r : rows) {
    out << csv_field(r.tag) << ',' << r.count << ',' << format2(r.word) << ','
        << format2(r.left) << ',' << format2(r.right) << '\n';
  }
}

void write_trace_text(std::ostream& out, const std::vector<TraceRow>& rows) {
  out << " Word   Left  Right  Example\n";
  for (const auto& r : rows) {
    out << std::setw(5) << format2(r.word) << "  " << std::setw(5) << format2(r.left) << "  "
        << std::setw(5) << format2(r.right) << "  " << r.excerpt << '\n';
  }
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows) {
  out << "word,left,right,example\n";
  for (const auto& r : rows) {
    out << format2(r.word) << ',' << format2(r.left) << ',' << format2(r.right) << ','
        << csv_field(r.excerpt) << '\n';
  }
}

}  // namespace comick
