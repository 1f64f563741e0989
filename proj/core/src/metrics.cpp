#include "comick/metrics.hpp"

#include "comick/errors.hpp"

namespace comick {

std::set<Span> extract_spans(const std::vector<std::string>& tags) {
  std::set<Span> spans;
  bool open = false;
  Span current;
  auto close = [&](std::size_t last) {
    if (open) {
      current.end = last;
      spans.insert(current);
      open = false;
    }
  };
  for (std::size_t i = 0; i < tags.size(); ++i) {
    const std::string& tag = tags[i];
    const bool tagged = tag.size() >= 3 && tag[1] == '-' && (tag[0] == 'B' || tag[0] == 'I');
    if (!tagged) {
      close(i == 0 ? 0 : i - 1);
      continue;
    }
    const std::string type = tag.substr(2);
    if (tag[0] == 'I' && open && current.type == type) continue;
    close(i == 0 ? 0 : i - 1);
    current = Span{type, i, i};
    open = true;
  }
  if (!tags.empty()) close(tags.size() - 1);
  return spans;
}

SpanScores span_f1(const std::vector<std::vector<std::string>>& pred,
                   const std::vector<std::vector<std::string>>& gold) {
  if (pred.size() != gold.size()) {
    throw ContractError("span_f1: " + std::to_string(pred.size()) + " predicted vs " +
                        std::to_string(gold.size()) + " gold sentences");
  }
  std::size_t n_pred = 0, n_gold = 0, n_match = 0;
  for (std::size_t s = 0; s < pred.size(); ++s) {
    if (pred[s].size() != gold[s].size()) {
      throw ContractError("span_f1: sentence " + std::to_string(s) + " has " +
                          std::to_string(pred[s].size()) + " predicted vs " +
                          std::to_string(gold[s].size()) + " gold tags");
    }
    const auto p = extract_spans(pred[s]);
    const auto g = extract_spans(gold[s]);
    n_pred += p.size();
    n_gold += g.size();
    for (const Span& sp : p) n_match += g.count(sp);
  }
  SpanScores out;
  if (n_pred == 0) {
    out.precision = n_gold == 0 ? 100.0 : 0.0;
  } else {
    out.precision = 100.0 * static_cast<double>(n_match) / static_cast<double>(n_pred);
  }
  if (n_gold == 0) {
    out.recall = n_pred == 0 ? 100.0 : 0.0;
  } else {
    out.recall = 100.0 * static_cast<double>(n_match) / static_cast<double>(n_gold);
  }
  const double pr = out.precision + out.recall;
  out.f1 = pr > 0.0 ? 2.0 * out.precision * out.recall / pr : 0.0;
  return out;
}

double token_accuracy(const std::vector<std::string>& pred, const std::vector<std::string>& gold) {
  return token_accuracy(std::vector<std::vector<std::string>>{pred},
                        std::vector<std::vector<std::string>>{gold});
}

double token_accuracy(const std::vector<std::vector<std::string>>& pred,
                      const std::vector<std::vector<std::string>>& gold) {
  if (pred.size() != gold.size()) {
    throw ContractError("token_accuracy: " + std::to_string(pred.size()) + " predicted vs " +
                        std::to_string(gold.size()) + " gold sentences");
  }
  std::size_t total = 0, correct = 0;
  for (std::size_t s = 0; s < pred.size(); ++s) {
    if (pred[s].size() != gold[s].size()) {
      throw ContractError("token_accuracy: sentence " + std::to_string(s) + " is misaligned");
    }
    for (std::size_t i = 0; i < pred[s].size(); ++i) {
      ++total;
      if (pred[s][i] == gold[s][i]) ++correct;
    }
  }
  if (total == 0) throw ContractError("token_accuracy: no tokens");
  return 100.0 * static_cast<double>(correct) / static_cast<double>(total);
}

}  // namespace comick
