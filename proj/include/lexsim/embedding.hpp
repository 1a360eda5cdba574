#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "lexsim/corpus.hpp"
#include "lexsim/errors.hpp"
#include "lexsim/huffman.hpp"

namespace lexsim {

struct TrainConfig {
  int dimensionality = 200;
  int window = 10;
  std::uint64_t min_count = 5;
  int epochs = 5;
  double initial_learning_rate = 0.025;
  std::uint64_t seed = 1;
  int threads = 1;  // >1 relaxes bit determinism (lock-free shard updates)
};

class EmbeddingModel {
 public:
  EmbeddingModel() = default;
  EmbeddingModel(Vocabulary vocabulary, int dimensionality)
      : vocabulary_(std::move(vocabulary)),
        dim_(dimensionality),
        input_(vocabulary_.size() * dim_, 0.0f),
        nodes_(vocabulary_.size() > 0 ? (vocabulary_.size() - 1) * dim_ : 0, 0.0f) {}

  const Vocabulary& vocabulary() const { return vocabulary_; }
  int dimensionality() const { return dim_; }

  std::span<float> input_vector(std::size_t word) {
    return {input_.data() + word * dim_, static_cast<std::size_t>(dim_)};
  }
  std::span<const float> input_vector(std::size_t word) const {
    return {input_.data() + word * dim_, static_cast<std::size_t>(dim_)};
  }
  std::span<float> node_vector(std::size_t node) {
    return {nodes_.data() + node * dim_, static_cast<std::size_t>(dim_)};
  }
  std::span<const float> node_vector(std::size_t node) const {
    return {nodes_.data() + node * dim_, static_cast<std::size_t>(dim_)};
  }
  const std::vector<float>& input_matrix() const { return input_; }
  const std::vector<float>& node_matrix() const { return nodes_; }

 private:
  Vocabulary vocabulary_;
  int dim_ = 0;
  std::vector<float> input_;
  std::vector<float> nodes_;
};

struct Neighbor {
  std::string word;
  double similarity;
};

// Ranked neighbors of one query: words with their cosine similarities, best
// first, ties lexicographic, the query itself excluded.
struct NeighborList {
  std::string query;
  std::vector<Neighbor> entries;
};

struct TrainResult {
  EmbeddingModel model;
  std::vector<double> epoch_losses;  // mean negative log-likelihood per target
};

namespace detail {

inline double sigmoid(double x) {
  if (x > 30.0) return 1.0;
  if (x < -30.0) return 0.0;
  return 1.0 / (1.0 + std::exp(-x));
}

inline double cosine(std::span<const float> a, std::span<const float> b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += static_cast<double>(a[i]) * b[i];
    na += static_cast<double>(a[i]) * a[i];
    nb += static_cast<double>(b[i]) * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

// One CBOW/hierarchical-softmax pass over [begin, end). Shared by the
// sequential path and the per-shard threads; returns (loss sum, positions).
struct ShardOutcome {
  double loss_sum = 0.0;
  std::uint64_t updates = 0;
};

inline ShardOutcome train_shard(const std::vector<std::vector<std::uint32_t>>& sentences,
                                std::size_t begin, std::size_t end, const HuffmanTree& tree,
                                const TrainConfig& config, float* input, float* nodes,
                                std::atomic<std::uint64_t>& progress, std::uint64_t planned) {
  const int dim = config.dimensionality;
  const double floor = config.initial_learning_rate * 1e-4;
  std::vector<float> hidden(dim), gradient(dim);
  ShardOutcome outcome;

  for (std::size_t s = begin; s < end; ++s) {
    const auto& sentence = sentences[s];
    const std::int64_t len = static_cast<std::int64_t>(sentence.size());
    for (std::int64_t t = 0; t < len; ++t) {
      const std::uint64_t done = progress.fetch_add(1, std::memory_order_relaxed);
      double alpha = config.initial_learning_rate *
                     (1.0 - static_cast<double>(done) / static_cast<double>(planned + 1));
      if (alpha < floor) alpha = floor;

      const std::int64_t lo = std::max<std::int64_t>(0, t - config.window);
      const std::int64_t hi = std::min<std::int64_t>(len - 1, t + config.window);
      const int context = static_cast<int>(hi - lo);  // window positions minus the target
      if (context <= 0) continue;

      std::fill(hidden.begin(), hidden.end(), 0.0f);
      for (std::int64_t c = lo; c <= hi; ++c) {
        if (c == t) continue;
        const float* row = input + sentence[c] * static_cast<std::size_t>(dim);
        for (int d = 0; d < dim; ++d) hidden[d] += row[d];
      }
      const float inv = 1.0f / static_cast<float>(context);
      for (int d = 0; d < dim; ++d) hidden[d] *= inv;

      std::fill(gradient.begin(), gradient.end(), 0.0f);
      const auto& word = tree.words[sentence[t]];
      for (std::size_t j = 0; j < word.path.size(); ++j) {
        float* node = nodes + static_cast<std::size_t>(word.path[j]) * dim;
        double x = 0.0;
        for (int d = 0; d < dim; ++d) x += static_cast<double>(node[d]) * hidden[d];
        const double label = 1.0 - word.code[j];
        const double f = sigmoid(x);
        const double sx = (2.0 * label - 1.0) * x;
        outcome.loss_sum += sx > 30.0 ? 0.0 : (sx < -30.0 ? -sx : std::log1p(std::exp(-sx)));
        const float g = static_cast<float>(alpha * (label - f));
        for (int d = 0; d < dim; ++d) gradient[d] += g * node[d];
        for (int d = 0; d < dim; ++d) node[d] += g * hidden[d];
      }
      for (std::int64_t c = lo; c <= hi; ++c) {
        if (c == t) continue;
        float* row = input + sentence[c] * static_cast<std::size_t>(dim);
        for (int d = 0; d < dim; ++d) row[d] += gradient[d];
      }
      ++outcome.updates;
    }
  }
  return outcome;
}

}  // namespace detail

// CBOW with hierarchical softmax over a Huffman-coded vocabulary. The hidden
// activation is the mean of the context input vectors; the learning rate
// decays linearly to 1e-4 of its initial value over all planned updates.
inline TrainResult train_cbow(const std::vector<Sentence>& corpus, const TrainConfig& config,
                              const std::function<void(int, double)>& on_epoch = {}) {
  if (config.dimensionality < 1 || config.window < 1 || config.epochs < 1)
    throw InvalidConfig("dimensionality, window and epochs must be >= 1");

  Vocabulary vocab = build_vocabulary(corpus, config.min_count);
  HuffmanTree tree = build_huffman(vocab);

  std::vector<std::vector<std::uint32_t>> sentences;
  sentences.reserve(corpus.size());
  std::uint64_t positions = 0;
  bool has_pair = false;
  for (const auto& sentence : corpus) {
    std::vector<std::uint32_t> ids;
    ids.reserve(sentence.size());
    for (const auto& word : sentence) {
      const std::size_t id = vocab.id(word);
      if (id < vocab.size()) ids.push_back(static_cast<std::uint32_t>(id));
    }
    if (ids.empty()) continue;
    if (ids.size() >= 2) has_pair = true;
    positions += ids.size();
    sentences.push_back(std::move(ids));
  }
  if (!has_pair) throw DegenerateCorpus("no sentence provides a context window");

  EmbeddingModel model(std::move(vocab), config.dimensionality);
  const std::size_t v = model.vocabulary().size();
  const int dim = config.dimensionality;

  std::mt19937 rng(static_cast<std::uint32_t>(config.seed));
  float* input = const_cast<float*>(model.input_matrix().data());
  float* nodes = const_cast<float*>(model.node_matrix().data());
  for (std::size_t i = 0; i < v * static_cast<std::size_t>(dim); ++i) {
    const double u = rng() * (1.0 / 4294967296.0);  // [0,1)
    input[i] = static_cast<float>((u - 0.5) / dim);
  }

  const std::uint64_t planned = positions * static_cast<std::uint64_t>(config.epochs);
  std::atomic<std::uint64_t> progress{0};
  const int threads = std::max(1, config.threads);

  TrainResult result;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    detail::ShardOutcome outcome;
    if (threads == 1 || sentences.size() < 2) {
      outcome = detail::train_shard(sentences, 0, sentences.size(), tree, config, input, nodes,
                                    progress, planned);
    } else {
      const std::size_t shards = std::min<std::size_t>(threads, sentences.size());
      std::vector<detail::ShardOutcome> partial(shards);
      std::vector<std::thread> pool;
      for (std::size_t k = 0; k < shards; ++k) {
        const std::size_t begin = sentences.size() * k / shards;
        const std::size_t end = sentences.size() * (k + 1) / shards;
        pool.emplace_back([&, k, begin, end] {
          partial[k] = detail::train_shard(sentences, begin, end, tree, config, input, nodes,
                                           progress, planned);
        });
      }
      for (auto& t : pool) t.join();
      for (const auto& p : partial) {
        outcome.loss_sum += p.loss_sum;
        outcome.updates += p.updates;
      }
    }
    const double mean = outcome.updates ? outcome.loss_sum / outcome.updates : 0.0;
    result.epoch_losses.push_back(mean);
    if (on_epoch) on_epoch(epoch, mean);
  }
  result.model = std::move(model);
  return result;
}

// Cosine-ranked neighbors over the input vectors: the similarity matrix R
// restricted to one query row, best n entries.
inline NeighborList most_similar(const EmbeddingModel& model, const std::string& query,
                                 std::size_t n) {
  const Vocabulary& vocab = model.vocabulary();
  const std::size_t qid = vocab.id(query);
  if (qid >= vocab.size()) throw OutOfVocabulary(query);
  if (vocab.size() == 0 || n > vocab.size() - 1)
    throw NTooLarge("requested " + std::to_string(n) + " neighbors from a vocabulary of " +
                    std::to_string(vocab.size()));

  const auto q = model.input_vector(qid);
  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(vocab.size() - 1);
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    if (i == qid) continue;
    scored.emplace_back(detail::cosine(q, model.input_vector(i)), i);
  }
  std::sort(scored.begin(), scored.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return vocab.word(a.second) < vocab.word(b.second);
  });

  NeighborList list{query, {}};
  list.entries.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    list.entries.push_back({vocab.word(scored[i].second), scored[i].first});
  return list;
}

// word2vec text format: header "V D", then one "word f1 .. fD" row per word.
inline void save_text(const EmbeddingModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write model file: " + path.string());
  const std::size_t v = model.vocabulary().size();
  const int dim = model.dimensionality();
  out << v << ' ' << dim << '\n';
  char buffer[48];
  for (std::size_t i = 0; i < v; ++i) {
    out << model.vocabulary().word(i);
    const auto row = model.input_vector(i);
    for (int d = 0; d < dim; ++d) {
      std::snprintf(buffer, sizeof(buffer), " %.9g", static_cast<double>(row[d]));
      out << buffer;
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing model file: " + path.string());
}

inline EmbeddingModel load_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open model file: " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw MalformedModelFile("empty model file", 1);
  std::istringstream header(line);
  long long v = -1, dim = -1;
  std::string extra;
  if (!(header >> v >> dim) || (header >> extra) || v < 0 || dim < 1)
    throw MalformedModelFile("expected header \"<vocab> <dim>\"", 1);

  std::vector<Vocabulary::Entry> entries;
  entries.reserve(static_cast<std::size_t>(v));
  std::vector<float> matrix;
  matrix.reserve(static_cast<std::size_t>(v) * static_cast<std::size_t>(dim));

  std::size_t lineno = 1;
  std::unordered_set<std::string> seen;
  for (long long row = 0; row < v; ++row) {
    if (!std::getline(in, line))
      throw MalformedModelFile("header declares " + std::to_string(v) + " rows, file has " +
                                   std::to_string(row),
                               lineno);
    ++lineno;
    std::istringstream parts(line);
    std::string word;
    if (!(parts >> word)) throw MalformedModelFile("blank row", lineno);
    if (!seen.insert(word).second) throw MalformedModelFile("duplicate word: " + word, lineno);
    long long count = 0;
    double value;
    while (parts >> value) {
      if (!std::isfinite(value)) throw MalformedModelFile("non-finite value", lineno);
      if (count < dim) matrix.push_back(static_cast<float>(value));
      ++count;
    }
    if (!parts.eof()) throw MalformedModelFile("unparsable vector component", lineno);
    if (count != dim)
      throw DimensionMismatch("row " + std::to_string(row + 1) + " has " + std::to_string(count) +
                              " components, header says " + std::to_string(dim) + " (line " +
                              std::to_string(lineno) + ")");
    // Loaded files carry no counts; rank-based placeholders keep file order
    // while satisfying the vocabulary ordering contract.
    entries.push_back({word, static_cast<std::uint64_t>(v - row)});
  }
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.find_first_not_of(" \t\r") != std::string::npos)
      throw MalformedModelFile("trailing content after declared rows", lineno);
  }

  EmbeddingModel model(Vocabulary(std::move(entries)), static_cast<int>(dim));
  float* input = const_cast<float*>(model.input_matrix().data());
  std::copy(matrix.begin(), matrix.end(), input);
  return model;
}

}  // namespace lexsim
