#pragma once

#include <cstdint>
#include <queue>
#include <vector>

#include "lexsim/corpus.hpp"

namespace lexsim {

// Huffman coding of the vocabulary for the hierarchical-softmax output layer.
// Internal nodes are numbered 0..V-2 in creation order; the root, when it
// exists, is node V-2. For every word, code[j] is the branch bit taken at
// internal node path[j], root first.
struct HuffmanTree {
  struct WordCode {
    std::vector<std::uint8_t> code;
    std::vector<std::int32_t> path;
  };
  std::vector<WordCode> words;
  std::size_t internal_count = 0;
};

// Deterministic construction: merge candidates are ordered by weight, ties by
// creation sequence (leaves in vocabulary order, then internal nodes in merge
// order). The first node popped becomes the left child and codes as 0.
inline HuffmanTree build_huffman(const Vocabulary& vocab) {
  const std::size_t v = vocab.size();
  HuffmanTree tree;
  tree.words.resize(v);
  if (v == 0) return tree;
  tree.internal_count = v - 1;

  struct Node {
    std::uint64_t weight;
    std::int64_t left = -1;   // node ids; leaves are 0..v-1
    std::int64_t right = -1;
    std::int64_t parent = -1;
    std::uint8_t bit = 0;  // branch taken from parent to this node
  };
  std::vector<Node> nodes;
  nodes.reserve(2 * v);
  for (std::size_t i = 0; i < v; ++i) nodes.push_back({vocab.frequency(i)});

  using QueueItem = std::pair<std::uint64_t, std::size_t>;  // weight, node id
  std::priority_queue<QueueItem, std::vector<QueueItem>, std::greater<>> queue;
  for (std::size_t i = 0; i < v; ++i) queue.push({nodes[i].weight, i});

  while (queue.size() > 1) {
    auto [lw, left] = queue.top();
    queue.pop();
    auto [rw, right] = queue.top();
    queue.pop();
    const std::size_t parent = nodes.size();
    nodes.push_back({lw + rw, static_cast<std::int64_t>(left), static_cast<std::int64_t>(right)});
    nodes[left].parent = static_cast<std::int64_t>(parent);
    nodes[left].bit = 0;
    nodes[right].parent = static_cast<std::int64_t>(parent);
    nodes[right].bit = 1;
    queue.push({lw + rw, parent});
  }

  for (std::size_t leaf = 0; leaf < v; ++leaf) {
    auto& word = tree.words[leaf];
    for (std::int64_t node = leaf; nodes[node].parent != -1; node = nodes[node].parent) {
      word.code.push_back(nodes[node].bit);
      word.path.push_back(static_cast<std::int32_t>(nodes[node].parent - v));
    }
    std::reverse(word.code.begin(), word.code.end());
    std::reverse(word.path.begin(), word.path.end());
  }
  return tree;
}

}  // namespace lexsim
