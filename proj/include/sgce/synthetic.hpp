#pragma once

#include <cstdint>
#include <string>

#include "sgce/graph.hpp"

namespace sgce {

struct SyntheticConfig {
  std::uint64_t seed = 1;
  int graphs = 60;
  int classes = 3;
  int prototypes = 12;
  int categories = 8;
  int leaves_per_category = 5;
  int vector_dim = 50;
};

// A small scene-graph corpus with matching taxonomy and word-vector files.
// Graphs are noisy copies of shared prototype scenes; each graph also carries
// one marker concept drawn from its class's category, so near neighbours exist
// both inside and across classes.
struct SyntheticCorpus {
  GraphDataset dataset;
  std::string taxonomy_text;
  std::string vectors_text;
};

SyntheticCorpus make_synthetic_corpus(const SyntheticConfig& cfg = {});

}  // namespace sgce
