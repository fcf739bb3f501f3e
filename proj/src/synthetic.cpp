#include "sgce/synthetic.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <Eigen/Core>

#include "sgce/error.hpp"
#include "sgce/util.hpp"

namespace sgce {

namespace {

const char* const kCategories[] = {"animal", "vehicle", "furniture", "plant", "food", "tool", "clothing", "building"};

const char* const kLeaves[][5] = {
    {"dog", "cat", "horse", "bird", "sheep"},         {"car", "bus", "bike", "truck", "boat"},
    {"chair", "table", "sofa", "bed", "shelf"},       {"tree", "flower", "grass", "bush", "fern"},
    {"pizza", "apple", "bread", "cake", "banana"},    {"hammer", "knife", "saw", "drill", "wrench"},
    {"shirt", "hat", "shoe", "coat", "scarf"},        {"house", "tower", "barn", "church", "bridge"},
};

const char* const kRelations[] = {"on", "near", "has", "holding", "under"};

struct Scene {
  std::vector<std::string> labels;
  std::vector<Edge> edges;  // ids are positions
};

std::string leaf(int category, int i) { return kLeaves[category][i]; }

bool has_pair(const std::vector<Edge>& edges, int s, int d) {
  return std::any_of(edges.begin(), edges.end(), [&](const Edge& e) { return e.src == s && e.dst == d; });
}

void add_random_edge(Scene& s, int node, Rng& rng) {
  const int n = static_cast<int>(s.labels.size());
  for (int attempt = 0; attempt < 16; ++attempt) {
    const int other = static_cast<int>(rng.below(n));
    if (other == node) continue;
    const bool forward = rng.below(2) == 0;
    const int src = forward ? node : other, dst = forward ? other : node;
    if (has_pair(s.edges, src, dst)) continue;
    s.edges.push_back({src, dst, kRelations[rng.below(5)]});
    return;
  }
}

Scene make_prototype(Rng& rng, int usable_categories) {
  Scene s;
  const int n = 4 + static_cast<int>(rng.below(4));
  for (int i = 0; i < n; ++i) {
    s.labels.push_back(leaf(static_cast<int>(rng.below(usable_categories)), static_cast<int>(rng.below(5))));
  }
  // spanning tree plus one or two extra relations
  for (int i = 1; i < n; ++i) {
    const int parent = static_cast<int>(rng.below(i));
    if (rng.below(2) == 0) {
      s.edges.push_back({parent, i, kRelations[rng.below(5)]});
    } else {
      s.edges.push_back({i, parent, kRelations[rng.below(5)]});
    }
  }
  const int extra = 1 + static_cast<int>(rng.below(2));
  for (int k = 0; k < extra; ++k) add_random_edge(s, static_cast<int>(rng.below(n)), rng);
  return s;
}

std::string sibling(const std::string& label, Rng& rng) {
  for (int c = 0; c < 8; ++c) {
    for (int i = 0; i < 5; ++i) {
      if (label == kLeaves[c][i]) return leaf(c, static_cast<int>((i + 1 + rng.below(4)) % 5));
    }
  }
  return label;
}

Scene perturb(Scene s, Rng& rng, int usable_categories) {
  const int ops = 1 + static_cast<int>(rng.below(3));
  for (int k = 0; k < ops; ++k) {
    switch (rng.below(4)) {
      case 0: {
        auto& l = s.labels[rng.below(s.labels.size())];
        l = sibling(l, rng);
        break;
      }
      case 1:
        if (s.labels.size() < 8) {
          s.labels.push_back(leaf(static_cast<int>(rng.below(usable_categories)), static_cast<int>(rng.below(5))));
          const int node = static_cast<int>(s.labels.size()) - 1;
          s.edges.push_back({static_cast<int>(rng.below(node)), node, kRelations[rng.below(5)]});
        }
        break;
      case 2:
        if (!s.edges.empty()) s.edges[rng.below(s.edges.size())].label = kRelations[rng.below(5)];
        break;
      default:
        if (s.edges.size() > s.labels.size() - 1) {
          s.edges.erase(s.edges.begin() + static_cast<std::ptrdiff_t>(rng.below(s.edges.size())));
        } else {
          add_random_edge(s, static_cast<int>(rng.below(s.labels.size())), rng);
        }
        break;
    }
  }
  return s;
}

}  // namespace

SyntheticCorpus make_synthetic_corpus(const SyntheticConfig& cfg) {
  if (cfg.categories != 8 || cfg.leaves_per_category != 5) {
    throw ConfigError("synthetic corpus uses exactly 8 categories of 5 concepts");
  }
  if (cfg.classes < 2 || cfg.classes >= cfg.categories) throw ConfigError("synthetic classes must be in [2, 7]");
  if (cfg.graphs < cfg.classes || cfg.prototypes < 1) throw ConfigError("synthetic corpus is too small");
  if (cfg.vector_dim < 1) throw ConfigError("vector dimension must be positive");

  Rng rng(cfg.seed);
  // the last `classes` categories are reserved for class markers
  const int usable = cfg.categories - cfg.classes;

  std::ostringstream tax;
  tax << "!root entity\n";
  for (int c = 0; c < cfg.categories; ++c) tax << kCategories[c] << "\tentity\n";
  for (int c = 0; c < cfg.categories; ++c)
    for (int i = 0; i < 5; ++i) tax << kLeaves[c][i] << '\t' << kCategories[c] << '\n';

  std::ostringstream vec;
  auto write_vec = [&](const std::string& token, const Eigen::VectorXd& v) {
    vec << token;
    for (Eigen::Index k = 0; k < v.size(); ++k) vec << ' ' << format_double(v(k));
    vec << '\n';
  };
  auto gaussian = [&] {
    Eigen::VectorXd v(cfg.vector_dim);
    for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = rng.normal();
    return v;
  };
  write_vec("entity", 0.1 * gaussian());
  for (int c = 0; c < cfg.categories; ++c) {
    const Eigen::VectorXd centre = gaussian();
    write_vec(kCategories[c], centre);
    for (int i = 0; i < 5; ++i) write_vec(kLeaves[c][i], centre + 0.4 * gaussian());
  }
  for (const char* r : kRelations) write_vec(r, gaussian());

  std::vector<Scene> prototypes;
  for (int p = 0; p < cfg.prototypes; ++p) prototypes.push_back(make_prototype(rng, usable));

  SyntheticCorpus out;
  out.dataset.name = "synthetic";
  const int per_proto = (cfg.graphs + cfg.prototypes - 1) / cfg.prototypes;
  for (int g = 0; g < cfg.graphs; ++g) {
    const int cls = g % cfg.classes;
    Scene s = perturb(prototypes[g / per_proto % cfg.prototypes], rng, usable);
    s.labels.push_back(leaf(usable + cls, static_cast<int>(rng.below(5))));
    const int marker = static_cast<int>(s.labels.size()) - 1;
    s.edges.push_back({marker, 0, "near"});

    std::vector<Node> nodes;
    for (std::size_t i = 0; i < s.labels.size(); ++i) nodes.push_back({static_cast<int>(i), s.labels[i]});
    char id[16];
    std::snprintf(id, sizeof id, "g%02d", g);
    const std::string class_name = "class_" + std::string(1, static_cast<char>('a' + cls));
    out.dataset.graphs.emplace_back(id, std::nullopt, class_name, std::move(nodes), std::move(s.edges));
  }
  out.dataset.validate();
  out.taxonomy_text = tax.str();
  out.vectors_text = vec.str();
  return out;
}

}  // namespace sgce
