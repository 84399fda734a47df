#include "adg/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include <nlohmann/json.hpp>

#include "adg/fem.hpp"
#include "adg/mesh_io.hpp"
#include "adg/parallel.hpp"
#include "adg/rng.hpp"

namespace adg {

namespace {

double median_of(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

int nearest_center(const Eigen::MatrixXd& centers, const Eigen::VectorXd& p) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int c = 0; c < centers.rows(); ++c) {
    const double d = (centers.row(c).transpose() - p).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

}  // namespace

Vocabulary build_vocabulary(const std::vector<Eigen::MatrixXd>& descriptor_sets, int size,
                            std::uint64_t seed) {
  if (size < 1) throw InvalidArgumentError("vocabulary size must be positive");
  long total = 0;
  long dim = -1;
  for (const auto& set : descriptor_sets) {
    total += set.rows();
    if (dim < 0) dim = set.cols();
    if (set.cols() != dim)
      throw DimensionMismatchError("descriptor sets have inconsistent dimensions");
  }
  if (total < size)
    throw InsufficientDataError("need at least " + std::to_string(size) + " descriptors, got " +
                                std::to_string(total));

  Eigen::MatrixXd data(total, dim);
  long row = 0;
  for (const auto& set : descriptor_sets) {
    data.middleRows(row, set.rows()) = set;
    row += set.rows();
  }

  Rng rng(seed);
  Eigen::MatrixXd centers(size, dim);

  // k-means++ seeding.
  centers.row(0) = data.row(static_cast<long>(rng.index(static_cast<std::size_t>(total))));
  Eigen::VectorXd d2(total);
  for (long i = 0; i < total; ++i)
    d2(i) = (data.row(i) - centers.row(0)).squaredNorm();
  for (int c = 1; c < size; ++c) {
    const double mass = d2.sum();
    long pick = 0;
    if (mass > 0.0) {
      double target = rng.uniform() * mass;
      for (long i = 0; i < total; ++i) {
        target -= d2(i);
        if (target <= 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<long>(rng.index(static_cast<std::size_t>(total)));
    }
    centers.row(c) = data.row(pick);
    for (long i = 0; i < total; ++i)
      d2(i) = std::min(d2(i), (data.row(i) - centers.row(c)).squaredNorm());
  }

  // Movement threshold is relative to the data spread.
  const Eigen::RowVectorXd mean = data.colwise().mean();
  const double spread = std::sqrt((data.rowwise() - mean).rowwise().squaredNorm().mean());
  const double move_tol = 1e-6 * std::max(spread, 1e-300);

  std::vector<int> assign(static_cast<std::size_t>(total), 0);
  for (int iter = 0; iter < 200; ++iter) {
    for (long i = 0; i < total; ++i)
      assign[static_cast<std::size_t>(i)] = nearest_center(centers, data.row(i).transpose());

    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(size, dim);
    Eigen::VectorXd count = Eigen::VectorXd::Zero(size);
    for (long i = 0; i < total; ++i) {
      next.row(assign[static_cast<std::size_t>(i)]) += data.row(i);
      count(assign[static_cast<std::size_t>(i)]) += 1.0;
    }
    double movement = 0.0;
    for (int c = 0; c < size; ++c) {
      if (count(c) > 0.0) {
        next.row(c) /= count(c);
      } else {
        next.row(c) = centers.row(c);  // keep empty clusters in place
      }
      movement = std::max(movement, (next.row(c) - centers.row(c)).norm());
    }
    centers = next;
    if (movement < move_tol) break;
  }

  return Vocabulary{centers};
}

Vocabulary build_vocabulary(const std::vector<HksDescriptor>& descriptor_sets, int size,
                            std::uint64_t seed) {
  std::vector<Eigen::MatrixXd> sets;
  sets.reserve(descriptor_sets.size());
  for (const auto& d : descriptor_sets) sets.push_back(d.values);
  return build_vocabulary(sets, size, seed);
}

double default_sigma2(const Vocabulary& vocab) {
  std::vector<double> dists;
  for (int a = 0; a < vocab.size(); ++a)
    for (int b = a + 1; b < vocab.size(); ++b)
      dists.push_back((vocab.centers.row(a) - vocab.centers.row(b)).norm());
  return 2.0 * median_of(std::move(dists));
}

Eigen::VectorXd soft_quantize(const Eigen::VectorXd& p, const Vocabulary& vocab, double sigma2) {
  if (!(sigma2 > 0.0)) throw InvalidArgumentError("sigma2 must be positive");
  if (p.size() != vocab.dim())
    throw DimensionMismatchError("descriptor dimension does not match the vocabulary");
  Eigen::VectorXd d2(vocab.size());
  for (int c = 0; c < vocab.size(); ++c)
    d2(c) = (vocab.centers.row(c).transpose() - p).squaredNorm();
  // Shift by the minimum before exponentiating; the hard-assignment
  // limit sigma2 -> 0 then stays finite.
  const double shift = d2.minCoeff();
  Eigen::VectorXd w = (-(d2.array() - shift) / (2.0 * sigma2)).exp();
  return w / w.sum();
}

BagOfFeatures bag_of_features(const HksDescriptor& desc, const Vocabulary& vocab,
                              const Eigen::VectorXd& area_weights, double sigma2,
                              bool area_weighted, int threads) {
  const int n = desc.vertex_count();
  if (area_weighted && area_weights.size() != n)
    throw DimensionMismatchError("area weight count does not match the descriptor");

  Eigen::MatrixXd contributions(n, vocab.size());
  parallel_for(
      n,
      [&](std::int64_t x) {
        const Eigen::VectorXd w = soft_quantize(desc.values.row(x).transpose(), vocab, sigma2);
        const double a = area_weighted ? area_weights(x) : 1.0;
        contributions.row(x) = a * w.transpose();
      },
      threads);

  Eigen::VectorXd histogram = contributions.colwise().sum().transpose();
  const double total = histogram.sum();
  if (total > 0.0) histogram /= total;
  return BagOfFeatures{histogram};
}

std::vector<std::pair<int, double>> rank(const BagOfFeatures& query,
                                         const std::vector<BagOfFeatures>& corpus) {
  std::vector<std::pair<int, double>> out;
  out.reserve(corpus.size());
  for (int i = 0; i < static_cast<int>(corpus.size()); ++i) {
    const auto& bag = corpus[static_cast<std::size_t>(i)];
    if (bag.histogram.size() != query.histogram.size())
      throw DimensionMismatchError("corpus bag " + std::to_string(i) +
                                   " has mismatched vocabulary size");
    out.emplace_back(i, (bag.histogram - query.histogram).cwiseAbs().sum());
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second < b.second;
    return a.first < b.first;
  });
  return out;
}

double mean_average_precision(const std::vector<std::vector<char>>& rankings) {
  if (rankings.empty()) throw NoRelevantError("no queries");
  double sum_ap = 0.0;
  for (const auto& rel : rankings) {
    long relevant = 0;
    for (char r : rel) relevant += r ? 1 : 0;
    if (relevant == 0) throw NoRelevantError("query has no relevant items");
    double ap = 0.0;
    long hits = 0;
    for (std::size_t r = 0; r < rel.size(); ++r) {
      if (!rel[r]) continue;
      ++hits;
      ap += static_cast<double>(hits) / static_cast<double>(r + 1);
    }
    sum_ap += ap / static_cast<double>(relevant);
  }
  return sum_ap / static_cast<double>(rankings.size());
}

DatasetManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  DatasetManifest manifest;
  std::set<std::string> seen;
  try {
    for (const auto& rec : doc.at("entries")) {
      ManifestEntry entry;
      entry.id = rec.at("id").get<std::string>();
      entry.path = rec.at("path").get<std::string>();
      entry.class_label = rec.at("class").get<std::string>();
      entry.transform = rec.at("transform").get<std::string>();
      entry.strength = rec.at("strength").get<int>();
      entry.is_query = rec.at("split").get<std::string>() == "query";
      if (!seen.insert(entry.id).second)
        throw ParseError(path + ": duplicate shape id \"" + entry.id + "\"");
      std::ifstream probe(entry.path);
      if (!probe) throw IoError(path + ": shape path not resolvable: " + entry.path);
      manifest.entries.push_back(std::move(entry));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return manifest;
}

void save_manifest(const DatasetManifest& manifest, const std::string& path) {
  nlohmann::ordered_json doc;
  doc["entries"] = nlohmann::ordered_json::array();
  for (const auto& e : manifest.entries) {
    nlohmann::ordered_json rec;
    rec["id"] = e.id;
    rec["path"] = e.path;
    rec["class"] = e.class_label;
    rec["transform"] = e.transform;
    rec["strength"] = e.strength;
    rec["split"] = e.is_query ? "query" : "corpus";
    doc["entries"].push_back(std::move(rec));
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path);
  os << doc.dump(2) << "\n";
}

RetrievalReport run_retrieval(const DatasetManifest& manifest, const RetrievalConfig& config) {
  const std::vector<double> scales = config.scales.empty() ? default_hks_scales() : config.scales;

  std::vector<HksDescriptor> descriptors(manifest.entries.size());
  std::vector<Eigen::VectorXd> areas(manifest.entries.size());
  for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
    const TriangleMesh mesh = load_mesh(manifest.entries[i].path);
    const MetricField field = compute_metric_field(mesh, config.mode, config.threads);
    const FemSystem sys = assemble(mesh, field, config.threads);
    const SpectralDecomposition spec =
        smallest_eigenpairs(sys, std::min(config.eigenpairs, mesh.vertex_count()), config.tol);
    descriptors[i] = hks(spec, scales, config.threads);
    areas[i] = sys.lumped_mass();
  }

  std::vector<HksDescriptor> corpus_descriptors;
  for (std::size_t i = 0; i < manifest.entries.size(); ++i)
    if (!manifest.entries[i].is_query) corpus_descriptors.push_back(descriptors[i]);
  if (corpus_descriptors.empty()) throw InsufficientDataError("manifest has no corpus entries");

  const Vocabulary vocab = build_vocabulary(corpus_descriptors, config.vocab_size, config.seed);
  const double sigma2 = config.sigma2 > 0.0 ? config.sigma2 : default_sigma2(vocab);

  std::vector<BagOfFeatures> bags(manifest.entries.size());
  for (std::size_t i = 0; i < manifest.entries.size(); ++i)
    bags[i] = bag_of_features(descriptors[i], vocab, areas[i], sigma2, config.area_weighted,
                              config.threads);

  std::vector<int> corpus_index;
  for (int i = 0; i < static_cast<int>(manifest.entries.size()); ++i)
    if (!manifest.entries[static_cast<std::size_t>(i)].is_query) corpus_index.push_back(i);
  std::vector<BagOfFeatures> corpus_bags;
  for (int i : corpus_index) corpus_bags.push_back(bags[static_cast<std::size_t>(i)]);

  RetrievalReport report;
  struct QueryRecord {
    std::string transform;
    int strength;
    std::vector<char> relevance;
  };
  std::vector<QueryRecord> queries;

  for (int i = 0; i < static_cast<int>(manifest.entries.size()); ++i) {
    const auto& entry = manifest.entries[static_cast<std::size_t>(i)];
    if (!entry.is_query) continue;
    const auto ranked = rank(bags[static_cast<std::size_t>(i)], corpus_bags);

    RankedQuery rq;
    rq.query_id = entry.id;
    QueryRecord record;
    record.transform = entry.transform;
    record.strength = entry.strength;
    for (const auto& [ci, dist] : ranked) {
      const auto& centry = manifest.entries[static_cast<std::size_t>(corpus_index[static_cast<std::size_t>(ci)])];
      rq.results.emplace_back(centry.id, dist);
      record.relevance.push_back(centry.class_label == entry.class_label ? 1 : 0);
    }
    report.ranked.push_back(std::move(rq));
    queries.push_back(std::move(record));
  }
  if (queries.empty()) throw InsufficientDataError("manifest has no query entries");

  std::set<std::string> transforms;
  int max_strength = 0;
  for (const auto& q : queries) {
    transforms.insert(q.transform);
    max_strength = std::max(max_strength, q.strength);
  }
  for (const std::string& t : transforms) {
    for (int s = 1; s <= std::max(max_strength, 1); ++s) {
      std::vector<std::vector<char>> rels;
      for (const auto& q : queries)
        if (q.transform == t && q.strength <= s) rels.push_back(q.relevance);
      if (!rels.empty()) report.per_transform[t][s] = mean_average_precision(rels);
    }
  }
  {
    std::vector<std::vector<char>> rels;
    for (const auto& q : queries) rels.push_back(q.relevance);
    report.overall_map = mean_average_precision(rels);
  }
  return report;
}

void save_report_json(const RetrievalReport& report, MetricMode mode, const std::string& path) {
  nlohmann::ordered_json doc;
  doc["mode"] = to_string(mode);
  doc["overall_map"] = report.overall_map;
  nlohmann::ordered_json per;
  for (const auto& [transform, columns] : report.per_transform) {
    nlohmann::ordered_json row;
    for (const auto& [strength, map_value] : columns) row[std::to_string(strength)] = map_value;
    per[transform] = std::move(row);
  }
  doc["per_transform"] = std::move(per);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path);
  os << doc.dump(2) << "\n";
}

void save_ranked_csv(const RetrievalReport& report, const std::string& path) {
  std::string out = "query,rank,corpus,distance\n";
  char buf[64];
  for (const auto& rq : report.ranked) {
    for (std::size_t r = 0; r < rq.results.size(); ++r) {
      std::snprintf(buf, sizeof(buf), "%.17g", rq.results[r].second);
      out += rq.query_id + "," + std::to_string(r + 1) + "," + rq.results[r].first + "," + buf +
             "\n";
    }
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path);
  os << out;
}

}  // namespace adg
