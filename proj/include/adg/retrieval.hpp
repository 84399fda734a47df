#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "adg/diffusion.hpp"

namespace adg {

struct Vocabulary {
  Eigen::MatrixXd centers;  // size x dim, pairwise distinct

  int size() const { return static_cast<int>(centers.rows()); }
  int dim() const { return static_cast<int>(centers.cols()); }
};

// Seeded k-means (k-means++ start, Lloyd iterations until the largest
// center movement drops below 1e-6 of the data spread or 200 rounds).
Vocabulary build_vocabulary(const std::vector<Eigen::MatrixXd>& descriptor_sets, int size,
                            std::uint64_t seed);
Vocabulary build_vocabulary(const std::vector<HksDescriptor>& descriptor_sets, int size,
                            std::uint64_t seed);

// sigma2 = 2 * median pairwise distance between centers (the Gaussian
// variance used by soft_quantize).
double default_sigma2(const Vocabulary& vocab);

// Weights w_v proportional to exp(-|p - c_v|^2 / (2 sigma2)), summing to 1.
Eigen::VectorXd soft_quantize(const Eigen::VectorXd& p, const Vocabulary& vocab, double sigma2);

struct BagOfFeatures {
  Eigen::VectorXd histogram;  // non-negative, L1-normalized
};

// Area-weighted soft-assignment histogram; pass area_weighted = false
// for the plain per-vertex count variant.
BagOfFeatures bag_of_features(const HksDescriptor& desc, const Vocabulary& vocab,
                              const Eigen::VectorXd& area_weights, double sigma2,
                              bool area_weighted = true, int threads = 0);

// Ascending L1 distance, ties broken by corpus index.
std::vector<std::pair<int, double>> rank(const BagOfFeatures& query,
                                         const std::vector<BagOfFeatures>& corpus);

// Per query: relevance flags in rank order. AP = sum_r P(r) rel(r) / R.
double mean_average_precision(const std::vector<std::vector<char>>& rankings);

struct ManifestEntry {
  std::string id;
  std::string path;
  std::string class_label;
  std::string transform;  // "null", "affine", "isometry", ...
  int strength = 0;
  bool is_query = false;  // otherwise part of the queried corpus
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;
};

DatasetManifest load_manifest(const std::string& path);
void save_manifest(const DatasetManifest& manifest, const std::string& path);

struct RetrievalConfig {
  MetricMode mode = MetricMode::equi_affine;
  int eigenpairs = 100;
  double tol = 1e-10;
  std::vector<double> scales;  // empty -> default_hks_scales()
  int vocab_size = 64;
  std::uint64_t seed = 0;
  double sigma2 = 0.0;  // <= 0 -> default_sigma2(vocab)
  bool area_weighted = true;
  int threads = 0;
};

struct RankedQuery {
  std::string query_id;
  std::vector<std::pair<std::string, double>> results;  // (corpus id, distance)
};

struct RetrievalReport {
  // transform -> cumulative strength column (mAP over queries of that
  // transform with strength <= column).
  std::map<std::string, std::map<int, double>> per_transform;
  double overall_map = 0.0;
  std::vector<RankedQuery> ranked;
};

// Full pipeline over a manifest: per-shape metric field, FEM,
// eigenpairs, HKS, vocabulary from the corpus split, bags, ranking.
RetrievalReport run_retrieval(const DatasetManifest& manifest, const RetrievalConfig& config);

void save_report_json(const RetrievalReport& report, MetricMode mode, const std::string& path);
void save_ranked_csv(const RetrievalReport& report, const std::string& path);

}  // namespace adg
