// Command-line front end: spectrum, hks, distance, retrieve, symmetry,
// match, transform, export. All structured output is JSON under --out;
// every run is a pure function of its inputs and seeds.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "adg/correspondence.hpp"
#include "adg/diffusion.hpp"
#include "adg/eigensolver.hpp"
#include "adg/fem.hpp"
#include "adg/mesh_io.hpp"
#include "adg/retrieval.hpp"
#include "adg/symmetry.hpp"
#include "adg/transform.hpp"

namespace {

using adg::MetricMode;
using json = nlohmann::ordered_json;

struct PipelineOptions {
  std::string mesh_path;
  std::string mode_name = "equi-affine";
  int eigenpairs = 100;
  double tol = 1e-9;
  int threads = 0;
  std::string out_dir = ".";
};

void add_pipeline_options(CLI::App* cmd, PipelineOptions* opts, bool with_spectral = true) {
  cmd->add_option("--mesh", opts->mesh_path, "input mesh (.off or .obj)")->required();
  cmd->add_option("--mode", opts->mode_name, "metric mode: euclidean or equi-affine")
      ->check(CLI::IsMember({"euclidean", "equi-affine"}));
  if (with_spectral) {
    cmd->add_option("--k", opts->eigenpairs, "number of eigenpairs");
    cmd->add_option("--tol", opts->tol, "eigensolver residual tolerance");
  }
  cmd->add_option("--threads", opts->threads, "worker threads (0 = all)");
  cmd->add_option("--out", opts->out_dir, "output directory");
}

struct PipelineResult {
  adg::TriangleMesh mesh;
  adg::MetricField field;
  adg::FemSystem sys;
  adg::SpectralDecomposition spec;
};

PipelineResult run_pipeline(const PipelineOptions& opts) {
  adg::TriangleMesh mesh = adg::load_mesh(opts.mesh_path);
  const MetricMode mode = adg::metric_mode_from_string(opts.mode_name);
  adg::MetricField field = adg::compute_metric_field(mesh, mode, opts.threads);
  adg::FemSystem sys = adg::assemble(mesh, field, opts.threads);
  const int k = std::min(opts.eigenpairs, mesh.vertex_count());
  adg::SpectralDecomposition spec = adg::smallest_eigenpairs(sys, k, opts.tol);
  return {std::move(mesh), std::move(field), std::move(sys), std::move(spec)};
}

std::string out_path(const PipelineOptions& opts, const std::string& name) {
  std::filesystem::create_directories(opts.out_dir);
  return (std::filesystem::path(opts.out_dir) / name).string();
}

void write_json(const json& doc, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw adg::IoError("cannot write " + path);
  os << doc.dump(2) << "\n";
}

json spectrum_json(const PipelineResult& p, double tol) {
  json doc;
  doc["mode"] = adg::to_string(p.spec.mode);
  doc["k"] = p.spec.pair_count();
  doc["tol"] = tol;
  doc["lambda"] = std::vector<double>(p.spec.eigenvalues.data(),
                                      p.spec.eigenvalues.data() + p.spec.eigenvalues.size());
  std::vector<double> residuals;
  for (int i = 0; i < p.spec.pair_count(); ++i) {
    const Eigen::VectorXd x = p.spec.eigenvectors.col(i);
    residuals.push_back(
        (p.sys.stiffness * x - p.spec.eigenvalues(i) * (p.sys.mass * x)).norm());
  }
  doc["residuals"] = residuals;
  return doc;
}

int cmd_spectrum(const PipelineOptions& opts, bool dump_matrices, bool dump_metric) {
  const PipelineResult p = run_pipeline(opts);
  write_json(spectrum_json(p, opts.tol), out_path(opts, "spectrum.json"));
  if (dump_matrices) {
    adg::write_matrix_market(p.sys.stiffness, out_path(opts, "A.mtx"));
    adg::write_matrix_market(p.sys.mass, out_path(opts, "B.mtx"));
  }
  if (dump_metric) adg::dump_metric_debug_json(p.field, out_path(opts, "metric_debug.json"));
  return 0;
}

int cmd_hks(const PipelineOptions& opts, std::vector<double> scales) {
  if (scales.empty()) scales = adg::default_hks_scales();
  const PipelineResult p = run_pipeline(opts);
  const adg::HksDescriptor desc = adg::hks(p.spec, scales, opts.threads);
  json doc;
  doc["mode"] = adg::to_string(p.spec.mode);
  doc["k"] = p.spec.pair_count();
  doc["scales"] = scales;
  json values = json::array();
  for (int v = 0; v < desc.vertex_count(); ++v) {
    json row = json::array();
    for (int s = 0; s < desc.scale_count(); ++s) row.push_back(desc.values(v, s));
    values.push_back(std::move(row));
  }
  doc["values"] = std::move(values);
  write_json(doc, out_path(opts, "hks.json"));
  return 0;
}

int cmd_distance(const PipelineOptions& opts, int from, int to, std::optional<double> t,
                 bool literal_exponent) {
  const PipelineResult p = run_pipeline(opts);
  if (from < 0 || from >= p.mesh.vertex_count() || to < 0 || to >= p.mesh.vertex_count())
    throw adg::InvalidArgumentError("vertex index out of range");
  json doc;
  doc["mode"] = adg::to_string(p.spec.mode);
  doc["from"] = from;
  doc["to"] = to;
  if (t) {
    doc["kind"] = "diffusion";
    doc["t"] = *t;
    doc["value"] = adg::diffusion_distance(p.spec, from, to, *t,
                                           literal_exponent
                                               ? adg::DiffusionExponent::literal_t
                                               : adg::DiffusionExponent::scaled_2t);
  } else {
    doc["kind"] = "commute-time";
    doc["value"] = adg::commute_time(p.spec, from, to);
  }
  write_json(doc, out_path(opts, "distance.json"));
  return 0;
}

int cmd_retrieve(const std::string& manifest_path, const PipelineOptions& opts,
                 std::vector<double> scales, int vocab_size, std::uint64_t seed, double sigma2,
                 bool unweighted) {
  const adg::DatasetManifest manifest = adg::load_manifest(manifest_path);
  adg::RetrievalConfig config;
  config.mode = adg::metric_mode_from_string(opts.mode_name);
  config.eigenpairs = opts.eigenpairs;
  config.tol = opts.tol;
  config.scales = std::move(scales);
  config.vocab_size = vocab_size;
  config.seed = seed;
  config.sigma2 = sigma2;
  config.area_weighted = !unweighted;
  config.threads = opts.threads;
  const adg::RetrievalReport report = adg::run_retrieval(manifest, config);
  adg::save_report_json(report, config.mode, out_path(opts, "retrieval.json"));
  adg::save_ranked_csv(report, out_path(opts, "ranked.csv"));
  return 0;
}

int cmd_symmetry(const PipelineOptions& opts, int K, int top, bool drop_multiplets,
                 bool map_ply) {
  const PipelineResult p = run_pipeline(opts);
  const Eigen::VectorXd areas = p.sys.lumped_mass();
  const adg::SymmetryResult result =
      adg::detect_symmetries(p.spec, K, top, areas, drop_multiplets, opts.threads);
  json doc;
  doc["mode"] = adg::to_string(p.spec.mode);
  doc["K"] = K;
  doc["degenerate_warning"] = result.degenerate_warning;
  doc["used_indices"] = result.used_indices;
  json candidates = json::array();
  for (const auto& cand : result.candidates) {
    json rec;
    rec["signs"] = cand.signature.signs;
    rec["energy"] = cand.energy;
    rec["f"] = cand.map;
    candidates.push_back(std::move(rec));
  }
  doc["candidates"] = std::move(candidates);
  write_json(doc, out_path(opts, "symmetry.json"));
  if (map_ply && !result.candidates.empty()) {
    std::vector<double> field;
    for (int target : result.candidates[0].map) field.push_back(static_cast<double>(target));
    adg::export_scalar_ply(p.mesh, field, out_path(opts, "symmetry_map.ply"));
  }
  return 0;
}

int cmd_match(const PipelineOptions& opts, const std::string& mesh_b_path, int samples,
              std::uint64_t seed, bool use_gh, int gh_max) {
  const PipelineResult a = run_pipeline(opts);
  PipelineOptions opts_b = opts;
  opts_b.mesh_path = mesh_b_path;
  const PipelineResult b = run_pipeline(opts_b);
  if (a.mesh.vertex_count() != b.mesh.vertex_count())
    throw adg::InvalidArgumentError(
        "match expects meshes with identical vertex sets (a deformed copy)");

  const std::vector<int> ids = adg::farthest_point_sample(a.mesh, a.spec, samples, seed);
  const adg::SampledMetricSpace X = adg::make_sampled_space(
      ids, adg::commute_time_matrix(a.spec, ids, opts.threads), opts.mesh_path);
  const adg::SampledMetricSpace Y = adg::make_sampled_space(
      ids, adg::commute_time_matrix(b.spec, ids, opts.threads), mesh_b_path);

  const adg::Correspondence identity = adg::identity_correspondence(samples);
  const adg::MatchReport report = adg::evaluate_matching(X, Y, identity);

  json doc;
  doc["mode"] = adg::to_string(a.spec.mode);
  doc["samples"] = ids;
  doc["distortion"] = report.distortion;
  doc["stresses"] = report.stresses;
  json pairs = json::array();
  for (const auto& [i, j] : identity.pairs)
    pairs.push_back({ids[static_cast<std::size_t>(i)], ids[static_cast<std::size_t>(j)]});
  doc["pairs"] = std::move(pairs);
  if (use_gh) {
    const adg::GhResult gh = adg::gromov_hausdorff_bruteforce(X, Y, gh_max);
    doc["dgh"] = gh.dgh;
    json best = json::array();
    for (const auto& [i, j] : gh.best.pairs) best.push_back({i, j});
    doc["dgh_pairs"] = std::move(best);
  }
  write_json(doc, out_path(opts, "match.json"));
  return 0;
}

int cmd_transform(const PipelineOptions& opts, const std::string& out_mesh,
                  std::optional<std::uint64_t> seed, double max_condition,
                  const std::vector<double>& matrix, const std::vector<double>& translation,
                  bool det_check) {
  const adg::TriangleMesh mesh = adg::load_mesh(opts.mesh_path);
  adg::AffineTransform T;
  if (seed) {
    T = adg::random_equi_affine(*seed, max_condition);
  } else {
    if (matrix.size() != 9)
      throw adg::InvalidArgumentError("--matrix expects 9 row-major entries");
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) T.A(r, c) = matrix[static_cast<std::size_t>(3 * r + c)];
  }
  if (translation.size() == 3)
    T.b = Eigen::Vector3d(translation[0], translation[1], translation[2]);
  if (det_check && !T.equi_affine())
    throw adg::InvalidArgumentError(
        "transform is not volume-preserving (det != 1) with --det-check");
  const adg::TriangleMesh moved = adg::apply_affine(mesh, T);
  adg::save_off(moved, out_mesh);

  json doc;
  doc["det"] = T.A.determinant();
  doc["equi_affine"] = T.equi_affine();
  json rows = json::array();
  for (int r = 0; r < 3; ++r) rows.push_back({T.A(r, 0), T.A(r, 1), T.A(r, 2)});
  doc["A"] = std::move(rows);
  doc["b"] = {T.b(0), T.b(1), T.b(2)};
  doc["mesh"] = out_mesh;
  write_json(doc, out_path(opts, "transform.json"));
  return 0;
}

int cmd_export(const PipelineOptions& opts, const std::string& field_path,
               const std::string& component, const std::string& out_ply) {
  const adg::TriangleMesh mesh = adg::load_mesh(opts.mesh_path);
  std::vector<double> field;
  if (!field_path.empty()) {
    std::ifstream in(field_path);
    if (!in) throw adg::IoError("cannot open " + field_path);
    json doc;
    try {
      in >> doc;
      field = doc.get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
      throw adg::ParseError(field_path + ": " + e.what());
    }
  } else {
    const int axis = component == "x" ? 0 : component == "y" ? 1 : 2;
    for (const auto& v : mesh.vertices()) field.push_back(v(axis));
  }
  adg::export_scalar_ply(mesh, field, out_ply);
  return 0;
}

void print_error(const std::string& kind, int code, const std::string& message) {
  json doc;
  doc["error"]["code"] = code;
  doc["error"]["kind"] = kind;
  doc["error"]["message"] = message;
  std::cerr << doc.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"equi-affine-invariant diffusion geometry on triangle meshes"};
  app.require_subcommand(1);

  PipelineOptions opts;

  auto* spectrum = app.add_subcommand("spectrum", "Laplace-Beltrami eigenvalues and residuals");
  add_pipeline_options(spectrum, &opts);
  bool dump_matrices = false, dump_metric = false;
  spectrum->add_flag("--dump-matrices", dump_matrices, "write A.mtx and B.mtx (Matrix Market)");
  spectrum->add_flag("--dump-metric", dump_metric, "write per-face metric debug records");

  auto* hks_cmd = app.add_subcommand("hks", "multi-scale heat kernel signatures");
  add_pipeline_options(hks_cmd, &opts);
  std::vector<double> scales;
  hks_cmd->add_option("--scales", scales, "diffusion times (default: the six-scale list)")->delimiter(',');

  auto* distance = app.add_subcommand("distance", "diffusion or commute-time distance");
  add_pipeline_options(distance, &opts);
  int from = 0, to = 0;
  double diff_t = 0.0;
  bool commute = false, literal_exponent = false;
  distance->add_option("--from", from, "source vertex")->required();
  distance->add_option("--to", to, "target vertex")->required();
  auto* t_opt = distance->add_option("--t", diff_t, "diffusion time");
  distance->add_flag("--commute", commute, "commute-time distance instead of diffusion");
  distance->add_flag("--literal-exponent", literal_exponent,
                     "use exp(-lambda t) instead of exp(-2 lambda t)");

  auto* retrieve = app.add_subcommand("retrieve", "bag-of-features retrieval over a manifest");
  add_pipeline_options(retrieve, &opts);
  retrieve->get_option("--mesh")->required(false);
  std::string manifest_path;
  retrieve->add_option("--manifest", manifest_path, "dataset manifest JSON")->required();
  std::vector<double> retrieve_scales;
  retrieve->add_option("--scales", retrieve_scales, "descriptor scales")->delimiter(',');
  int vocab_size = 64;
  std::uint64_t retrieve_seed = 0;
  double sigma2 = 0.0;
  bool unweighted = false;
  retrieve->add_option("--vocab-size", vocab_size, "vocabulary size");
  retrieve->add_option("--seed", retrieve_seed, "k-means seed");
  retrieve->add_option("--sigma2", sigma2, "soft-assignment variance (0 = auto)");
  retrieve->add_flag("--unweighted", unweighted, "plain counting instead of area weighting");

  auto* symmetry = app.add_subcommand("symmetry", "sign-signature intrinsic symmetry detection");
  add_pipeline_options(symmetry, &opts);
  int K = 5, top = 3;
  bool drop_multiplets = false, map_ply = false;
  symmetry->add_option("--K", K, "signature length");
  symmetry->add_option("--top", top, "candidates to keep");
  symmetry->add_flag("--drop-multiplets", drop_multiplets, "drop flagged eigenvalue indices");
  symmetry->add_flag("--map-ply", map_ply, "export the best correspondence as a colored PLY");

  auto* match = app.add_subcommand("match", "correspondence distortion between two meshes");
  add_pipeline_options(match, &opts);
  std::string mesh_b;
  int samples = 50;
  std::uint64_t match_seed = 0;
  bool use_gh = false;
  int gh_max = 7;
  match->add_option("--mesh-b", mesh_b, "second mesh (deformed copy)")->required();
  match->add_option("--samples", samples, "farthest-point sample count");
  match->add_option("--seed", match_seed, "sampling seed");
  match->add_flag("--gh", use_gh, "also brute-force the Gromov-Hausdorff distance");
  match->add_option("--gh-max", gh_max, "size cap for the brute force");

  auto* transform = app.add_subcommand("transform", "apply a random or explicit affine map");
  add_pipeline_options(transform, &opts, false);
  std::string out_mesh;
  std::uint64_t transform_seed = 0;
  double max_condition = 5.0;
  std::vector<double> matrix, translation;
  bool det_check = false;
  transform->add_option("--out-mesh", out_mesh, "output OFF path")->required();
  auto* seed_opt = transform->add_option("--seed", transform_seed, "random transform seed");
  transform->add_option("--max-cond", max_condition, "condition budget for the random transform");
  transform->add_option("--matrix", matrix, "explicit 3x3 matrix, row-major")->delimiter(',');
  transform->add_option("--translation", translation, "translation vector")->delimiter(',');
  transform->add_flag("--det-check", det_check, "refuse non-volume-preserving matrices");

  auto* export_cmd = app.add_subcommand("export", "colored PLY of a scalar field");
  add_pipeline_options(export_cmd, &opts, false);
  std::string field_path, component = "z", out_ply;
  export_cmd->add_option("--field", field_path, "JSON array with one value per vertex");
  export_cmd->add_option("--component", component, "coordinate field when --field is absent")
      ->check(CLI::IsMember({"x", "y", "z"}));
  export_cmd->add_option("--out-ply", out_ply, "output PLY path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (spectrum->parsed()) return cmd_spectrum(opts, dump_matrices, dump_metric);
    if (hks_cmd->parsed()) return cmd_hks(opts, scales);
    if (distance->parsed()) {
      if (commute == (t_opt->count() > 0))
        throw adg::InvalidArgumentError("pass exactly one of --t or --commute");
      std::optional<double> t;
      if (t_opt->count() > 0) t = diff_t;
      return cmd_distance(opts, from, to, t, literal_exponent);
    }
    if (retrieve->parsed())
      return cmd_retrieve(manifest_path, opts, retrieve_scales, vocab_size, retrieve_seed, sigma2,
                          unweighted);
    if (symmetry->parsed()) return cmd_symmetry(opts, K, top, drop_multiplets, map_ply);
    if (match->parsed()) return cmd_match(opts, mesh_b, samples, match_seed, use_gh, gh_max);
    if (transform->parsed()) {
      std::optional<std::uint64_t> seed;
      if (seed_opt->count() > 0) seed = transform_seed;
      return cmd_transform(opts, out_mesh, seed, max_condition, matrix, translation, det_check);
    }
    if (export_cmd->parsed()) return cmd_export(opts, field_path, component, out_ply);
  } catch (const adg::Error& e) {
    print_error(e.kind(), static_cast<int>(e.category()), e.what());
    return static_cast<int>(e.category());
  } catch (const std::exception& e) {
    print_error("InternalError", 4, e.what());
    return 4;
  }
  return 0;
}
