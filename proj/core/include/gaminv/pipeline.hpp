#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gaminv/error_metrics.hpp"
#include "gaminv/invariant_image.hpp"
#include "gaminv/synth.hpp"
#include "gaminv/template_matching.hpp"

namespace gaminv {

struct SynthSpec {
  SynthKind kind = SynthKind::gaussians;
  std::uint64_t seed = 1;
  int width = 128;
  int height = 128;
};

/// One corpus image: either a file on disk or a generated image.
struct CorpusEntry {
  std::string name;
  std::optional<std::filesystem::path> path;
  std::optional<SynthSpec> synth;
};

/// Settings for the gamma / invariant / error / matching experiment.
struct RunConfig {
  double gamma = 0.6;
  double white = 255.0;
  bool requantize = true;
  double sigma_pre = 0.0;           ///< baseline column
  double sigma_pre_filtered = 1.0;  ///< "gently prefiltered" column
  double sigma_der = 1.0;
  int kernel_size = 7;
  InvariantKind kind = InvariantKind::m12g;
  DerivativeRoute route = DerivativeRoute::log_domain;
  std::vector<TemplateSize> template_sizes = {{6, 8}, {10, 10}};
  std::vector<double> thresholds = {5.0, 10.0, 20.0};
  std::vector<CorpusEntry> corpus;
  std::filesystem::path output_dir = "gaminv_out";
  bool write_images = true;
  bool run_matching = true;

  /// Throws InputError describing the first bad field.
  void validate() const;
  /// The two prefilter settings evaluated for every image.
  std::vector<double> sigma_pre_values() const { return {sigma_pre, sigma_pre_filtered}; }
};

/// The three built-in synthetic scenes (gaussians, ripple, checker-blur).
std::vector<CorpusEntry> default_corpus(int width = 128, int height = 128, std::uint64_t seed = 1);

/// Parses a JSON run configuration. Unknown keys are rejected.
RunConfig run_config_from_json(const std::string& text);
RunConfig load_run_config(const std::filesystem::path& path);

/// Parses "kind:seed" or "kind:seed:WxH" (e.g. "ripple:3:256x256").
CorpusEntry parse_synth_entry(const std::string& spec, int default_width = 128,
                              int default_height = 128);

struct PlannedArtifact {
  std::filesystem::path path;
  std::string description;
};

/// Every file a successful run writes, in creation order.
std::vector<PlannedArtifact> plan_artifacts(const RunConfig& cfg);

/// Numbers behind one row of the reliable-points table.
struct ErrorRow {
  std::string image;
  double sigma_pre = 0.0;
  std::size_t n_valid = 0;
  std::vector<double> prp;  ///< aligned with RunConfig::thresholds
  double mean_abs = 0.0;
  double median_abs = 0.0;
};

/// Correlation accuracy of one image for one template size, all four columns.
struct MatchRow {
  std::string image;
  TemplateSize size;
  double intensity_plain = 0.0;
  double intensity_filtered = 0.0;
  double invariant_plain = 0.0;
  double invariant_filtered = 0.0;
};

struct PipelineResult {
  std::vector<ErrorRow> errors;
  std::vector<MatchRow> matches;
  std::vector<std::filesystem::path> written;
};

/// Loads or generates every corpus image, forms the gamma-corrected
/// counterpart, and writes table1.csv (reliable points), table2.csv
/// (correlation accuracy) and, if enabled, PGM visualisations. Stage failures
/// are rethrown with a "[stage] image: " prefix and the original error type.
PipelineResult run_pipeline(const RunConfig& cfg, std::ostream* log = nullptr);

/// Prints the resolved settings and planned artifacts without touching disk.
void print_plan(const RunConfig& cfg, std::ostream& out);

/// The 0GC image of a corpus entry, 8-bit quantised when `requantize`.
ScalarField load_corpus_image(const CorpusEntry& entry, bool requantize);

}  // namespace gaminv
