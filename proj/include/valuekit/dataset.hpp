#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "valuekit/annotations.hpp"
#include "valuekit/core.hpp"

namespace valuekit {

struct SplitRatios {
  double train = 0.75;
  double valid = 0.15;
  double test = 0.10;

  void validate() const;  // positive, summing to 1 within 1e-9
};

// Seeded shuffle followed by a stratified contiguous partition. Every
// (dimension, label) cell lands within one sample of its exact ratio share,
// and the global counts equal floor(N*train), floor(N*valid), remainder.
DatasetSplit split_dataset(const std::vector<AnnotatedSample>& samples,
                           const SplitRatios& ratios, std::uint64_t seed);

// Down-samples negative- and neutral-labeled BENEVOLENCE samples to the mean
// per-label count of the other nine dimensions (rounded half away from
// zero). Positive samples and other dimensions are untouched; survivors keep
// their input order.
std::vector<AnnotatedSample> make_balanced(
    const std::vector<AnnotatedSample>& samples, std::uint64_t seed);

// --- canonical interchange files -------------------------------------------

// Samples: TSV with header `id  scenario  dimension  label  agreement`.
// Tabs/newlines/backslashes inside the scenario text are escaped.
std::vector<AnnotatedSample> load_samples(const std::filesystem::path& path);
void save_samples(const std::filesystem::path& path,
                  std::span<const AnnotatedSample> samples);

// Raw annotations: TSV with header
// `scenario_id  scenario_text  dimension  worker_id  vote`.
RawAnnotations load_annotations(const std::filesystem::path& path);
void save_annotations(const std::filesystem::path& path,
                      const RawAnnotations& raw);

// --- column-mapped CSV adapter ----------------------------------------------

// Mapping for published datasets whose CSV schema differs from the canonical
// files. Columns are addressed by header name or zero-based index.
struct CsvMapping {
  using Column = std::variant<std::monostate, int, std::string>;
  char delimiter = ',';
  bool has_header = true;
  Column id;         // optional; "row<N>" generated when absent
  Column scenario;   // required
  Column dimension;  // required unless fixed_dimension is set
  Column label;      // required
  Column agreement;  // optional; agreement_default used when absent
  std::optional<ValueDimension> fixed_dimension;
  int agreement_default = 3;
  std::map<std::string, int> label_map;  // optional label-text remapping

  static CsvMapping load(const std::filesystem::path& path);  // JSON config
};

std::vector<AnnotatedSample> load_samples_csv(const std::filesystem::path& path,
                                              const CsvMapping& mapping);

}  // namespace valuekit
