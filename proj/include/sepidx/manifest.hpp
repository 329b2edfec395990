#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sepidx/ranking.hpp"
#include "sepidx/reports.hpp"

namespace sepidx {

inline constexpr const char* kManifestSchema = "sepidx-manifest/1";

struct EmbeddingRef {
  std::filesystem::path path;  // absolute, or relative to the manifest directory
  std::string format = "sidx";  // "sidx" or "csv"
  std::string label_column = "label";
  bool operator==(const EmbeddingRef&) const = default;
};

struct BaselineSpec {
  std::optional<EmbeddingRef> embedding;
  std::optional<double> precomputed_si;
  bool operator==(const BaselineSpec&) const = default;
};

struct CandidateSpec {
  std::string name;
  std::optional<EmbeddingRef> embedding;
  std::optional<double> precomputed_si;
  std::optional<double> accuracy;
  bool operator==(const CandidateSpec&) const = default;
};

struct RunManifest {
  BaselineSpec baseline;
  std::vector<CandidateSpec> candidates;
  std::string metric = "sqeuclidean";
  bool operator==(const RunManifest&) const = default;
};

/// Parses a "sepidx-manifest/1" document. Relative paths are resolved against
/// `base_dir` and must exist. Throws SchemaViolation (JSON pointer in where()),
/// DuplicateCandidateName, EmptyCandidateList, or Io for missing files.
RunManifest parse_manifest(std::string_view text, const std::filesystem::path& base_dir);
RunManifest load_manifest(const std::filesystem::path& path);

/// Everything a manifest refers to, read from disk.
struct LoadedRun {
  Baseline baseline;
  std::vector<CandidateInput> candidates;
  std::vector<InputRecord> inputs;
};

LoadedRun load_inputs(const RunManifest& manifest);

LabeledFeatureSet load_embedding(const EmbeddingRef& ref, InputRecord* record = nullptr);

std::string sha256_hex(std::span<const std::byte> bytes);

}  // namespace sepidx
