#include "sepidx/manifest.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <set>

#include "json_reader.hpp"
#include "sepidx/formats.hpp"

namespace sepidx {

namespace {

double read_si(const JsonReader& r) {
  const double v = r.real();
  if (!std::isfinite(v) || v < 0.0 || v > 1.0) r.fail("precomputed SI must lie in [0, 1]");
  return v;
}

EmbeddingRef read_ref(const JsonReader& entry, const std::filesystem::path& base_dir) {
  EmbeddingRef ref;
  const auto path = entry["path"];
  const std::string raw = path.string();
  if (raw.empty()) path.fail("path is empty");
  ref.path = std::filesystem::path(raw);
  if (ref.path.is_relative()) ref.path = base_dir / ref.path;
  ref.format = ref.path.extension() == ".csv" ? "csv" : "sidx";
  if (entry.has("format")) {
    ref.format = entry["format"].string();
    if (ref.format != "sidx" && ref.format != "csv") entry["format"].fail("expected \"sidx\" or \"csv\"");
  }
  if (entry.has("label_column")) ref.label_column = entry["label_column"].string();
  std::error_code ec;
  if (!std::filesystem::exists(ref.path, ec)) {
    throw Error(Errc::Io, "no such file: " + ref.path.string() + " (" + path.pointer() + ")",
                path.pointer());
  }
  return ref;
}

// Exactly one of "path" / "precomputed_si".
void check_source(const JsonReader& entry) {
  const bool has_path = entry.has("path");
  const bool has_si = entry.has("precomputed_si");
  if (has_path == has_si) entry.fail("exactly one of \"path\" and \"precomputed_si\" is required");
  if (!has_path && (entry.has("format") || entry.has("label_column"))) {
    entry.fail("\"format\"/\"label_column\" need a \"path\"");
  }
}

}  // namespace

std::string sha256_hex(std::span<const std::byte> bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(Errc::Io, "SHA-256 computation failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return out;
}

RunManifest parse_manifest(std::string_view text, const std::filesystem::path& base_dir) {
  const auto doc = parse_json_document(text);
  const JsonReader r(doc);
  r.only_keys({"schema", "baseline", "candidates", "options"});
  if (r["schema"].string() != kManifestSchema) r["schema"].fail("expected \"sepidx-manifest/1\"");

  RunManifest manifest;
  const auto baseline = r["baseline"];
  baseline.only_keys({"path", "precomputed_si", "format", "label_column"});
  check_source(baseline);
  if (baseline.has("path")) {
    manifest.baseline.embedding = read_ref(baseline, base_dir);
  } else {
    manifest.baseline.precomputed_si = read_si(baseline["precomputed_si"]);
  }

  const auto candidates = r["candidates"];
  if (candidates.size() == 0) {
    throw Error(Errc::EmptyCandidateList, "manifest lists no candidates", candidates.pointer());
  }
  std::set<std::string> names;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto entry = candidates[i];
    entry.only_keys({"name", "path", "precomputed_si", "format", "label_column", "accuracy"});
    CandidateSpec spec;
    spec.name = entry["name"].string();
    if (spec.name.empty()) entry["name"].fail("name is empty");
    if (!names.insert(spec.name).second) {
      throw Error(Errc::DuplicateCandidateName, "duplicate candidate name '" + spec.name + "'",
                  entry["name"].pointer());
    }
    check_source(entry);
    if (entry.has("path")) {
      spec.embedding = read_ref(entry, base_dir);
    } else {
      spec.precomputed_si = read_si(entry["precomputed_si"]);
    }
    if (entry.has("accuracy")) {
      const double acc = entry["accuracy"].real();
      if (!std::isfinite(acc)) entry["accuracy"].fail("accuracy must be finite");
      spec.accuracy = acc;
    }
    manifest.candidates.push_back(std::move(spec));
  }

  if (r.has("options")) {
    const auto options = r["options"];
    options.only_keys({"metric"});
    if (options.has("metric")) {
      manifest.metric = options["metric"].string();
      if (manifest.metric != "sqeuclidean") options["metric"].fail("only \"sqeuclidean\" is supported");
    }
  }
  return manifest;
}

RunManifest load_manifest(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  const std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  auto dir = path.parent_path();
  if (dir.empty()) dir = ".";
  return parse_manifest(text, dir);
}

LabeledFeatureSet load_embedding(const EmbeddingRef& ref, InputRecord* record) {
  const auto bytes = read_file_bytes(ref.path);
  LabeledFeatureSet fs;
  try {
    if (ref.format == "csv") {
      const std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());
      fs = parse_csv(text, ref.label_column, ref.path.stem().string());
    } else {
      fs = parse_sidx(bytes, ref.path.stem().string());
    }
  } catch (const Error& e) {
    throw Error(e.code(), e.detail() + " (" + ref.path.string() + ")", ref.path.string(), e.row(),
                e.col());
  }
  if (record != nullptr) {
    record->path = ref.path.string();
    record->sha256 = sha256_hex(bytes);
    record->narrowed_from_f64 = fs.narrowed_from_f64;
  }
  return fs;
}

LoadedRun load_inputs(const RunManifest& manifest) {
  LoadedRun run;
  InputRecord base{"baseline", "baseline", "", "", false};
  if (manifest.baseline.embedding) {
    run.baseline = load_embedding(*manifest.baseline.embedding, &base);
  } else {
    run.baseline = manifest.baseline.precomputed_si.value_or(0.0);
  }
  run.inputs.push_back(base);

  for (const auto& spec : manifest.candidates) {
    InputRecord record{"candidate", spec.name, "", "", false};
    CandidateInput input;
    input.candidate_name = spec.name;
    input.reported_accuracy = spec.accuracy;
    if (spec.embedding) {
      auto fs = load_embedding(*spec.embedding, &record);
      fs.name = spec.name;
      input.source = std::move(fs);
    } else {
      input.source = *spec.precomputed_si;
    }
    run.inputs.push_back(std::move(record));
    run.candidates.push_back(std::move(input));
  }
  return run;
}

}  // namespace sepidx
