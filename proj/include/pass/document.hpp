#pragma once

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pass/errors.hpp"
#include "pass/text_util.hpp"

namespace pass {

enum class DocumentFormat { plain_text, markdown, docx };

inline const char* to_string(DocumentFormat f) {
  switch (f) {
    case DocumentFormat::plain_text: return "plain_text";
    case DocumentFormat::markdown: return "markdown";
    case DocumentFormat::docx: return "docx";
  }
  return "plain_text";
}

enum class BlockKind { heading, paragraph, list_item, caption, other };

inline const char* to_string(BlockKind k) {
  switch (k) {
    case BlockKind::heading: return "heading";
    case BlockKind::paragraph: return "paragraph";
    case BlockKind::list_item: return "list_item";
    case BlockKind::caption: return "caption";
    case BlockKind::other: return "other";
  }
  return "other";
}

struct TextBlock {
  BlockKind kind = BlockKind::paragraph;
  int level = 0;  // heading depth, 0 for non-headings
  std::string text;

  bool operator==(const TextBlock&) const = default;
};

using Bytes = std::vector<std::uint8_t>;
using SharedBytes = std::shared_ptr<const Bytes>;

struct ImageAsset {
  std::string id;
  std::optional<std::string> caption;
  std::string media_type;
  SharedBytes bytes;              // stored content
  std::size_t byte_length = 0;
  std::size_t origin_index = 0;   // gap position in the block sequence
};

struct SourceDocument {
  std::string id;
  DocumentFormat format = DocumentFormat::plain_text;
  std::vector<TextBlock> blocks;
  std::vector<ImageAsset> images;
  std::vector<std::string> warnings;
};

// ---------------------------------------------------------------------------
// Format detection

inline DocumentFormat detect_format(std::string_view path_or_name,
                                    const Bytes& leading_bytes) {
  static const std::uint8_t zip_magic[4] = {0x50, 0x4b, 0x03, 0x04};
  bool has_zip_magic =
      leading_bytes.size() >= 4 &&
      std::memcmp(leading_bytes.data(), zip_magic, 4) == 0;
  if (ends_with_ci(path_or_name, ".docx") && has_zip_magic) {
    return DocumentFormat::docx;
  }
  if (ends_with_ci(path_or_name, ".md") ||
      ends_with_ci(path_or_name, ".markdown")) {
    return DocumentFormat::markdown;
  }
  if (ends_with_ci(path_or_name, ".txt")) {
    return DocumentFormat::plain_text;
  }
  raise(ErrorCode::unsupported_format,
        "unsupported document format: " + std::string(path_or_name));
}

inline std::string media_type_for(std::string_view name) {
  if (ends_with_ci(name, ".png")) return "image/png";
  if (ends_with_ci(name, ".jpg") || ends_with_ci(name, ".jpeg"))
    return "image/jpeg";
  if (ends_with_ci(name, ".gif")) return "image/gif";
  if (ends_with_ci(name, ".bmp")) return "image/bmp";
  if (ends_with_ci(name, ".svg")) return "image/svg+xml";
  if (ends_with_ci(name, ".webp")) return "image/webp";
  if (ends_with_ci(name, ".emf")) return "image/emf";
  if (ends_with_ci(name, ".wmf")) return "image/wmf";
  return "application/octet-stream";
}

inline std::string file_extension_for(std::string_view media_type) {
  if (media_type == "image/png") return ".png";
  if (media_type == "image/jpeg") return ".jpg";
  if (media_type == "image/gif") return ".gif";
  if (media_type == "image/bmp") return ".bmp";
  if (media_type == "image/svg+xml") return ".svg";
  if (media_type == "image/webp") return ".webp";
  return ".bin";
}

// Content-hash asset ids, 16 hex chars; duplicated content gets an ordinal
// suffix so ids stay unique within a document. Deterministic by construction.
inline void assign_asset_ids(SourceDocument& doc) {
  std::map<std::string, int> seen;
  for (auto& asset : doc.images) {
    std::string base =
        hex16(fnv1a64_bytes(asset.bytes ? asset.bytes->data() : nullptr,
                            asset.bytes ? asset.bytes->size() : 0));
    int n = ++seen[base];
    asset.id = n == 1 ? base : base + "-" + std::to_string(n);
  }
}

inline std::string derive_document_id(const Bytes& raw) {
  return hex16(fnv1a64_bytes(raw.data(), raw.size()));
}

inline std::string derive_document_id(std::string_view raw) {
  return hex16(fnv1a64(raw));
}

// ---------------------------------------------------------------------------
// Text extraction

struct ExtractedText {
  std::string full_text;
  std::vector<ImageAsset> images;
};

inline std::string block_as_text(const TextBlock& block) {
  switch (block.kind) {
    case BlockKind::heading:
      return std::string(static_cast<std::size_t>(std::max(block.level, 1)),
                         '#') +
             " " + block.text;
    case BlockKind::list_item:
      return "- " + block.text;
    default:
      return block.text;
  }
}

inline ExtractedText extract_text_and_images(const SourceDocument& doc) {
  std::vector<std::string> parts;
  for (const auto& block : doc.blocks) {
    if (trim(block.text).empty()) continue;
    parts.push_back(block_as_text(block));
  }
  if (parts.empty()) {
    raise(ErrorCode::empty_document, "document contains no text blocks");
  }
  ExtractedText out;
  out.full_text = join(parts, "\n\n");
  out.images = doc.images;
  std::stable_sort(out.images.begin(), out.images.end(),
                   [](const ImageAsset& a, const ImageAsset& b) {
                     return a.origin_index < b.origin_index;
                   });
  return out;
}

// ---------------------------------------------------------------------------
// JSON view (asset bytes are persisted separately; see export_cli)

inline nlohmann::json document_to_json(const SourceDocument& doc) {
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& b : doc.blocks) {
    blocks.push_back({{"kind", to_string(b.kind)},
                      {"level", b.level},
                      {"text", b.text}});
  }
  nlohmann::json images = nlohmann::json::array();
  for (const auto& img : doc.images) {
    nlohmann::json j = {{"id", img.id},
                        {"media_type", img.media_type},
                        {"byte_length", img.byte_length},
                        {"origin_index", img.origin_index},
                        {"path", "assets/" + img.id +
                                     file_extension_for(img.media_type)}};
    if (img.caption) j["caption"] = *img.caption;
    images.push_back(j);
  }
  return nlohmann::json{{"schema_version", 1},
                        {"id", doc.id},
                        {"format", to_string(doc.format)},
                        {"blocks", blocks},
                        {"images", images},
                        {"warnings", doc.warnings}};
}

}  // namespace pass
