#pragma once

#include <functional>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "pass/document.hpp"
#include "pass/text_util.hpp"

namespace pass {

// Maps a markdown image link target to the referenced bytes, or nothing when
// the target cannot be resolved.
using AssetResolver =
    std::function<std::optional<Bytes>(const std::string& target)>;

inline AssetResolver null_asset_resolver() {
  return [](const std::string&) { return std::nullopt; };
}

namespace detail {

struct PendingImage {
  std::string alt;
  std::string target;
};

// Pulls `![alt](target)` links out of a line, returning the line with the
// link syntax removed.
inline std::string strip_image_links(const std::string& line,
                                     std::vector<PendingImage>& found) {
  static const std::regex image_re(R"(!\[([^\]]*)\]\(([^)\s]+)[^)]*\))");
  std::string rest = line;
  std::string out;
  std::smatch m;
  while (std::regex_search(rest, m, image_re)) {
    out += m.prefix().str();
    found.push_back({m[1].str(), m[2].str()});
    rest = m.suffix().str();
  }
  out += rest;
  return out;
}

}  // namespace detail

// CommonMark-ish subset: ATX headings, dash/star/plus and numbered list
// items, blank-line separated paragraphs, inline image links. That is all the
// desk-scale corpus needs.
inline SourceDocument parse_markdown(const std::string& text,
                                     const AssetResolver& resolver) {
  SourceDocument doc;
  doc.format = DocumentFormat::markdown;
  doc.id = derive_document_id(text);

  static const std::regex heading_re(R"(^(#{1,6})\s+(.*)$)");
  static const std::regex list_re(R"(^\s*(?:[-*+]|\d+[.)])\s+(.*)$)");

  std::vector<std::string> paragraph;
  auto flush_paragraph = [&] {
    if (paragraph.empty()) return;
    std::string joined = trim(join(paragraph, " "));
    paragraph.clear();
    if (!joined.empty()) {
      doc.blocks.push_back({BlockKind::paragraph, 0, joined});
    }
  };

  auto add_images = [&](const std::vector<detail::PendingImage>& images) {
    for (const auto& pending : images) {
      auto bytes = resolver(pending.target);
      if (!bytes || bytes->empty()) {
        doc.warnings.push_back("image target not resolvable, excluded: " +
                               pending.target);
        continue;
      }
      ImageAsset asset;
      std::string alt = trim(pending.alt);
      if (!alt.empty()) asset.caption = alt;
      asset.media_type = media_type_for(pending.target);
      asset.bytes = std::make_shared<const Bytes>(std::move(*bytes));
      asset.byte_length = asset.bytes->size();
      asset.origin_index = doc.blocks.size();
      doc.images.push_back(std::move(asset));
    }
  };

  for (const std::string& raw_line : split_lines(text)) {
    std::vector<detail::PendingImage> images;
    std::string line = detail::strip_image_links(raw_line, images);

    if (trim(line).empty()) {
      flush_paragraph();
      add_images(images);
      continue;
    }

    std::smatch m;
    if (std::regex_match(line, m, heading_re)) {
      flush_paragraph();
      add_images(images);
      std::string title = trim(m[2].str());
      if (!title.empty()) {
        doc.blocks.push_back(
            {BlockKind::heading, static_cast<int>(m[1].str().size()), title});
      }
      continue;
    }
    if (std::regex_match(line, m, list_re)) {
      flush_paragraph();
      add_images(images);
      std::string item = trim(m[1].str());
      if (!item.empty()) {
        doc.blocks.push_back({BlockKind::list_item, 0, item});
      }
      continue;
    }

    // Inline images belong to the paragraph being accumulated, which will
    // land at the current block index once flushed.
    add_images(images);
    paragraph.push_back(trim(line));
  }
  flush_paragraph();

  assign_asset_ids(doc);
  return doc;
}

// Plain text: blank-line separated paragraphs, no markup, no images.
inline SourceDocument parse_plain_text(const std::string& text) {
  SourceDocument doc;
  doc.format = DocumentFormat::plain_text;
  doc.id = derive_document_id(text);

  std::vector<std::string> paragraph;
  auto flush = [&] {
    if (paragraph.empty()) return;
    std::string joined = trim(join(paragraph, " "));
    paragraph.clear();
    if (!joined.empty()) {
      doc.blocks.push_back({BlockKind::paragraph, 0, joined});
    }
  };
  for (const std::string& line : split_lines(text)) {
    if (trim(line).empty()) {
      flush();
    } else {
      paragraph.push_back(trim(line));
    }
  }
  flush();
  return doc;
}

}  // namespace pass
