#pragma once

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "pass/document.hpp"
#include "pass/text_util.hpp"
#include "pass/zip_archive.hpp"

namespace pass {
namespace docx {

using boost::property_tree::ptree;

inline ptree parse_xml_part(const ZipArchive& zip, const std::string& part) {
  auto bytes = zip.read(part);
  std::istringstream in(
      std::string(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
  ptree tree;
  try {
    boost::property_tree::read_xml(in, tree);
  } catch (const boost::property_tree::xml_parser_error& err) {
    throw PassError(ErrorCode::malformed_xml,
                    "malformed xml in " + part + ": " + err.message());
  }
  return tree;
}

inline std::string attribute(const ptree& node, const std::string& name) {
  auto attrs = node.get_child_optional("<xmlattr>");
  if (!attrs) return {};
  auto value = attrs->get_optional<std::string>(
      ptree::path_type(name, '\x01'));  // avoid '.' path splitting
  return value ? *value : std::string{};
}

// Concatenates all descendant w:t runs in document order. Tabs and breaks
// become single spaces.
inline void collect_text(const ptree& node, std::string& out) {
  for (const auto& [name, child] : node) {
    if (name == "<xmlattr>") continue;
    if (name == "w:t") {
      out += child.get_value<std::string>();
    } else if (name == "w:tab" || name == "w:br" || name == "w:cr") {
      out += ' ';
    } else {
      collect_text(child, out);
    }
  }
}

struct DrawingRef {
  std::string rel_id;
  std::string alt_text;
};

inline void collect_attr_deep(const ptree& node, const std::string& element,
                              const std::string& attr,
                              std::vector<std::string>& out) {
  for (const auto& [name, child] : node) {
    if (name == "<xmlattr>") continue;
    if (name == element) {
      std::string v = attribute(child, attr);
      if (!v.empty()) out.push_back(v);
    }
    collect_attr_deep(child, element, attr, out);
  }
}

// Finds images referenced from a paragraph: modern w:drawing blips plus
// legacy w:pict imagedata.
inline void collect_drawings(const ptree& node, std::vector<DrawingRef>& out) {
  for (const auto& [name, child] : node) {
    if (name == "<xmlattr>") continue;
    if (name == "w:drawing" || name == "w:pict" || name == "w:object") {
      std::vector<std::string> alts;
      collect_attr_deep(child, "wp:docPr", "descr", alts);
      std::vector<std::string> ids;
      collect_attr_deep(child, "a:blip", "r:embed", ids);
      collect_attr_deep(child, "a:blip", "r:link", ids);
      collect_attr_deep(child, "v:imagedata", "r:id", ids);
      for (const auto& id : ids) {
        out.push_back({id, alts.empty() ? std::string{} : alts.front()});
      }
    } else {
      collect_drawings(child, out);
    }
  }
}

inline std::string paragraph_style(const ptree& para) {
  auto ppr = para.get_child_optional("w:pPr");
  if (!ppr) return {};
  auto style = ppr->get_child_optional("w:pStyle");
  if (!style) return {};
  return attribute(*style, "w:val");
}

inline bool has_numbering(const ptree& para) {
  auto ppr = para.get_child_optional("w:pPr");
  return ppr && ppr->get_child_optional("w:numPr").has_value();
}

inline int heading_level_from_style(const std::string& style) {
  int level = 0;
  std::size_t i = style.size();
  while (i > 0 && std::isdigit(static_cast<unsigned char>(style[i - 1]))) --i;
  if (i < style.size()) level = std::stoi(style.substr(i));
  return level >= 1 ? level : 1;
}

// Relationship id -> part name inside the archive.
inline std::map<std::string, std::string> parse_relationships(
    const ZipArchive& zip) {
  std::map<std::string, std::string> rels;
  const std::string part = "word/_rels/document.xml.rels";
  if (!zip.contains(part)) return rels;
  ptree tree = parse_xml_part(zip, part);
  auto root = tree.get_child_optional("Relationships");
  if (!root) return rels;
  for (const auto& [name, child] : *root) {
    if (name != "Relationship") continue;
    std::string id = attribute(child, "Id");
    std::string target = attribute(child, "Target");
    if (id.empty() || target.empty()) continue;
    if (target.rfind("/", 0) == 0) {
      rels[id] = target.substr(1);
    } else {
      while (target.rfind("../", 0) == 0) target = target.substr(3);
      rels[id] = "word/" + target;
    }
  }
  return rels;
}

struct ParsedParagraph {
  std::string text;
  std::string style;
  bool numbered = false;
  std::vector<DrawingRef> drawings;
};

inline ParsedParagraph read_paragraph(const ptree& para) {
  ParsedParagraph out;
  out.style = paragraph_style(para);
  out.numbered = has_numbering(para);
  collect_text(para, out.text);
  out.text = trim(collapse_whitespace(out.text));
  collect_drawings(para, out.drawings);
  return out;
}

// Flattens paragraphs in document order; tables contribute their cell
// paragraphs as kind=other.
inline void flatten_body(const ptree& node,
                         std::vector<std::pair<ParsedParagraph, bool>>& out,
                         bool inside_table) {
  for (const auto& [name, child] : node) {
    if (name == "<xmlattr>") continue;
    if (name == "w:p") {
      out.emplace_back(read_paragraph(child), inside_table);
    } else if (name == "w:tbl") {
      flatten_body(child, out, true);
    } else if (name == "w:body" || name == "w:tr" || name == "w:tc") {
      flatten_body(child, out, inside_table);
    }
  }
}

// Deep paragraph scan for auxiliary parts (footnotes, headers, footers).
inline void collect_paragraphs_deep(const ptree& node,
                                    std::vector<ParsedParagraph>& out) {
  for (const auto& [name, child] : node) {
    if (name == "<xmlattr>") continue;
    if (name == "w:p") {
      out.push_back(read_paragraph(child));
    } else {
      collect_paragraphs_deep(child, out);
    }
  }
}

}  // namespace docx

inline SourceDocument parse_docx(const Bytes& raw) {
  SourceDocument doc;
  doc.format = DocumentFormat::docx;
  doc.id = derive_document_id(raw);

  ZipArchive zip = ZipArchive::from_bytes(raw);
  if (!zip.contains("word/document.xml")) {
    raise(ErrorCode::missing_document_part,
          "archive has no word/document.xml part");
  }

  docx::ptree tree = docx::parse_xml_part(zip, "word/document.xml");
  auto document = tree.get_child_optional("w:document");
  if (!document) {
    raise(ErrorCode::malformed_xml,
          "malformed xml in word/document.xml: missing w:document root");
  }

  auto rels = docx::parse_relationships(zip);

  std::vector<std::pair<docx::ParsedParagraph, bool>> paragraphs;
  docx::flatten_body(*document, paragraphs, false);

  struct PendingAsset {
    std::size_t image_index;  // into doc.images
  };
  std::vector<PendingAsset> previous_paragraph_images;
  std::set<std::string> referenced_parts;

  auto resolve_drawing = [&](const docx::DrawingRef& ref,
                             std::size_t origin) -> bool {
    auto it = rels.find(ref.rel_id);
    if (it == rels.end() || !zip.contains(it->second)) {
      doc.warnings.push_back("image relationship not resolvable, excluded: " +
                             ref.rel_id);
      return false;
    }
    Bytes bytes = zip.read(it->second);
    if (bytes.empty()) {
      doc.warnings.push_back("empty media part, excluded: " + it->second);
      return false;
    }
    referenced_parts.insert(it->second);
    ImageAsset asset;
    std::string alt = trim(ref.alt_text);
    if (!alt.empty()) asset.caption = alt;
    asset.media_type = media_type_for(it->second);
    asset.bytes = std::make_shared<const Bytes>(std::move(bytes));
    asset.byte_length = asset.bytes->size();
    asset.origin_index = origin;
    doc.images.push_back(std::move(asset));
    return true;
  };

  for (const auto& [para, in_table] : paragraphs) {
    bool is_caption = docx::contains_ci_style(para.style, "caption");
    if (is_caption && !para.text.empty()) {
      // A caption paragraph names the images of the immediately preceding
      // paragraph, overriding any alt text.
      for (const auto& pending : previous_paragraph_images) {
        doc.images[pending.image_index].caption = para.text;
      }
    }
    previous_paragraph_images.clear();

    std::size_t origin = doc.blocks.size();
    for (const auto& drawing : para.drawings) {
      if (resolve_drawing(drawing, origin)) {
        previous_paragraph_images.push_back({doc.images.size() - 1});
      }
    }

    if (para.text.empty()) continue;
    TextBlock block;
    block.text = para.text;
    if (in_table) {
      block.kind = BlockKind::other;
    } else if (docx::contains_ci_style(para.style, "heading")) {
      block.kind = BlockKind::heading;
      block.level = docx::heading_level_from_style(para.style);
    } else if (is_caption) {
      block.kind = BlockKind::caption;
    } else if (para.numbered) {
      block.kind = BlockKind::list_item;
    } else {
      block.kind = BlockKind::paragraph;
    }
    doc.blocks.push_back(std::move(block));
  }

  // Footnotes, endnotes, headers and footers flatten to kind=other blocks
  // appended after the body.
  std::vector<std::string> extra_parts;
  for (const auto& name : zip.names()) {
    if (name == "word/footnotes.xml" || name == "word/endnotes.xml" ||
        (name.rfind("word/header", 0) == 0 && ends_with_ci(name, ".xml")) ||
        (name.rfind("word/footer", 0) == 0 && ends_with_ci(name, ".xml"))) {
      extra_parts.push_back(name);
    }
  }
  std::sort(extra_parts.begin(), extra_parts.end());
  for (const auto& part : extra_parts) {
    docx::ptree extra = docx::parse_xml_part(zip, part);
    std::vector<std::pair<docx::ParsedParagraph, bool>> extra_paragraphs;
    docx::flatten_body(extra, extra_paragraphs, true);
    for (const auto& [para, in_table] : extra_paragraphs) {
      (void)in_table;
      if (para.text.empty()) continue;
      doc.blocks.push_back({BlockKind::other, 0, para.text});
    }
  }

  // Media parts never referenced from the body still count as embedded
  // images; they land at the end without captions.
  for (const auto& name : zip.names()) {
    if (name.rfind("word/media/", 0) != 0 || referenced_parts.count(name)) {
      continue;
    }
    Bytes bytes = zip.read(name);
    if (bytes.empty()) {
      doc.warnings.push_back("empty media part, excluded: " + name);
      continue;
    }
    ImageAsset asset;
    asset.media_type = media_type_for(name);
    asset.bytes = std::make_shared<const Bytes>(std::move(bytes));
    asset.byte_length = asset.bytes->size();
    asset.origin_index = doc.blocks.size();
    doc.images.push_back(std::move(asset));
  }

  assign_asset_ids(doc);
  return doc;
}

}  // namespace pass
