#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace pass {

// Every failure the pipeline can surface, one code per contract-level error.
enum class ErrorCode {
  unsupported_format,
  malformed_archive,
  missing_document_part,
  malformed_xml,
  empty_document,
  auth_error,
  transport_error,
  backend_refused,
  unparseable_output,
  missing_variant,
  missing_variable,
  unknown_variable,
  empty_title_list,
  all_content_empty,
  invariant_violation,
  precondition_violation,
  tts_unavailable,
  tts_failed,
  missing_clip,
  duplicate_clip,
  manifest_mismatch,
  empty_score_list,
  empty_corpus,
  all_documents_failed,
  io_error,
  config_error,
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::unsupported_format: return "UnsupportedFormat";
    case ErrorCode::malformed_archive: return "MalformedArchive";
    case ErrorCode::missing_document_part: return "MissingDocumentPart";
    case ErrorCode::malformed_xml: return "MalformedXml";
    case ErrorCode::empty_document: return "EmptyDocument";
    case ErrorCode::auth_error: return "AuthError";
    case ErrorCode::transport_error: return "TransportError";
    case ErrorCode::backend_refused: return "BackendRefused";
    case ErrorCode::unparseable_output: return "UnparseableOutput";
    case ErrorCode::missing_variant: return "MissingVariant";
    case ErrorCode::missing_variable: return "MissingVariable";
    case ErrorCode::unknown_variable: return "UnknownVariable";
    case ErrorCode::empty_title_list: return "EmptyTitleList";
    case ErrorCode::all_content_empty: return "AllContentEmpty";
    case ErrorCode::invariant_violation: return "InvariantViolation";
    case ErrorCode::precondition_violation: return "PreconditionViolation";
    case ErrorCode::tts_unavailable: return "TtsUnavailable";
    case ErrorCode::tts_failed: return "TtsFailed";
    case ErrorCode::missing_clip: return "MissingClip";
    case ErrorCode::duplicate_clip: return "DuplicateClip";
    case ErrorCode::manifest_mismatch: return "ManifestMismatch";
    case ErrorCode::empty_score_list: return "EmptyScoreList";
    case ErrorCode::empty_corpus: return "EmptyCorpus";
    case ErrorCode::all_documents_failed: return "AllDocumentsFailed";
    case ErrorCode::io_error: return "IoError";
    case ErrorCode::config_error: return "ConfigError";
  }
  return "UnknownError";
}

// Single exception type for the whole library. `stage` is attached by the
// pipeline driver so callers see where a propagated error originated;
// `detail` carries payloads such as the last raw model output.
class PassError : public std::runtime_error {
 public:
  PassError(ErrorCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  PassError(ErrorCode code, std::string message, std::string detail)
      : std::runtime_error(std::move(message)),
        code_(code),
        detail_(std::move(detail)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& stage() const noexcept { return stage_; }
  const std::string& detail() const noexcept { return detail_; }
  int status() const noexcept { return status_; }

  void set_stage(std::string stage) {
    if (stage_.empty()) stage_ = std::move(stage);
  }
  void set_status(int status) { status_ = status; }

  std::string describe() const {
    std::string out;
    if (!stage_.empty()) {
      out += "[";
      out += stage_;
      out += "] ";
    }
    out += error_code_name(code_);
    out += ": ";
    out += what();
    return out;
  }

 private:
  ErrorCode code_;
  std::string stage_;
  std::string detail_;
  int status_ = 0;  // HTTP status for backend_refused, 0 otherwise
};

[[noreturn]] inline void raise(ErrorCode code, std::string message) {
  throw PassError(code, std::move(message));
}

// Runs `fn` and stamps any escaping PassError with `stage`.
template <typename Fn>
auto at_stage(const char* stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (PassError& err) {
    err.set_stage(stage);
    throw;
  }
}

}  // namespace pass
