#include "opuc/errors.hpp"

namespace opuc {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::domain: return "domain";
    case ErrorCode::precision: return "precision";
    case ErrorCode::degeneracy: return "degeneracy";
    case ErrorCode::resolution: return "resolution";
    case ErrorCode::range: return "range";
    case ErrorCode::spec_malformed: return "spec_malformed";
    case ErrorCode::spec_unknown_generator: return "spec_unknown_generator";
    case ErrorCode::spec_out_of_range: return "spec_out_of_range";
  }
  return "unknown";
}

}  // namespace opuc
