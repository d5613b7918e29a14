#ifndef FIELDINFER_CORE_RESULT_IO_HPP_
#define FIELDINFER_CORE_RESULT_IO_HPP_

#include <string>

#include "core/bootstrap.hpp"
#include "core/simulate.hpp"

namespace fieldinfer {

// Stable-key JSON rendering of a bootstrap result ("lwmb-result/1").
std::string result_to_json(const BootstrapResult& result);

enum class StudyKind { kCoverage, kSizePower };

struct StudySpec {
  StudyKind kind = StudyKind::kCoverage;
  StudyConfig config;
};

// JSON object → study description; unknown keys are rejected.
StudySpec parse_study_spec(const std::string& text);

// Runs the study and renders its CSV table.
std::string run_study(const StudySpec& spec);

}  // namespace fieldinfer

#endif  // FIELDINFER_CORE_RESULT_IO_HPP_
