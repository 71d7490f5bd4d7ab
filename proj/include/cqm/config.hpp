#ifndef CQM_CONFIG_HPP_
#define CQM_CONFIG_HPP_

#include <string>
#include <string_view>

#include "cqm/pipeline.hpp"

// Pipeline configuration files: line-oriented "key = value" text with '#'
// comments. Unknown keys are errors so that typos cannot silently fall back
// to defaults. See README for the key list.
namespace cqm::config {

pipeline::PipelineConfig parse_config_text(std::string_view text);
pipeline::PipelineConfig load_config_file(const std::string& path);

}  // namespace cqm::config

#endif  // CQM_CONFIG_HPP_
