#ifndef ASNE_SERIALIZE_HPP
#define ASNE_SERIALIZE_HPP

#include <string>

#include "json.hpp"

#include "asne/colony.hpp"
#include "asne/genome.hpp"

namespace asne {

// Versioned JSON documents; schemas are described in docs/colony-format.md.
// nlohmann::json keeps keys sorted, so dumps of equal values are
// byte-identical, which the determinism guarantees rely on.

nlohmann::json colony_to_json(const Colony& colony);
Colony colony_from_json(const nlohmann::json& doc);

nlohmann::json genome_to_json(const RnnGenome& genome);
RnnGenome genome_from_json(const nlohmann::json& doc);

// Atomic file write (temp file + rename) used for checkpoints and summaries.
void write_file_atomic(const std::string& path, const std::string& contents);
nlohmann::json read_json_file(const std::string& path);

} // namespace asne

#endif
