#pragma once
#include <string>
#include <vector>

#include "gcs/construct.hpp"
#include "gcs/hadamard.hpp"
#include "gcs/lengthset.hpp"
#include "gcs/signed_perm.hpp"

namespace gcs::io {

// ---- sequence text: "#gcs n=<len> L=<count>", comma-separated unit tokens ----
std::string format_sequences(const std::vector<QSeq>& seqs,
                             const std::vector<std::string>& header_comments = {});
// single record; trailing content after the record is rejected
std::vector<QSeq> parse_sequences(const std::string& text);
std::vector<QSeq> read_sequences(const std::string& path);
// concatenated records (one quad per record for the base corpus)
std::vector<std::vector<QSeq>> parse_sequence_records(const std::string& text);
std::vector<std::vector<QSeq>> read_corpus_records(const std::string& path);

// ---- SPSeq text: "#spseq v=<order> n=<len>", entries 0 or perm/sign lists ----
std::string format_spseq(const SPSeq& s, const std::vector<std::string>& header_comments = {});
SPSeq parse_spseq(const std::string& text);
SPSeq read_spseq(const std::string& path);

// ---- matrix text: "order <n> [block <v>]" then +/- rows; HMAT binary cache ----
std::string format_matrix(const PMMatrix& h, const std::vector<std::string>& header_comments = {});
PMMatrix parse_matrix(const std::string& text);
PMMatrix read_matrix(const std::string& path);
std::string format_matrix_binary(const PMMatrix& h);
PMMatrix parse_matrix_binary(const std::string& bytes);

// ---- LengthSet cache: magic GLS1, kind tag, bound, little-endian words ----
std::string format_lengthset_cache(const LengthSet& s, const std::string& kind);
LengthSet parse_lengthset_cache(const std::string& bytes, std::string* kind = nullptr);

// ---- construction plan JSON ----
std::string plan_to_json(const Plan& plan);
Plan plan_from_json(const std::string& text);

// ---- files ----
std::string read_file(const std::string& path);
// temp file in the target directory, then rename over the destination
void atomic_write(const std::string& path, const std::string& content);

}  // namespace gcs::io
