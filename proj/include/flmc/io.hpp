#pragma once

#include <string>

#include "flmc/harness.hpp"
#include "flmc/model.hpp"
#include "flmc/reductions.hpp"

namespace flmc {

// Malformed input: unknown or missing fields, wrong types, negative numbers,
// values outside int64, ragged matrices.
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Serialization is canonical: keys sorted, two-space indent, trailing
// newline.  Equal objects produce identical bytes.
std::string instance_to_json(const Instance& inst);
std::string solution_to_json(const Solution& sol);
std::string certificate_to_json(const ReductionCertificate& cert);
std::string report_to_json(const ValidationReport& report);

// Parsers throw FormatError on malformed text.  Instances additionally pass
// validate_instance, so a parsed instance is always structurally sound.
Instance instance_from_json(const std::string& text);
Solution solution_from_json(const std::string& text);
ReductionCertificate certificate_from_json(const std::string& text);
BenchConfig bench_config_from_json(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

Instance load_instance(const std::string& path);
Solution load_solution(const std::string& path);
ReductionCertificate load_certificate(const std::string& path);

}  // namespace flmc
