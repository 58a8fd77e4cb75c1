#pragma once

#include <iosfwd>
#include <vector>

#include "json.hpp"
#include "lmm/core_model.hpp"
#include "lmm/estimator.hpp"
#include "lmm/harness.hpp"
#include "lmm/pml_oracle.hpp"

namespace lmm {

using Json = nlohmann::ordered_json;

/// Newline-separated nonnegative counts; blank lines are skipped.
Histogram read_histogram(std::istream& in);
/// Comma or space separated phi_1, ..., phi_n.
Profile parse_profile(const std::string& text);

Json to_json(const AtomicMeasure& mu);
/// Sparse {"multiplicity": count} map.
Json to_json(const Profile& phi);
Json to_json(const EstimateResult& r, int k);
/// Summary only; wall times are left out so reruns compare byte for byte.
Json to_json(const BenchmarkResult& r);
Json to_json(const CompetitiveReport& r);
Json to_json(const std::vector<ApproxSweepRow>& rows);
Json to_json(const PmlResult& r, const Profile& phi, int k_max);

/// trial,estimator,error,objective with 17 significant digits.
void write_records_csv(std::ostream& out, const std::vector<TrialRecord>& records);
void write_sweep_csv(std::ostream& out, const std::vector<ApproxSweepRow>& rows);

}  // namespace lmm
