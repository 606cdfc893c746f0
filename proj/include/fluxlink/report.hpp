#pragma once

#include "fluxlink/config.hpp"
#include "fluxlink/network.hpp"
#include "fluxlink/solver.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace fluxlink::cli {

struct ReportBundle {
    std::vector<std::pair<std::string, std::string>> files;  // name relative to the output dir, content
    std::vector<std::string> notices;
    nlohmann::json metadata = nlohmann::json::object();
};

// RFC 4180 quoting when the field needs it.
std::string csv_field(const std::string& s);

// Columns control,E0,gap,<observables>; energy columns scaled by the unit factor.
std::string sweep_csv(const std::vector<solver::SweepRecord>& rows, const std::vector<std::string>& observables,
                      const Units& units);

nlohmann::json couplings_json(const network::CouplingSet& c, const Units& units);

// Writes to a temporary sibling, then renames over the target.
void atomic_write(const std::filesystem::path& path, const std::string& content);

// Writes every file plus <prefix>_meta.json.
void write_bundle(const ReportBundle& b, const std::filesystem::path& dir, const std::string& prefix);

} // namespace fluxlink::cli
