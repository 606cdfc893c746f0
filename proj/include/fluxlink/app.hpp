#pragma once

#include "fluxlink/config.hpp"
#include "fluxlink/report.hpp"

#include <string>

namespace fluxlink::cli {

enum class Command { device_spectrum, couplings, sweep, observe, readout_fidelity, protocol_sim, dump_geometry };

std::string to_string(Command c);
Command parse_command(const std::string& s);

struct RunOptions {
    bool parallel = false;
};

// One job. The bundle holds every output file; nothing is written here.
ReportBundle run(Command cmd, const RunConfig& cfg, const RunOptions& opt = {});

} // namespace fluxlink::cli
