#ifndef DEPHASE_TRACE_IO_HPP
#define DEPHASE_TRACE_IO_HPP

#include "dephase/analysis.hpp"
#include "dephase/config.hpp"

#include <filesystem>
#include <string>

namespace dephase {

inline constexpr const char* version_string = "0.1.0";

// CSV with header `t,gamma,coherence`, one row per grid point, 17 significant
// digits.
void write_trace_csv(const CoherenceTrace& trace, const std::filesystem::path& path);

// JSON sidecar describing bath, sequence, quadrature settings and code
// version; the timestamp is omitted when with_timestamp is false.
void write_trace_metadata(const CoherenceTrace& trace, const BathSpec& bath,
                          const QuadratureSettings& settings,
                          const std::filesystem::path& path, bool with_timestamp);

void write_sequence_csv(const PulseSequence& seq, const std::filesystem::path& path);

std::string format_double(double v); // 17 significant digits

} // namespace dephase

#endif
