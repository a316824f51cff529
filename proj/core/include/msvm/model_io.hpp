#pragma once

#include <filesystem>
#include <iosfwd>

#include "msvm/model.hpp"

namespace msvm {

/// Current version of the text model container.
inline constexpr int kModelFormatVersion = 1;

/// Writes a self-describing text container: a "msvm-model <version>" line,
/// key/value lines for kind, kernel and scalars, then each matrix as a
/// "matrix <name> <rows> <cols>" line followed by one line of hexadecimal
/// floats per row. Hex floats make save -> load bit-exact.
void save_model(const TrainedModel& model, std::ostream& out);
void save_model(const TrainedModel& model, const std::filesystem::path& path);

/// Throws DataError on malformed input or an unsupported version.
TrainedModel load_model(std::istream& in);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace msvm
