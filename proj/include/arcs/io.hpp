#ifndef ARCS_IO_HPP_
#define ARCS_IO_HPP_

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace arcs
{
/// Pretty JSON with every floating value printed as %.17g; non-finite values become
/// the strings "inf", "-inf" and "nan".
std::string dump_json(const nlohmann::json & j);

/// Header row, then one row per record, values as %.17g.
std::string make_csv(const std::vector<std::string> & header, const std::vector<std::vector<double>> & rows);

/// Numeric CSV with a header row; blank lines are skipped.
std::vector<std::vector<double>> read_csv(const std::filesystem::path & path, std::vector<std::string> * header = nullptr);

/// Writes to a temporary sibling and renames it over the target.
void write_atomic(const std::filesystem::path & path, const std::string & content);

inline constexpr const char * kOutDirEnv = "ARCS_OUT_DIR";

/// The environment override when set, otherwise the given directory; created if missing.
std::filesystem::path output_dir(const std::string & requested);

}  // namespace arcs

#endif  // ARCS_IO_HPP_
