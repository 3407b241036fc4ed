#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

namespace darktripod {

/// Shortest decimal text that reads back to the same double.
std::string format_number(double value);
std::string format_optional(const std::optional<double>& value);

/// Output file written to a sibling temporary and renamed into place on
/// commit(). Destroying an uncommitted file removes the temporary.
class AtomicFile {
public:
  explicit AtomicFile(std::filesystem::path target);
  AtomicFile(const AtomicFile&) = delete;
  AtomicFile& operator=(const AtomicFile&) = delete;
  ~AtomicFile();

  std::ostream& stream() { return out_; }
  void commit();

private:
  std::filesystem::path target_;
  std::filesystem::path temp_;
  std::ofstream out_;
  bool committed_ = false;
};

/// Writes `content` atomically to `target`.
void write_file_atomic(const std::filesystem::path& target, const std::string& content);

} // namespace darktripod
