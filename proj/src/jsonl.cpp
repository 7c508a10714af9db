#include "jsonl.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace cashflow {

std::vector<std::string> read_json_lines(const std::string& path, bool allow_missing) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    if (allow_missing) return {};
    raise(Errc::io_error, "cannot open " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string contents = buffer.str();

  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < contents.size()) {
    const auto nl = contents.find('\n', start);
    if (nl == std::string::npos) break;  // interrupted tail record, drop it
    if (nl > start) lines.push_back(contents.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

void append_json_line(const std::string& path, const std::string& line) {
  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
  if (fd < 0) raise(Errc::io_error, "cannot open " + path + ": " + std::strerror(errno));
  std::string record = line;
  record.push_back('\n');
  const ssize_t written = ::write(fd, record.data(), record.size());
  const int saved_errno = errno;
  ::close(fd);
  if (written != static_cast<ssize_t>(record.size()))
    raise(Errc::io_error, "short write to " + path + ": " + std::strerror(saved_errno));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::io_error, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(Errc::io_error, "cannot open " + path + " for writing");
  out << contents;
  out.flush();
  if (!out) raise(Errc::io_error, "write failed for " + path);
}

}  // namespace cashflow
