#pragma once

#include <string>
#include <vector>

namespace cashflow {

// Append-only JSON-lines helpers. A record is appended with its trailing
// newline in a single write() call, so a crash mid-record leaves at most one
// unterminated tail line, which readers drop.

// Reads complete lines (terminated by '\n'). An unterminated tail is
// ignored. Throws IO_ERROR when the file is absent unless allow_missing.
std::vector<std::string> read_json_lines(const std::string& path, bool allow_missing = false);

// Appends `line` + '\n' atomically (single write on an O_APPEND descriptor).
void append_json_line(const std::string& path, const std::string& line);

// Whole-file helpers.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace cashflow
