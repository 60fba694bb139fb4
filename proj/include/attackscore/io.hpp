#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace attackscore::io {

// Throws Error(Io).
std::string read_file(const std::filesystem::path& path);

// Write to a sibling temporary file, flush it to disk, then rename over the
// target. Readers never observe a partially written file.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

// Exclusive advisory lock on "<path>.lock", released on destruction.
// Throws Error(Locked) with "assessment locked" when another holder exists.
class FileLock {
public:
    explicit FileLock(const std::filesystem::path& path);
    ~FileLock();
    FileLock(const FileLock&) = delete;
    FileLock& operator=(const FileLock&) = delete;

private:
    int fd_ = -1;
};

}  // namespace attackscore::io
