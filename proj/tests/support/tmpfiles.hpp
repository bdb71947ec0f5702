#pragma once

#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

namespace testsupport {

inline std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("ticket_test_" + name)).string();
}

inline std::string write_file(const std::string& name, const std::string& content) {
    const auto path = temp_path(name);
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace testsupport
