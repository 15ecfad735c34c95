// Loads the shipped example files for tests.
#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include "certkit/syntax.hpp"

namespace fixture {

inline std::filesystem::path dir() { return std::filesystem::path(CERTKIT_FIXTURE_DIR); }
inline std::filesystem::path path(const std::string& rel) { return dir() / rel; }

inline std::vector<certkit::Rule> rules(const std::string& rel) {
  return certkit::untag(certkit::load_tbox(path(rel)));
}
inline certkit::UCQ query(const std::string& rel) {
  return certkit::parse_query(certkit::read_file(path(rel)));
}
inline certkit::ABox abox(const std::string& rel) {
  return certkit::parse_abox(certkit::read_file(path(rel)));
}
inline certkit::Rewriting rewriting(const std::string& rel) {
  return certkit::parse_rewriting(certkit::read_file(path(rel)));
}

}  // namespace fixture

// Readable gtest failure output for the value types.
namespace certkit {
inline void PrintTo(const ABox& a, std::ostream* os) { *os << inline_abox(a); }
inline void PrintTo(const Rule& r, std::ostream* os) { *os << serialize(r); }
}  // namespace certkit
