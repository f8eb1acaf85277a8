#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "tpra/abstraction.hpp"
#include "tpra/grid.hpp"
#include "tpra/twophase.hpp"

namespace tpra {

/// Binary container: "TPRA", u32 format version, u32 kind, u64 scenario key,
/// then a kind-specific body. All fields little-endian.
inline constexpr std::uint32_t kFormatVersion = 1;
inline constexpr std::uint32_t kValueFormatVersion = 1;

enum class ArtifactKind : std::uint32_t { Abstraction = 1, Controller = 2 };

struct ArtifactHeader {
  ArtifactKind kind = ArtifactKind::Abstraction;
  std::uint64_t key = 0;
};

void write_grid(std::ostream& os, const Grid& grid);
Grid read_grid(std::istream& is);

void save_abstraction(std::ostream& os, const AbstractSystem& abs, std::uint64_t key);
AbstractSystem load_abstraction(std::istream& is, std::uint64_t* key = nullptr);

struct LoadedController {
  PhasedController controller;
  Grid grid;
  std::uint64_t key = 0;
};

void save_controller(std::ostream& os, const PhasedController& ctrl, const Grid& grid,
                     std::uint64_t key);
LoadedController load_controller(std::istream& is);

ArtifactHeader read_header(std::istream& is);

void save_abstraction_file(const std::filesystem::path& path, const AbstractSystem& abs,
                           std::uint64_t key);
AbstractSystem load_abstraction_file(const std::filesystem::path& path, std::uint64_t* key = nullptr);
void save_controller_file(const std::filesystem::path& path, const PhasedController& ctrl,
                          const Grid& grid, std::uint64_t key);
LoadedController load_controller_file(const std::filesystem::path& path);

/// Value function as a flat little-endian f64 array (+inf kept as IEEE inf)
/// and a JSON sidecar describing the grid.
void write_value_array(std::ostream& os, const ValueFunction& v);
ValueFunction read_value_array(std::istream& is, std::size_t count);
std::string value_sidecar_json(const Grid& grid, const ValueFunction& v, const std::string& name);
void save_value_files(const std::filesystem::path& stem, const Grid& grid, const ValueFunction& v,
                      const std::string& name);

struct LoadedValue {
  ValueFunction value;
  Grid grid;
};
/// Reads <stem>.f64 with <stem>.json.
LoadedValue load_value_files(const std::filesystem::path& stem);

/// Hash of the serialized bytes, used to compare artifacts.
std::uint64_t abstraction_digest(const AbstractSystem& abs, std::uint64_t key);
std::uint64_t controller_digest(const PhasedController& ctrl, const Grid& grid, std::uint64_t key);

}  // namespace tpra
