#include "tpra/artifacts.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "tpra/binary_io.hpp"

namespace tpra {

namespace {

constexpr char kMagic[4] = {'T', 'P', 'R', 'A'};

void write_header(BinaryWriter& w, ArtifactKind kind, std::uint64_t key) {
  w.bytes(std::span(reinterpret_cast<const std::uint8_t*>(kMagic), 4));
  w.u32(kFormatVersion);
  w.u32(static_cast<std::uint32_t>(kind));
  w.u64(key);
}

ArtifactHeader read_header(BinaryReader& r) {
  std::uint8_t magic[4];
  r.bytes(magic);
  if (std::memcmp(magic, kMagic, 4) != 0) throw FormatError("not a tpra artifact (bad magic)");
  const std::uint32_t version = r.u32();
  if (version != kFormatVersion) {
    throw FormatError("unsupported artifact format version " + std::to_string(version));
  }
  const std::uint32_t kind = r.u32();
  if (kind != 1 && kind != 2) throw FormatError("unknown artifact kind " + std::to_string(kind));
  ArtifactHeader h;
  h.kind = static_cast<ArtifactKind>(kind);
  h.key = r.u64();
  return h;
}

void expect_kind(const ArtifactHeader& h, ArtifactKind kind) {
  if (h.kind != kind) throw FormatError("artifact has the wrong kind");
}

template <typename T>
std::vector<T> sized(std::uint64_t n, std::uint64_t limit, const char* what) {
  if (n > limit) throw FormatError(std::string("implausible ") + what + " count");
  return std::vector<T>(static_cast<std::size_t>(n));
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  return os;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  return is;
}

constexpr std::uint64_t kLimit = std::uint64_t{1} << 40;

}  // namespace

void write_grid(std::ostream& os, const Grid& grid) {
  BinaryWriter w(os);
  w.u32(static_cast<std::uint32_t>(grid.dim()));
  for (std::size_t i = 0; i < grid.dim(); ++i) {
    w.f64(grid.domain().lo(i));
    w.f64(grid.domain().hi(i));
    w.u32(grid.cells_per_axis()[i]);
    w.u8(grid.is_periodic(i) ? 1 : 0);
  }
}

Grid read_grid(std::istream& is) {
  BinaryReader r(is);
  const std::uint32_t dim = r.u32();
  if (dim == 0 || dim > 16) throw FormatError("bad grid dimension");
  std::vector<double> lo(dim), hi(dim);
  std::vector<std::uint32_t> cells(dim);
  std::vector<std::size_t> periodic;
  for (std::uint32_t i = 0; i < dim; ++i) {
    lo[i] = r.f64();
    hi[i] = r.f64();
    cells[i] = r.u32();
    if (r.u8()) periodic.push_back(i);
  }
  return Grid(HyperRect(std::move(lo), std::move(hi)), std::move(cells), std::move(periodic));
}

ArtifactHeader read_header(std::istream& is) {
  BinaryReader r(is);
  return read_header(r);
}

void save_abstraction(std::ostream& os, const AbstractSystem& abs, std::uint64_t key) {
  BinaryWriter w(os);
  write_header(w, ArtifactKind::Abstraction, key);
  write_grid(os, abs.grid());
  w.u64(abs.input_count());
  w.u64(abs.offsets().size());
  w.u64s(abs.offsets());
  w.u64(abs.successors().size());
  w.u32s(abs.successors());
  w.u64(abs.unsafe_flags().size());
  w.bytes(abs.unsafe_flags());
}

AbstractSystem load_abstraction(std::istream& is, std::uint64_t* key) {
  BinaryReader r(is);
  const auto h = read_header(r);
  expect_kind(h, ArtifactKind::Abstraction);
  if (key) *key = h.key;
  Grid grid = read_grid(is);
  const std::uint64_t inputs = r.u64();
  auto offsets = sized<std::uint64_t>(r.u64(), kLimit, "offset");
  r.u64s(offsets);
  auto successors = sized<CellId>(r.u64(), kLimit, "successor");
  r.u32s(successors);
  auto unsafe = sized<std::uint8_t>(r.u64(), kLimit, "flag");
  r.bytes(unsafe);
  for (CellId c : successors) {
    if (c >= grid.state_count()) throw FormatError("successor id out of range");
  }
  try {
    return AbstractSystem(std::move(grid), static_cast<std::size_t>(inputs), std::move(offsets),
                          std::move(successors), std::move(unsafe));
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("inconsistent abstraction: ") + e.what());
  }
}

void save_controller(std::ostream& os, const PhasedController& ctrl, const Grid& grid,
                     std::uint64_t key) {
  BinaryWriter w(os);
  write_header(w, ArtifactKind::Controller, key);
  write_grid(os, grid);
  w.u32(static_cast<std::uint32_t>(ctrl.stage_count()));
  for (std::size_t k = 0; k < ctrl.stage_count(); ++k) {
    const auto table = ctrl.stage(k).table();
    w.u64(table.size());
    w.i32s(table);
    std::vector<double> values(ctrl.value(k).size());
    for (std::size_t s = 0; s < values.size(); ++s) values[s] = ctrl.value(k)[s].value();
    w.f64s(values);
  }
}

LoadedController load_controller(std::istream& is) {
  BinaryReader r(is);
  const auto h = read_header(r);
  expect_kind(h, ArtifactKind::Controller);
  LoadedController out;
  out.key = h.key;
  out.grid = read_grid(is);
  const std::uint32_t stages = r.u32();
  if (stages == 0 || stages > 64) throw FormatError("bad stage count");
  std::vector<MemorylessController> mus;
  std::vector<ValueFunction> values;
  for (std::uint32_t k = 0; k < stages; ++k) {
    const std::uint64_t n = r.u64();
    if (n != out.grid.state_count()) throw FormatError("controller table does not match the grid");
    std::vector<std::int32_t> table(n);
    r.i32s(table);
    std::vector<double> raw(n);
    r.f64s(raw);
    ValueFunction v;
    v.values.reserve(n);
    for (double x : raw) {
      if (std::isnan(x) || x < 0.0) throw FormatError("invalid value in controller file");
      v.values.emplace_back(x);
    }
    mus.emplace_back(std::move(table));
    values.push_back(std::move(v));
  }
  out.controller = PhasedController(std::move(mus), std::move(values));
  return out;
}

void save_abstraction_file(const std::filesystem::path& path, const AbstractSystem& abs,
                           std::uint64_t key) {
  auto os = open_out(path);
  save_abstraction(os, abs, key);
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

AbstractSystem load_abstraction_file(const std::filesystem::path& path, std::uint64_t* key) {
  auto is = open_in(path);
  return load_abstraction(is, key);
}

void save_controller_file(const std::filesystem::path& path, const PhasedController& ctrl,
                          const Grid& grid, std::uint64_t key) {
  auto os = open_out(path);
  save_controller(os, ctrl, grid, key);
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

LoadedController load_controller_file(const std::filesystem::path& path) {
  auto is = open_in(path);
  return load_controller(is);
}

void write_value_array(std::ostream& os, const ValueFunction& v) {
  std::vector<double> raw(v.size());
  for (std::size_t s = 0; s < raw.size(); ++s) raw[s] = v[s].value();
  BinaryWriter(os).f64s(raw);
}

ValueFunction read_value_array(std::istream& is, std::size_t count) {
  std::vector<double> raw(count);
  BinaryReader(is).f64s(raw);
  ValueFunction v;
  v.values.reserve(count);
  for (double x : raw) {
    if (std::isnan(x) || x < 0.0) throw FormatError("invalid value in value array");
    v.values.emplace_back(x);
  }
  return v;
}

std::string value_sidecar_json(const Grid& grid, const ValueFunction& v, const std::string& name) {
  nlohmann::json j;
  j["name"] = name;
  j["format"] = "f64le";
  j["version"] = kValueFormatVersion;
  j["count"] = v.size();
  j["out_index"] = grid.out_cell();
  j["infinity"] = "IEEE +inf";
  j["finite_count"] = v.finite_count();
  j["max_finite"] = v.max_finite();
  j["layout"] = "axis 0 fastest; last entry is the OUT state";
  j["grid"] = {{"lo", grid.domain().lo()},
               {"hi", grid.domain().hi()},
               {"cells", grid.cells_per_axis()},
               {"periodic", grid.periodic_axes()}};
  return j.dump(2) + "\n";
}

void save_value_files(const std::filesystem::path& stem, const Grid& grid, const ValueFunction& v,
                      const std::string& name) {
  auto bin = stem;
  bin += ".f64";
  auto os = open_out(bin);
  write_value_array(os, v);
  auto meta = stem;
  meta += ".json";
  auto js = open_out(meta);
  js << value_sidecar_json(grid, v, name);
}

LoadedValue load_value_files(const std::filesystem::path& stem) {
  auto meta = stem;
  meta += ".json";
  auto js = open_in(meta);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(js);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad value sidecar: ") + e.what());
  }
  if (j.value("format", "") != "f64le") throw FormatError("value sidecar: unsupported format");
  const auto& g = j.at("grid");
  LoadedValue out;
  out.grid = Grid(HyperRect(g.at("lo").get<std::vector<double>>(), g.at("hi").get<std::vector<double>>()),
                  g.at("cells").get<std::vector<std::uint32_t>>(),
                  g.at("periodic").get<std::vector<std::size_t>>());
  const auto count = j.at("count").get<std::size_t>();
  if (count != out.grid.state_count()) throw FormatError("value sidecar: count does not match the grid");
  auto bin = stem;
  bin += ".f64";
  auto is = open_in(bin);
  out.value = read_value_array(is, count);
  return out;
}

std::uint64_t abstraction_digest(const AbstractSystem& abs, std::uint64_t key) {
  HashingStream h;
  save_abstraction(h.stream(), abs, key);
  return h.digest();
}

std::uint64_t controller_digest(const PhasedController& ctrl, const Grid& grid, std::uint64_t key) {
  HashingStream h;
  save_controller(h.stream(), ctrl, grid, key);
  return h.digest();
}

}  // namespace tpra
