#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "zkcyl/field.hpp"

namespace zkcyl {

/// On-disk field snapshot.
///
/// Layout (all integers and doubles little-endian):
///   8 bytes   magic "ZKCYLSNP"
///   u32       schema version (1)
///   u64       header length H
///   H bytes   header, compact JSON (UTF-8)
///   u64       rows (x-nodes), u64 cols (transverse nodes)
///   rows*cols f64 values, row-major
///   u32       CRC-32 (zlib polynomial) of every preceding byte
///
/// The header always carries "t", "grid" {L, N, nodes} and "layout"
/// {rho0, rho1, N_I, N_II, physical_rho}; "config" and "meta" are free-form.
struct Snapshot {
    static constexpr std::uint32_t schema_version = 1;

    nlohmann::json header;
    std::uint64_t rows = 0;
    std::uint64_t cols = 0;
    std::vector<double> values;

    double t() const;
};

Snapshot make_snapshot(const Field& field, double t, const nlohmann::json& config = nullptr,
                       const nlohmann::json& meta = nullptr);

std::vector<std::uint8_t> encode_snapshot(const Snapshot& snap);
Snapshot decode_snapshot(const std::vector<std::uint8_t>& bytes);

void save_snapshot(const std::filesystem::path& path, const Snapshot& snap);
Snapshot load_snapshot(const std::filesystem::path& path);

/// Rebuilds the discretization stored in the header.
DiscretizationPtr discretization_from_snapshot(const Snapshot& snap);

/// Field on `disc`; throws ShapeError listing metadata differences when the
/// snapshot's grid or layout does not match.
Field field_from_snapshot(const Snapshot& snap, const DiscretizationPtr& disc);

/// Human-readable differences between the snapshot's grid/layout and `disc`
/// (empty when they agree).
std::vector<std::string> metadata_diff(const Snapshot& snap, const Discretization& disc);

}  // namespace zkcyl
