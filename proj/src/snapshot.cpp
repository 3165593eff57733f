#include "zkcyl/snapshot.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include <zlib.h>

#include "zkcyl/error.hpp"

namespace zkcyl {

using nlohmann::json;

namespace {

constexpr char magic[8] = {'Z', 'K', 'C', 'Y', 'L', 'S', 'N', 'P'};

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    std::uint8_t bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
    out.insert(out.end(), bytes, bytes + sizeof(T));
}

class Reader {
public:
    explicit Reader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

    template <typename T>
    T get() {
        need(sizeof(T));
        std::uint8_t buf[sizeof(T)];
        std::memcpy(buf, bytes_.data() + pos_, sizeof(T));
        if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
        pos_ += sizeof(T);
        T value;
        std::memcpy(&value, buf, sizeof(T));
        return value;
    }

    std::string string(std::size_t n) {
        need(n);
        std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
        pos_ += n;
        return s;
    }

    std::size_t pos() const noexcept { return pos_; }

private:
    void need(std::size_t n) const {
        if (pos_ + n > bytes_.size()) throw FormatError("snapshot is truncated");
    }
    const std::vector<std::uint8_t>& bytes_;
    std::size_t pos_ = 0;
};

std::uint32_t checksum(const std::uint8_t* data, std::size_t size) {
    uLong crc = crc32(0L, Z_NULL, 0);
    // zlib takes uInt lengths; feed in chunks
    while (size > 0) {
        const auto chunk = static_cast<uInt>(std::min<std::size_t>(size, 1u << 30));
        crc = crc32(crc, data, chunk);
        data += chunk;
        size -= chunk;
    }
    return static_cast<std::uint32_t>(crc);
}

}  // namespace

double Snapshot::t() const { return header.at("t").get<double>(); }

Snapshot make_snapshot(const Field& field, double t, const json& config, const json& meta) {
    const auto& disc = field.disc();
    const auto& layout = disc.layout();
    Snapshot snap;
    snap.header["t"] = t;
    snap.header["grid"] = {{"L", disc.grid().L}, {"N", disc.grid().N}, {"nodes", disc.grid().nodes}};
    snap.header["layout"] = {{"rho0", layout.rho0()},
                             {"rho1", layout.rho1()},
                             {"N_I", layout.n_inner()},
                             {"N_II", layout.n_outer()},
                             {"physical_rho", layout.physical_rho()}};
    if (!config.is_null()) snap.header["config"] = config;
    if (!meta.is_null()) snap.header["meta"] = meta;
    snap.rows = static_cast<std::uint64_t>(field.values.rows());
    snap.cols = static_cast<std::uint64_t>(field.values.cols());
    snap.values.assign(field.values.data(), field.values.data() + field.values.size());
    return snap;
}

std::vector<std::uint8_t> encode_snapshot(const Snapshot& snap) {
    if (snap.values.size() != snap.rows * snap.cols) {
        throw ShapeError("snapshot payload size does not match rows x cols");
    }
    const std::string header = snap.header.dump();
    std::vector<std::uint8_t> out;
    out.reserve(32 + header.size() + 8 * snap.values.size());
    out.insert(out.end(), magic, magic + 8);
    put_le<std::uint32_t>(out, Snapshot::schema_version);
    put_le<std::uint64_t>(out, header.size());
    out.insert(out.end(), header.begin(), header.end());
    put_le<std::uint64_t>(out, snap.rows);
    put_le<std::uint64_t>(out, snap.cols);
    for (double v : snap.values) put_le<double>(out, v);
    put_le<std::uint32_t>(out, checksum(out.data(), out.size()));
    return out;
}

Snapshot decode_snapshot(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 8 + 4 + 8 + 16 + 4 || std::memcmp(bytes.data(), magic, 8) != 0) {
        throw FormatError("not a zkcyl snapshot (bad magic)");
    }
    const std::size_t body = bytes.size() - 4;
    std::uint32_t stored = 0;
    for (int i = 3; i >= 0; --i) stored = (stored << 8) | bytes[body + i];
    const std::uint32_t actual = checksum(bytes.data(), body);
    if (stored != actual) {
        std::ostringstream msg;
        msg << "snapshot checksum mismatch (stored " << std::hex << stored << ", computed " << actual << ")";
        throw FormatError(msg.str());
    }

    Reader r(bytes);
    r.string(8);
    const auto version = r.get<std::uint32_t>();
    if (version != Snapshot::schema_version) {
        throw FormatError("unsupported snapshot schema version " + std::to_string(version));
    }
    const auto header_len = r.get<std::uint64_t>();
    Snapshot snap;
    try {
        snap.header = json::parse(r.string(header_len));
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("snapshot header is not valid JSON: ") + e.what());
    }
    snap.rows = r.get<std::uint64_t>();
    snap.cols = r.get<std::uint64_t>();
    if (r.pos() + 8 * snap.rows * snap.cols != body) {
        throw FormatError("snapshot payload length does not match rows x cols");
    }
    snap.values.resize(snap.rows * snap.cols);
    for (auto& v : snap.values) v = r.get<double>();
    for (const char* key : {"t", "grid", "layout"}) {
        if (!snap.header.contains(key)) throw FormatError(std::string("snapshot header lacks '") + key + "'");
    }
    return snap;
}

void save_snapshot(const std::filesystem::path& path, const Snapshot& snap) {
    const auto bytes = encode_snapshot(snap);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write snapshot " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("failed writing snapshot " + path.string());
}

Snapshot load_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open snapshot " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_snapshot(bytes);
}

DiscretizationPtr discretization_from_snapshot(const Snapshot& snap) {
    const json& g = snap.header.at("grid");
    const json& l = snap.header.at("layout");
    return make_discretization(make_torus_grid(g.at("L").get<double>(), g.at("N").get<int>()),
                               build_layout(l.at("rho0").get<double>(), l.at("rho1").get<double>(),
                                            l.at("N_I").get<int>(), l.at("N_II").get<int>()));
}

std::vector<std::string> metadata_diff(const Snapshot& snap, const Discretization& disc) {
    std::vector<std::string> diff;
    const json& g = snap.header.at("grid");
    const json& l = snap.header.at("layout");
    auto cmp = [&](const std::string& name, double stored, double wanted) {
        if (stored != wanted) {
            std::ostringstream s;
            s << name << ": snapshot " << stored << " vs requested " << wanted;
            diff.push_back(s.str());
        }
    };
    cmp("grid.L", g.at("L").get<double>(), disc.grid().L);
    cmp("grid.N", g.at("N").get<double>(), disc.grid().N);
    cmp("layout.rho0", l.at("rho0").get<double>(), disc.layout().rho0());
    cmp("layout.rho1", l.at("rho1").get<double>(), disc.layout().rho1());
    cmp("layout.N_I", l.at("N_I").get<double>(), disc.layout().n_inner());
    cmp("layout.N_II", l.at("N_II").get<double>(), disc.layout().n_outer());
    return diff;
}

Field field_from_snapshot(const Snapshot& snap, const DiscretizationPtr& disc) {
    const auto diff = metadata_diff(snap, *disc);
    if (!diff.empty()) {
        std::string msg = "snapshot grid/layout mismatch:";
        for (const auto& d : diff) msg += "\n  " + d;
        throw ShapeError(msg);
    }
    if (snap.rows != static_cast<std::uint64_t>(disc->nx()) || snap.cols != static_cast<std::uint64_t>(disc->nr())) {
        throw ShapeError("snapshot payload shape does not match the grid");
    }
    RealMatrix values = Eigen::Map<const RealMatrix>(snap.values.data(), disc->nx(), disc->nr());
    return Field(disc, std::move(values));
}

}  // namespace zkcyl
