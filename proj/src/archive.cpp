#include "bpsgcn/archive.hpp"

#include "bpsgcn/errors.hpp"

#include <json.hpp>

#include <cstdint>
#include <cstring>
#include <fstream>

namespace bpsgcn {

namespace {
constexpr char kMagic[8] = {'B', 'P', 'S', 'A', '0', '0', '0', '1'};
constexpr int kFormatVersion = 1;
} // namespace

void save_archive(const std::string& path, const ParamStore& params) {
    nlohmann::json manifest;
    manifest["format_version"] = kFormatVersion;
    auto& arrays = manifest["arrays"] = nlohmann::json::array();
    std::uint64_t offset = 0;
    for (std::size_t i = 0; i < params.size(); ++i) {
        const Param& p = params[i];
        arrays.push_back({{"name", p.name},
                          {"rows", p.value.rows()},
                          {"cols", p.value.cols()},
                          {"dtype", "f8"},
                          {"offset", offset}});
        offset += static_cast<std::uint64_t>(p.value.size()) * sizeof(double);
    }
    const std::string m = manifest.dump();

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw StateError("cannot write archive: " + path);
    out.write(kMagic, sizeof(kMagic));
    const std::uint64_t mlen = m.size();
    out.write(reinterpret_cast<const char*>(&mlen), sizeof(mlen));
    out.write(m.data(), static_cast<std::streamsize>(m.size()));
    for (std::size_t i = 0; i < params.size(); ++i) {
        const Param& p = params[i];
        out.write(reinterpret_cast<const char*>(p.value.data()),
                  static_cast<std::streamsize>(p.value.size() * sizeof(double)));
    }
    if (!out) throw StateError("short write on archive: " + path);
}

namespace {

nlohmann::json read_manifest(std::ifstream& in, const std::string& path) {
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw ParseError("bad archive magic in " + path);
    std::uint64_t mlen = 0;
    in.read(reinterpret_cast<char*>(&mlen), sizeof(mlen));
    std::string m(mlen, '\0');
    in.read(m.data(), static_cast<std::streamsize>(mlen));
    if (!in) throw ParseError("truncated archive manifest in " + path);
    nlohmann::json manifest = nlohmann::json::parse(m, nullptr, false);
    if (manifest.is_discarded()) throw ParseError("invalid archive manifest in " + path);
    if (manifest.value("format_version", -1) != kFormatVersion)
        throw ParseError("unsupported archive format_version in " + path);
    return manifest;
}

ad::Mat read_array(std::ifstream& in, long rows, long cols, const std::string& path) {
    ad::Mat m(rows, cols);
    in.read(reinterpret_cast<char*>(m.data()),
            static_cast<std::streamsize>(m.size() * sizeof(double)));
    if (!in) throw ParseError("truncated archive payload in " + path);
    return m;
}

} // namespace

ParamStore load_archive(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StateError("cannot open archive: " + path);
    nlohmann::json manifest = read_manifest(in, path);
    ParamStore store;
    for (const auto& a : manifest.at("arrays")) {
        const long rows = a.at("rows").get<long>();
        const long cols = a.at("cols").get<long>();
        if (a.at("dtype").get<std::string>() != "f8")
            throw ParseError("unsupported dtype in " + path);
        store.add(a.at("name").get<std::string>(), read_array(in, rows, cols, path));
    }
    return store;
}

void load_archive_into(const std::string& path, ParamStore& params) {
    ParamStore loaded = load_archive(path);
    for (std::size_t i = 0; i < loaded.size(); ++i) {
        Param& dst = params.at(loaded[i].name);
        if (dst.value.rows() != loaded[i].value.rows() ||
            dst.value.cols() != loaded[i].value.cols())
            throw ArgumentError("archive shape mismatch for " + loaded[i].name);
        dst.value = loaded[i].value;
    }
}

} // namespace bpsgcn
