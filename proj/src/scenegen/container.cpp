#include "losight/scenegen/container.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "losight/core/error.hpp"

namespace losight::scenegen {

namespace {

template <typename T>
void put_le(std::string& out, T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
    out.append(reinterpret_cast<const char*>(bytes), sizeof(T));
}

class Reader {
public:
    explicit Reader(std::string_view bytes) : bytes_(bytes) {}

    template <typename T>
    T get() {
        if (bytes_.size() - pos_ < sizeof(T)) throw DataError("LOSD container truncated");
        unsigned char raw[sizeof(T)];
        std::memcpy(raw, bytes_.data() + pos_, sizeof(T));
        if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(T));
        pos_ += sizeof(T);
        T value;
        std::memcpy(&value, raw, sizeof(T));
        return value;
    }

    std::string_view take(std::size_t n) {
        if (bytes_.size() - pos_ < n) throw DataError("LOSD container truncated");
        auto out = bytes_.substr(pos_, n);
        pos_ += n;
        return out;
    }

    bool done() const { return pos_ == bytes_.size(); }

private:
    std::string_view bytes_;
    std::size_t pos_ = 0;
};

void put_matrix(std::string& out, const Matrix& m) {
    put_le<std::uint64_t>(out, static_cast<std::uint64_t>(m.rows()));
    put_le<std::uint64_t>(out, static_cast<std::uint64_t>(m.cols()));
    out.reserve(out.size() + static_cast<std::size_t>(m.size()) * 8);
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j) put_le<double>(out, m(i, j));
}

Matrix get_matrix(Reader& in) {
    const auto rows = in.get<std::uint64_t>();
    const auto cols = in.get<std::uint64_t>();
    if (rows > (1ULL << 32) || cols > (1ULL << 32)) throw DataError("LOSD matrix dimensions implausible");
    Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j) m(i, j) = in.get<double>();
    return m;
}

}  // namespace

std::string encode_container(const Container& c) {
    std::string out = "LOSD";
    put_le<std::uint32_t>(out, kContainerVersion);
    put_matrix(out, c.data);
    put_matrix(out, c.targets);
    const std::string meta = c.metadata.dump();
    put_le<std::uint64_t>(out, meta.size());
    out += meta;
    return out;
}

Container decode_container(std::string_view bytes) {
    Reader in(bytes);
    if (in.take(4) != "LOSD") throw DataError("not a LOSD container (bad magic)");
    const auto version = in.get<std::uint32_t>();
    if (version != kContainerVersion) throw DataError("unsupported LOSD version " + std::to_string(version));
    Container c;
    c.data = get_matrix(in);
    c.targets = get_matrix(in);
    const auto len = in.get<std::uint64_t>();
    const auto meta = in.take(static_cast<std::size_t>(len));
    try {
        c.metadata = nlohmann::json::parse(meta);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("LOSD metadata is not valid JSON: ") + e.what());
    }
    if (!in.done()) throw DataError("trailing bytes after LOSD metadata");
    return c;
}

void write_container(const std::filesystem::path& path, const Container& c) {
    const std::string bytes = encode_container(c);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open " + path.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DataError("write failed: " + path.string());
}

Container read_container(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return decode_container(ss.str());
}

}  // namespace losight::scenegen
