#include "alignkit/io.hpp"

#include <cstdint>
#include <fstream>

#include <nlohmann/json.hpp>

namespace alignkit {

namespace {

// Strip a known extension so callers can pass either side of the pair.
std::string base_path(const std::string& path) {
    for (const char* ext : {".bin", ".json"}) {
        std::string e(ext);
        if (path.size() > e.size() && path.compare(path.size() - e.size(), e.size(), e) == 0) {
            return path.substr(0, path.size() - e.size());
        }
    }
    return path;
}

}  // namespace

void write_matrix(const std::string& path, const Matrix& m, const FeatureFileMeta& meta) {
    const std::string base = base_path(path);

    nlohmann::json j;
    j["rows"] = m.rows;
    j["cols"] = m.cols;
    j["dtype"] = "f32le";
    j["kind"] = meta.kind;
    j["sample_rate"] = meta.sample_rate;
    j["hop_size"] = meta.hop_size;

    std::ofstream js(base + ".json");
    if (!js) throw std::runtime_error("cannot open for writing: " + base + ".json");
    js << j.dump(2) << "\n";

    std::ofstream bs(base + ".bin", std::ios::binary);
    if (!bs) throw std::runtime_error("cannot open for writing: " + base + ".bin");
    std::vector<float> buf(m.data.begin(), m.data.end());
    bs.write(reinterpret_cast<const char*>(buf.data()),
             static_cast<std::streamsize>(buf.size() * sizeof(float)));
    if (!bs) throw std::runtime_error("short write: " + base + ".bin");
}

Matrix read_matrix(const std::string& path, FeatureFileMeta* meta_out) {
    const std::string base = base_path(path);

    std::ifstream js(base + ".json");
    if (!js) throw std::runtime_error("missing sidecar: " + base + ".json");
    nlohmann::json j;
    js >> j;

    if (j.value("dtype", "") != "f32le") {
        throw std::runtime_error("unsupported dtype in " + base + ".json");
    }
    FeatureFileMeta meta;
    meta.rows = j.at("rows").get<std::size_t>();
    meta.cols = j.at("cols").get<std::size_t>();
    meta.kind = j.value("kind", "matrix");
    meta.sample_rate = j.value("sample_rate", 0);
    meta.hop_size = j.value("hop_size", 0);

    std::ifstream bs(base + ".bin", std::ios::binary);
    if (!bs) throw std::runtime_error("missing data file: " + base + ".bin");
    std::vector<float> buf(meta.rows * meta.cols);
    bs.read(reinterpret_cast<char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(float)));
    if (static_cast<std::size_t>(bs.gcount()) != buf.size() * sizeof(float)) {
        throw std::runtime_error("truncated data file: " + base + ".bin");
    }

    Matrix m(meta.rows, meta.cols);
    for (std::size_t i = 0; i < buf.size(); ++i) m.data[i] = buf[i];
    if (meta_out) *meta_out = meta;
    return m;
}

}  // namespace alignkit
