#include "isoflux/io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace isoflux {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (!target.parent_path().empty()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
        out << content;
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, target);
}

std::map<std::string, std::string> parse_flat_config_text(const std::string& text) {
    std::map<std::string, std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r\n");
            if (b == std::string::npos) return std::string();
            const auto e = s.find_last_not_of(" \t\r\n");
            return s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!key.empty()) out[key] = value;
    }
    return out;
}

std::map<std::string, std::string> parse_flat_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_flat_config_text(ss.str());
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    static const char* digits = "0123456789abcdef";
    for (int i = 15; i >= 0; --i) {
        buf[i] = digits[h & 0xf];
        h >>= 4;
    }
    buf[16] = '\0';
    return std::string(buf);
}

std::string axisym_field_csv(const AxisymField& field, const std::string& comment) {
    std::ostringstream out;
    if (!comment.empty()) out << "# " << comment << '\n';
    out << "r,z,u,inside\n";
    for (int j = 0; j < field.n_z; ++j) {
        for (int i = 0; i < field.n_r; ++i) {
            out << format_double(field.node_r(i)) << ',' << format_double(field.node_z(j)) << ','
                << format_double(field.at(i, j)) << ','
                << int(field.inside[static_cast<std::size_t>(j) * field.n_r + i]) << '\n';
        }
    }
    return out.str();
}

std::string curve_csv(const Polyline3& c, const std::string& comment) {
    std::ostringstream out;
    if (!comment.empty()) out << "# " << comment << '\n';
    out << "x,y,z\n";
    for (const Vec3& v : c.vertices)
        out << format_double(v.x) << ',' << format_double(v.y) << ',' << format_double(v.z) << '\n';
    return out.str();
}

std::string curve_csv(const MeridianCurve& c, const std::string& comment) {
    std::ostringstream out;
    if (!comment.empty()) out << "# " << comment << '\n';
    out << "x,z\n";
    for (const Vec2& v : c.vertices) out << format_double(v.x) << ',' << format_double(v.z) << '\n';
    return out.str();
}

std::string curve_sidecar_json(const Polyline3& c) {
    std::ostringstream out;
    out << "{\"closed\": " << (c.closed ? "true" : "false") << ", \"multiplicity\": " << c.multiplicity
        << "}\n";
    return out.str();
}

Polyline3 read_curve_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open curve file: " + path);
    Polyline3 c;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;  // x,y,z header
            continue;
        }
        std::istringstream ss(line);
        std::string a, b, d;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, d))
            throw std::runtime_error("malformed curve row in " + path);
        c.vertices.push_back({std::stod(a), std::stod(b), std::stod(d)});
    }
    return c;
}

}  // namespace isoflux
