#pragma once

#include <charconv>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "topometric/errors.hpp"
#include "topometric/geometry.hpp"
#include "topometric/odometry.hpp"
#include "topometric/topo_map.hpp"

// Plain-text record formats, one whitespace-separated record per line. Lines
// starting with '#' are comments. Numbers use the shortest round-trip
// representation with '.' as the decimal separator regardless of locale.
//
//   trajectory  t x y theta
//   map         id x y theta        (optional header "# d_th <value>")
//   motions     t dx dy s c         (t = source timestep, s/c = sin/cos of dtheta)
//   detections  t node_id confidence

namespace topometric::io {

inline std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string format_number(long v) { return std::to_string(v); }

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

template <class T>
T parse_field(std::string_view field, std::string_view what, std::size_t line_no) {
    T value{};
    const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
        throw ScenarioError(std::string(what) + ":" + std::to_string(line_no) + ": cannot parse '" +
                            std::string(field) + "'");
    }
    return value;
}

// Calls fn(fields, line_no) for each record line with exactly `arity` fields.
template <class Fn>
void for_each_record(std::string_view text, std::size_t arity, std::string_view what, Fn&& fn) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        const std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        ++line_no;
        const auto fields = split_fields(line);
        if (!fields.empty() && fields[0].front() != '#') {
            if (fields.size() != arity) {
                throw ScenarioError(std::string(what) + ":" + std::to_string(line_no) + ": expected " +
                                    std::to_string(arity) + " fields, got " + std::to_string(fields.size()));
            }
            fn(fields, line_no);
        }
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
}

}  // namespace detail

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "' for reading");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
        throw IoError("write to '" + path.string() + "' failed");
    }
}

inline void ensure_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw IoError("cannot create output directory '" + dir.string() + "'");
    }
}

// --- trajectory -----------------------------------------------------------

inline std::string format_trajectory(const Trajectory& traj) {
    std::string out;
    for (const auto& sp : traj.stamped()) {
        out += format_number(sp.timestep) + ' ' + format_number(sp.pose.x) + ' ' + format_number(sp.pose.y) +
               ' ' + format_number(sp.pose.theta) + '\n';
    }
    return out;
}

inline Trajectory parse_trajectory(std::string_view text, std::string_view what = "trajectory") {
    std::vector<StampedPose> poses;
    detail::for_each_record(text, 4, what, [&](const auto& f, std::size_t ln) {
        poses.push_back({detail::parse_field<long>(f[0], what, ln),
                         Pose2(detail::parse_field<double>(f[1], what, ln), detail::parse_field<double>(f[2], what, ln),
                               detail::parse_field<double>(f[3], what, ln))});
    });
    try {
        return Trajectory(std::move(poses));
    } catch (const std::invalid_argument& e) {
        throw ScenarioError(std::string(what) + ": " + e.what());
    }
}

// --- map ------------------------------------------------------------------

inline std::string format_map(const TopoMap& map) {
    std::string out = "# d_th " + format_number(map.d_th()) + '\n';
    for (const auto& n : map.nodes()) {
        out += format_number(n.id) + ' ' + format_number(n.pose.x) + ' ' + format_number(n.pose.y) + ' ' +
               format_number(n.pose.theta) + '\n';
    }
    return out;
}

inline TopoMap parse_map(std::string_view text, std::string_view what = "map") {
    double d_th = 1.0;
    constexpr std::string_view header = "# d_th ";
    if (text.starts_with(header)) {
        const std::size_t nl = text.find('\n');
        const auto fields = detail::split_fields(text.substr(header.size(), nl - header.size()));
        if (fields.size() == 1) {
            d_th = detail::parse_field<double>(fields[0], what, 1);
        }
    }
    std::vector<TopoNode> nodes;
    detail::for_each_record(text, 4, what, [&](const auto& f, std::size_t ln) {
        nodes.push_back({detail::parse_field<long>(f[0], what, ln),
                         Pose2(detail::parse_field<double>(f[1], what, ln), detail::parse_field<double>(f[2], what, ln),
                               detail::parse_field<double>(f[3], what, ln)),
                         std::nullopt});
    });
    try {
        return TopoMap(std::move(nodes), d_th);
    } catch (const std::invalid_argument& e) {
        throw ScenarioError(std::string(what) + ": " + e.what());
    }
}

// --- motions --------------------------------------------------------------

inline std::string format_motions(std::span<const RelativeMotion> motions) {
    std::string out;
    for (std::size_t t = 0; t < motions.size(); ++t) {
        const auto& m = motions[t];
        out += std::to_string(t) + ' ' + format_number(m.dx()) + ' ' + format_number(m.dy()) + ' ' +
               format_number(m.sin_dtheta()) + ' ' + format_number(m.cos_dtheta()) + '\n';
    }
    return out;
}

inline std::vector<RelativeMotion> parse_motions(std::string_view text, std::string_view what = "motions") {
    std::vector<RelativeMotion> out;
    detail::for_each_record(text, 5, what, [&](const auto& f, std::size_t ln) {
        const long t = detail::parse_field<long>(f[0], what, ln);
        if (t != static_cast<long>(out.size())) {
            throw ScenarioError(std::string(what) + ":" + std::to_string(ln) + ": motion index out of sequence");
        }
        try {
            out.emplace_back(detail::parse_field<double>(f[1], what, ln), detail::parse_field<double>(f[2], what, ln),
                             detail::parse_field<double>(f[3], what, ln), detail::parse_field<double>(f[4], what, ln));
        } catch (const std::invalid_argument& e) {
            throw ScenarioError(std::string(what) + ":" + std::to_string(ln) + ": " + e.what());
        }
    });
    return out;
}

// --- detections -----------------------------------------------------------

inline std::string format_detections(std::span<const NodeDetection> detections) {
    std::string out;
    for (const auto& d : detections) {
        out += format_number(d.timestep) + ' ' + format_number(d.node_id) + ' ' + format_number(d.confidence) + '\n';
    }
    return out;
}

inline std::vector<NodeDetection> parse_detections(std::string_view text, std::string_view what = "detections") {
    std::vector<NodeDetection> out;
    detail::for_each_record(text, 3, what, [&](const auto& f, std::size_t ln) {
        out.push_back({detail::parse_field<long>(f[0], what, ln), detail::parse_field<long>(f[1], what, ln),
                       detail::parse_field<double>(f[2], what, ln)});
    });
    return out;
}

}  // namespace topometric::io
