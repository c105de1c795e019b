#include "morphkit/geometry/landmarks.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "morphkit/common/error.hpp"

namespace morphkit::geom {

LandmarkSet::LandmarkSet(std::vector<Vec2> points) : points_(std::move(points)) {
    if (points_.empty()) throw DimensionError("LandmarkSet: K must be > 0");
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (!std::isfinite(points_[i].x) || !std::isfinite(points_[i].y))
            throw DimensionError("LandmarkSet: non-finite coordinate at index " +
                                 std::to_string(i));
    }
}

bool LandmarkSet::operator==(const LandmarkSet& o) const {
    if (points_.size() != o.points_.size()) return false;
    for (std::size_t i = 0; i < points_.size(); ++i)
        if (points_[i].x != o.points_[i].x || points_[i].y != o.points_[i].y) return false;
    return true;
}

LandmarkSet average_landmarks(const LandmarkSet& a, const LandmarkSet& b) {
    if (a.count() != b.count())
        throw DimensionError("average_landmarks: landmark count mismatch");
    std::vector<Vec2> pts(static_cast<std::size_t>(a.count()));
    for (int i = 0; i < a.count(); ++i) pts[static_cast<std::size_t>(i)] = 0.5 * (a.point(i) + b.point(i));
    return LandmarkSet(std::move(pts));
}

LandmarkSet load_landmarks(const std::string& path, int expected_k) {
    std::ifstream in(path);
    if (!in) throw IoError("load_landmarks: cannot open " + path);

    std::string header;
    if (!std::getline(in, header))
        throw ParseError(path + ":1: missing header line");
    int k = 0, w = 0, h = 0;
    if (std::sscanf(header.c_str(), "#K=%d W=%d H=%d", &k, &w, &h) != 3)
        throw ParseError(path + ":1: malformed header, expected \"#K=<int> W=<int> H=<int>\"");
    if (k <= 0 || w <= 0 || h <= 0)
        throw ParseError(path + ":1: header values must be positive");
    if (expected_k > 0 && k != expected_k)
        throw ParseError(path + ":1: landmark count mismatch: file has K=" + std::to_string(k) +
                         ", configured K=" + std::to_string(expected_k));

    std::vector<Vec2> pts;
    pts.reserve(static_cast<std::size_t>(k));
    std::string line;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ls(line);
        double x = 0.0, y = 0.0;
        if (!(ls >> x >> y))
            throw ParseError(path + ":" + std::to_string(line_no) + ": malformed row \"" + line +
                             "\"");
        std::string trailing;
        if (ls >> trailing)
            throw ParseError(path + ":" + std::to_string(line_no) + ": trailing content \"" +
                             trailing + "\"");
        if (!std::isfinite(x) || !std::isfinite(y))
            throw ParseError(path + ":" + std::to_string(line_no) + ": non-finite coordinate");
        pts.push_back({x / w, y / h});
    }
    if (static_cast<int>(pts.size()) != k)
        throw ParseError(path + ": landmark count mismatch: header K=" + std::to_string(k) +
                         " but file has " + std::to_string(pts.size()) + " rows");
    return LandmarkSet(std::move(pts));
}

void save_landmarks(const LandmarkSet& lms, const std::string& path, int width, int height) {
    std::ofstream out(path);
    if (!out) throw IoError("save_landmarks: cannot write " + path);
    out << "#K=" << lms.count() << " W=" << width << " H=" << height << "\n";
    char buf[80];
    for (int i = 0; i < lms.count(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g %.17g\n", lms.point(i).x * width,
                      lms.point(i).y * height);
        out << buf;
    }
}

}  // namespace morphkit::geom
