#pragma once

#include <string>
#include <vector>

namespace morphkit::geom {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }

/// Ordered facial landmarks in normalized coordinates (pixel / image dim).
/// The index order is the canonical detector order; no operation in this
/// library permutes it.
class LandmarkSet {
public:
    LandmarkSet() = default;
    explicit LandmarkSet(std::vector<Vec2> points);

    int count() const { return static_cast<int>(points_.size()); }
    const Vec2& point(int i) const { return points_[static_cast<std::size_t>(i)]; }
    Vec2& point(int i) { return points_[static_cast<std::size_t>(i)]; }
    const std::vector<Vec2>& points() const { return points_; }

    bool operator==(const LandmarkSet& o) const;

private:
    std::vector<Vec2> points_;
};

/// Point-wise midpoint of two same-K landmark sets (the traditional
/// averaged-landmark target).
LandmarkSet average_landmarks(const LandmarkSet& a, const LandmarkSet& b);

/// Reads a landmark file: a mandatory header "#K=<int> W=<int> H=<int>"
/// followed by K lines "x y" in pixel coordinates. Coordinates are
/// normalized by W/H on load. `expected_k` < 0 skips the count check.
LandmarkSet load_landmarks(const std::string& path, int expected_k = -1);

/// Inverse of load_landmarks; writes pixel coordinates at full precision so
/// files round-trip losslessly at power-of-two image sizes.
void save_landmarks(const LandmarkSet& lms, const std::string& path, int width, int height);

}  // namespace morphkit::geom
