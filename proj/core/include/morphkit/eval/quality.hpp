#pragma once

#include <string>
#include <vector>

#include "morphkit/geometry/image.hpp"

namespace morphkit::eval {

// SSIM constants shared by the evaluation metric and the differentiable
// training loss: 11x11 Gaussian window, sigma 1.5, C1=(0.01)^2, C2=(0.03)^2.
inline constexpr int kSsimWindow = 11;
inline constexpr double kSsimSigma = 1.5;
inline constexpr double kSsimC1 = 0.01 * 0.01;
inline constexpr double kSsimC2 = 0.03 * 0.03;
inline constexpr double kPsnrCap = 100.0;

std::vector<double> gaussian_window(int size, double sigma);

/// How many dyadic MS-SSIM scales an image supports (min dim must stay >=
/// the window size), capped at the conventional 5.
int ms_ssim_scale_count(int width, int height);

/// Conventional 5-scale weights truncated to `scales` and renormalized.
std::vector<double> ms_ssim_weights(int scales);

/// Peak signal-to-noise ratio in dB against peak 1.0, capped at 100 dB.
double psnr(const geom::FaceImage& img, const geom::FaceImage& ref);

/// Mean SSIM over the valid (fully-windowed) region, averaged over channels.
double ssim(const geom::FaceImage& img, const geom::FaceImage& ref);

/// Multi-scale SSIM with as many scales as the resolution supports.
double ms_ssim(const geom::FaceImage& img, const geom::FaceImage& ref);

struct QualityEntry {
    std::string morph_id;
    double psnr_avg = 0.0;  // averaged across both parent images
    double ssim_avg = 0.0;
};

struct QualityReport {
    std::vector<QualityEntry> entries;
    double psnr_mean = 0.0, psnr_ci95 = 0.0;  // mean +/- half-width
    double ssim_mean = 0.0, ssim_ci95 = 0.0;
    int ms_ssim_scales = 0;  // scale count used at this resolution
};

/// PSNR and SSIM of a morph against each parent, averaged.
QualityEntry morph_quality(const geom::FaceImage& morph, const geom::FaceImage& parent1,
                           const geom::FaceImage& parent2, const std::string& morph_id = "");

/// Corpus means with 95% normal-approximation confidence half-widths.
QualityReport summarize_quality(std::vector<QualityEntry> entries, int resolution);

}  // namespace morphkit::eval
