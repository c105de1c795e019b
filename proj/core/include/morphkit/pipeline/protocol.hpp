#pragma once

#include <string>
#include <vector>

namespace morphkit::pipeline {

/// One row of the morph-pair protocol CSV ("pair_id,img_a,img_b,lmk_a,lmk_b").
struct ProtocolPair {
    std::string pair_id;
    std::string img_a, img_b;
    std::string lmk_a, lmk_b;
};

std::vector<ProtocolPair> load_protocol(const std::string& csv_path);
void save_protocol(const std::vector<ProtocolPair>& pairs, const std::string& csv_path);

/// Subject identifier: the image filename without directory or extension.
std::string subject_id_of(const std::string& image_path);

}  // namespace morphkit::pipeline
