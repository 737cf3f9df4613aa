#pragma once
#include <map>
#include <set>

#include "poissonlab/submersion.hpp"

namespace poissonlab {

// Built-in named structures and submersion specs with expected-check
// annotations; the acceptance suite sweeps exactly these tables.
struct GalleryEntry {
    std::string id;
    bool is_submersion = false;
    std::string text;  // structure-file (or submersion-file) source
    std::vector<std::pair<std::string, std::string>> variants;  // label -> structure text
    std::map<std::string, std::string> expected;  // check id -> pass | fail | measure | skip
    std::set<std::string> contested;  // expectations tied to contested source claims
    std::string reference;
};

const std::vector<GalleryEntry>& gallery_entries();
std::vector<std::string> gallery_ids();

// id forms: "so3_euclid", parametric "euclid_rn_rs:n,r,s", and variant
// selection "so3_reg_conformal/pi_cometric_r".
GalleryEntry gallery_get(const std::string& id);
Structure gallery_structure(const std::string& id);
SubmersionSpec gallery_submersion(const std::string& id);

}  // namespace poissonlab
