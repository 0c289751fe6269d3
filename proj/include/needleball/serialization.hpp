#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "needleball/needlets.hpp"

namespace nb {

using ojson = nlohmann::ordered_json;

// Reals are serialized as C99 hex-float strings ("%a") for bit-exact round trips.
std::string hex_double(double v);
double parse_hex_double(const std::string& s);

uint64_t fnv1a(std::string_view s);
std::string canonical_dump(const ojson& j); // compact, key order = insertion order

ojson grid_to_json(const NeedletGrid& g);
NeedletGrid grid_from_json(const ojson& j, const WeightedBall& ball);

// Frame files embed a content hash over everything except the hash field; the
// loader recomputes and rejects mismatches.
ojson frame_to_json(const NeedletFrame& f);
NeedletFrame frame_from_json(const ojson& j);
void save_frame(const NeedletFrame& f, const std::string& path);
NeedletFrame load_frame(const std::string& path);
// Computes and stores the content hash on a freshly built frame.
void seal_frame(NeedletFrame& f);

ojson coeffs_to_json(const CoefficientSet& c);
CoefficientSet coeffs_from_json(const ojson& j);

ojson load_json(const std::string& path);
void save_json(const ojson& j, const std::string& path);

} // namespace nb
