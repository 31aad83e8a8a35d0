#pragma once

#include <string>

#include <json.hpp>

#include "curtainlab/contact.hpp"
#include "curtainlab/curtain.hpp"
#include "curtainlab/median.hpp"
#include "curtainlab/projection.hpp"
#include "curtainlab/raag.hpp"

namespace curtainlab {

using Json = nlohmann::json;

// Parses text, converting nlohmann's byte offsets into line/column ParseError
// messages.
Json parse_document(const std::string& text, const std::string& origin);
Json load_document(const std::string& path);
void write_document(const std::string& path, const Json& doc);

Presentation presentation_from_json(const Json& j);
Json presentation_to_json(const Presentation& p);

// Explicit graph: {"vertices": [...], "edges": [[a,b],...], "basepoint": ...,
// optional "horizon"/"guard"/"is_window"}.
MedianWindow window_from_json(const Json& j);
Json window_to_json(const MedianWindow& w);

// Wall list with stable indices; sides included below the size cutoff.
Json walls_to_json(const MedianWindow& w, std::size_t side_cutoff = 50000);

Json contact_to_json(const ContactGraph& cg);
std::string contact_to_dot(const ContactGraph& cg);

Json curtain_to_json(const Curtain& c);
Curtain curtain_from_json(const Json& j, const HypGraph& h);

Json rational_to_json(const Rational& r);
Json tau_to_json(const TauCertificate& t);
Json flip_to_json(const FlipReport& f);
Json skewer_to_json(const SkewerReport& s);
Json cubical_flip_to_json(const CubicalFlip& f);
Json cubical_skewer_to_json(const CubicalSkewer& s);
Json product_to_json(const ProductSplit& p);

Json certificate_to_json(const RecipeCertificate& c);
RecipeCertificate certificate_from_json(const Json& j);
Json outcome_to_json(const RecipeOutcome& o);

// Human-readable proof transcript of a certificate.
std::string certificate_transcript(const RecipeCertificate& c);

}  // namespace curtainlab
