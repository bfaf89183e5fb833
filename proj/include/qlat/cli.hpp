#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "qlat/replicate.hpp"

namespace qlat {

using json = nlohmann::json;

json ring_to_json(const RingSpec& r);
json matrix_to_json(const RingMatrix& m);
RingMatrix matrix_from_json(const Ring& r, const json& j);
json lattice_json(const Lattice& l);
json certificate_to_json(const DecisionCertificate& c);
DecisionCertificate certificate_from_json(const Ring& r, const json& j);
json witness_to_json(const EmbeddingWitness& w);
json pnu_to_json(const PnUReport& rep);
json replicate_to_json(const ReplicateReport& rep);

// unit * p^ord, with small signed integers for f = 1.
std::string padic_string(const RingElt& x);
std::string replicate_table(const ReplicateReport& rep);

// Exit code: 0 yes / verified, 1 no / refuted, 2 unknown or error.
int exit_code(Verdict v);
int exit_code(Summary s);

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qlat
