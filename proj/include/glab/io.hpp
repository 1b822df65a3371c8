#pragma once

#include <string>

#include <json.hpp>

#include "glab/farey.hpp"
#include "glab/fuchsian.hpp"
#include "glab/grafting.hpp"
#include "glab/lamination.hpp"
#include "glab/pleated.hpp"
#include "glab/schottky.hpp"
#include "glab/topology.hpp"

namespace glab::io {

using Json = nlohmann::ordered_json;

// Malformed text throws Error naming the byte offset.
Json parse(const std::string& text);
Json read_file(const std::string& path);

// Decoding failures throw Error("schema: ...").
template <class T>
T decode(const Json& j);

Json encode(const ExtPoint& p);
Json encode(const MobiusMap& m);
Json encode(const CurveClass& c);
Json encode(const Slope& s);
Json encode(const FareyTriangle& t);
Json encode(const FNCoordinates& f);
Json encode(const HolonomyRep& r);
Json encode(const Leaf& l);
Json encode(const TwistLimit& t);
Json encode(const MeasuredLamination& m);
Json encode(const GraftLeaf& l);
Json encode(const GraftedStructure& c);
Json encode(const PantsDecomposition& p);
Json encode(const ElementaryMove& m);
Json encode(const LaminationSeqSpec& s);
Json encode(const PlanCaps& c);
Json encode(const GraftLimit& g);
Json encode(const GraftPlan& p);
Json encode(const ConvergenceTable& t);
Json encode(const Disk& d);
Json encode(const SchottkyCertificate& c);
Json encode(const SchottkyCheck& c);
Json encode(const DensityResult& r);

template <> ExtPoint decode<ExtPoint>(const Json& j);
template <> MobiusMap decode<MobiusMap>(const Json& j);
template <> CurveClass decode<CurveClass>(const Json& j);
template <> Slope decode<Slope>(const Json& j);
template <> FareyTriangle decode<FareyTriangle>(const Json& j);
template <> FNCoordinates decode<FNCoordinates>(const Json& j);
// Accepts generator matrices or FN coordinates.
template <> HolonomyRep decode<HolonomyRep>(const Json& j);
template <> Leaf decode<Leaf>(const Json& j);
template <> TwistLimit decode<TwistLimit>(const Json& j);
template <> MeasuredLamination decode<MeasuredLamination>(const Json& j);
template <> GraftLeaf decode<GraftLeaf>(const Json& j);
template <> GraftedStructure decode<GraftedStructure>(const Json& j);
template <> PantsDecomposition decode<PantsDecomposition>(const Json& j);
template <> ElementaryMove decode<ElementaryMove>(const Json& j);
template <> LaminationSeqSpec decode<LaminationSeqSpec>(const Json& j);
template <> PlanCaps decode<PlanCaps>(const Json& j);

}  // namespace glab::io
