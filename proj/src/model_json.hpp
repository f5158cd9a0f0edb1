#pragma once

#include "json.hpp"

#include "holegaf/coeffs.hpp"

namespace holegaf::detail {

template <class Json = nlohmann::ordered_json>
Json model_to_json(const CoefficientModel& m) {
  Json j;
  j["kind"] = to_string(m.kind);
  if (m.kind == ModelKind::Hyperbolic || m.kind == ModelKind::PowerLaw) j["L"] = m.L;
  if (m.kind == ModelKind::Explicit) j["explicit_seq"] = m.explicit_seq;
  return j;
}

}  // namespace holegaf::detail
