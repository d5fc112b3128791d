#include "parapush/model.hpp"

#include <charconv>
#include <string>

#include "parapush/errors.hpp"

namespace parapush {

ModelChoice parse_model(std::string_view text) {
  if (text == "coarse") {
    return kCoarseModel;
  }
  if (text == "fine") {
    return kFineModel;
  }
  constexpr std::string_view prefix = "parareal:";
  if (text.substr(0, prefix.size()) == prefix) {
    const std::string_view digits = text.substr(prefix.size());
    int k = -1;
    const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (ec == std::errc{} && end == digits.data() + digits.size() && k >= 0) {
      return parareal_model(k);
    }
  }
  throw InvalidArgument("unknown model '" + std::string(text) +
                        "' (expected coarse, fine or parareal:K)");
}

Trajectory rollout(const ModelChoice& model, const State& state0, const ControlSequence& controls,
                   const ModelContext& context) {
  switch (model.kind) {
    case ModelTag::Kind::coarse:
      return coarse_rollout(state0, controls, context.coarse, context.scene);
    case ModelTag::Kind::fine:
      return fine_rollout(state0, controls, context.physics, context.scene);
    case ModelTag::Kind::parareal: {
      PararealConfig cfg = context.parareal;
      cfg.iterations = model.parareal_iterations;
      return parareal_predict(state0, controls, cfg, context.physics, context.coarse,
                              context.scene, context.pool)
          .trajectory;
    }
  }
  throw InvalidArgument("rollout: unknown model kind");
}

}  // namespace parapush
