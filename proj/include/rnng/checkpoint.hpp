#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>

#include "rnng/config.hpp"
#include "rnng/model.hpp"

namespace rnng {

inline constexpr int kCheckpointVersion = 1;

// Structured text: header, effective config, vocabularies, then every named
// tensor with its shape and %.17g values. Byte-identical for identical models.
void save_checkpoint(std::ostream& out, const RnngModel& model,
                     const nn::TrainerConfig& trainer = {});
void save_checkpoint(const std::filesystem::path& path, const RnngModel& model,
                     const nn::TrainerConfig& trainer = {});

struct LoadedModel {
  std::unique_ptr<RnngModel> model;
  nn::TrainerConfig trainer;
};

// Rebuilds the model from its embedded config and overwrites every tensor.
// Missing, extra, or misshapen tensors are DataErrors.
LoadedModel load_checkpoint(std::istream& in, std::string_view source = "<checkpoint>");
LoadedModel load_checkpoint(const std::filesystem::path& path);

}  // namespace rnng
