#pragma once

#include <filesystem>
#include <string>

#include "axplore/snn.hpp"

namespace axplore::io {

// Model document (JSON):
//   { "n_inputs": 2, "n_neurons": 2,
//     "weights": [raw Q16.16 integers, row-major],
//     "v_thresh": raw, "v_reset": raw, "exp_decay": 1, "w_inh": raw }
snn::LayerParams parse_model(const std::string& text);
snn::LayerParams load_model(const std::filesystem::path& path);
std::string model_json(const snn::LayerParams& params);

// k matrix: one line per neuron, depths separated by single spaces.
std::string cut_matrix_text(const snn::CutMatrix& k);
snn::CutMatrix parse_cut_matrix(const std::string& text);
snn::CutMatrix load_cut_matrix(const std::filesystem::path& path);

std::string read_text(const std::filesystem::path& path);
// Writes the whole file at once, LF line endings as given.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace axplore::io
