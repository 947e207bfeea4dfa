#include "axplore/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace axplore::io {

using nlohmann::json;

namespace {

fixed::FixQ16x16 raw_field(const json& doc, const char* key) {
  return fixed::FixQ16x16::from_raw_checked(doc.at(key).get<std::int64_t>());
}

}  // namespace

snn::LayerParams parse_model(const std::string& text) {
  snn::LayerParams p;
  try {
    const json doc = json::parse(text);
    p.n_inputs = doc.at("n_inputs").get<std::size_t>();
    p.n_neurons = doc.at("n_neurons").get<std::size_t>();
    for (const auto& w : doc.at("weights")) {
      p.weights.push_back(fixed::FixQ16x16::from_raw_checked(w.get<std::int64_t>()));
    }
    p.v_thresh = raw_field(doc, "v_thresh");
    p.v_reset = raw_field(doc, "v_reset");
    p.exp_decay = doc.at("exp_decay").get<int>();
    p.w_inh = doc.contains("w_inh") ? raw_field(doc, "w_inh") : fixed::FixQ16x16{};
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed model document: ") + e.what());
  }
  p.validate();
  return p;
}

snn::LayerParams load_model(const std::filesystem::path& path) {
  try {
    return parse_model(read_text(path));
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string model_json(const snn::LayerParams& params) {
  nlohmann::ordered_json doc;
  doc["n_inputs"] = params.n_inputs;
  doc["n_neurons"] = params.n_neurons;
  std::vector<std::int32_t> raw;
  raw.reserve(params.weights.size());
  for (auto w : params.weights) {
    raw.push_back(w.raw());
  }
  doc["weights"] = raw;
  doc["v_thresh"] = params.v_thresh.raw();
  doc["v_reset"] = params.v_reset.raw();
  doc["exp_decay"] = params.exp_decay;
  doc["w_inh"] = params.w_inh.raw();
  return doc.dump() + "\n";
}

std::string cut_matrix_text(const snn::CutMatrix& k) {
  std::ostringstream out;
  for (std::size_t i = 0; i < k.rows(); ++i) {
    for (std::size_t j = 0; j < k.cols(); ++j) {
      out << (j ? " " : "") << k.at(i, j).bits();
    }
    out << '\n';
  }
  return out.str();
}

snn::CutMatrix parse_cut_matrix(const std::string& text) {
  std::vector<std::vector<int>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    std::istringstream ls(line);
    std::vector<int> row;
    int v = 0;
    while (ls >> v) {
      row.push_back(v);
    }
    if (!ls.eof()) {
      throw ConfigError("non-integer entry in k matrix");
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ShapeError("ragged k matrix");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw ShapeError("empty k matrix");
  }
  snn::CutMatrix k(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      k.at(i, j) = fixed::CutDepth{rows[i][j]};
    }
  }
  return k;
}

snn::CutMatrix load_cut_matrix(const std::filesystem::path& path) { return parse_cut_matrix(read_text(path)); }

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot read " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error("cannot write " + path.string());
  }
  out << text;
  if (!out) {
    throw Error("failed writing " + path.string());
  }
}

}  // namespace axplore::io
