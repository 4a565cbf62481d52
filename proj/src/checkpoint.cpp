/* Copyright 2026 The symev Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "symev/checkpoint.hpp"

#include <bit>
#include <cstring>

#include "symev/errors.hpp"
#include "symev/io.hpp"
#include "symev/serialize.hpp"

namespace symev {

using nlohmann::json;

namespace {

constexpr char kMagic[8] = {'S', 'Y', 'M', 'E', 'V', 'C', 'K', 'P'};

static_assert(std::endian::native == std::endian::little,
              "checkpoint payloads are written in native little-endian order");

template <typename U>
void AppendLe(std::string& out, U value) {
  char bytes[sizeof(U)];
  std::memcpy(bytes, &value, sizeof(U));
  out.append(bytes, sizeof(U));
}

template <typename U>
U ReadLe(std::string_view bytes, std::size_t offset) {
  if (offset + sizeof(U) > bytes.size()) Fail(ErrorCode::kData, "truncated checkpoint");
  U value;
  std::memcpy(&value, bytes.data() + offset, sizeof(U));
  return value;
}

template <typename T>
constexpr std::string_view DtypeName() {
  return sizeof(T) == 4 ? "float32" : "float64";
}

json InfoJson(const CheckpointInfo& info) {
  return json{{"variables", info.variables},
              {"training",
               {{"epochs", info.training.epochs},
                {"best_epoch", info.training.best_epoch},
                {"final_loss", info.training.final_loss},
                {"seed", info.training.seed},
                {"steps", info.training.steps}}},
              {"pipeline", info.pipeline}};
}

template <typename T>
Model<T> Restore(const json& header, std::string_view payload) {
  Model<T> model;
  model.info.variables = header.at("variables").get<std::vector<VariableSpec>>();
  const json& training = header.at("training");
  model.info.training.epochs = training.at("epochs").get<std::size_t>();
  model.info.training.best_epoch = training.at("best_epoch").get<std::size_t>();
  model.info.training.final_loss = training.at("final_loss").get<double>();
  model.info.training.seed = training.at("seed").get<std::uint64_t>();
  model.info.training.steps = training.at("steps").get<std::uint64_t>();
  model.info.pipeline = header.at("pipeline");
  model.info.partition_digest = header.at("digests").at("partition").get<std::string>();
  model.info.config_digest = header.at("digests").at("config").get<std::string>();

  const auto config = header.at("network").get<NetworkConfig>();
  const json& emb = header.at("embedding");
  std::optional<Vocabulary> vocab;
  if (!emb.at("vocabulary").is_null()) vocab = VocabularyFromJson(emb.at("vocabulary"));
  model.network = Network<T>::Shaped(config, emb.at("alphabet_sizes").get<std::vector<std::size_t>>(),
                                     emb.at("ordered").get<std::vector<bool>>(), std::move(vocab));

  const json& tensors = header.at("tensors");
  auto params = model.network.Parameters();
  if (tensors.size() != params.size()) {
    Fail(ErrorCode::kData, "checkpoint tensor count does not match its network config");
  }
  if (Sha256Hex(payload) != header.at("digests").at("payload").get<std::string>()) {
    Fail(ErrorCode::kDigestMismatch, "checkpoint payload digest mismatch");
  }
  for (std::size_t k = 0; k < params.size(); ++k) {
    const auto shape = tensors[k].at("shape").get<std::vector<std::size_t>>();
    const auto offset = tensors[k].at("offset").get<std::size_t>();
    if (shape != params[k]->shape()) {
      Fail(ErrorCode::kData, "tensor '" + tensors[k].at("name").get<std::string>() +
                                 "' has shape " + ShapeString(shape) + ", expected " +
                                 ShapeString(params[k]->shape()));
    }
    const std::size_t bytes = params[k]->size() * sizeof(T);
    if (offset + bytes > payload.size()) Fail(ErrorCode::kData, "truncated checkpoint payload");
    std::memcpy(params[k]->data(), payload.data() + offset, bytes);
  }
  return model;
}

}  // namespace

template <typename T>
std::string SerializeCheckpoint(const Network<T>& net, const CheckpointInfo& info) {
  std::string payload;
  json tensors = json::array();
  const auto params = net.Parameters();
  const auto names = net.ParameterNames();
  for (std::size_t k = 0; k < params.size(); ++k) {
    tensors.push_back(json{{"name", names[k]},
                           {"shape", params[k]->shape()},
                           {"offset", payload.size()}});
    payload.append(reinterpret_cast<const char*>(params[k]->data()),
                   params[k]->size() * sizeof(T));
  }

  const auto& emb = net.embedding();
  json header = InfoJson(info);
  header["format"] = "symev-checkpoint";
  header["version"] = kCheckpointVersion;
  header["dtype"] = DtypeName<T>();
  header["network"] = net.config();
  header["embedding"] = json{{"alphabet_sizes", emb.alphabet_sizes()},
                             {"ordered", emb.ordered()},
                             {"vocabulary", emb.vocabulary() ? json(*emb.vocabulary())
                                                             : json(nullptr)}};
  header["tensors"] = tensors;
  header["digests"] = json{{"partition", info.partition_digest},
                           {"config", info.config_digest},
                           {"payload", Sha256Hex(payload)}};
  const std::string text = header.dump();

  std::string out(kMagic, sizeof(kMagic));
  AppendLe<std::uint32_t>(out, kCheckpointVersion);
  AppendLe<std::uint64_t>(out, text.size());
  out += text;
  out += payload;
  return out;
}

AnyModel ParseCheckpoint(std::string_view bytes) {
  if (bytes.size() < 20 || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    Fail(ErrorCode::kData, "not a symev checkpoint");
  }
  const auto version = ReadLe<std::uint32_t>(bytes, 8);
  if (version != kCheckpointVersion) {
    Fail(ErrorCode::kData, "unsupported checkpoint version " + std::to_string(version));
  }
  const auto header_len = ReadLe<std::uint64_t>(bytes, 12);
  if (20 + header_len > bytes.size()) Fail(ErrorCode::kData, "truncated checkpoint header");
  const std::string_view payload = bytes.substr(20 + header_len);
  json header;
  try {
    header = json::parse(bytes.substr(20, header_len));
  } catch (const json::exception& e) {
    Fail(ErrorCode::kData, std::string("corrupt checkpoint header: ") + e.what());
  }
  try {
    const auto dtype = header.at("dtype").get<std::string>();
    if (dtype == "float32") return Restore<float>(header, payload);
    if (dtype == "float64") return Restore<double>(header, payload);
    Fail(ErrorCode::kData, "unknown checkpoint dtype '" + dtype + "'");
  } catch (const json::exception& e) {
    Fail(ErrorCode::kData, std::string("malformed checkpoint header: ") + e.what());
  }
}

template <typename T>
void SaveCheckpoint(const std::filesystem::path& path, const Network<T>& net,
                    const CheckpointInfo& info) {
  WriteFileAtomic(path, SerializeCheckpoint(net, info));
}

AnyModel LoadCheckpoint(const std::filesystem::path& path) {
  return ParseCheckpoint(ReadFile(path));
}

std::string SerializeCheckpoint(const AnyModel& model) {
  return std::visit([](const auto& m) { return SerializeCheckpoint(m.network, m.info); },
                    model);
}

template std::string SerializeCheckpoint<float>(const Network<float>&, const CheckpointInfo&);
template std::string SerializeCheckpoint<double>(const Network<double>&, const CheckpointInfo&);
template void SaveCheckpoint<float>(const std::filesystem::path&, const Network<float>&,
                                    const CheckpointInfo&);
template void SaveCheckpoint<double>(const std::filesystem::path&, const Network<double>&,
                                     const CheckpointInfo&);

}  // namespace symev
