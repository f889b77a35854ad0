#pragma once

#include <bpblab/approximants.hpp>
#include <bpblab/bpbverify.hpp>
#include <bpblab/classify.hpp>
#include <bpblab/operators.hpp>

#include <json.hpp>

#include <stdexcept>
#include <string>

namespace bpblab::io {

using nlohmann::json;

/// Malformed JSON input; `field()` is the dotted path of the offending member.
class InputError : public std::runtime_error {
 public:
  InputError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const json& j, const std::string& field);

json vector_to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const json& j, const std::string& field);

SpaceSpec space_from_json(const json& j, const std::string& field);
OperatorMatrix operator_from_json(const json& j, const std::string& field);

/// Reads and parses a JSON file; failures name `field`.
json load_file(const std::string& path, const std::string& field);

}  // namespace bpblab::io

namespace nlohmann {

#define BPBLAB_JSON_SERIALIZER(Type)          \
  template <>                                 \
  struct adl_serializer<Type> {               \
    static void to_json(json& j, const Type& v); \
    static Type from_json(const json& j);     \
  };

BPBLAB_JSON_SERIALIZER(bpblab::Exponent)
BPBLAB_JSON_SERIALIZER(bpblab::SpaceSpec)
BPBLAB_JSON_SERIALIZER(bpblab::Point)
BPBLAB_JSON_SERIALIZER(bpblab::OperatorMatrix)
BPBLAB_JSON_SERIALIZER(bpblab::NormResult)
BPBLAB_JSON_SERIALIZER(bpblab::AttainmentSet)
BPBLAB_JSON_SERIALIZER(bpblab::SignedPermutation)
BPBLAB_JSON_SERIALIZER(bpblab::ExtremalityVerdict)
BPBLAB_JSON_SERIALIZER(bpblab::ApproximantReport)
BPBLAB_JSON_SERIALIZER(bpblab::BpbCertificate)
BPBLAB_JSON_SERIALIZER(bpblab::OnlyApproximationResult)
BPBLAB_JSON_SERIALIZER(bpblab::PropertyPWitness)
BPBLAB_JSON_SERIALIZER(bpblab::Epsilon0Report)
BPBLAB_JSON_SERIALIZER(bpblab::HilbertChecks)
BPBLAB_JSON_SERIALIZER(bpblab::SweepCase)
BPBLAB_JSON_SERIALIZER(bpblab::SweepReport)

#undef BPBLAB_JSON_SERIALIZER

}  // namespace nlohmann
