#pragma once

#include "dpcausal/dataset.hpp"
#include "dpcausal/estimators.hpp"
#include "dpcausal/types.hpp"

#include <cstdint>
#include <string>

namespace dpcausal {

enum class GeneratorKind { LowOverlap, MisspecifiedTrees, GoodOverlapBinary, EffectOfK };

std::string to_string(GeneratorKind kind);
GeneratorKind generator_kind_from_string(std::string_view name);

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::LowOverlap;
  Index n = 0;
  std::uint64_t seed = 0;
};

// Covariate dimension and true average treatment effect are fixed per kind.
int generator_dimension(GeneratorKind kind);
double generator_true_ate(GeneratorKind kind);

Dataset generate(const GeneratorSpec& spec);

Dataset gen_low_overlap(Index n, std::uint64_t seed);
Dataset gen_misspecified(Index n, std::uint64_t seed);
Dataset gen_good_overlap_binary(Index n, std::uint64_t seed);
Dataset gen_effect_of_k(Index n, std::uint64_t seed);

// True nuisance functions and potential-outcome sampler of a generator, for
// Monte-Carlo evaluation of the oracle variances.
OracleModel generator_oracle(GeneratorKind kind);

}  // namespace dpcausal
