#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "ccx/diagram.hpp"
#include "ccx/graph.hpp"

namespace ccx {

/// A lifted graph with its input cochains (x0, x1, x2) and class label.
struct LabelledComplex {
    Graph graph;
    CombinatorialComplex cc;
    CochainMapById inputs;
    int label = 0;
};

/**
 * Two-class synthetic set. Class 0: a cycle C_n lifted with the whole cycle
 * as its only 2-cell. Class 1: C_n plus the chords (i, i+2), lifted with
 * every triangle as a 2-cell. Sizes are drawn from [n_min, n_max]; inputs
 * are [1, degree / 4] plus seeded noise on vertices and the entrywise max
 * over vertices on higher cells.
 */
std::vector<LabelledComplex> synthetic_cycles(int per_class, std::uint64_t seed, int n_min = 8, int n_max = 12,
                                              double noise = 0.05);

/// Two conv layers: ranks 0..2 mixed into hidden cochains, then mean
/// readouts pooled into a two-logit node "out".
DiagramSpec cycle_classifier_spec(int hidden = 8);

/// Compiles spec on each complex over one shared parameter store.
std::vector<Example> make_examples(const std::vector<LabelledComplex>& data, const DiagramSpec& spec,
                                   std::shared_ptr<ParameterStore> params, std::uint64_t seed);

}  // namespace ccx
