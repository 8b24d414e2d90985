#ifndef DNAJSCC_DNAJSCC_HPP
#define DNAJSCC_DNAJSCC_HPP

// Umbrella header for the whole library: a joint source-channel image codec
// whose channel code is a biologically-constrained nucleotide sequence, plus
// the simulated DNA storage channel, training loop and evaluation tooling.

#include "dnajscc/bio.hpp"
#include "dnajscc/channel.hpp"
#include "dnajscc/checkpoint.hpp"
#include "dnajscc/cifar10.hpp"
#include "dnajscc/common.hpp"
#include "dnajscc/experiments.hpp"
#include "dnajscc/fasta.hpp"
#include "dnajscc/image.hpp"
#include "dnajscc/imageio.hpp"
#include "dnajscc/layers.hpp"
#include "dnajscc/metrics.hpp"
#include "dnajscc/model.hpp"
#include "dnajscc/objective.hpp"
#include "dnajscc/optimizer.hpp"
#include "dnajscc/pipeline.hpp"
#include "dnajscc/plot.hpp"
#include "dnajscc/preprocess.hpp"
#include "dnajscc/synthetic.hpp"
#include "dnajscc/tensor.hpp"
#include "dnajscc/tiling.hpp"
#include "dnajscc/trainer.hpp"

#endif
