#ifndef DNAJSCC_PIPELINE_HPP
#define DNAJSCC_PIPELINE_HPP

#include <stdexcept>
#include <vector>

#include "dnajscc/channel.hpp"
#include "dnajscc/image.hpp"
#include "dnajscc/model.hpp"
#include "dnajscc/preprocess.hpp"

namespace dnajscc {

// Pushes one encoded sequence through the storage channel and packages the
// received copies for the decoder.
inline ReceivedBundle transmit(const NucleotideSequence& z, const ChannelConfig& cfg,
                               std::uint64_t sequence_id = 0, ChannelCounts* counts = nullptr) {
    const auto copies = pcr_amplify(z, cfg, sequence_id, counts);
    return pad_and_map(recombine(copies), compute_K(static_cast<int>(z.size())));
}

inline ImageTensor decode_bundle(CodecModel& model, const ReceivedBundle& bundle) {
    const SystemConfig& cfg = model.config();
    if (bundle.v != cfg.v)
        throw std::invalid_argument("decode_bundle: bundle has " + std::to_string(bundle.v) +
                                    " copies, model expects " + std::to_string(cfg.v));
    if (bundle.K != compute_K(cfg.k()))
        throw std::invalid_argument("decode_bundle: bundle length " + std::to_string(bundle.K) +
                                    " does not match model K " + std::to_string(compute_K(cfg.k())));
    Tensor img = model.decoder().forward(bundle_batch_tensor({&bundle}), /*training=*/false);
    img.reshape({img.shape[1], img.shape[2], img.shape[3]});
    return denormalize(img);
}

// Whole storage round trip for one image at a given channel noise level.
inline ImageTensor store_and_recover(CodecModel& model, const ImageTensor& img,
                                     const ChannelConfig& cfg, std::uint64_t sequence_id = 0,
                                     ChannelCounts* counts = nullptr) {
    const NucleotideSequence z = model.encode(img);
    return decode_bundle(model, transmit(z, cfg, sequence_id, counts));
}

} // namespace dnajscc

#endif
