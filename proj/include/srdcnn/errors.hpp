#pragma once

#include <stdexcept>
#include <string>

namespace srdcnn {

// Base class for everything this library throws on purpose.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

#define SRDCNN_DEFINE_ERROR(name)                                   \
    class name : public error {                                     \
    public:                                                         \
        explicit name(const std::string& what) : error(what) {}     \
    }

SRDCNN_DEFINE_ERROR(dimension_error);        // shape/extent mismatch
SRDCNN_DEFINE_ERROR(data_error);             // empty/unusable dataset
SRDCNN_DEFINE_ERROR(config_error);           // invalid hyperparameter combination
SRDCNN_DEFINE_ERROR(parse_error);            // unparseable field (message carries line number)
SRDCNN_DEFINE_ERROR(format_error);           // structurally bad file (ragged rows, ...)
SRDCNN_DEFINE_ERROR(label_error);            // class label out of range
SRDCNN_DEFINE_ERROR(usage_error);            // API misuse (e.g. wrong-mode cache)
SRDCNN_DEFINE_ERROR(numeric_error);          // non-finite value where finite is required
SRDCNN_DEFINE_ERROR(incompatibility_error);  // unknown checkpoint format version
SRDCNN_DEFINE_ERROR(corruption_error);       // truncated/mangled checkpoint
SRDCNN_DEFINE_ERROR(degenerate_batch_error); // batch statistics undefined

#undef SRDCNN_DEFINE_ERROR

} // namespace srdcnn
