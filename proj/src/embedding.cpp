#include "zerofolio/embedding.hpp"

#include "zerofolio/error.hpp"

namespace zerofolio {

void BackendConfig::validate() const {
  if (kind == BackendKind::Remote) {
    if (model_id.empty()) throw Error(ErrorKind::InvalidArgument, "remote backend needs a model id");
    if (endpoint_url.empty()) throw Error(ErrorKind::InvalidArgument, "remote backend needs an endpoint url");
    if (max_parallel == 0 || batch_size == 0) {
      throw Error(ErrorKind::InvalidArgument, "max_parallel and batch_size must be >= 1");
    }
  } else {
    if (dimensions == 0) throw Error(ErrorKind::InvalidArgument, "tf-idf dimensions must be >= 1");
    if (ngram_min == 0 || ngram_min > ngram_max) {
      throw Error(ErrorKind::InvalidArgument, "tf-idf n-gram range must satisfy 1 <= min <= max");
    }
  }
}

}  // namespace zerofolio
