#include "multiform/function_vec.hpp"

namespace multiform {

FunctionVec random_gaussian_vec(std::int64_t w, Rng& rng) {
    FunctionVec f(w);
    for (double& v : f.values) v = rng.normal();
    return f;
}

FunctionVec random_sign_vec(std::int64_t w, Rng& rng) {
    FunctionVec f(w);
    for (double& v : f.values) v = rng.bernoulli(0.5) ? 1.0 : -1.0;
    return f;
}

CFunctionVec random_complex_vec(std::int64_t w, Rng& rng) {
    CFunctionVec f(w);
    for (auto& v : f.values) v = {rng.normal(), rng.normal()};
    return f;
}

}  // namespace multiform
