#include "magneto/nn/gru.hpp"

namespace magneto::nn {

template class GruCell<float>;
template class GruCell<double>;

} // namespace magneto::nn
