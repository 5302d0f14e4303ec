#include "xplain/model.hpp"

#include "xplain/errors.hpp"
#include "xplain/linalg.hpp"

namespace xplain {

std::vector<double> Model::gradient(std::span<const double>) const {
  throw UnsupportedCapability("model does not expose gradients");
}

std::vector<double> Model::representation(std::span<const double>) const {
  throw UnsupportedCapability("model does not expose an intermediate representation");
}

std::vector<double> Model::logits(std::span<const double>) const {
  throw UnsupportedCapability("model does not expose logits");
}

std::vector<double> Model::logit_gradient(std::span<const double>, std::size_t) const {
  throw UnsupportedCapability("model does not expose per-logit gradients");
}

int Model::decide(std::span<const double>) const {
  throw UnsupportedCapability("model does not expose a class decision");
}

void check_input(const Model& model, std::span<const double> x) {
  if (x.size() != model.dimension()) {
    throw InvalidInput("input dimension does not match model dimension");
  }
  linalg::check_finite(x, "model input");
}

}  // namespace xplain
