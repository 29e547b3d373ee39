#pragma once

// Hot loops of the perceptron, compiled in their own translation unit with relaxed
// floating-point flags so the sigmoid over the hidden layer vectorizes.

#include <span>

#include "seedseg/perceptron.hpp"

namespace seedseg::kernel {

Outputs forward(const Mlp& mlp, const PairInput& input);

double backprop(const Mlp& mlp, const PairInput& input, Decision target,
                std::span<double> grad);

/// One in-place SGD step; returns the loss measured before the update.
double sgd_step(Mlp& mlp, const PairInput& input, Decision target, double learning_rate);

}  // namespace seedseg::kernel
