/*
   Copyright 2026 The pksim Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/


#pragma once

#include "pksim/model.hpp"

// Smooth fully coupled model on a 1D torus, shared by several test files.
inline pksim::ModelParams base_params(int n = 128) {
    pksim::ModelParams p;
    p.grid = {1, n, 10.0};
    p.sigma = 1.0;
    p.D = 1.0;
    p.r = 1.0;
    p.alpha = 1.0;
    p.lambda_bar = 1.0;
    p.birth = pksim::LogisticRate{0.6, 4.0, 0.3};
    p.death = pksim::ConstantRate{0.2};
    p.drift = pksim::ChemotaxisDrift{2.0, 1.0};
    p.mu0 = pksim::GaussianLaw{{5.0, 0.0}, 1.0};
    p.rho0 = pksim::CosineProfile{0.2, 1, 0.3};
    p.dt = 0.01;
    p.T = 1.0;
    return p;
}

// Independent diffusions: no rates, no drift, no feedback.
inline pksim::ModelParams free_params(int n = 16) {
    auto p = base_params(n);
    p.alpha = 0.0;
    p.birth = pksim::ConstantRate{0.0};
    p.death = pksim::ConstantRate{0.0};
    p.drift = pksim::ZeroDrift{};
    p.rho0 = pksim::ZeroProfile{};
    return p;
}
