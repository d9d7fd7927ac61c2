#pragma once

namespace pnorm {

// Real Lambert-W, W·e^W = x. Branch 0 needs x ≥ −1/e, branch −1 needs
// −1/e ≤ x < 0. Anything else throws DomainError.
double lambert_w(int branch, double x);

}  // namespace pnorm
