// Copyright 2026 The lpginv Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LPGINV_SPECIAL_FUNCTIONS_HPP
#define LPGINV_SPECIAL_FUNCTIONS_HPP

namespace lpginv {

// Complementary error function (2/sqrt(pi)) * int_z^inf exp(-s^2) ds.
double Erfc(double z);

// Inverse of Erfc on (0, 2): bracketing bisection refined by Newton steps.
// Throws DomainError outside (0, 2).
double ErfcInv(double y);

// theta(t) = E (|h| - t)_+^2 for a standard normal h, t >= 0, in closed form
//   (t^2 + 1) erfc(t / sqrt 2) - sqrt(2 / pi) exp(-t^2 / 2) t
double Theta(double t);
// d theta / dt = 2 t erfc(t / sqrt 2) - 2 sqrt(2 / pi) exp(-t^2 / 2)
double ThetaPrime(double t);

}  // namespace lpginv

#endif  // LPGINV_SPECIAL_FUNCTIONS_HPP
