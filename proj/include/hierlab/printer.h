// Copyright 2026 The hierlab Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HIERLAB_PRINTER_H_
#define HIERLAB_PRINTER_H_

#include <string>

#include "hierlab/environment.h"
#include "hierlab/term.h"

namespace hierlab {

/**
 * Renders a term in the `.hier` term grammar: applications are fully
 * explicit, constructors print as `S.mk params fields`, projections as
 * `t.field` (or `(t).field`), and metavariables as `?m.N`.
 */
std::string print_term(const Term& t);

/// `(x : A) [i : C x]` style rendering of a declaration telescope.
std::string print_telescope(const Telescope& tele);

/// Same, for a local context whose entries refer to each other by name.
std::string print_context(const Telescope& ctx);

}  // namespace hierlab

#endif  // HIERLAB_PRINTER_H_
