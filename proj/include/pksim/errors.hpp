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

#include <stdexcept>
#include <string>

namespace pksim {

// Base of every error raised by the library. The CLI maps ConfigInvalid to
// exit code 2 and everything else to 3.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define PKSIM_DEFINE_ERROR(Name)                 \
    class Name : public Error {                  \
    public:                                      \
        explicit Name(const std::string& what)   \
            : Error(#Name ": " + what) {}        \
    }

PKSIM_DEFINE_ERROR(RootHasNoParent);
PKSIM_DEFINE_ERROR(DepthExceeded);
PKSIM_DEFINE_ERROR(DimensionMismatch);
PKSIM_DEFINE_ERROR(ParseError);
PKSIM_DEFINE_ERROR(NonFiniteAtom);
PKSIM_DEFINE_ERROR(GridMismatch);
PKSIM_DEFINE_ERROR(NonFiniteQuery);
PKSIM_DEFINE_ERROR(PopulationExplosion);
PKSIM_DEFINE_ERROR(NonFiniteState);
PKSIM_DEFINE_ERROR(NoSuchLine);
PKSIM_DEFINE_ERROR(PicardStalled);
PKSIM_DEFINE_ERROR(EmptyEnsemble);
PKSIM_DEFINE_ERROR(CFLViolation);
PKSIM_DEFINE_ERROR(InvalidArgument);

#undef PKSIM_DEFINE_ERROR

} // namespace pksim
