// evscore/evscore.hpp
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABILITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef EVSCORE_EVSCORE_HPP
#define EVSCORE_EVSCORE_HPP

#include "evscore/annot.hpp"
#include "evscore/atwv.hpp"
#include "evscore/counts.hpp"
#include "evscore/curves.hpp"
#include "evscore/dpalign.hpp"
#include "evscore/epoch.hpp"
#include "evscore/metrics.hpp"
#include "evscore/ovlp.hpp"
#include "evscore/report.hpp"
#include "evscore/runner.hpp"
#include "evscore/stats.hpp"
#include "evscore/taes.hpp"

#endif  // EVSCORE_EVSCORE_HPP
