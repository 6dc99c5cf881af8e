#pragma once

#include "nestrec/check_report.hpp"
#include "nestrec/engines.hpp"
#include "nestrec/exact_arith.hpp"
#include "nestrec/explorer.hpp"
#include "nestrec/oeis.hpp"
#include "nestrec/parallel.hpp"
#include "nestrec/sums.hpp"
#include "nestrec/verifier.hpp"
